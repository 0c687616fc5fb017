"""tau-coordinates and the Poisson brackets compatible with a cluster algebra.

Given an exchange matrix Z (m x n, rank m) we build an extended square matrix
Z' and a diagonal shift K so that tau = f^(Z' + K) is an invertible monomial
change of coordinates. In tau-coordinates the compatible log-canonical
brackets have a rigid leading block, which makes the solution space explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, lcm
from typing import Sequence

from clusterpoisson.exact import LaurentPoly, Matrix, RationalFunction
from clusterpoisson.exchange import (
    DirectionError,
    ExchangeMatrix,
    Seed,
    block_decompose,
    mutate_entries,
)

__all__ = [
    "ExtendedMatrix",
    "PoissonStructure",
    "BracketSpace",
    "Casimir",
    "RankDeficient",
    "NotInNullspace",
    "AlphaLeadingBlockNonzero",
    "extend_matrix",
    "find_kappa",
    "shifted",
    "tau_from_f",
    "mutate_tau",
    "compatible_brackets",
    "combine",
    "verify_compatibility",
    "omega_f_from_tau",
    "omega_tau_from_f",
    "casimir_basis",
    "toric_weight_basis",
    "propagate_weight",
]


class RankDeficient(ValueError):
    """rank Z < m: no nondegenerate tau-transformation exists."""


class NotInNullspace(ValueError):
    pass


class AlphaLeadingBlockNonzero(ArithmeticError):
    """A Casimir exponent vector touched cluster variables; the bracket was not compatible."""


@dataclass(frozen=True)
class ExtendedMatrix:
    """Square n x n matrix Z' with Z'[m;n] = Z and Dhat Z' skew-symmetric."""

    Zp: Matrix
    Dhat: tuple[int, ...]
    m: int

    def __post_init__(self):
        n = self.Zp.rows
        if not self.Zp.is_square() or len(self.Dhat) != n:
            raise ValueError("Z' must be square with one Dhat entry per row")
        for a in range(n):
            for b in range(a, n):
                if self.Dhat[a] * self.Zp[a, b] != -self.Dhat[b] * self.Zp[b, a]:
                    raise ValueError("Dhat * Z' is not skew-symmetric")

    @property
    def n(self) -> int:
        return self.Zp.rows

    def exchange(self) -> ExchangeMatrix:
        return ExchangeMatrix(self.Zp.submatrix(range(self.m), range(self.n)), self.Dhat[: self.m])

    def mutate(self, i: int) -> "ExtendedMatrix":
        if not 1 <= i <= self.m:
            raise DirectionError(f"direction {i} outside [1, {self.m}]")
        return ExtendedMatrix(Matrix(mutate_entries(self.Zp.data, i)), self.Dhat, self.m)


def extend_matrix(E: ExchangeMatrix, Z4: Matrix | Sequence[Sequence[int]] | None = None) -> ExtendedMatrix:
    """Complete Z to a Dhat-skew-symmetrizable square matrix.

    The lower-left block is forced (z'_ji = -d_i z_ij); the tropic-tropic
    block is ``Z4`` or zero.
    """
    m, n = E.m, E.n
    t = n - m
    if Z4 is None:
        Z4 = Matrix.zeros(t, t)
    elif not isinstance(Z4, Matrix):
        Z4 = Matrix(Z4, t, t)
    if Z4.shape != (t, t) or not Z4.is_skew():
        raise ValueError("Z4 must be a skew-symmetric (n-m) x (n-m) matrix")
    rows = [list(E.Z.row(a)) for a in range(m)]
    for j in range(t):
        rows.append([-E.D[i] * E.Z[i, m + j] for i in range(m)] + list(Z4.row(j)))
    return ExtendedMatrix(Matrix(rows, n, n), tuple(E.D) + (1,) * t, m)


def shifted(Zp: ExtendedMatrix, kappa: Sequence[int]) -> Matrix:
    """Z' + K."""
    n = Zp.n
    return Matrix([[Zp.Zp[a, b] + (kappa[a] if a == b else 0) for b in range(n)] for a in range(n)], n, n)


def _greedy_columns(Z: Matrix, candidates: Sequence[int], start: Sequence[int], target: int) -> list[int]:
    chosen = list(start)
    rank = Z.submatrix(range(Z.rows), chosen).rank() if chosen else 0
    for c in candidates:
        if rank == target:
            break
        trial = chosen + [c]
        r = Z.submatrix(range(Z.rows), trial).rank()
        if r > rank:
            chosen, rank = trial, r
    return chosen


def find_kappa(E: ExchangeMatrix, Zp: ExtendedMatrix | None = None) -> tuple[int, ...]:
    """Diagonal shift K with det(Z' + K) != 0.

    Pick m independent columns of Z, using as many cluster columns as
    possible; tropic columns among them get 1 and the remaining tropic
    columns get a common value kappa = 1, 2, ... The determinant is a
    polynomial in kappa of degree at most the number of remaining columns,
    so at most that many + 1 candidates are needed.
    """
    m, n = E.m, E.n
    if Zp is None:
        Zp = extend_matrix(E)
    if E.rank() < m:
        raise RankDeficient(f"rank Z = {E.rank()} < m = {m}")
    cols = _greedy_columns(E.Z, range(m), [], E.principal().rank())
    cols = _greedy_columns(E.Z, range(m, n), cols, m)
    selected = set(c for c in cols if c >= m)
    rest = [c for c in range(m, n) if c not in selected]
    for value in range(1, len(rest) + 2):
        kappa = tuple(0 if c < m else (1 if c in selected else value) for c in range(n))
        if shifted(Zp, kappa).det() != 0:
            return kappa
    raise ArithmeticError("kappa search exhausted; determinant polynomial vanished identically")


def tau_from_f(s: Seed, Zp: ExtendedMatrix, kappa: Sequence[int]) -> tuple[RationalFunction, ...]:
    """tau_j = f_j^kappa_j * prod_k f_k^z'_jk in the seed's current variables."""
    n = s.n
    out = []
    for j in range(n):
        expo = [Zp.Zp[j, k] + (kappa[j] if k == j else 0) for k in range(n)]
        acc = RationalFunction.lift(s.vars[0]) * 0 + 1
        for k, e in enumerate(expo):
            if e:
                acc = acc * s.vars[k] ** e
        out.append(acc.simplified())
    return tuple(out)


def mutate_tau(tau: Sequence[RationalFunction], Zp: ExtendedMatrix, i: int):
    """Mutation of tau-coordinates in direction ``i``; returns (new tau, new Z')."""
    if not 1 <= i <= Zp.m:
        raise DirectionError(f"direction {i} outside [1, {Zp.m}]")
    c = i - 1
    ti = RationalFunction.lift(tau[c])
    one = ti * 0 + 1
    out = []
    for j, tj in enumerate(tau):
        tj = RationalFunction.lift(tj)
        z = Zp.Zp[j, c]
        if j == c:
            new = one / ti
        elif z > 0:
            new = tj * (one / ti + 1) ** (-z)
        elif z < 0:
            new = tj * (ti + 1) ** (-z)
        else:
            new = tj
        out.append(new.simplified())
    return tuple(out), Zp.mutate(i)


@dataclass(frozen=True)
class PoissonStructure:
    """Coefficient matrix of a log-canonical bracket in the f- or tau-basis."""

    basis: str
    Omega: Matrix

    def __post_init__(self):
        if self.basis not in ("f", "tau"):
            raise ValueError("basis must be 'f' or 'tau'")
        if not self.Omega.is_skew():
            raise ValueError("coefficient matrix must be skew-symmetric")

    def corank(self) -> int:
        return self.Omega.rows - self.Omega.rank()


@dataclass(frozen=True)
class BracketSpace:
    dimension: int
    generators: tuple[PoissonStructure, ...]
    classes: tuple[tuple[int, ...], ...]
    scale: int

    @property
    def r(self) -> int:
        return len(self.classes)


def compatible_brackets(E: ExchangeMatrix) -> BracketSpace:
    """Basis of the brackets for which every extended cluster is log-canonical.

    One generator per block class of Z[m;m] (Lambda = scale * indicator,
    scale = lcm(D)) with Omega[m;n] = Lambda Z Dhat^-1, followed by the
    elementary skew matrices of the tropic-tropic block.
    """
    m, n = E.m, E.n
    if E.rank() < m:
        raise RankDeficient(f"rank Z = {E.rank()} < m = {m}")
    classes = tuple(tuple(c) for c in block_decompose(E))
    scale = reduce(lcm, E.D, 1)
    dhat = tuple(E.D) + (1,) * (n - m)
    gens = []
    for cls in classes:
        rows = [[0] * n for _ in range(n)]
        for a in (i - 1 for i in cls):
            for b in range(n):
                v = Fraction(scale * E.Z[a, b], dhat[b])
                rows[a][b] = v
                if b >= m:
                    rows[b][a] = -v
        gens.append(PoissonStructure("tau", Matrix(rows, n, n)))
    for a in range(m, n):
        for b in range(a + 1, n):
            rows = [[0] * n for _ in range(n)]
            rows[a][b], rows[b][a] = 1, -1
            gens.append(PoissonStructure("tau", Matrix(rows, n, n)))
    dim = len(classes) + comb(n - m, 2)
    assert len(gens) == dim
    return BracketSpace(dim, tuple(gens), classes, scale)


def combine(generators: Sequence[PoissonStructure], coeffs: Sequence) -> PoissonStructure:
    """Linear combination of brackets expressed in the same basis."""
    if len(generators) != len(coeffs) or not generators:
        raise ValueError("need one coefficient per generator")
    basis = generators[0].basis
    acc = Matrix.zeros(*generators[0].Omega.shape)
    for g, c in zip(generators, coeffs):
        if g.basis != basis:
            raise ValueError("mixed bases")
        acc = acc + g.Omega * c
    return PoissonStructure(basis, acc)


def verify_compatibility(E: ExchangeMatrix, Omega_f: Matrix):
    """Check Z Omega^f = (Delta 0) with Delta diagonal; returns (ok, diag(Delta))."""
    P = E.Z @ Omega_f
    m = E.m
    delta = tuple(P[a, a] for a in range(m))
    ok = all(P[a, b] == 0 for a in range(m) for b in range(P.cols) if a != b)
    return ok, delta


def omega_f_from_tau(Omega_tau: Matrix, Zp: ExtendedMatrix, kappa: Sequence[int]) -> Matrix:
    """Omega^f = (Z'+K)^-1 Omega^tau (Z'+K)^-T; raises Singular if Z'+K is."""
    A = shifted(Zp, kappa)
    Ainv = A.inverse()
    return Ainv @ Omega_tau @ Ainv.T


def omega_tau_from_f(Omega_f: Matrix, Zp: ExtendedMatrix, kappa: Sequence[int]) -> Matrix:
    A = shifted(Zp, kappa)
    return A @ Omega_f @ A.T


@dataclass(frozen=True)
class Casimir:
    """Casimir monomial: u is a left null vector of Omega^tau, alpha = u (Z'+K)."""

    u: tuple[int, ...]
    alpha: tuple[int, ...]

    def monomial(self, labels: Sequence[str]) -> LaurentPoly:
        return LaurentPoly.monomial(self.alpha, tuple(labels))


def casimir_basis(Omega_tau: Matrix, Zp: ExtendedMatrix, kappa: Sequence[int]) -> list[Casimir]:
    """Monomial Casimirs in the tropic variables, one per primitive left null vector.

    The exponents on cluster variables vanish only when every class
    coefficient lambda is nonzero; otherwise AlphaLeadingBlockNonzero.
    """
    A = shifted(Zp, kappa)
    out = []
    for u in Omega_tau.nullspace("left"):
        alpha = tuple(u @ A)
        if any(alpha[: Zp.m]):
            raise AlphaLeadingBlockNonzero(f"alpha = {alpha} has cluster exponents")
        out.append(Casimir(tuple(u), alpha))
    return out


def toric_weight_basis(E: ExchangeMatrix) -> list[tuple[int, ...]]:
    """Primitive basis of the right nullspace of Z; each is a global toric weight."""
    return E.Z.nullspace("right")


def propagate_weight(E: ExchangeMatrix, w: Sequence[int], i: int) -> tuple[int, ...]:
    """Weight at the neighbouring seed across the edge labelled ``i``."""
    if not 1 <= i <= E.m:
        raise DirectionError(f"direction {i} outside [1, {E.m}]")
    w = tuple(int(x) for x in w)
    if len(w) != E.n or any(E.Z @ w):
        raise NotInNullspace(f"Z w != 0 for w = {w}")
    row = E.Z.row(i - 1)
    new = sum(z * wk for z, wk in zip(row, w) if z > 0) - w[i - 1]
    return w[: i - 1] + (new,) + w[i:]
