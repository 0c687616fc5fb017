"""The cluster structure on the Grassmannian G(k, n) in the big cell.

Points of the cell are k x m matrices Y (m = n - k) of independent symbols
y_i_j. Everything here is computed on that generic matrix: contiguous minors
F_ij, the initial cluster f_ij = +-F_ij, the quadratic bracket on entries and
its Leibniz extension, the grid exchange matrix, and component counts.

Vertices (i, j) are 1-based grid positions. Seeds list the cluster vertices
(i <= k-1, j >= 2) first in row-major order, then the tropic vertices in the
order f_11, ..., f_k1, f_k2, ..., f_km.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from clusterpoisson.exact import LaurentPoly, Matrix, NotDivisible, RationalFunction
from clusterpoisson.exchange import ExchangeMatrix, Seed, graph_of, mutate_seed

__all__ = [
    "GrassmannParams",
    "SymbolicY",
    "MinorExpr",
    "EntryBracket",
    "NotLogCanonical",
    "sign",
    "F_index",
    "initial_cluster_fn",
    "vertex_order",
    "grid_exchange_matrix",
    "build_seed",
    "bracket_poly",
    "log_canonical_coeff",
    "omega_km",
    "A_matrix",
    "vertex_labels",
    "t_to_F",
    "omega_f_grid",
    "omega_f_symbolic",
    "InternalMismatch",
    "corank_formula",
    "d_km",
    "hankel_V",
    "J_label",
    "CorankReport",
    "corank_and_casimirs",
    "W_matrix",
    "W_expected",
    "B_matrix",
    "jacobiator",
    "jacobi_check",
    "prop34_coefficient",
    "NotPolynomial",
    "ClosedFormMismatch",
    "regularity_closed_form",
    "mutation_regularity_check",
    "ClaimMismatch",
    "walk_sequence",
    "reduced_fn",
    "WalkReport",
    "recovery_walk",
    "closed_form_count",
    "cluster_graph",
    "count_components",
]


def sign(x: int) -> int:
    return (x > 0) - (x < 0)


class NotLogCanonical(ValueError):
    pass


@dataclass(frozen=True)
class GrassmannParams:
    k: int
    n: int

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got k={self.k}, n={self.n}")

    @classmethod
    def from_km(cls, k: int, m: int) -> "GrassmannParams":
        return cls(k, k + m)

    @property
    def m(self) -> int:
        return self.n - self.k

    @property
    def l(self) -> int:
        return gcd(self.k, self.n)


class SymbolicY:
    """Generic k x m matrix with cached minors."""

    def __init__(self, k: int, m: int):
        self.k, self.m = k, m
        self.vars = tuple(f"y_{i}_{j}" for i in range(1, k + 1) for j in range(1, m + 1))
        self._cache: dict = {}

    def name(self, i: int, j: int) -> str:
        return f"y_{i}_{j}"

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly.var(self.name(i, j), self.vars)

    def one(self) -> LaurentPoly:
        return LaurentPoly.one(self.vars)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> LaurentPoly:
        """det Y(rows; cols) by cofactor expansion along the first row."""
        rows, cols = tuple(rows), tuple(cols)
        if len(rows) != len(cols):
            raise ValueError("minor needs as many rows as columns")
        if not rows:
            return self.one()
        if any(not 1 <= r <= self.k for r in rows) or any(not 1 <= c <= self.m for c in cols):
            raise IndexError(f"minor {rows} x {cols} leaves the {self.k} x {self.m} grid")
        if list(rows) != sorted(set(rows)) or list(cols) != sorted(set(cols)):
            raise ValueError("multi-indices must be strictly increasing")
        key = (rows, cols)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        acc = LaurentPoly.zero(self.vars)
        for q, c in enumerate(cols):
            sub = self.minor(rows[1:], cols[:q] + cols[q + 1:])
            term = self.entry(rows[0], c) * sub
            acc = acc - term if q % 2 else acc + term
        self._cache[key] = acc
        return acc


@dataclass(frozen=True)
class MinorExpr:
    """sign * det Y(rows; cols)."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        if len(self.rows) != len(self.cols):
            raise ValueError("|I| must equal |J|")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")

    def poly(self, Y: SymbolicY) -> LaurentPoly:
        p = Y.minor(self.rows, self.cols)
        return p if self.sign == 1 else -p


def F_index(p: GrassmannParams, i: int, j: int) -> MinorExpr:
    """Contiguous minor F_ij: rows i-l..i, columns j..j+l, l = min(i-1, m-j)."""
    if not (1 <= i <= p.k and 1 <= j <= p.m):
        raise IndexError(f"({i}, {j}) outside the {p.k} x {p.m} grid")
    l = min(i - 1, p.m - j)
    return MinorExpr(range(i - l, i + 1), range(j, j + l + 1))


def initial_cluster_fn(p: GrassmannParams, i: int, j: int) -> MinorExpr:
    """f_ij = (-1)^((k-i)(l-1)) F_ij."""
    F = F_index(p, i, j)
    l = len(F.rows) - 1
    s = -1 if ((p.k - i) * (l - 1)) % 2 else 1
    return MinorExpr(F.rows, F.cols, s)


def vertex_order(p: GrassmannParams) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """(cluster vertices, tropic vertices) in seed order."""
    cluster = [(i, j) for i in range(1, p.k) for j in range(2, p.m + 1)]
    tropic = [(i, 1) for i in range(1, p.k + 1)] + [(p.k, j) for j in range(2, p.m + 1)]
    return cluster, tropic


# six-term stencil: (Zx)_ij = x_{i+1,j} + x_{i,j-1} + x_{i-1,j+1} - x_{i+1,j-1} - x_{i,j+1} - x_{i-1,j}
_STENCIL = (((1, 0), 1), ((0, -1), 1), ((-1, 1), 1), ((1, -1), -1), ((0, 1), -1), ((-1, 0), -1))


def grid_exchange_matrix(p: GrassmannParams, orientation: str = "stencil") -> ExchangeMatrix:
    """Exchange matrix in seed order; stencil terms leaving the grid are dropped.

    ``orientation="figure"`` negates every entry. That sign agrees with the
    product diag(P) V J and with the usual picture of the grid quiver; it
    changes no cluster variable, sign form or count.
    """
    if orientation not in ("stencil", "figure"):
        raise ValueError("orientation must be 'stencil' or 'figure'")
    flip = -1 if orientation == "figure" else 1
    cluster, tropic = vertex_order(p)
    order = cluster + tropic
    pos = {v: c for c, v in enumerate(order)}
    rows = []
    for i, j in cluster:
        row = [0] * len(order)
        for (di, dj), s in _STENCIL:
            v = (i + di, j + dj)
            if v in pos:
                row[pos[v]] += flip * s
        rows.append(row)
    return ExchangeMatrix(Matrix(rows, len(cluster), len(order)), (1,) * len(cluster))


def vertex_labels(p: GrassmannParams) -> tuple[str, ...]:
    cluster, tropic = vertex_order(p)
    return tuple(f"f_{i}_{j}" for i, j in cluster + tropic)


def build_seed(p: GrassmannParams, Y: SymbolicY | None = None, orientation: str = "stencil") -> Seed:
    """Initial seed whose variables are the minors f_ij as polynomials in y."""
    Y = Y or SymbolicY(p.k, p.m)
    cluster, tropic = vertex_order(p)
    vars_ = [RationalFunction(initial_cluster_fn(p, i, j).poly(Y)) for i, j in cluster + tropic]
    return Seed(grid_exchange_matrix(p, orientation), tuple(vars_), vertex_labels(p))


# -- the quadratic bracket -----------------------------------------------------


class EntryBracket:
    """omega(y_ij, y_ab) = (sign(a - i) - sign(b - j)) y_ib y_aj, extended by Leibniz."""

    def __init__(self, Y: SymbolicY):
        self.Y = Y
        self._pairs: dict = {}
        for i in range(1, Y.k + 1):
            for j in range(1, Y.m + 1):
                for a in range(1, Y.k + 1):
                    for b in range(1, Y.m + 1):
                        c = sign(a - i) - sign(b - j)
                        if c:
                            mono = Y.entry(i, b) * Y.entry(a, j)
                            self._pairs[(Y.name(i, j), Y.name(a, b))] = mono.scale(c)

    def on_entries(self, u: str, v: str) -> LaurentPoly:
        return self._pairs.get((u, v), LaurentPoly.zero(self.Y.vars))

    def __call__(self, P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
        zero = LaurentPoly.zero(self.Y.vars)
        dP = {u: P.diff(u) for u in sorted(P.support_vars())}
        dQ = {v: Q.diff(v) for v in sorted(Q.support_vars())}
        acc = zero
        for u, pu in dP.items():
            inner = zero
            for v, qv in dQ.items():
                w = self._pairs.get((u, v))
                if w is not None:
                    inner = inner + w * qv
            if inner:
                acc = acc + pu * inner
        return acc


def bracket_poly(b: EntryBracket, P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    return b(P, Q)


def log_canonical_coeff(b: EntryBracket, A, B) -> int:
    """c with omega(A, B) = c A B, verified as a polynomial identity.

    ``A`` and ``B`` may be MinorExpr or polynomials.
    """
    PA = A.poly(b.Y) if isinstance(A, MinorExpr) else A
    PB = B.poly(b.Y) if isinstance(B, MinorExpr) else B
    w = b(PA, PB)
    if w.is_zero():
        return 0
    try:
        q = w.exact_div(PA * PB)
    except NotDivisible as exc:
        raise NotLogCanonical("bracket is not a multiple of the product") from exc
    if not q.is_constant():
        raise NotLogCanonical(f"ratio {q} is not constant")
    return q.constant_value()


def A_matrix(m: int) -> Matrix:
    """A_m with entries sign(j - b): -1 above the diagonal, 1 below."""
    return Matrix([[sign(a - b) for b in range(m)] for a in range(m)], m, m)


def omega_km(p: GrassmannParams) -> Matrix:
    """Coefficients omega(ln t_ij, ln t_ab) = sign(j-b) [i=a] - sign(i-a) [j=b], row-major."""
    k, m = p.k, p.m
    idx = [(i, j) for i in range(1, k + 1) for j in range(1, m + 1)]
    return Matrix([[sign(j - b) * (i == a) - sign(i - a) * (j == b) for a, b in idx] for i, j in idx],
                  k * m, k * m)


def t_to_F(p: GrassmannParams) -> Matrix:
    """L with ln F = L ln t: F_ij is the product of t along its anti-diagonal run up-right from (i, j)."""
    k, m = p.k, p.m
    idx = {(i, j): c for c, (i, j) in enumerate((i, j) for i in range(1, k + 1) for j in range(1, m + 1))}
    L = [[0] * (k * m) for _ in range(k * m)]
    for (i, j), c in idx.items():
        for r in range(min(i - 1, m - j) + 1):
            L[c][idx[(i - r, j + r)]] = 1
    return Matrix(L, k * m, k * m)


def _seed_perm(p: GrassmannParams) -> list[int]:
    """Row-major grid index of each seed position."""
    cluster, tropic = vertex_order(p)
    return [(i - 1) * p.m + (j - 1) for i, j in cluster + tropic]


def omega_f_grid(p: GrassmannParams) -> Matrix:
    """Coefficients omega(ln f_a, ln f_b) in seed order, from omega_km by the t -> F change of basis."""
    L = t_to_F(p)
    full = L @ omega_km(p) @ L.T
    perm = _seed_perm(p)
    return Matrix([[full[a, b] for b in perm] for a in perm], len(perm), len(perm))


def omega_f_symbolic(p: GrassmannParams, Y: SymbolicY | None = None) -> Matrix:
    """Same coefficients computed pairwise by the symbolic bracket."""
    Y = Y or SymbolicY(p.k, p.m)
    b = EntryBracket(Y)
    cluster, tropic = vertex_order(p)
    fs = [initial_cluster_fn(p, i, j) for i, j in cluster + tropic]
    n = len(fs)
    out = [[0] * n for _ in range(n)]
    for a in range(n):
        for c in range(a + 1, n):
            w = log_canonical_coeff(b, fs[a], fs[c])
            out[a][c], out[c][a] = w, -w
    return Matrix(out, n, n)


# -- kernel of Omega_km ---------------------------------------------------------


class InternalMismatch(AssertionError):
    """Independent computations of the same quantity disagree."""


def corank_formula(p: GrassmannParams) -> int:
    """0 if k/l or m/l is even, else l."""
    l = p.l
    return 0 if (p.k // l) % 2 == 0 or (p.m // l) % 2 == 0 else l


def d_km(k: int, m: int) -> int:
    """#{nu : nu^k = nu^m = -1}; nu = exp(i pi s / k) with s odd needs s m = k mod 2k."""
    return sum(1 for s in range(1, 2 * k, 2) if (m * s - k) % (2 * k) == 0)


def hankel_V(p: GrassmannParams, i: int) -> list[list[int]]:
    """V(i): (-1)^alpha on anti-diagonals p + q = i + alpha l (1-based), zero elsewhere."""
    l = p.l
    V = [[0] * p.m for _ in range(p.k)]
    for a in range(1, p.k + 1):
        for b in range(1, p.m + 1):
            r = a + b - i
            if r >= 0 and r % l == 0:
                V[a - 1][b - 1] = -1 if (r // l) % 2 else 1
    return V


def J_label(p: GrassmannParams, r: int) -> tuple[int, int]:
    """Grid vertex of J_r (1 <= r <= n-1), the tropic minor on anti-diagonal p + q = r + 1."""
    if not 1 <= r <= p.n - 1:
        raise IndexError(f"J index {r} outside [1, {p.n - 1}]")
    return (r, 1) if r <= p.k else (p.k, r - p.k + 1)


@dataclass(frozen=True)
class CorankReport:
    corank: int
    rank_corank: int
    formula: int
    d_km: int
    kernel: tuple  # V(i) matrices
    casimirs: tuple  # one {J index: exponent} dict per V(i)
    f_exponents: tuple  # the same Casimirs as exponent vectors over the seed variables


def corank_and_casimirs(p: GrassmannParams) -> CorankReport:
    """Corank of Omega_km three ways and the Casimirs I_V(i) as monomials in the J_r.

    Each exponent vector over the initial variables is checked to lie in the
    left kernel of omega_f_grid and to be supported on tropic vertices.
    """
    O = omega_km(p)
    rank_cor = O.rows - O.rank()
    formula, d = corank_formula(p), d_km(p.k, p.m)
    if not rank_cor == formula == d:
        raise InternalMismatch(f"corank: rank {rank_cor}, formula {formula}, roots {d}")
    if formula == 0:
        return CorankReport(0, rank_cor, formula, d, (), (), ())
    Linv_T = t_to_F(p).inverse().T
    perm = _seed_perm(p)
    Of = omega_f_grid(p)
    cluster, _ = vertex_order(p)
    Vs, cas, exps = [], [], []
    for i in range(1, p.l + 1):
        V = hankel_V(p, i)
        flat = [x for row in V for x in row]
        if any(O @ flat):
            raise InternalMismatch(f"V({i}) is not in the kernel of Omega_km")
        e = Linv_T @ flat
        seed_e = tuple(e[c] for c in perm)
        if any(seed_e[: len(cluster)]) or any(Of.T @ list(seed_e)):
            raise InternalMismatch(f"I_V({i}) is not a tropic Casimir")
        J = {}
        for r in range(1, p.n):
            a, b = J_label(p, r)
            x = e[(a - 1) * p.m + (b - 1)]
            if x:
                J[r] = int(x)
        Vs.append(tuple(tuple(row) for row in V))
        cas.append(J)
        exps.append(seed_e)
    return CorankReport(formula, rank_cor, formula, d, tuple(Vs), tuple(cas), tuple(exps))


def W_matrix(m: int) -> Matrix:
    """(A_m + 1)(A_m - 1)^-1."""
    A, I = A_matrix(m), Matrix.identity(m)
    return (A + I) @ (A - I).inverse()


def W_expected(m: int) -> Matrix:
    """-e_m1 + sum_i e_(i-1, i)."""
    W = [[0] * m for _ in range(m)]
    W[m - 1][0] -= 1
    for i in range(1, m):
        W[i - 1][i] += 1
    return Matrix(W, m, m)


def B_matrix(m: int, lam) -> Matrix:
    """C_m (lam 1 + A_m^T) with C_m = 1 + e_1m - sum_i e_(i, i-1)."""
    C = [[int(a == b) for b in range(m)] for a in range(m)]
    C[0][m - 1] += 1
    for i in range(1, m):
        C[i][i - 1] -= 1
    return Matrix(C, m, m) @ (Matrix.identity(m) * lam + A_matrix(m).T)


# -- bracket checks ---------------------------------------------------------------


def jacobiator(b: EntryBracket, P: LaurentPoly, Q: LaurentPoly, R: LaurentPoly) -> LaurentPoly:
    return b(P, b(Q, R)) + b(Q, b(R, P)) + b(R, b(P, Q))


def jacobi_check(k: int, m: int, points: int = 100, rng=None, bound: int = 50) -> tuple[bool, int]:
    """Jacobiator on every triple of entries, evaluated at random rational points.

    Returns (all zero, number of evaluations).
    """
    import random

    rng = rng or random.Random(0)
    Y = SymbolicY(k, m)
    b = EntryBracket(Y)
    ents = [Y.entry(i, j) for i in range(1, k + 1) for j in range(1, m + 1)]
    jac = []
    for x in range(len(ents)):
        for y in range(x + 1, len(ents)):
            for z in range(y + 1, len(ents)):
                jac.append(jacobiator(b, ents[x], ents[y], ents[z]))
    evals = 0
    for _ in range(points):
        pt = {v: Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for v in Y.vars}
        for J in jac:
            evals += 1
            if J.evaluate(pt) != 0:
                return False, evals
    return True, evals


# -- the seven-case table ----------------------------------------------------------


def prop34_coefficient(p: GrassmannParams, a: int, b: int, i: int, j: int) -> list[tuple[int, int]]:
    """Table values of omega(ln F_ab, ln F_ij) for a <= i as (case, value) pairs.

    Several cases may apply on shared boundaries; they then agree. Cases 5 to 7
    use the forms re-derived from the minor bracket (the printed ones differ).
    """
    if a > i:
        raise ValueError("the table covers a <= i; use skew-symmetry otherwise")
    k, n, m = p.k, p.n, p.m
    M, s = m + 1, i + j - m - 1
    out = []
    if b <= j and i + j <= M:
        out.append((1, -min(a, j - b)))
    if b >= j and max(a + b, i + j) <= M:
        out.append((2, max(a + b, i + j) - max(b, i + j)))
    if b <= j and a + b >= M:
        out.append((3, i - max(a, i + j + k - n - 1)))
    if b >= j and min(a + b, i + j) >= M:
        out.append((4, min(a, i + j + k - n - 1) - min(a + b + k - n - 1, i + j + k - n - 1)))
    if b <= j and a + b <= M <= i + j:
        out.append((5, min(a, s) - min(a, j - b)))
    if b >= j and a + b <= M <= i + j:
        out.append((6, min(a, s)))
    if b >= j and i + j <= M <= a + b:
        out.append((7, M - max(b, i + j)))
    return out


# -- first mutations -----------------------------------------------------------------


class NotPolynomial(ArithmeticError):
    pass


class ClosedFormMismatch(AssertionError):
    pass


def _R(a: int, b: int) -> tuple[int, ...]:
    return tuple(range(a, b + 1))


def regularity_closed_form(p: GrassmannParams, Y: SymbolicY, i: int, j: int) -> tuple[str, LaurentPoly]:
    """Case id and polynomial predicted for the mutation of f_ij in the initial seed."""
    k, m, M = p.k, p.m, Y.minor
    if i == 1 and j < m:
        return "iv", M((1, 2), (j - 1, j + 1))
    if i == 1:
        return "vi", Y.entry(2, m - 1).scale((-1) ** k)
    if j == m:
        return "v", -M((i - 1, i + 1), (m - 1, m))
    if i + j < m + 1:
        A = _R(1, i - 1) + (i + 1,)
        return "i", (M(A, _R(j + 1, j + i)) * M(_R(1, i), _R(j - 1, j + i - 2))
                     - M(A, _R(j - 1, j + i - 2)) * M(_R(1, i), _R(j + 1, j + i)))
    if i + j == m + 1:
        val = (M(_R(1, i + 1), _R(j - 1, m)) * M(_R(2, i - 1), _R(j + 1, m - 1))
               - M(_R(2, i + 1), _R(j - 1, m - 1)) * M(_R(1, i - 1), _R(j + 1, m)))
        return "iii", val.scale((-1) ** (k - i))
    a = i + j - m
    C = (j - 1,) + _R(j + 1, m)
    return "ii", (M(_R(a + 1, i + 1), C) * M(_R(a - 1, i - 1), _R(j, m))
                  - M(_R(a - 1, i - 1), C) * M(_R(a + 1, i + 1), _R(j, m)))


def mutation_regularity_check(p: GrassmannParams, i: int, j: int, Y: SymbolicY | None = None,
                              seed: Seed | None = None) -> tuple[LaurentPoly, str]:
    """Mutate the initial seed at (i, j); return the new variable and the matched case."""
    if not (1 <= i <= p.k - 1 and 2 <= j <= p.m):
        raise IndexError(f"({i}, {j}) is not a cluster vertex of the {p.k} x {p.m} grid")
    Y = Y or SymbolicY(p.k, p.m)
    seed = seed or build_seed(p, Y)
    c = vertex_order(p)[0].index((i, j))
    new = mutate_seed(seed, c + 1).vars[c]
    if not new.is_laurent():
        raise NotPolynomial(f"f'_{i}{j} is not a Laurent polynomial")
    P = new.as_laurent()
    if not P.is_polynomial():
        raise NotPolynomial(f"f'_{i}{j} has negative exponents")
    case, Q = regularity_closed_form(p, Y, i, j)
    if P != Q:
        raise ClosedFormMismatch(f"f'_{i}{j}: case ({case}) predicts {Q}, exchange gives {P}")
    return P, case


# -- the recovery walk ---------------------------------------------------------------


class ClaimMismatch(AssertionError):
    pass


def walk_sequence(k: int, m: int) -> list[tuple[int, int]]:
    """Directions of T_{k-1} o ... o T_1 on a k x m grid: T_g runs row g from
    column m-g+1 down to 2, then column m-g+1 from row g+1 to k-1."""
    seq = []
    for g in range(1, k):
        c = m - g + 1
        seq += [(g, j) for j in range(c, 1, -1)]
        if c >= 2:
            seq += [(i, c) for i in range(g + 1, k)]
    return seq


def reduced_fn(p: GrassmannParams, Y: SymbolicY, r: int, a: int, b: int) -> LaurentPoly:
    """Initial variable f_ab of the (k-r) x (m-r) matrix Y(r+1..k; 1..m-r), in its own indices."""
    kb, mb = p.k - r, p.m - r
    lb = min(a - 1, mb - b)
    s = -1 if ((kb - a) * (lb - 1)) % 2 else 1
    P = Y.minor(tuple(x + r for x in range(a - lb, a + 1)), tuple(range(b, b + lb + 1)))
    return P if s == 1 else -P


@dataclass
class WalkReport:
    k: int
    m: int
    stages: int
    mutations: int
    exposed: dict  # y name -> (stage, vertex) where it first appears as a cluster variable
    missing: tuple  # entries never exposed
    identities: int  # checked walk identities


def _walk_identities(p: GrassmannParams, Y: SymbolicY) -> int:
    """The three exchange identities along the first stage, as minor identities."""
    k, m = p.k, p.m

    def f(i, j):
        return initial_cluster_fn(p, i, j).poly(Y)

    def fb(i, j):
        a, b = i, j - 1
        if not (1 <= a <= k - 1 and 1 <= b <= m - 1):
            return Y.one()
        return reduced_fn(p, Y, 1, a, b)

    count = 0
    for i in range(1, k):
        for j in range(2, m + 1):
            lhs = f(i, j) * fb(i, j)
            first = f(i + 1, j - 1) * fb(i - 1, j + 1)
            if i + j == m + 1:
                second = f(i, j - 1) * f(i + 1, j)
            elif i + j < m + 1:
                second = f(i, j - 1) * fb(i, j + 1)
            else:
                second = f(i + 1, j) * fb(i - 1, j)
            if lhs != first + second:
                raise ClaimMismatch(f"walk identity at ({i}, {j}): {lhs - first - second} != 0")
            count += 1
    return count


def recovery_walk(p: GrassmannParams, Y: SymbolicY | None = None, stages: int | None = None) -> WalkReport:
    """Run the walk, then repeat it on the shifted subgrid.

    After stage r every cluster vertex (a, b + r) with a <= k-r-1, b >= 2 holds
    the reduced variable f_ab of Y(r+1..k; 1..m-r), and the exchange-matrix rows
    of the next stage's cluster vertices are the grid stencil of that subgrid.
    """
    k, m = p.k, p.m
    if k < 2 or m < 2:
        raise ValueError("the walk needs k >= 2 and m >= 2")
    Y = Y or SymbolicY(k, m)
    seed = build_seed(p, Y)
    cluster, tropic = vertex_order(p)
    pos = {v: c for c, v in enumerate(cluster + tropic)}
    stencil = dict(_STENCIL)
    exposed: dict = {}

    def scan(s, stage):
        for c, v in enumerate(cluster):
            P = s.vars[c].as_laurent() if s.vars[c].is_laurent() else None
            if P is not None and len(P.terms) == 1:
                (e, co), = P.terms.items()
                if sum(e) == 1 and abs(co) == 1 and min(e) >= 0:
                    exposed.setdefault(Y.vars[e.index(1)], (stage, v))

    scan(seed, 0)
    r, count = 0, 0
    limit = min(k, m) - 1 if stages is None else stages
    while r < limit and k - r >= 2 and m - r >= 2:
        for a, b in walk_sequence(k - r, m - r):
            seed = mutate_seed(seed, pos[(a, b + r)] + 1)
            count += 1
        r += 1
        kb, mb = k - r, m - r
        # the previous stage's cluster vertex (a, b) now holds the reduced f_(a, b-1)
        for a in range(1, kb + 1):
            for b in range(2, mb + 2):
                v = (a, b + r - 1)
                if v not in pos or pos[v] >= len(cluster):
                    continue
                got = seed.vars[pos[v]]
                want = reduced_fn(p, Y, r, a, b - 1)
                if not got.is_laurent() or got.as_laurent() != want:
                    raise ClaimMismatch(f"stage {r}: vertex {v} holds {got}, expected {want}")
        sub = {(a, b + r) for a in range(1, kb + 1) for b in range(1, mb + 1)}
        for a in range(1, kb):
            for b in range(2, mb + 1):
                row = seed.exchange.Z.row(pos[(a, b + r)])
                for v, c in pos.items():
                    want = stencil.get((v[0] - a, v[1] - b - r), 0) if v in sub else 0
                    if row[c] != want:
                        raise ClaimMismatch(f"stage {r}: Z[{(a, b + r)}, {v}] = {row[c]}, expected {want}")
        scan(seed, r)
    missing = tuple(sorted(set(Y.vars) - set(exposed)))
    return WalkReport(k, m, r, count, exposed, missing, _walk_identities(p, Y))


# -- connected components ---------------------------------------------------------------


def closed_form_count(p: GrassmannParams) -> int | None:
    """Known component counts of the refined open cell, or None."""
    k, m, n = p.k, p.m, p.n
    if min(k, m) == 1:
        return 1 << (n - 1)
    if min(k, m) == 2:
        return (n - 1) << (n - 2)
    if min(k, m) >= 3 and n >= 7:
        return 3 << (n - 1)
    return None  # G(3, 6) has 88 orbits, not 3 * 2^5


def cluster_graph(p: GrassmannParams) -> dict:
    """Undirected adjacency of the grid quiver restricted to cluster vertices (1-based seed positions)."""
    from clusterpoisson.components import induced, undirected

    E = grid_exchange_matrix(p)
    return induced(undirected(graph_of(E)), range(1, E.m + 1))


def count_components(p: GrassmannParams, method: str = "auto", max_bits: int | None = None,
                     threads: int = 1):
    """Orbit count of the grid sign form, checked against the closed form when one applies.

    Returns (OrbitReport, closed-form value or None).
    """
    from clusterpoisson.components import SignForm, orbit_count

    eta = SignForm.from_exchange(grid_exchange_matrix(p))
    rep = orbit_count(eta, cluster_graph(p), method=method, max_bits=max_bits, threads=threads)
    expect = closed_form_count(p)
    if expect is not None and rep.count != expect:
        raise InternalMismatch(f"G({p.k},{p.n}): {rep.method} gives {rep.count}, closed form {expect}")
    return rep, expect
