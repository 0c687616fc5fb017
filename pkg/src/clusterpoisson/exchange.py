"""Exchange matrices, seeds and their mutations.

Directions and vertices are 1-based throughout the public API, matching the
usual cluster-algebra indexing: cluster variables are 1..m, tropic (frozen)
variables are m+1..n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from clusterpoisson.exact import LaurentPoly, Matrix, NotDivisible, RationalFunction

__all__ = [
    "ExchangeMatrix",
    "Seed",
    "QuiverGraph",
    "LaurentReport",
    "DirectionError",
    "EntriesOutOfRange",
    "PreconditionViolation",
    "InternalDivisionFailure",
    "mutate_entries",
    "mutate_matrix",
    "mutate_seed",
    "mutate_word",
    "laurent_check",
    "block_decompose",
    "graph_of",
    "mutate_graph",
    "exchange_monomials",
    "random_exchange_matrix",
    "parse_word",
]


class DirectionError(IndexError):
    """Mutation direction outside [1, m]."""


class EntriesOutOfRange(ValueError):
    pass


class PreconditionViolation(ValueError):
    pass


class InternalDivisionFailure(ArithmeticError):
    pass


def mutate_entries(z: Sequence[Sequence[int]], i: int) -> list[list[int]]:
    """Matrix mutation at 1-based index ``i`` for any rectangular integer grid.

    Row/column ``i`` is negated; every other entry picks up
    (|z_ki| z_il + z_ki |z_il|) / 2.
    """
    c = i - 1
    out = []
    for k, row in enumerate(z):
        zki = row[c]
        new = []
        for l, zkl in enumerate(row):
            if k == c or l == c:
                new.append(-zkl)
            else:
                zil = z[c][l]
                new.append(zkl + (abs(zki) * zil + zki * abs(zil)) // 2)
        out.append(new)
    return out


@dataclass(frozen=True)
class ExchangeMatrix:
    """An m x n integer matrix whose leading m x m block is D-skew-symmetrizable."""

    Z: Matrix
    D: tuple[int, ...]

    def __post_init__(self):
        Z = self.Z if isinstance(self.Z, Matrix) else Matrix(self.Z)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))
        m, n = Z.shape
        if not Z.is_integral():
            raise ValueError("exchange matrix must be integral")
        if m > n:
            raise ValueError(f"need m <= n, got {m}x{n}")
        if len(self.D) != m or any(d <= 0 for d in self.D):
            raise ValueError("D must hold m positive integers")
        for a in range(m):
            for b in range(a, m):
                if self.D[a] * Z[a, b] != -self.D[b] * Z[b, a]:
                    raise ValueError("D * Z[m;m] is not skew-symmetric")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], D: Sequence[int] | None = None) -> "ExchangeMatrix":
        Z = Matrix(rows)
        return cls(Z, tuple(D) if D is not None else (1,) * Z.rows)

    @property
    def m(self) -> int:
        return self.Z.rows

    @property
    def n(self) -> int:
        return self.Z.cols

    def entry(self, i: int, j: int) -> int:
        """z_ij with 1-based indices."""
        return self.Z[i - 1, j - 1]

    def principal(self) -> Matrix:
        return self.Z.top(self.m)

    def rank(self) -> int:
        return self.Z.rank()

    def __str__(self) -> str:
        return f"Z=\n{self.Z}\nD={self.D}"


def _check_direction(i: int, m: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= m:
        raise DirectionError(f"direction {i} outside [1, {m}]")


def mutate_matrix(E: ExchangeMatrix, i: int) -> ExchangeMatrix:
    _check_direction(i, E.m)
    return ExchangeMatrix(Matrix(mutate_entries(E.Z.data, i)), E.D)


def exchange_monomials(E: ExchangeMatrix, values: Sequence, i: int):
    """The two monomials of the exchange relation in direction ``i``.

    Empty products are 1.
    """
    row = E.Z.row(i - 1)
    one = RationalFunction.lift(values[0]) * 0 + 1
    plus, minus = one, one
    for k, z in enumerate(row):
        if z > 0:
            plus = plus * values[k] ** z
        elif z < 0:
            minus = minus * values[k] ** (-z)
    return plus, minus


@dataclass(frozen=True)
class Seed:
    """Exchange matrix plus the current extended cluster.

    ``vars`` are rational functions over a fixed ambient ring, normally the
    initial extended cluster itself (see :meth:`initial`).
    """

    exchange: ExchangeMatrix
    vars: tuple[RationalFunction, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        vars_ = tuple(RationalFunction.lift(v) for v in self.vars)
        object.__setattr__(self, "vars", vars_)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(vars_) != self.exchange.n or len(self.labels) != self.exchange.n:
            raise ValueError("need one variable and one label per column of Z")
        if len({v.vars for v in vars_}) > 1:
            raise ValueError("all cluster variables must share one ambient ring")

    @classmethod
    def initial(cls, E: ExchangeMatrix, labels: Sequence[str] | None = None) -> "Seed":
        labels = tuple(labels) if labels is not None else tuple(f"f{j}" for j in range(1, E.n + 1))
        gens = tuple(RationalFunction(LaurentPoly.var(v, labels)) for v in labels)
        return cls(E, gens, labels)

    @property
    def m(self) -> int:
        return self.exchange.m

    @property
    def n(self) -> int:
        return self.exchange.n

    @property
    def ring(self) -> tuple[str, ...]:
        return self.vars[0].vars

    def cluster(self) -> tuple[RationalFunction, ...]:
        return self.vars[: self.m]


def mutate_seed(s: Seed, i: int) -> Seed:
    E = s.exchange
    _check_direction(i, E.m)
    old = s.vars[i - 1]
    if old.is_zero():
        raise InternalDivisionFailure(f"cluster variable {i} is identically zero")
    plus, minus = exchange_monomials(E, s.vars, i)
    new = ((plus + minus) / old).simplified()
    vars_ = list(s.vars)
    vars_[i - 1] = new
    return Seed(mutate_matrix(E, i), tuple(vars_), s.labels)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(","))


def mutate_word(s: Seed, word: Iterable[int]) -> Seed:
    for i in word:
        s = mutate_seed(s, i)
    return s


@dataclass(frozen=True)
class LaurentReport:
    label: str
    laurent: bool
    poly: LaurentPoly | None
    reason: str = ""


def laurent_check(s: Seed) -> list[LaurentReport]:
    """Try to write every cluster variable as a Laurent polynomial in the ambient ring."""
    out = []
    for label, v in zip(s.labels[: s.m], s.cluster()):
        try:
            out.append(LaurentReport(label, True, v.as_laurent()))
        except NotDivisible as exc:
            out.append(LaurentReport(label, False, None, str(exc)))
    return out


def block_decompose(E: ExchangeMatrix) -> list[list[int]]:
    """Classes of the relation generated by z_ij != 0 on [1, m], sorted."""
    m = E.m
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(m):
        for b in range(m):
            if a != b and E.Z[a, b]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[int]] = {}
    for a in range(m):
        classes.setdefault(find(a), []).append(a + 1)
    return sorted(classes.values())


@dataclass(frozen=True)
class QuiverGraph:
    """Directed graph on vertices 1..n; vertices above ``m`` are tropic."""

    n: int
    edges: frozenset = field(default_factory=frozenset)
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((int(a), int(b)) for a, b in self.edges))
        for a, b in self.edges:
            if not (1 <= a <= self.n and 1 <= b <= self.n) or a == b:
                raise ValueError(f"bad edge {(a, b)}")
            if (b, a) in self.edges:
                raise ValueError(f"antiparallel edges between {a} and {b}")
            if self.m is not None and a > self.m and b > self.m:
                raise ValueError(f"edge {(a, b)} joins two tropic vertices")

    def adjacent(self, a: int, b: int) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def undirected(self) -> dict[int, set[int]]:
        adj = {v: set() for v in range(1, self.n + 1)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def nonoriented_triangles(self) -> list[tuple[int, int, int]]:
        adj = self.undirected()
        bad = []
        for a, b, c in combinations(range(1, self.n + 1), 3):
            if b in adj[a] and c in adj[b] and c in adj[a]:
                cyc1 = {(a, b), (b, c), (c, a)}
                cyc2 = {(b, a), (c, b), (a, c)}
                if not (cyc1 <= self.edges or cyc2 <= self.edges):
                    bad.append((a, b, c))
        return bad


def graph_of(E: ExchangeMatrix) -> QuiverGraph:
    """Edge a -> b whenever the (skew-extended) entry z_ab equals 1."""
    edges = set()
    for a in range(E.m):
        for b in range(E.n):
            z = E.Z[a, b]
            if abs(z) > 1:
                raise EntriesOutOfRange(f"z[{a + 1},{b + 1}] = {z}")
            if z == 1:
                edges.add((a + 1, b + 1))
            elif z == -1:
                edges.add((b + 1, a + 1))
    return QuiverGraph(E.n, frozenset(edges), E.m)


def mutate_graph(g: QuiverGraph, i: int) -> QuiverGraph:
    """Graph mutation: reverse edges at i, then for each j -> i -> k toggle j -> k
    against an existing k -> j. Refuses graphs with nonoriented 3-cycles."""
    if not 1 <= i <= g.n:
        raise DirectionError(f"vertex {i} outside [1, {g.n}]")
    bad = g.nonoriented_triangles()
    if bad:
        raise PreconditionViolation(f"nonoriented 3-cycles present: {bad}")
    ins = [a for a, b in g.edges if b == i]
    outs = [b for a, b in g.edges if a == i]
    new = set()
    for a, b in g.edges:
        new.add((b, a) if i in (a, b) else (a, b))
    for j in ins:
        for k in outs:
            if (k, j) in new:
                new.discard((k, j))
            else:
                new.add((j, k))
    if g.m is not None:
        new = {(a, b) for a, b in new if a <= g.m or b <= g.m}
    return QuiverGraph(g.n, frozenset(new), g.m)


def random_exchange_matrix(rng: random.Random, m: int, n: int, max_d: int = 3,
                           max_coupling: int = 1, max_tropic: int = 1,
                           density: float = 0.6, full_rank: bool = False,
                           max_tries: int = 1000) -> ExchangeMatrix:
    """Random D-skew-symmetrizable m x n exchange matrix.

    Principal couplings are z_ab = c d_b / g, z_ba = -c d_a / g with
    g = gcd(d_a, d_b), so D Z[m;m] is skew-symmetric by construction.
    A full-rank request with m = n odd is refused: such a block is singular.
    """
    if full_rank and m == n and m % 2:
        raise ValueError("a skew-symmetrizable matrix of odd size is singular")
    for _ in range(max_tries):
        D = tuple(rng.randint(1, max_d) for _ in range(m))
        rows = [[0] * n for _ in range(m)]
        for a in range(m):
            for b in range(a + 1, m):
                if rng.random() < density:
                    c = rng.choice([x for x in range(-max_coupling, max_coupling + 1) if x])
                    g = gcd(D[a], D[b])
                    rows[a][b] = c * D[b] // g
                    rows[b][a] = -c * D[a] // g
            for b in range(m, n):
                if rng.random() < density:
                    rows[a][b] = rng.randint(-max_tropic, max_tropic)
        E = ExchangeMatrix(Matrix(rows), D)
        if not full_rank or E.rank() == m:
            return E
    raise RuntimeError("could not draw a full-rank exchange matrix")
