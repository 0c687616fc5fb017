"""Transvection orbits over F2 and connected-component counts.

A sign vector of the n variables is a bit pattern xi in F2^n (bit j-1 is
vertex j). Each cluster vertex i acts by the transvection
t_i(xi) = xi + eta(xi, e_i) e_i; the number of orbits of the group these
generate counts the connected components of the real part where all tropic
variables are nonzero.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from clusterpoisson.exact import Matrix
from clusterpoisson.exchange import ExchangeMatrix, QuiverGraph

__all__ = [
    "SignForm",
    "OrbitReport",
    "TooLarge",
    "PreconditionNotMet",
    "NotClusterIndex",
    "DEFAULT_MAX_BITS",
    "max_bits_default",
    "transvection",
    "count_orbits",
    "kernel_dim_cluster",
    "is_e6_compatible",
    "find_e6",
    "formula_count",
    "orbit_count",
    "undirected",
    "induced",
]

DEFAULT_MAX_BITS = 24


class TooLarge(ValueError):
    """State space exceeds the enumeration limit."""


class PreconditionNotMet(ValueError):
    pass


class NotClusterIndex(ValueError):
    pass


def max_bits_default() -> int:
    """Enumeration limit, overridable through CLUSTER_MAX_BITS."""
    raw = os.environ.get("CLUSTER_MAX_BITS")
    if raw is None:
        return DEFAULT_MAX_BITS
    value = int(raw)
    if value <= 0:
        raise ValueError("CLUSTER_MAX_BITS must be positive")
    return value


@dataclass(frozen=True)
class SignForm:
    """Symmetric F2 form with zero diagonal plus the set of cluster vertices.

    ``rows[j]`` is the bitmask of row j + 1. Entries between two tropic
    vertices are stored but never influence orbits or the cluster kernel.
    """

    n: int
    rows: tuple[int, ...]
    cluster: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cluster", tuple(sorted(int(c) for c in self.cluster)))
        if len(rows) != self.n:
            raise ValueError("need one row per vertex")
        for a in range(self.n):
            if rows[a] >> self.n:
                raise ValueError("row has bits beyond n")
            if rows[a] >> a & 1:
                raise ValueError("diagonal must vanish")
            for b in range(a + 1, self.n):
                if (rows[a] >> b & 1) != (rows[b] >> a & 1):
                    raise ValueError("form is not symmetric")
        if any(not 1 <= c <= self.n for c in self.cluster) or len(set(self.cluster)) != len(self.cluster):
            raise ValueError("cluster indices must be distinct and within [1, n]")

    @classmethod
    def from_matrix(cls, eta: Sequence[Sequence[int]], cluster: Iterable[int]) -> "SignForm":
        rows = tuple(sum((int(x) % 2) << b for b, x in enumerate(r)) for r in eta)
        return cls(len(rows), rows, tuple(cluster))

    @classmethod
    def from_extended(cls, Zp: Matrix, Dhat: Sequence[int], m: int) -> "SignForm":
        """eta(e_i, e_j) = d_i z'_ij mod 2, cluster vertices 1..m."""
        grid = [[Dhat[a] * Zp[a, b] for b in range(Zp.cols)] for a in range(Zp.rows)]
        return cls.from_matrix(grid, range(1, m + 1))

    @classmethod
    def from_exchange(cls, E: ExchangeMatrix, Z4=None) -> "SignForm":
        from clusterpoisson.tau import extend_matrix

        X = extend_matrix(E, Z4)
        return cls.from_extended(X.Zp, X.Dhat, X.m)

    @property
    def t(self) -> int:
        return self.n - len(self.cluster)

    def matrix(self) -> np.ndarray:
        return np.array([[r >> b & 1 for b in range(self.n)] for r in self.rows], dtype=np.uint8)

    def pair(self, xi: int, zeta: int) -> int:
        """eta(xi, zeta) for bitmasks."""
        acc = 0
        for a in range(self.n):
            if xi >> a & 1:
                acc ^= (self.rows[a] & zeta).bit_count() & 1
        return acc


@dataclass(frozen=True)
class OrbitReport:
    count: int
    method: str
    t: int | None = None
    kernel_dim: int | None = None
    histogram: tuple[tuple[int, int], ...] | None = None


def _as_mask(xi) -> int:
    if isinstance(xi, (int, np.integer)):
        return int(xi)
    return sum((int(b) & 1) << a for a, b in enumerate(xi))


def transvection(eta: SignForm, i: int, xi):
    """t_i(xi): flip bit i when <xi, row_i> = 1.

    ``xi`` may be a bitmask or a bit sequence; the result has the same form.
    """
    if i not in eta.cluster:
        raise NotClusterIndex(f"{i} is not a cluster vertex")
    mask = _as_mask(xi)
    out = mask ^ (((eta.rows[i - 1] & mask).bit_count() & 1) << (i - 1))
    if isinstance(xi, (int, np.integer)):
        return out
    return tuple(out >> a & 1 for a in range(eta.n))


def _partner(states: np.ndarray, row: int, bit: int) -> np.ndarray:
    par = np.bitwise_count(states & states.dtype.type(row)) & 1
    return states ^ (par.astype(states.dtype) << states.dtype.type(bit))


def _partners(eta: SignForm, threads: int) -> list[np.ndarray]:
    dtype = np.uint32 if eta.n <= 31 else np.uint64
    states = np.arange(1 << eta.n, dtype=dtype)
    jobs = [(eta.rows[i - 1], i - 1) for i in eta.cluster]
    if threads <= 1 or len(states) < 1 << 12:
        return [_partner(states, row, bit) for row, bit in jobs]
    chunks = np.array_split(states, threads)
    with ThreadPoolExecutor(threads) as pool:
        return [np.concatenate(list(pool.map(lambda c: _partner(c, row, bit), chunks))) for row, bit in jobs]


def _components_unionfind(size: int, partners: list[np.ndarray]) -> np.ndarray:
    """Root label of every state by hooking and pointer jumping."""
    parent = np.arange(size, dtype=np.int64)
    while True:
        before = parent.copy()
        for p in partners:
            a, b = parent, parent[p]
            lo, hi = np.minimum(a, b), np.maximum(a, b)
            np.minimum.at(parent, hi, lo)
        while True:
            jumped = parent[parent]
            if np.array_equal(jumped, parent):
                break
            parent = jumped
        if np.array_equal(parent, before):
            return parent


def _components_scipy(size: int, partners: list[np.ndarray]) -> np.ndarray:
    src = np.tile(np.arange(size, dtype=np.int64), len(partners))
    dst = np.concatenate(partners).astype(np.int64) if partners else np.zeros(0, np.int64)
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(size, size)).tocsr()
    _, labels = connected_components(g, directed=False)
    return labels


def count_orbits(eta: SignForm, max_bits: int | None = None, strategy: str = "unionfind",
                 threads: int = 1, histogram: bool = False) -> OrbitReport:
    """Number of orbits of the transvection group on all of F2^n, by enumeration.

    ``strategy`` is ``"unionfind"`` (numpy hooking) or ``"scipy"``
    (sparse-graph connected components); both give the same count.
    """
    limit = max_bits_default() if max_bits is None else max_bits
    if eta.n > limit:
        raise TooLarge(f"{eta.n} bits exceeds the enumeration limit {limit}")
    size = 1 << eta.n
    partners = _partners(eta, max(1, threads))
    if strategy == "unionfind":
        labels = _components_unionfind(size, partners)
    elif strategy == "scipy":
        labels = _components_scipy(size, partners)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    _, sizes = np.unique(labels, return_counts=True)
    hist = None
    if histogram:
        vals, freq = np.unique(sizes, return_counts=True)
        hist = tuple((int(v), int(f)) for v, f in zip(vals, freq))
    return OrbitReport(int(len(sizes)), "enumerate", eta.t, kernel_dim_cluster(eta), hist)


def _f2_rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def kernel_dim_cluster(eta: SignForm) -> int:
    """dim of {h supported on C : eta(h, e_j) = 0 for all j}."""
    return len(eta.cluster) - _f2_rank(eta.rows[c - 1] for c in eta.cluster)


# -- graphs -------------------------------------------------------------------


def undirected(g) -> dict:
    """Symmetrized adjacency sets from a QuiverGraph, an adjacency mapping or an edge list."""
    if isinstance(g, QuiverGraph):
        return g.undirected()
    adj: dict = {}
    if isinstance(g, Mapping):
        for a, nbrs in g.items():
            adj.setdefault(a, set())
            for b in nbrs:
                adj[a].add(b)
                adj.setdefault(b, set()).add(a)
    else:
        for a, b in g:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    for a in adj:
        adj[a].discard(a)
    return adj


def induced(adj: Mapping, vertices: Iterable) -> dict:
    keep = set(vertices)
    return {v: set(adj.get(v, ())) & keep for v in keep}


def _connected(adj: Mapping) -> bool:
    if not adj:
        return False
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for b in adj[stack.pop()]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return len(seen) == len(adj)


def find_e6(g) -> tuple | None:
    """An induced E6 as (center, short arm, (a1, a2), (b1, b2)), or None.

    E6 is a center with three arms of lengths 1, 2, 2.
    """
    adj = undirected(g)
    for c in sorted(adj):
        nb = sorted(adj[c])
        for trio in combinations(nb, 3):
            if any(y in adj[x] for x, y in combinations(trio, 2)):
                continue
            for short in trio:
                a1, b1 = [x for x in trio if x != short]
                core = {c, short, a1, b1}
                ext_a = [p for p in adj[a1] if p not in core and not adj[p] & (core - {a1})]
                ext_b = [p for p in adj[b1] if p not in core and not adj[p] & (core - {b1})]
                for a2 in ext_a:
                    for b2 in ext_b:
                        if a2 != b2 and b2 not in adj[a2]:
                            return c, short, (a1, a2), (b1, b2)
    return None


def is_e6_compatible(g) -> bool:
    """Connected and containing an induced subgraph isomorphic to E6."""
    adj = undirected(g)
    return _connected(adj) and find_e6(adj) is not None


def formula_count(eta: SignForm, cluster_graph) -> OrbitReport:
    """2^t (2 + 2^dim(F2^C meet ker eta)), valid for E6-compatible cluster graphs."""
    if not is_e6_compatible(cluster_graph):
        raise PreconditionNotMet("cluster subgraph is not E6-compatible")
    d = kernel_dim_cluster(eta)
    return OrbitReport((1 << eta.t) * (2 + (1 << d)), "formula", eta.t, d)


def orbit_count(eta: SignForm, cluster_graph=None, method: str = "auto", max_bits: int | None = None,
                threads: int = 1) -> OrbitReport:
    """Dispatch between the closed formula and enumeration.

    ``auto`` uses the formula whenever its precondition holds and enumerates
    otherwise.
    """
    if method not in ("auto", "enumerate", "formula"):
        raise ValueError(f"unknown method {method!r}")
    if method == "formula":
        return formula_count(eta, cluster_graph)
    if method == "auto" and cluster_graph is not None and is_e6_compatible(cluster_graph):
        return formula_count(eta, cluster_graph)
    return count_orbits(eta, max_bits=max_bits, threads=threads)
