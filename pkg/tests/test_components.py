from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from clusterpoisson import components as comp
from clusterpoisson.exchange import ExchangeMatrix, random_exchange_matrix
from clusterpoisson.grassmannian import GrassmannParams, build_seed, cluster_graph
from clusterpoisson.tau import extend_matrix

E6 = [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]


def form(n, edges, cluster=None):
    M = [[0] * n for _ in range(n)]
    for a, b in edges:
        M[a - 1][b - 1] = M[b - 1][a - 1] = 1
    return comp.SignForm.from_matrix(M, cluster or range(1, n + 1))


def bfs_orbits(eta):
    """Reference count by plain breadth-first search."""
    seen = set()
    count = 0
    for start in range(1 << eta.n):
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            xi = stack.pop()
            for i in eta.cluster:
                nxt = comp.transvection(eta, i, xi)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return count


def test_transvection_examples():
    zero = comp.SignForm(2, (0, 0), (1, 2))
    assert all(comp.transvection(zero, i, xi) == xi for i in (1, 2) for xi in range(4))
    eta = form(2, [(1, 2)])
    assert comp.transvection(eta, 1, (0, 1)) == (1, 1)
    assert comp.transvection(eta, 1, 0b10) == 0b11
    with pytest.raises(comp.NotClusterIndex):
        comp.transvection(form(2, [(1, 2)], [1]), 2, 0)


def test_count_examples():
    assert comp.count_orbits(comp.SignForm(1, (0,), (1,))).count == 2
    E = build_seed(GrassmannParams(2, 4)).exchange
    assert comp.count_orbits(comp.SignForm.from_exchange(E)).count == 12


def test_kernel_dim_examples():
    assert comp.kernel_dim_cluster(comp.SignForm(3, (0, 0, 0), (1, 2, 3))) == 3
    assert comp.kernel_dim_cluster(form(2, [(1, 2)])) == 0
    for k, n in [(4, 8), (4, 9), (5, 10)]:
        E = build_seed(GrassmannParams(k, n)).exchange
        assert comp.kernel_dim_cluster(comp.SignForm.from_exchange(E)) == 0


def test_e6_examples():
    assert comp.is_e6_compatible(E6)
    assert not comp.is_e6_compatible([(i, i + 1) for i in range(1, 6)])
    assert comp.is_e6_compatible(cluster_graph(GrassmannParams(4, 8)))
    assert not comp.is_e6_compatible(E6 + [(7, 8)])  # disconnected


def test_formula_examples():
    E = build_seed(GrassmannParams(4, 8)).exchange
    eta = comp.SignForm.from_exchange(E)
    rep = comp.formula_count(eta, cluster_graph(GrassmannParams(4, 8)))
    assert (rep.count, rep.t, rep.kernel_dim, rep.method) == (384, 7, 0, "formula")
    # E7 has a one-dimensional F2 kernel and no tropic vertices: 2 + 2
    E7 = E6 + [(5, 7)]
    rep = comp.formula_count(form(7, E7), E7)
    assert (rep.count, rep.t, rep.kernel_dim) == (4, 0, 1)
    assert comp.count_orbits(form(7, E7)).count == 4
    with pytest.raises(comp.PreconditionNotMet):
        comp.formula_count(form(6, E6[:-1] + [(5, 6)]), E6[:-1] + [(5, 6)])


def test_too_large():
    eta = comp.SignForm(30, (0,) * 30, (1,))
    with pytest.raises(comp.TooLarge):
        comp.count_orbits(eta, max_bits=24)


def test_max_bits_env(monkeypatch):
    monkeypatch.setenv("CLUSTER_MAX_BITS", "3")
    assert comp.max_bits_default() == 3
    with pytest.raises(comp.TooLarge):
        comp.count_orbits(comp.SignForm(4, (0,) * 4, (1,)))


def test_e6_detection_matches_networkx():
    target = nx.Graph(E6)
    r = random.Random(7)
    for _ in range(150):
        nv = r.randint(6, 8)
        edges = [e for e in itertools.combinations(range(1, nv + 1), 2) if r.random() < 0.35]
        g = nx.Graph(edges)
        g.add_nodes_from(range(1, nv + 1))
        expected = nx.is_connected(g) and any(
            nx.is_isomorphic(g.subgraph(sub), target) for sub in itertools.combinations(g.nodes, 6))
        adj = {v: set(g[v]) for v in g.nodes}
        assert comp.is_e6_compatible(adj) == expected


def test_degree_multiset_is_not_enough():
    # arms 1, 1, 3 share E6's degree multiset but are not E6
    d6ish = [(1, 2), (2, 3), (2, 4), (4, 5), (5, 6)]
    assert sorted(d for _, d in nx.Graph(d6ish).degree) == [1, 1, 1, 2, 2, 3]
    assert not comp.is_e6_compatible(d6ish)


# -- properties ---------------------------------------------------------------

seeds = st.integers(0, 10 ** 9)


def random_form(seed, max_n=9):
    r = random.Random(seed)
    n = r.randint(1, max_n)
    edges = [e for e in itertools.combinations(range(1, n + 1), 2) if r.random() < 0.4]
    cluster = sorted(r.sample(range(1, n + 1), r.randint(1, n)))
    return form(n, edges, cluster), r


@given(seeds)
def test_transvections_preserve_form(seed):
    eta, r = random_form(seed)
    for _ in range(10):
        xi, zeta = r.getrandbits(eta.n), r.getrandbits(eta.n)
        i = r.choice(eta.cluster)
        assert eta.pair(comp.transvection(eta, i, xi), comp.transvection(eta, i, zeta)) == eta.pair(xi, zeta)
        assert comp.transvection(eta, i, comp.transvection(eta, i, xi)) == xi


@given(seeds)
def test_strategies_agree(seed):
    eta, r = random_form(seed)
    counts = {comp.count_orbits(eta, strategy=s, threads=t).count
              for s in ("unionfind", "scipy") for t in (1, 2)}
    assert counts == {bfs_orbits(eta)}
    # generator order is irrelevant
    perm = list(eta.cluster)
    r.shuffle(perm)
    assert bfs_orbits(comp.SignForm(eta.n, eta.rows, tuple(perm))) == counts.pop()


@given(seeds)
def test_count_independent_of_vertex(seed):
    r = random.Random(seed)
    m = r.randint(1, 5)
    E = random_exchange_matrix(r, m, r.randint(m, 8), max_d=3)
    X = extend_matrix(E)
    base = comp.count_orbits(comp.SignForm.from_extended(X.Zp, X.Dhat, X.m)).count
    i = r.randint(1, m)
    Y = X.mutate(i)
    assert comp.count_orbits(comp.SignForm.from_extended(Y.Zp, Y.Dhat, Y.m)).count == base


def test_orbit_count_dispatch():
    p = GrassmannParams(4, 8)
    eta = comp.SignForm.from_exchange(build_seed(p).exchange)
    assert comp.orbit_count(eta, cluster_graph(p)).method == "formula"
    small = form(3, [(1, 2)])
    assert comp.orbit_count(small, [(1, 2)]).method == "enumerate"
    with pytest.raises(ValueError):
        comp.orbit_count(small, None, method="magic")
