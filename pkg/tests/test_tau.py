from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from clusterpoisson import tau as tp
from clusterpoisson.exact import Matrix, RationalFunction
from clusterpoisson.exchange import (
    ExchangeMatrix,
    Seed,
    block_decompose,
    mutate_matrix,
    mutate_seed,
    random_exchange_matrix,
)
from clusterpoisson.grassmannian import GrassmannParams, omega_km

PENTAGON = ExchangeMatrix.from_rows([[0, 1], [-1, 0]])
T3 = ExchangeMatrix.from_rows([[0, 1, 1], [-1, 0, 1]])
M1 = ExchangeMatrix.from_rows([[0, 1]])


def test_extend_matrix_examples():
    assert tp.extend_matrix(M1).Zp == Matrix([[0, 1], [-1, 0]])
    assert tp.extend_matrix(PENTAGON).Zp == PENTAGON.Z
    assert tp.extend_matrix(ExchangeMatrix.from_rows([[0, 1]], D=[2])).Zp == Matrix([[0, 1], [-2, 0]])
    with pytest.raises(ValueError):
        tp.extend_matrix(M1, [[1]])


def test_find_kappa_examples():
    assert tp.find_kappa(M1) == (0, 1)
    assert tp.shifted(tp.extend_matrix(M1), (0, 1)).det() == 1
    assert tp.find_kappa(PENTAGON) == (0, 0)
    with pytest.raises(tp.RankDeficient):
        tp.find_kappa(ExchangeMatrix.from_rows([[0, 0]]))


def test_tau_examples():
    s = Seed.initial(M1)
    f1, f2 = (v.num for v in s.vars)
    Zp = tp.extend_matrix(M1)
    t1, t2 = tp.tau_from_f(s, Zp, (0, 1))
    assert t1 == f2 and t2 == RationalFunction(f2, f1)
    s = Seed.initial(PENTAGON)
    f1, f2 = (v.num for v in s.vars)
    t1, t2 = tp.tau_from_f(s, tp.extend_matrix(PENTAGON), (0, 0))
    assert t1 == f2 and t2 == f1 ** -1
    # a zero row with zero shift gives tau = 1
    E = ExchangeMatrix.from_rows([[0, 0], [0, 0]])
    taus = tp.tau_from_f(Seed.initial(E), tp.extend_matrix(E), (0, 0))
    assert all(t == 1 for t in taus)


def test_mutate_tau_cases():
    s = Seed.initial(T3)
    Zp = tp.extend_matrix(T3)
    kappa = tp.find_kappa(T3, Zp)
    tau = tp.tau_from_f(s, Zp, kappa)
    new, Zp2 = tp.mutate_tau(tau, Zp, 1)
    assert new[0] == 1 / tau[0]
    for j in range(3):
        z = Zp.Zp[j, 0]
        if j == 0:
            continue
        if z == -1:
            assert new[j] == tau[j] * (tau[0] + 1)
        elif z == 0:
            assert new[j] == tau[j]
    assert Zp2.exchange().Z == mutate_matrix(T3, 1).Z


def test_dimension_examples():
    assert tp.compatible_brackets(PENTAGON).dimension == 1
    assert tp.compatible_brackets(T3).dimension == 1
    E = ExchangeMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1]])
    sp = tp.compatible_brackets(E)
    assert (sp.r, sp.dimension) == (2, 3)
    with pytest.raises(tp.RankDeficient):
        tp.compatible_brackets(ExchangeMatrix.from_rows([[0, 0, 1], [0, 0, 1]]))


def test_verify_compatibility_examples():
    ok, delta = tp.verify_compatibility(PENTAGON, Matrix([[0, 1], [-1, 0]]))
    assert ok and delta == (-1, -1)
    ok, delta = tp.verify_compatibility(PENTAGON, Matrix.zeros(2, 2))
    assert ok and delta == (0, 0)
    ok, _ = tp.verify_compatibility(T3, Matrix([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]))
    assert not ok


def test_omega_transport_examples():
    Zp = tp.extend_matrix(PENTAGON)
    assert tp.omega_f_from_tau(Matrix.zeros(2, 2), Zp, (0, 0)).is_zero()
    Of = tp.omega_f_from_tau(PENTAGON.Z, Zp, (0, 0))
    assert Of == Matrix([[0, 1], [-1, 0]])
    assert tp.omega_tau_from_f(Of, Zp, (0, 0)) == PENTAGON.Z


def test_casimir_examples():
    Zp = tp.extend_matrix(PENTAGON)
    assert tp.casimir_basis(PENTAGON.Z, Zp, (0, 0)) == []
    Zp = tp.extend_matrix(T3)
    kappa = tp.find_kappa(T3, Zp)
    sp = tp.compatible_brackets(T3)
    cas = tp.casimir_basis(sp.generators[0].Omega, Zp, kappa)
    assert [c.alpha for c in cas] == [(0, 0, 1)]
    assert str(cas[0].monomial(("f1", "f2", "f3"))) == "f3"


def test_casimirs_of_g24_tau_matrix():
    # Omega_22 is the bracket matrix of the t-coordinates; used directly as Omega^tau
    p = GrassmannParams(2, 4)
    Om = omega_km(p)
    Zp = tp.ExtendedMatrix(Matrix.zeros(4, 4), (1, 1, 1, 1), 0)
    cas = tp.casimir_basis(Om, Zp, (1, 1, 1, 1))
    assert len(cas) == 2 == Om.rows - Om.rank()
    for c in cas:
        assert all(e == 0 for e in Om.T @ c.u)


def test_toric_examples():
    assert tp.toric_weight_basis(T3) == [(1, -1, 1)]
    assert tp.toric_weight_basis(PENTAGON) == []
    w = tp.propagate_weight(T3, (1, -1, 1), 1)
    assert w == (-1, -1, 1)
    assert all(e == 0 for e in mutate_matrix(T3, 1).Z @ w)
    assert tp.propagate_weight(T3, (0, 0, 0), 2) == (0, 0, 0)
    with pytest.raises(tp.NotInNullspace):
        tp.propagate_weight(T3, (1, 0, 0), 1)


# -- properties ---------------------------------------------------------------

seeds = st.integers(0, 10 ** 9)


def full_rank(seed, max_m=4, max_n=6, max_d=3):
    r = random.Random(seed)
    m = r.randint(1, max_m)
    n = r.randint(m + (m % 2), max(max_n, m + 1))
    return random_exchange_matrix(r, m, n, max_d=max_d, full_rank=True), r


@given(seeds)
def test_generators_are_compatible(seed):
    E, r = full_rank(seed)
    sp = tp.compatible_brackets(E)
    assert sp.dimension == len(block_decompose(E)) + comb(E.n - E.m, 2) == len(sp.generators)
    Zp = tp.extend_matrix(E)
    kappa = tp.find_kappa(E, Zp)
    for g in sp.generators:
        ok, _ = tp.verify_compatibility(E, tp.omega_f_from_tau(g.Omega, Zp, kappa))
        assert ok


@given(seeds)
def test_tau_mutation_commutes(seed):
    E, r = full_rank(seed, max_m=3, max_n=4, max_d=2)
    s = Seed.initial(E)
    Zp = tp.extend_matrix(E)
    kappa = tp.find_kappa(E, Zp)
    tau = tp.tau_from_f(s, Zp, kappa)
    i = r.randint(1, E.m)
    new, Zp2 = tp.mutate_tau(tau, Zp, i)
    expected = tp.tau_from_f(mutate_seed(s, i), Zp2, kappa)
    assert all(a == b for a, b in zip(new, expected))


@given(seeds)
def test_casimir_certificates(seed):
    E, r = full_rank(seed)
    sp = tp.compatible_brackets(E)
    coeffs = [r.choice([-3, -2, -1, 1, 2, 3]) for _ in range(sp.r)] + \
             [r.randint(-2, 2) for _ in range(sp.dimension - sp.r)]
    Om = tp.combine(sp.generators, coeffs)
    Zp = tp.extend_matrix(E)
    kappa = tp.find_kappa(E, Zp)
    cas = tp.casimir_basis(Om.Omega, Zp, kappa)
    assert len(cas) == Om.corank()
    A = tp.shifted(Zp, kappa)
    for c in cas:
        assert all(e == 0 for e in Om.Omega.T @ c.u)
        assert not any(c.alpha[: E.m])
        assert tuple(A.T @ c.u) == c.alpha


@given(seeds)
def test_toric_propagation(seed):
    E, r = full_rank(seed, max_n=7)
    for w in tp.toric_weight_basis(E):
        for i in range(1, E.m + 1):
            wb = tp.propagate_weight(E, w, i)
            assert all(e == 0 for e in mutate_matrix(E, i).Z @ wb)
