from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from clusterpoisson.exact import LaurentPoly, Matrix, RationalFunction
from clusterpoisson.exchange import (
    DirectionError,
    EntriesOutOfRange,
    ExchangeMatrix,
    PreconditionViolation,
    QuiverGraph,
    Seed,
    block_decompose,
    exchange_monomials,
    graph_of,
    laurent_check,
    mutate_graph,
    mutate_matrix,
    mutate_seed,
    mutate_word,
    parse_word,
    random_exchange_matrix,
)

T3 = ExchangeMatrix.from_rows([[0, 1, 1], [-1, 0, 1]])
PENTAGON = ExchangeMatrix.from_rows([[0, 1], [-1, 0]])


def skew_ok(E):
    m = E.m
    return all(E.D[a] * E.Z[a, b] == -E.D[b] * E.Z[b, a] for a in range(m) for b in range(m))


def test_mutate_matrix_examples():
    assert mutate_matrix(T3, 1).Z == Matrix([[0, -1, -1], [1, 0, 1]])
    assert mutate_matrix(T3, 2).Z == Matrix([[0, -1, 2], [1, 0, -1]])
    with pytest.raises(DirectionError):
        mutate_matrix(T3, 3)
    with pytest.raises(DirectionError):
        mutate_matrix(T3, 0)


def test_bad_exchange_matrices():
    with pytest.raises(ValueError):
        ExchangeMatrix.from_rows([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        ExchangeMatrix.from_rows([[0, 1], [-1, 0]], D=[1, 0])
    # D-skew-symmetrizable but not skew-symmetric
    E = ExchangeMatrix.from_rows([[0, 1], [-2, 0]], D=[2, 1])
    assert mutate_matrix(mutate_matrix(E, 1), 1) == E


def test_single_mutation_m1():
    s = Seed.initial(ExchangeMatrix.from_rows([[0, 1]]))
    f1, f2 = (v.num for v in s.vars)
    t = mutate_seed(s, 1)
    assert t.vars[0] == RationalFunction(f2 + 1, f1)
    assert t.vars[1] == f2


def test_pentagon_period_five():
    s = Seed.initial(PENTAGON)
    f1, f2 = (v.num for v in s.vars)
    seq = [s]
    for i in (1, 2, 1, 2, 1):
        seq.append(mutate_seed(seq[-1], i))
    assert seq[1].vars[0] == RationalFunction(f2 + 1, f1)
    assert seq[2].vars[1] == RationalFunction(f1 + f2 + 1, f1 * f2)
    end = seq[-1]
    # after five steps the two variables come back swapped
    assert end.vars[0] == f2 and end.vars[1] == f1
    assert all(r.laurent for t in seq for r in laurent_check(t))


def test_empty_word_and_parse():
    s = Seed.initial(T3)
    assert mutate_word(s, parse_word("")) == s
    assert parse_word(" 1,2,1 ") == (1, 2, 1)
    with pytest.raises(DirectionError):
        mutate_word(s, parse_word("3"))


def test_laurent_check_initial():
    s = Seed.initial(T3)
    reps = laurent_check(s)
    assert [r.laurent for r in reps] == [True, True]
    assert [str(r.poly) for r in reps] == ["f1", "f2"]


def test_block_decompose_examples():
    assert block_decompose(PENTAGON) == [[1, 2]]
    assert block_decompose(ExchangeMatrix.from_rows([[0, 0, 1], [0, 0, 1]])) == [[1], [2]]
    Z = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    assert len(block_decompose(ExchangeMatrix.from_rows(Z))) == 2


def test_graph_of_examples():
    assert graph_of(PENTAGON).edges == {(1, 2)}
    assert graph_of(T3).edges == {(1, 2), (1, 3), (2, 3)}
    with pytest.raises(EntriesOutOfRange):
        graph_of(ExchangeMatrix.from_rows([[0, 2], [-2, 0]]))


def test_mutate_graph_examples():
    g = QuiverGraph(3, frozenset({(1, 2), (2, 3)}))
    assert mutate_graph(g, 2).edges == {(2, 1), (3, 2), (1, 3)}
    iso = QuiverGraph(3, frozenset({(1, 2)}))
    assert mutate_graph(iso, 3) == iso
    tri = QuiverGraph(3, frozenset({(1, 2), (2, 3), (1, 3)}))
    with pytest.raises(PreconditionViolation):
        mutate_graph(tri, 1)


# -- properties ---------------------------------------------------------------

seeds = st.integers(0, 10 ** 9)


def draw(seed, full_rank=False, max_d=3):
    r = random.Random(seed)
    m = r.randint(1, 6)
    n = r.randint(m + (full_rank and m % 2), 9)
    return random_exchange_matrix(r, m, n, max_d=max_d, full_rank=full_rank), r


@given(seeds)
def test_involutive_and_skew(seed):
    E, r = draw(seed)
    for i in range(1, E.m + 1):
        F = mutate_matrix(E, i)
        assert skew_ok(F)
        assert mutate_matrix(F, i) == E


@given(seeds)
def test_rank_preserved(seed):
    E, r = draw(seed, full_rank=True)
    i = r.randint(1, E.m)
    assert mutate_matrix(E, i).rank() == E.rank() == E.m


@given(seeds)
def test_three_term_relation(seed):
    r = random.Random(seed)
    m = r.randint(1, 3)
    E = random_exchange_matrix(r, m, r.randint(m, 5), max_d=2)
    s = Seed.initial(E)
    for _ in range(3):
        i = r.randint(1, m)
        t = mutate_seed(s, i)
        plus, minus = exchange_monomials(s.exchange, s.vars, i)
        assert s.vars[i - 1] * t.vars[i - 1] == plus + minus
        assert all(t.vars[j] == s.vars[j] for j in range(s.n) if j != i - 1)
        s = t


@given(seeds)
def test_graph_mutation_matches_matrix_mutation(seed):
    r = random.Random(seed)
    m = r.randint(2, 5)
    E = random_exchange_matrix(r, m, r.randint(m, 7), max_d=1)
    try:
        g = graph_of(E)
    except EntriesOutOfRange:
        return
    i = r.randint(1, m)
    try:
        h = mutate_graph(g, i)
    except PreconditionViolation:
        return
    try:
        expected = graph_of(mutate_matrix(E, i))
    except EntriesOutOfRange:
        return
    assert h == expected


@given(seeds)
def test_laurent_phenomenon_short(seed):
    r = random.Random(seed)
    m = r.randint(1, 3)
    E = random_exchange_matrix(r, m, r.randint(m, 4), max_d=2)
    word = [r.randint(1, m) for _ in range(r.randint(0, 5))]
    s = mutate_word(Seed.initial(E), word)
    assert all(rep.laurent for rep in laurent_check(s))


def test_laurent_phenomenon_skew_symmetrizable():
    # D up to 3 on the full criterion shape range, with words short enough
    # that the variables stay small
    r = random.Random(33)
    for _ in range(100):
        m = r.randint(1, 4)
        E = random_exchange_matrix(r, m, r.randint(m, 6), max_d=3)
        word = [r.randint(1, m) for _ in range(r.randint(0, 3))]
        assert all(rep.laurent for rep in laurent_check(mutate_word(Seed.initial(E), word)))
