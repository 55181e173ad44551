from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylfan.linalg import (
    LatticeMap,
    LatticeVector,
    RankMismatch,
    adjugate,
    apply,
    compose,
    det_exact,
    inverse_unimodular,
    is_unimodular,
    multiplicative_order,
    primitive,
)
from weylfan.rootsystem import RootSystem


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        inversions = sum(p[i] > p[j] for i in range(n) for j in range(i + 1, n))
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


def square(max_n=6, lo=-9, hi=9):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )


def test_det_examples():
    assert det_exact(LatticeMap.identity(3)) == 1
    assert det_exact(LatticeMap([[2, 0], [0, 3]])) == 6
    assert det_exact(LatticeMap([[-1]])) == -1


def test_det_needs_pivoting():
    assert det_exact(LatticeMap([[0, 1], [1, 0]])) == -1
    assert det_exact(LatticeMap([[0, 0], [1, 0]])) == 0


def test_det_big_integers():
    big = 10**40
    m = LatticeMap([[big, 1], [1, big]])
    assert det_exact(m) == big * big - 1


@given(square())
def test_det_matches_leibniz(rows):
    assert det_exact(LatticeMap(rows)) == leibniz_det(rows)


@settings(max_examples=60)
@given(st.integers(1, 8).flatmap(
    lambda n: st.tuples(*[st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                                   min_size=n, max_size=n)] * 2)))
def test_det_multiplicative(pair):
    a, b = (LatticeMap(x) for x in pair)
    assert det_exact(compose(a, b)) == det_exact(a) * det_exact(b)


@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.lists(st.integers(-7, 7), min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(-7, 7), min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(st.integers(-7, 7), min_size=n, max_size=n),
    )))
def test_apply_respects_composition(data):
    a, b, v = LatticeMap(data[0]), LatticeMap(data[1]), LatticeVector(data[2])
    assert apply(compose(a, b), v) == apply(a, apply(b, v))


def test_compose_examples():
    rs = RootSystem.build("A2")
    s1, s2 = rs.simple_reflection(1), rs.simple_reflection(2)
    m = LatticeMap([[3, 1], [4, 1]])
    assert compose(LatticeMap.identity(2), m) == m
    for t in ("A2", "B3", "G2", "F4"):
        r = RootSystem.build(t)
        for s in r.reflections:
            assert compose(s, s) == LatticeMap.identity(r.rank)
    # oracle: iterate the product until the identity shows up
    p, k = compose(s1, s2), 1
    power = p
    while power != LatticeMap.identity(2):
        power = compose(p, power)
        k += 1
    assert k == 3
    assert multiplicative_order(p) == 3


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        compose(LatticeMap.identity(2), LatticeMap.identity(3))
    with pytest.raises(RankMismatch):
        apply(LatticeMap.identity(2), LatticeVector([1, 2, 3]))


def test_apply_examples():
    v = LatticeVector([4, -5])
    assert apply(LatticeMap.identity(2), v) == v
    assert apply(-LatticeMap.identity(2), LatticeVector([1, 2])) == LatticeVector([-1, -2])
    s1 = RootSystem.build("A2").simple_reflection(1)
    assert apply(s1, LatticeVector([1, 0])) == LatticeVector([-1, 1])


def test_unimodular():
    assert is_unimodular(LatticeMap.identity(4))
    assert not is_unimodular(LatticeMap([[2, 0], [0, 1]]))
    for t in ("A3", "B4", "C3", "D4", "G2", "F4", "E6"):
        for s in RootSystem.build(t).reflections:
            assert det_exact(s) == -1


def test_primitive_examples():
    assert primitive(LatticeVector([2, 4])) == LatticeVector([1, 2])
    assert primitive(LatticeVector([1, 0])) == LatticeVector([1, 0])
    assert primitive(LatticeVector([-3, -6])) == LatticeVector([-1, -2])
    with pytest.raises(ValueError):
        primitive(LatticeVector([0, 0]))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8).filter(any), st.integers(1, 40))
def test_primitive_scale_invariant(coords, k):
    v = LatticeVector(coords)
    assert primitive(v.scale(k)) == primitive(v)


@given(square(max_n=5, lo=-4, hi=4))
def test_adjugate_identity(rows):
    m = LatticeMap(rows)
    d = det_exact(m)
    prod = compose(m, adjugate(m))
    assert prod == LatticeMap([[d * int(i == j) for j in range(m.rank)] for i in range(m.rank)])


def test_inverse_unimodular():
    m = LatticeMap([[2, 1], [1, 1]])
    assert compose(m, inverse_unimodular(m)) == LatticeMap.identity(2)
    with pytest.raises(ValueError):
        inverse_unimodular(LatticeMap([[2, 0], [0, 1]]))


def test_vector_rank_is_fixed():
    v = LatticeVector([1, 2, 3])
    assert v.rank == 3 and len(-v) == 3
    with pytest.raises(RankMismatch):
        v + LatticeVector([1, 2])
