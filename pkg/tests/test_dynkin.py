import numpy as np
import pytest

from weylfan.dynkin import (
    DiagramAutomorphism,
    as_lattice_map,
    diagram_automorphisms,
    diagram_automorphisms_bruteforce,
)
from weylfan.linalg import LatticeMap, apply, compose, is_unimodular
from weylfan.rootsystem import LieType, RootSystem, cartan_matrix, catalog


def expected_d_order(t: LieType) -> int:
    if t.family == "A" and t.rank >= 2:
        return 2
    if t.family == "D":
        return 6 if t.rank == 4 else 2
    if t == LieType("E", 6):
        return 2
    return 1


@pytest.mark.parametrize("t", catalog(8), ids=str)
def test_pruned_search_matches_bruteforce(t):
    c = cartan_matrix(t)
    assert diagram_automorphisms(c) == diagram_automorphisms_bruteforce(c)


@pytest.mark.parametrize("t", catalog(8), ids=str)
def test_order_pattern(t):
    assert len(diagram_automorphisms(cartan_matrix(t))) == expected_d_order(t)


def test_examples():
    assert diagram_automorphisms(cartan_matrix(LieType("B", 3))) == [DiagramAutomorphism((0, 1, 2))]
    assert diagram_automorphisms(cartan_matrix(LieType("A", 2))) == [
        DiagramAutomorphism((0, 1)),
        DiagramAutomorphism((1, 0)),
    ]
    d4 = diagram_automorphisms(cartan_matrix(LieType("D", 4)))
    assert len(d4) == 6
    assert all(d.perm[1] == 1 for d in d4)  # the central node is fixed


@pytest.mark.parametrize("name", ["B2", "G2", "F4", "C3"])
def test_arrow_reversal_excluded(name):
    # the undirected diagrams of these types have a flip; the Cartan matrix does not
    assert len(diagram_automorphisms(cartan_matrix(LieType.parse(name)))) == 1


@pytest.mark.parametrize("name", ["A5", "D4", "D5", "E6"])
def test_group_closure(name):
    ds = diagram_automorphisms(cartan_matrix(LieType.parse(name)))
    s = set(ds)
    for a in ds:
        assert a.inverse() in s
        for b in ds:
            assert a.compose(b) in s


@pytest.mark.parametrize("name", ["A2", "A4", "D4", "D6", "E6"])
def test_lattice_maps(name):
    rs = RootSystem.build(name)
    cor = {v.coords for v in rs.coroots}
    for d in diagram_automorphisms(rs.cartan):
        m = as_lattice_map(d)
        assert is_unimodular(m)
        assert {apply(m, v).coords for v in rs.coroots} == cor
        for i, v in enumerate(rs.simple_coroots):
            assert apply(m, v) == rs.simple_coroots[d.perm[i]]


def test_lattice_map_examples():
    assert as_lattice_map(DiagramAutomorphism((0, 1, 2))) == LatticeMap.identity(3)
    rs = RootSystem.build("A2")
    swap = as_lattice_map(DiagramAutomorphism((1, 0)))
    assert swap == LatticeMap([[0, 1], [1, 0]])
    assert apply(swap, rs.simple_coroots[0]).coords == (-1, 2)
    tri = [d for d in diagram_automorphisms(cartan_matrix(LieType("D", 4))) if len(d.cycles()) == 1 and len(d.cycles()[0]) == 3][0]
    m = as_lattice_map(tri)
    assert m != LatticeMap.identity(4)
    assert compose(m, compose(m, m)) == LatticeMap.identity(4)
