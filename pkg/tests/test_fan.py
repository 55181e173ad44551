import numpy as np
import pytest

from weylfan.fan import (
    BoundaryPoint,
    OutOfFanScope,
    build_fan,
    cone_containing,
    facet_pairing_complete,
    fan_scope_check,
    is_smooth,
    locate_random_points,
    primitive_rows,
    ray_orbit,
    weyl_permutes_cones,
)
from weylfan.rootsystem import LieType, RootSystem
from weylfan.weyl import WeylGroup

FAN_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "D5", "G2", "F4"]


def test_a1_is_p1():
    _, _, f = _p("A1")
    assert f.rays.tolist() == [[-1], [1]]
    assert len(f.max_cones) == 2
    assert facet_pairing_complete(f)


def _p(name):
    from conftest import pipeline

    return pipeline(name)


@pytest.mark.parametrize("name,rays,cones", [("A2", 6, 6), ("G2", 12, 12), ("B3", 26, 48), ("D4", 48, 192)])
def test_sizes(name, rays, cones):
    _, _, f = _p(name)
    assert (len(f.rays), len(f.max_cones)) == (rays, cones)


@pytest.mark.parametrize("name", FAN_TYPES)
def test_invariants(name):
    rs, w, f = _p(name)
    assert len(f.max_cones) == len(w.elements)
    assert facet_pairing_complete(f)
    assert is_smooth(f)
    assert primitive_rows(f.rays)
    assert f.max_cones.shape[1] == rs.rank
    assert len({tuple(c) for c in f.max_cones.tolist()}) == len(f.max_cones)
    assert f.max_cones[f.fundamental].tolist() == sorted(f.ray_id(e) for e in np.eye(rs.rank, dtype=int))


@pytest.mark.parametrize("name", FAN_TYPES)
def test_ray_count_from_independent_orbits(name):
    rs, _, f = _p(name)
    union = set()
    for j in range(rs.rank):
        union |= ray_orbit(rs, np.eye(rs.rank, dtype=int)[j])
    assert union == {tuple(r) for r in f.rays.tolist()}


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "G2", "D4", "F4", "B4"])
def test_every_weyl_element_permutes_cones(name):
    _, w, f = _p(name)
    assert weyl_permutes_cones(f, w.elements.array).all()


def test_non_automorphism_does_not_permute():
    _, _, f = _p("B3")
    assert not f.permutes_cones(np.diag([2, 1, 1]))
    assert not weyl_permutes_cones(f, np.array([[[0, 1, 0], [1, 0, 0], [0, 0, 1]]]))[0]


def test_facet_pairing_fails_with_missing_chamber():
    _, _, f = _p("A2")
    assert facet_pairing_complete(f)
    assert not facet_pairing_complete(f.max_cones[1:])
    assert facet_pairing_complete(f.max_cones)


def test_fundamental_chamber_alone_is_smooth():
    from weylfan import _kernels

    assert _kernels.batch_det(np.eye(3, dtype=np.int64)[None]).tolist() == [1]


def test_cone_containing_examples():
    rs, w, f = _p("A2")
    assert cone_containing(f, (1, 1)) == f.fundamental
    # w0 is the element sending (1, 1) to -(1, 1)
    w0 = [m for m in w.elements if (m @ _vec((1, 1))).coords == (-1, -1)][0]
    cone = cone_containing(f, (-1, -1))
    assert f.chamber_of[cone] == w.elements.index(w0)
    with pytest.raises(BoundaryPoint):
        cone_containing(f, (1, 0))


def _vec(c):
    from weylfan.linalg import LatticeVector

    return LatticeVector(c)


@pytest.mark.parametrize("name", FAN_TYPES)
def test_random_points(name):
    _, _, f = _p(name)
    assert locate_random_points(f, 100, seed=7)


def test_chamber_of_matches_rays():
    _, w, f = _p("F4")
    mats = w.elements.array[f.chamber_of]
    assert (f.cone_of_map(mats) == np.arange(len(f.max_cones))).all()


def test_scope():
    e8 = WeylGroup.build(RootSystem.build("E8"), enumerate=False)
    with pytest.raises(OutOfFanScope, match="696,729,600"):
        fan_scope_check(e8, allow_e7=True)
    e7 = WeylGroup.build(RootSystem.build("E7"), enumerate=False)
    with pytest.raises(OutOfFanScope, match="2,903,040"):
        fan_scope_check(e7)
    fan_scope_check(e7, allow_e7=True)
    with pytest.raises(OutOfFanScope):
        fan_scope_check(WeylGroup.build(RootSystem.build("A8"), enumerate=False))
    rs = RootSystem.build("B3")
    with pytest.raises(OutOfFanScope):
        build_fan(rs, WeylGroup.build(rs, enumerate=False))


def test_json_shape():
    _, _, f = _p("G2")
    doc = f.to_json()
    assert doc["type"] == "G2" and doc["rank"] == 2
    assert len(doc["rays"]) == 12 and len(doc["max_cones"]) == 12
    assert doc["max_cones"][doc["fundamental"]] == sorted(doc["max_cones"][doc["fundamental"]])
