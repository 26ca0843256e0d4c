from __future__ import annotations

import json

import pytest

from octahedron.lattice import (
    ApexNotAboveSurface,
    GaleRobinson,
    HeightError,
    HeightFunction,
    LatticePoint,
    ParityError,
    PeriodicTable,
    builtin_height,
    closed_faces,
    cone_membership,
    cone_upper_points,
    gale_robinson_height,
    p_value,
    running_example_height,
    truncate_height,
    validate_height,
)

FAMILIES = ["aztec", "fortress", "douglass", "blum"]


def test_parity_check():
    LatticePoint(3, 1, 0).check()
    with pytest.raises(ParityError):
        LatticePoint(3, 1, 1).check()


def test_cone_membership():
    apex = (3, 1, 0)
    assert cone_membership(apex, (3, 1, 0)) == "boundary"
    assert cone_membership(apex, (1, 1, 0)) == "inner"
    assert cone_membership(apex, (2, 0, 0)) == "boundary"
    assert cone_membership(apex, (4, 0, 0)) == "outside"
    assert p_value(LatticePoint(3, 1, 0), (0, 0)) == 2


@pytest.mark.parametrize("name", FAMILIES)
def test_families_valid(name):
    h = builtin_height(name)
    assert validate_height(h, (-6, 6, -6, 6)).valid


def test_gale_robinson_valid():
    for k, a, b in [(4, 1, 2), (5, 1, 2), (6, 1, 3), (6, 2, 3)]:
        h = gale_robinson_height(k, a, b)
        assert validate_height(h, (-5, 5, -5, 5)).valid, (k, a, b)


def test_running_example_cone():
    h = running_example_height()
    apex = LatticePoint(3, 1, 0)
    assert closed_faces(h, apex) == [(0, 0), (1, -1), (1, 0)]
    assert cone_upper_points(h, apex) == [(2, 0, 0), (2, 1, -1), (3, 1, 0)]


def test_bad_override_rejected():
    data = {"base": "aztec", "overrides": [[0, 0, 2]]}
    with pytest.raises(HeightError):
        HeightFunction.from_json(data)
    with pytest.raises(HeightError):
        HeightFunction.from_json({"base": "aztec", "overrides": [[0, 0]]})
    with pytest.raises(HeightError):
        HeightFunction.from_json({"base": "nonsense"})


def test_validation_reports_steps():
    h = builtin_height("aztec").with_overrides({(0, 0): 4})
    rep = validate_height(h, (-2, 2, -2, 2))
    assert not rep.valid
    assert rep.steps and rep.messages()


def test_drifting_periodic_base_is_improper():
    base = PeriodicTable((1, 2), ((0, 1),), drift=(1, 0))
    rep = validate_height(HeightFunction(base), (0, 1, 0, 1))
    assert not rep.parity and not rep.steps
    assert not rep.proper


def test_json_round_trip():
    for h in [builtin_height("fortress"), running_example_height(), gale_robinson_height(4, 1, 2),
              builtin_height("aztec").with_overrides({(0, 0): -2})]:
        data = json.loads(json.dumps(h.to_json()))
        h2 = HeightFunction.from_json(data)
        assert all(h(i, j) == h2(i, j) for i in range(-4, 5) for j in range(-4, 5))


def test_truncation():
    h = builtin_height("aztec")
    ht = truncate_height(h, (3, 0, 1))
    assert ht(5, 0) == -3
    assert ht(0, 1) == h(0, 1)
    with pytest.raises(ApexNotAboveSurface):
        truncate_height(h, (0, 0, 0))


def test_gale_robinson_base_matches_definition():
    g = GaleRobinson(4, 1, 2)
    for i in range(-3, 4):
        for j in range(-3, 4):
            n = g.value(i, j)
            assert (n - i - j) % 2 == 0
            assert g.linear(n, i, j) <= 0 < g.linear(n + 2, i, j)


def test_p_value_examples():
    apex = LatticePoint(3, 1, 0)
    assert p_value(apex, (1, 0)) == 3
    assert p_value(apex, (0, -1)) == 1
    assert p_value(apex, (4, 0)) == 0
    assert cone_membership(apex, (3, 3, 0)) == "outside"


def test_constant_height_invalid():
    base = PeriodicTable((1, 1), ((0,),))
    rep = validate_height(HeightFunction(base), (0, 3, 0, 3))
    assert rep.parity and rep.steps


def test_running_example_valid():
    assert validate_height(running_example_height(), (-5, 5, -5, 5)).valid


def test_family_values():
    assert builtin_height("aztec")(0, 1) == -1
    assert builtin_height("fortress")(0, 1) == 1
    assert builtin_height("blum")(1, 2) == -1


def test_gale_robinson_values():
    h = gale_robinson_height(4, 1, 2)
    assert h(0, 0) == 0
    assert h(1, 0) == -1
    # (2,1,1) collapses to the Aztec parity pattern up to a shift
    g, az = gale_robinson_height(2, 1, 1), builtin_height("aztec")
    shifts = {g(i, j) - az(i, j) for i in range(-5, 5) for j in range(-5, 5)}
    assert len(shifts) == 1


def test_small_cones():
    h = builtin_height("aztec")
    assert cone_upper_points(h, (0, 0, 0)) == []
    assert cone_upper_points(h, (1, 0, 1)) == [(1, 0, 1)]
