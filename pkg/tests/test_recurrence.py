from __future__ import annotations

import pytest

from octahedron.lattice import builtin_height, gale_robinson_height, running_example_height
from octahedron.laurent import parse
from octahedron.recurrence import (
    EvalContext,
    PointBelowSurface,
    count_terms,
    count_value,
    eval_f,
    gale_robinson_edge_constants,
    gale_robinson_index,
    gale_robinson_point,
    gale_robinson_sequence,
)

RUNNING = (
    "a[3,0] * c[-1,0] * a[2,-1] * c[0,-1] * x[1,-2] * x[1,-1]^-1 * x[1,1]"
    " + a[3,0] * c[-1,0] * b[1,0] * d[1,-2] * x[1,0]^-1 * x[0,-1] * x[2,-1] * x[1,-1]^-1 * x[1,1]"
    " + b[1,2] * d[1,-2] * a[1,0] * c[-1,0] * x[0,-1] * x[0,1] * x[0,0]^-1 * x[2,0] * x[1,0]^-1"
    " + b[1,2] * d[1,-2] * b[0,1] * d[0,-1] * x[-1,0] * x[0,0]^-1 * x[2,0]"
)


def test_running_example_formula():
    f = eval_f(EvalContext(running_example_height()), (3, 1, 0))
    assert f == parse(RUNNING)


def test_surface_point_is_face_variable():
    assert eval_f(EvalContext(builtin_height("aztec")), (0, 0, 0)) == parse("x[0,0]")


def test_below_surface():
    with pytest.raises(PointBelowSurface):
        eval_f(EvalContext(builtin_height("aztec")), (-2, 0, 0))


def test_aztec_counts():
    h = builtin_height("aztec")
    assert [count_value(h, (n, 0, n % 2)) for n in range(1, 6)] == [2, 8, 64, 1024, 32768]


def test_count_terms_matches_value():
    h = builtin_height("fortress")
    ctx = EvalContext(h)
    assert count_terms(ctx, (4, 0, 0), check=True) == count_value(h, (4, 0, 0)) == 625


@pytest.mark.parametrize("k,a,b,expected", [
    (4, 1, 2, [1, 1, 1, 1, 2, 3, 7, 23, 59, 314]),
    (5, 1, 2, [1, 1, 1, 1, 1, 2, 3, 5, 11, 37]),
])
def test_somos_sequences(k, a, b, expected):
    assert gale_robinson_sequence(k, a, b, N=10) == expected


def test_weighted_sequence_stays_integral():
    seq = gale_robinson_sequence(6, 1, 2, r=2, s=3, N=14)
    assert seq[6:9] == [5, 13, 41]


def test_bad_parameters():
    with pytest.raises(ValueError):
        gale_robinson_sequence(4, 0, 2)
    with pytest.raises(ValueError):
        gale_robinson_sequence(4, 1, 4)


@pytest.mark.parametrize("k,a,b", [(4, 1, 2), (5, 1, 2)])
def test_gale_robinson_line(k, a, b):
    h = gale_robinson_height(k, a, b)
    seq = gale_robinson_sequence(k, a, b, N=9)
    for idx in range(k, 8):
        pt = gale_robinson_point(k, a, b, idx)
        assert gale_robinson_index(k, a, b, pt) == idx
        assert count_value(h, pt) == seq[idx]


def test_edge_constants():
    h = builtin_height("aztec")
    ctx = EvalContext(h, edge_constants=(2, 1, 1, 1), faces_to_one=True)
    # one a/c pair per term: weights are r^k summed over matchings
    assert eval_f(ctx, (2, 0, 0)).constant_value() > count_value(h, (2, 0, 0))


@pytest.mark.parametrize("k,a,b", [(4, 1, 2), (5, 1, 2)])
@pytest.mark.parametrize("r,s", [(2, 3), (3, 2)])
def test_weighted_gale_robinson_line(k, a, b, r, s):
    h = gale_robinson_height(k, a, b)
    seq = gale_robinson_sequence(k, a, b, r, s, N=9)
    ctx = EvalContext(h, gale_robinson_edge_constants(r, s), faces_to_one=True)
    for idx in range(k, 9):
        assert eval_f(ctx, gale_robinson_point(k, a, b, idx)).constant_value() == seq[idx]


def test_all_ones_of_running_formula():
    from octahedron.laurent import all_ones, coefficient_profile

    f = parse(RUNNING)
    assert all_ones(f) == 4
    prof = coefficient_profile(f)
    assert prof.all_ones and prof.count == 4
    assert prof.face_range[0] >= -1 and prof.face_range[1] <= 1
    assert prof.edge_range[0] >= 0 and prof.edge_range[1] <= 1


def test_one_step():
    f = eval_f(EvalContext(builtin_height("aztec")), (1, 0, 1))
    want = parse("a[0,1] * c[0,1] * x[0,2] * x[0,0] * x[0,1]^-1 + b[0,1] * d[0,1] * x[1,1] * x[-1,1] * x[0,1]^-1")
    assert f == want


def test_point_on_surface_counts_one():
    assert count_value(builtin_height("fortress"), (0, 0, 0)) == 1


def test_aztec_shaped_sequence():
    assert gale_robinson_sequence(2, 1, 1, N=5) == [1, 1, 2, 8, 64]
