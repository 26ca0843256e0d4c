from __future__ import annotations

import random

import pytest

from octahedron.graph import build_subgraph
from octahedron.lattice import builtin_height, running_example_height
from octahedron.laurent import substitute
from octahedron.matching import count_matchings, matching_polynomial
from octahedron.transforms import (
    FaceNotRenewable,
    InvalidSplitSite,
    NotALocalMinimum,
    drive_to_base,
    elevation_binomial,
    elevate_face,
    graph_polynomial,
    induction_step_holds,
    is_local_minimum,
    merge_all,
    merge_vertex,
    renewal_coherent,
    rotation,
    select_local_minimum,
    split_vertex,
    urban_renewal,
)
from octahedron.transforms import canonical_form
from octahedron.recurrence import EvalContext, eval_f


def test_split_then_merge_is_identity():
    G = build_subgraph(running_example_height(), (3, 1, 0))
    before = canonical_form(G)
    for v in range(len(G)):
        d = len(rotation(G, v))
        if d < 2:
            continue
        G2 = split_vertex(G, v)
        assert matching_polynomial(G2) == matching_polynomial(G)
        w = G2.vertex_index[("split", 0, "w")]
        assert canonical_form(merge_vertex(G2, w)) == before


def test_split_random_sites():
    rng = random.Random(3)
    G = build_subgraph(builtin_height("fortress"), (3, 1, 0))
    m = matching_polynomial(G)
    for _ in range(10):
        v = rng.randrange(len(G))
        d = len(rotation(G, v))
        if d < 2:
            continue
        G2 = split_vertex(G, v, rng.randrange(d), rng.randint(1, d - 1))
        assert matching_polynomial(G2) == m


def test_invalid_split():
    G = build_subgraph(running_example_height(), (3, 1, 0))
    v = next(v for v in range(len(G)) if len(rotation(G, v)) >= 2)
    with pytest.raises(InvalidSplitSite):
        split_vertex(G, v, size=len(rotation(G, v)))


@pytest.mark.parametrize("family", ["aztec", "fortress", "douglass", "blum"])
def test_renewal_invariance(family):
    h = builtin_height(family)
    G = build_subgraph(h, (4, 0, 0))
    m = matching_polynomial(G)
    faces = [f.key for f in G.closed_faces if len(f.edges) == 4]
    assert faces
    for face in faces:
        G2, sub = urban_renewal(G, face)
        assert sub.apply(matching_polynomial(G2)) == m


def test_renewal_rejects_open_face():
    G = build_subgraph(running_example_height(), (3, 1, 0))
    with pytest.raises(FaceNotRenewable):
        urban_renewal(G, G.open_faces[0].key)
    with pytest.raises(FaceNotRenewable):
        urban_renewal(G, (40, 40))


def test_renewal_coherence():
    h = builtin_height("aztec")
    apex = (4, 0, 0)
    for f in build_subgraph(h, apex).closed_faces:
        if is_local_minimum(h, f.key) and h(*f.key) + 2 < 4 - abs(f.key[0]) - abs(f.key[1]):
            assert renewal_coherent(h, apex, f.key)


def test_merge_all_removes_degree_two_paths():
    G = build_subgraph(builtin_height("fortress"), (3, 1, 0))
    face = next(f.key for f in G.closed_faces if len(f.edges) == 4)
    G2, _ = urban_renewal(G, face)
    G3 = merge_all(G2)
    assert len(G3) <= len(G2)
    assert matching_polynomial(G3) == matching_polynomial(G2)


def test_elevation():
    h = builtin_height("aztec")
    with pytest.raises(NotALocalMinimum):
        elevate_face(h, (0, 0))
    f = select_local_minimum(h, (3, 0, 1))
    assert is_local_minimum(h, f)
    assert induction_step_holds(h, (3, 0, 1), f)
    base, steps = drive_to_base(h, (3, 0, 1))
    assert base(0, 1) == 3
    assert select_local_minimum(base, (3, 0, 1)) is None


def test_graph_polynomial_matches_eval():
    h = builtin_height("douglass")
    assert graph_polynomial(h, (3, 1, 0)) == eval_f(EvalContext(h), (3, 1, 0))


def test_split_aztec_cross_vertex():
    G = build_subgraph(builtin_height("aztec"), (3, 0, 1))
    m = matching_polynomial(G)
    crosses = [v for v in range(len(G)) if len(rotation(G, v)) == 4]
    assert crosses
    for v in crosses:
        for axis in range(4):
            assert matching_polynomial(split_vertex(G, v, axis, 2)) == m


def test_blum_splits_preserve_counts():
    G = build_subgraph(builtin_height("blum"), (3, 1, 0))
    for v in range(len(G)):
        if len(rotation(G, v)) >= 2:
            assert count_matchings(split_vertex(G, v)) == 27


def test_elevation_binomial_at_ones():
    h = running_example_height()
    b = elevation_binomial(h, (0, 0))
    assert len(b) == 2
    assert substitute(b, {v: 1 for v in b.variables()}) == 2


def test_running_example_elevation():
    # elevating (0,0) lifts it onto the apex cone, so G(h') loses the face
    h = running_example_height()
    apex = (3, 1, 0)
    assert is_local_minimum(h, (0, 0))
    h2 = elevate_face(h, (0, 0))
    assert h2(0, 0) == 2
    assert induction_step_holds(h, apex, (0, 0))
    G, H = build_subgraph(h, apex), build_subgraph(h2, apex)
    G2, sub = urban_renewal(G, (0, 0))
    assert sub.apply(matching_polynomial(G2)) == matching_polynomial(G)
    # one term of m(G(h')) carries x(0,0), which the binomial splits in two
    assert count_matchings(G) == 4 and count_matchings(H) == 3
    base, steps = drive_to_base(h, apex)
    assert base(1, 0) == 3 and select_local_minimum(base, apex) is None
