from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction

import pytest

from octahedron.graph import build_subgraph
from octahedron.lattice import builtin_height, cone_upper_points, running_example_height
from octahedron.laurent import edge
from octahedron.matching import NotAMatching, count_matchings, is_matching
from octahedron.sampler import (
    NonIntegerX,
    bernoulli,
    draw,
    chi_square_uniformity,
    matching_probability,
    plan,
    sample_many,
    sample_matching,
)


@pytest.mark.parametrize("family,apex", [("aztec", (3, 0, 1)), ("fortress", (3, 1, 0)), ("blum", (4, 0, 0))])
def test_schedule(family, apex):
    h = builtin_height(family)
    state = plan(h, apex)
    assert state.steps == len(cone_upper_points(h, apex))
    # with x = 1 on the surface, x at the apex counts the matchings
    assert state.x[apex[1:]] == count_matchings(build_subgraph(h, apex))


def test_samples_are_matchings():
    h = builtin_height("douglass")
    G = build_subgraph(h, (4, 0, 0))
    for M in sample_many(h, (4, 0, 0), 50, seed=1):
        assert is_matching(G, M)


def test_seed_determinism():
    h = builtin_height("aztec")
    assert sample_matching(h, (4, 0, 0), seed=7) == sample_matching(h, (4, 0, 0), seed=7)
    assert sample_many(h, (4, 0, 0), 5, seed=2) == sample_many(h, (4, 0, 0), 5, seed=2)


def test_uniformity_small():
    res = chi_square_uniformity(running_example_height(), (4, 0, 0), draws=4000, seed=3)
    assert res.matchings == 16
    assert res.passed()


def test_probability():
    h = builtin_height("fortress")
    G = build_subgraph(h, (2, 0, 0))
    M = next(iter(sample_many(h, (2, 0, 0), 1, seed=0)))
    assert matching_probability(h, (2, 0, 0), M) == Fraction(1, 5)
    assert matching_probability(builtin_height("aztec"), (2, 0, 0)) == Fraction(1, 8)
    assert matching_probability(builtin_height("aztec"), (0, 0, 0)) == 1
    with pytest.raises(NotAMatching):
        matching_probability(h, (2, 0, 0), frozenset())
    assert G


def test_base_case_is_empty():
    assert sample_matching(builtin_height("aztec"), (0, 0, 0), seed=1) == frozenset()
    assert plan(builtin_height("aztec"), (0, 0, 0)).steps == 0


def test_order_one_aztec():
    h = builtin_height("aztec")
    a, b, c, d = (edge(q, 0, 1) for q in "abcd")
    state = plan(h, (1, 0, 1))
    rng = random.Random(9)
    draws = Counter(draw(state, rng) for _ in range(4000))
    assert set(draws) == {frozenset({a, c}), frozenset({b, d})}
    assert abs(draws[frozenset({a, c})] - 2000) < 200


def test_running_example_uniform():
    res = chi_square_uniformity(running_example_height(), (3, 1, 0), draws=20000, seed=4)
    assert res.matchings == 4 and res.passed()


def test_non_integer_x():
    with pytest.raises(NonIntegerX):
        plan(builtin_height("aztec"), (2, 0, 0), x0={(0, 0): 3})


def test_exact_bernoulli():
    rng = random.Random(0)
    hits = sum(bernoulli(rng, Fraction(1, 3)) for _ in range(30000))
    assert abs(hits - 10000) < 400
    assert not any(bernoulli(rng, Fraction(0)) for _ in range(100))
    assert all(bernoulli(rng, Fraction(1)) for _ in range(100))
