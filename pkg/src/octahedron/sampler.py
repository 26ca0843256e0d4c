"""Exact random generation of perfect matchings by repeated face elevation.

The elevation schedule and the x values it produces do not depend on any
random choice, so they are computed once (``SamplerState``) and each draw
only replays the schedule backwards.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import build_subgraph
from .lattice import ApexNotAboveSurface, HeightFunction, LatticePoint, closed_faces, p_value
from .laurent import Var, edge
from .matching import NotAMatching, count_matchings, enumerate_matchings, is_matching, matching_edge_labels, matching_from_labels


class NonIntegerX(ArithmeticError):
    pass


class NoLocalMinimum(RuntimeError):
    pass


class SamplerError(AssertionError):
    pass


@dataclass(frozen=True)
class Frame:
    face: tuple[int, int]
    a: Var
    b: Var
    c: Var
    d: Var
    p_ac: Fraction  # probability of adding {a, c} when M' meets none of a, b, c, d


@dataclass
class SamplerState:
    h: HeightFunction
    apex: LatticePoint
    frames: list = field(default_factory=list)
    x: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return len(self.frames)

    def xval(self, face) -> int:
        return self.x.get(face, 1)


class _Buckets:
    """Closed faces grouped by working height, for O(1) lowest-face lookup."""

    def __init__(self, heights: dict):
        self.by_height: dict = {}
        for f, n in heights.items():
            self.by_height.setdefault(n, set()).add(f)

    def pop_lowest(self):
        if not self.by_height:
            return None
        n = min(self.by_height)
        faces = self.by_height[n]
        f = min(faces)
        faces.discard(f)
        if not faces:
            del self.by_height[n]
        return f

    def push(self, f, n):
        self.by_height.setdefault(n, set()).add(f)


def plan(h: HeightFunction, apex, x0: dict | None = None) -> SamplerState:
    apex = LatticePoint(*apex).check()
    if apex.n < h(apex.i, apex.j):
        raise ApexNotAboveSurface(f"{tuple(apex)} lies below the surface")
    state = SamplerState(h, apex, [], dict(x0 or {}))
    work = {f: h(*f) for f in closed_faces(h, apex)}
    height = lambda f: work.get(f, h(*f))  # noqa: E731
    buckets = _Buckets(work)
    while True:
        f = buckets.pop_lowest()
        if f is None:
            break
        i, j = f
        m = work[f]
        nbrs = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
        if any(height(g) != m + 1 for g in nbrs):
            raise NoLocalMinimum(f"lowest closed face {f} is not a local minimum")
        x = state.xval
        num = x((i + 1, j)) * x((i - 1, j)) + x((i, j + 1)) * x((i, j - 1))
        if num % x(f):
            raise NonIntegerX(f"x at {f} after elevation is {Fraction(num, x(f))}")
        new = num // x(f)
        # the two step-5 probabilities sum to 1 by the definition of new
        assert Fraction(x((i + 1, j)) * x((i - 1, j)) + x((i, j + 1)) * x((i, j - 1)), x(f) * new) == 1
        frame = Frame(
            f,
            edge("a", i + 1 + m, j),
            edge("b", i, j + 1 + m),
            edge("c", i - 1 - m, j),
            edge("d", i, j - 1 - m),
            Fraction(x((i, j + 1)) * x((i, j - 1)), x(f) * new),
        )
        state.frames.append(frame)
        state.x[f] = new
        work[f] = m + 2
        if m + 2 < p_value(apex, f):
            buckets.push(f, m + 2)
    if h(apex.i, apex.j) + 2 * sum(1 for fr in state.frames if fr.face == (apex.i, apex.j)) != apex.n:
        raise SamplerError("schedule did not lift the surface to the apex")
    return state


def bernoulli(rng: random.Random, p: Fraction) -> bool:
    """Exact coin with rational bias."""
    return rng.randrange(p.denominator) < p.numerator


def draw(state: SamplerState, rng: random.Random) -> frozenset:
    """One matching, as a set of weighted-edge labels."""
    M: set = set()
    for fr in reversed(state.frames):
        hit = [v for v in (fr.a, fr.b, fr.c, fr.d) if v in M]
        if len(hit) == 1:
            continue
        if len(hit) == 2:
            M.difference_update(hit)
        elif not hit:
            M.update((fr.a, fr.c) if bernoulli(rng, fr.p_ac) else (fr.b, fr.d))
        else:
            raise SamplerError(f"{len(hit)} of the four elevation edges at {fr.face} are matched")
    return frozenset(M)


def sample_matching(h: HeightFunction, apex, seed=None, *, state: SamplerState | None = None) -> frozenset:
    """Weighted-edge labels of a uniformly random perfect matching of G(apex).

    Unweighted edges are forced by the labels (see ``matching_from_labels``).
    At the base case, apex on the surface, the answer is the empty set.
    """
    state = state or plan(h, apex)
    return draw(state, random.Random(seed))


def sample_many(h: HeightFunction, apex, count: int, seed=None) -> list[frozenset]:
    """``count`` draws from one seeded stream, as edge-index matchings of G(apex)."""
    state = plan(h, apex)
    G = build_subgraph(h, apex)
    rng = random.Random(seed)
    return [matching_from_labels(G, draw(state, rng)) for _ in range(count)]


def matching_probability(h: HeightFunction, apex, M=None) -> Fraction:
    """Exact probability of the matching ``M`` (edge indices of G) under the uniform law."""
    apex = LatticePoint(*apex).check()
    if apex.n == h(apex.i, apex.j):
        return Fraction(1)
    G = build_subgraph(h, apex)
    if M is not None and not is_matching(G, M):
        raise NotAMatching("not a perfect matching of G")
    return Fraction(1, count_matchings(G))


@dataclass
class ChiSquareResult:
    matchings: int
    draws: int
    statistic: float
    p_value: float
    unseen: int

    def passed(self, alpha: float = 0.001) -> bool:
        return self.p_value >= alpha


def chi_square_uniformity(h: HeightFunction, apex, draws: int = 20000, seed=0) -> ChiSquareResult:
    from scipy.stats import chisquare

    G = build_subgraph(h, apex)
    index = {tuple(matching_edge_labels(G, M)): n for n, M in enumerate(enumerate_matchings(G))}
    state = plan(h, apex)
    rng = random.Random(seed)
    counts: Counter = Counter()
    for _ in range(draws):
        key = tuple(sorted(draw(state, rng)))
        if key not in index:
            raise SamplerError(f"draw {key} is not a matching of G")
        counts[index[key]] += 1
    observed = [counts[n] for n in range(len(index))]
    if len(observed) == 1:
        return ChiSquareResult(1, draws, 0.0, 1.0, 0)
    res = chisquare(observed)
    return ChiSquareResult(len(index), draws, float(res.statistic), float(res.pvalue), observed.count(0))
