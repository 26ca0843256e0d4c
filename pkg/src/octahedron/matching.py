"""Perfect matchings of graphs with open faces and their monomials."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from .graph import GraphWithOpenFaces
from .laurent import LaurentPoly, Var

DEFAULT_MAX_VERTICES = 600
DEFAULT_MAX_MATCHINGS = 2_000_000


class SizeLimitExceeded(RuntimeError):
    pass


class NotAMatching(ValueError):
    pass


def max_matchings() -> int:
    raw = os.environ.get("OCTA_MAX_MATCHINGS")
    return int(raw) if raw else DEFAULT_MAX_MATCHINGS


@dataclass(frozen=True)
class ExponentVector:
    face_exp: dict
    edge_exp: dict

    def monomial(self) -> LaurentPoly:
        items = [(v, e) for v, e in self.face_exp.items() if e]
        items += [(v, 1) for v, d in self.edge_exp.items() if d]
        return LaurentPoly.monomial(items)


def enumerate_matchings(G: GraphWithOpenFaces, *, max_vertices: int | None = None, limit: int | None = None) -> Iterator[frozenset]:
    """Yield every perfect matching as a frozenset of edge indices.

    Always branches on the lowest-index uncovered vertex, trying its edges in
    index order, so the output order is deterministic.
    """
    nv = len(G)
    if nv > (max_vertices or DEFAULT_MAX_VERTICES):
        raise SizeLimitExceeded(f"{nv} vertices exceed the enumeration cap")
    limit = limit or max_matchings()
    if nv % 2:
        return
    inc = G.incidence
    ends = [(e.u, e.v) for e in G.edges]
    covered = [False] * nv
    chosen: list[int] = []
    produced = 0

    def rec(start: int):
        nonlocal produced
        v = start
        while v < nv and covered[v]:
            v += 1
        if v == nv:
            produced += 1
            if produced > limit:
                raise SizeLimitExceeded(f"more than {limit} matchings")
            yield frozenset(chosen)
            return
        covered[v] = True
        for e in inc[v]:
            a, b = ends[e]
            w = b if a == v else a
            if covered[w]:
                continue
            covered[w] = True
            chosen.append(e)
            yield from rec(v + 1)
            chosen.pop()
            covered[w] = False
        covered[v] = False

    yield from rec(0)


def is_matching(G: GraphWithOpenFaces, M) -> bool:
    seen = set()
    for e in M:
        ed = G.edges[e]
        if ed.u in seen or ed.v in seen:
            return False
        seen.update((ed.u, ed.v))
    return len(seen) == len(G)


def epsilon(used: int, unused: int, closed: bool) -> int:
    # ceil((b - a) / 2), minus one on closed faces
    c = -((used - unused) // 2)
    return c - 1 if closed else c


def matching_exponents(G: GraphWithOpenFaces, M) -> ExponentVector:
    M = frozenset(M)
    faces = {}
    for f in G.faces:
        used = sum(1 for e in f.edges if e in M)
        faces[f.var] = epsilon(used, len(f.edges) - used, f.closed)
    edges = {e.label: int(n in M) for n, e in enumerate(G.edges) if e.label is not None}
    return ExponentVector(faces, edges)


def _monomial_items(G: GraphWithOpenFaces, M, faces: bool) -> list[tuple[Var, int]]:
    items = [(G.edges[e].label, 1) for e in M if G.edges[e].label is not None]
    if faces:
        for f in G.faces:
            used = 0
            for e in f.edges:
                if e in M:
                    used += 1
            ex = epsilon(used, len(f.edges) - used, f.closed)
            if ex:
                items.append((f.var, ex))
    return items


def matching_monomial(G: GraphWithOpenFaces, M, faces: bool = True) -> LaurentPoly:
    return LaurentPoly.monomial(_monomial_items(G, frozenset(M), faces))


def matching_polynomial(G: GraphWithOpenFaces, faces: bool = True, matchings=None) -> LaurentPoly:
    """Sum of matching monomials; unweighted edges contribute 1.

    With ``faces=False`` only edge variables are kept (face variables at 1).
    """
    terms: dict = {}
    for M in matchings if matchings is not None else enumerate_matchings(G):
        mono = tuple(sorted(_monomial_items(G, M, faces)))
        terms[mono] = terms.get(mono, 0) + 1
    return LaurentPoly(terms)


def count_matchings(G: GraphWithOpenFaces) -> int:
    return sum(1 for _ in enumerate_matchings(G))


def matching_edge_labels(G: GraphWithOpenFaces, M) -> list:
    return sorted(G.edges[e].label for e in M if G.edges[e].label is not None)


def matching_from_labels(G: GraphWithOpenFaces, labels) -> frozenset:
    """Complete a set of weighted-edge labels by the forced unweighted edges."""
    by_label = {e.label: n for n, e in enumerate(G.edges) if e.label is not None}
    M = set()
    for lab in labels:
        if lab not in by_label:
            raise NotAMatching(f"{lab} is not an edge of G")
        M.add(by_label[lab])
    covered = set()
    for e in M:
        covered.update((G.edges[e].u, G.edges[e].v))
    for n, e in enumerate(G.edges):
        if e.label is None and e.u not in covered and e.v not in covered:
            M.add(n)
            covered.update((e.u, e.v))
    M = frozenset(M)
    if not is_matching(G, M):
        raise NotAMatching("labels do not extend to a perfect matching")
    return M
