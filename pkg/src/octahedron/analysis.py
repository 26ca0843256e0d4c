"""Condensation, edge recovery from face exponents, Propp heights, acceptable matchings."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import (
    BLACK,
    WHITE,
    GraphWithOpenFaces,
    build_subgraph,
    completion_window,
    embed_vertices,
    standard_outer_matching,
    window_graph,
)
from .lattice import HeightFunction, LatticePoint
from .laurent import LaurentPoly, edge
from .matching import (
    NotAMatching,
    enumerate_matchings,
    epsilon,
    is_matching,
    matching_exponents,
    matching_polynomial,
)


class SimplifyingAssumptionViolated(ValueError):
    pass


class IdentityViolated(AssertionError):
    pass


class InconsistentExponents(AssertionError):
    pass


class PathInconsistency(AssertionError):
    pass


class CollarError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Kuo condensation

REGIONS = ("C", "N", "NE", "E", "SE", "S", "SW", "W", "NW")
# (in E, in W, in N, in S) -> region
_SIGNATURES = {
    (1, 1, 1, 1): "C",
    (0, 0, 1, 0): "N",
    (0, 0, 0, 1): "S",
    (1, 0, 0, 0): "E",
    (0, 1, 0, 0): "W",
    (1, 0, 1, 0): "NE",
    (0, 1, 1, 0): "NW",
    (1, 0, 0, 1): "SE",
    (0, 1, 0, 1): "SW",
}
# pairs of distinct regions allowed to share an edge
ALLOWED = {
    frozenset(p)
    for p in [
        ("C", "NE"), ("C", "NW"), ("C", "SE"), ("C", "SW"),
        ("N", "NE"), ("N", "NW"), ("E", "NE"), ("E", "SE"),
        ("S", "SE"), ("S", "SW"), ("W", "NW"), ("W", "SW"),
        ("NE", "NW"), ("NE", "SE"), ("SW", "SE"), ("SW", "NW"),
    ]
}


@dataclass
class KuoPartition:
    G: GraphWithOpenFaces
    sets: dict  # region -> frozenset of vertex keys

    def region_of(self) -> dict:
        return {k: r for r, ks in self.sets.items() for k in ks}

    def delta(self, region: str, swap: bool = False) -> int:
        idx = self.G.vertex_index
        black = BLACK if not swap else WHITE
        return sum(1 if self.G.colors[idx[k]] == black else -1 for k in self.sets[region])

    def boundary(self, region: str) -> set:
        """Vertices of ``region`` with a neighbour outside it."""
        G, idx = self.G, self.G.vertex_index
        mine = self.sets[region]
        out = set()
        for k in mine:
            v = idx[k]
            for e in G.incidence[v]:
                if G.vertex_keys[G.other(e, v)] not in mine:
                    out.add(k)
                    break
        return out

    def union(self, *regions) -> frozenset:
        return frozenset().union(*(self.sets[r] for r in regions))


def kuo_partition(h: HeightFunction, apex) -> KuoPartition:
    apex = LatticePoint(*apex).check()
    n0, i0, j0 = apex
    if n0 - 2 <= h(i0, j0):
        raise SimplifyingAssumptionViolated(f"(n0-2, i0, j0) = {(n0 - 2, i0, j0)} is not above the surface")
    G = build_subgraph(h, apex)
    VE = set(build_subgraph(h, (n0 - 1, i0 + 1, j0)).vertex_keys)
    VW = set(build_subgraph(h, (n0 - 1, i0 - 1, j0)).vertex_keys)
    VN = set(build_subgraph(h, (n0 - 1, i0, j0 + 1)).vertex_keys)
    VS = set(build_subgraph(h, (n0 - 1, i0, j0 - 1)).vertex_keys)
    VC = set(build_subgraph(h, (n0 - 2, i0, j0)).vertex_keys)
    if VE & VW != VC or VN & VS != VC:
        raise IdentityViolated("centre set is not the intersection of opposite graphs")
    if VE | VW | VN | VS != set(G.vertex_keys):
        raise IdentityViolated("the four smaller graphs do not cover G")
    sets = {r: set() for r in REGIONS}
    for k in G.vertex_keys:
        sig = (int(k in VE), int(k in VW), int(k in VN), int(k in VS))
        region = _SIGNATURES.get(sig)
        if region is None:
            raise IdentityViolated(f"vertex {k} has membership pattern {sig}")
        sets[region].add(k)
    return KuoPartition(G, {r: frozenset(s) for r, s in sets.items()})


def check_partition(part: KuoPartition) -> list[str]:
    """Colour, boundary and adjacency hypotheses of the condensation theorem."""
    G = part.G
    problems = []
    region = part.region_of()
    for e in G.edges:
        ru, rv = region[G.vertex_keys[e.u]], region[G.vertex_keys[e.v]]
        if ru != rv and frozenset((ru, rv)) not in ALLOWED:
            problems.append(f"edge {e.key} joins {ru} and {rv}")
    want = {"NE": 1, "SW": 1, "SE": -1, "NW": -1, "C": 0, "N": 0, "E": 0, "S": 0, "W": 0}
    ok_swap = []
    for swap in (False, True):
        bad = [r for r, d in want.items() if part.delta(r, swap) != d]
        black = BLACK if not swap else WHITE
        idx = G.vertex_index
        for r, col in (("NE", black), ("SW", black), ("NW", 1 - black), ("SE", 1 - black)):
            if any(G.colors[idx[k]] != col for k in part.boundary(r)):
                bad.append(f"boundary of {r}")
        ok_swap.append(bad)
    if all(ok_swap):
        problems.append(f"colour conditions fail: {ok_swap[0]}")
    return problems


def _edge_poly(G: GraphWithOpenFaces, keys) -> LaurentPoly:
    return matching_polynomial(G.induced(keys), faces=False)


@dataclass
class CondensationReport:
    apex: LatticePoint
    lhs: LaurentPoly
    rhs_ns: LaurentPoly
    rhs_ew: LaurentPoly
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def verify_condensation(h: HeightFunction, apex) -> CondensationReport:
    part = kuo_partition(h, apex)
    G = part.G
    n0, i0, j0 = LatticePoint(*apex)
    problems = check_partition(part)
    m = {r: _edge_poly(G, part.sets[r]) for r in ("C", "N", "E", "S", "W")}
    expected = {
        "E": LaurentPoly.var(edge("a", i0 + n0 - 1, j0)),
        "W": LaurentPoly.var(edge("c", i0 - n0 + 1, j0)),
        "N": LaurentPoly.var(edge("b", i0, j0 + n0 - 1)),
        "S": LaurentPoly.var(edge("d", i0, j0 - n0 + 1)),
    }
    for r, want in expected.items():
        if m[r] != want:
            problems.append(f"m({r}) = {m[r]}, expected {want}")
    mG = matching_polynomial(G, faces=False)
    lhs = mG * m["C"]
    north = _edge_poly(G, part.union("N", "NE", "NW", "C"))
    south = _edge_poly(G, part.union("S", "SE", "SW", "C"))
    east = _edge_poly(G, part.union("E", "NE", "SE", "C"))
    west = _edge_poly(G, part.union("W", "NW", "SW", "C"))
    rhs_ns = north * south * m["E"] * m["W"]
    rhs_ew = east * west * m["N"] * m["S"]
    if lhs != rhs_ns + rhs_ew:
        problems.append("m(G) m(C) differs from the right-hand side")
    shared = set(rhs_ns.terms) & set(rhs_ew.terms)
    if shared:
        problems.append(f"{len(shared)} monomials occur in both right-hand products")
    for _, c in lhs.items():
        if c <= 0 or c & (c - 1):
            problems.append(f"coefficient {c} is not a power of two")
            break
    return CondensationReport(LatticePoint(*apex), lhs, rhs_ns, rhs_ew, problems)


# ---------------------------------------------------------------------------
# recovering edges from face exponents


def _region_tests(label):
    """The two linear forms (in n, i, j) and thresholds defining P, Q, R, S for ``label``."""
    i0, j0, q = label.i, label.j, label.q
    if q == "a":
        return (lambda n, i, j: n + i + j, i0 + j0 + 1), (lambda n, i, j: n + i - j, i0 - j0 + 1)
    if q == "b":
        return (lambda n, i, j: n + i + j, i0 + j0 + 1), (lambda n, i, j: n - i + j, -i0 + j0 + 1)
    if q == "c":
        return (lambda n, i, j: n - i + j, -i0 + j0 + 1), (lambda n, i, j: n - i - j, -i0 - j0 + 1)
    return (lambda n, i, j: n + i - j, i0 - j0 + 1), (lambda n, i, j: n - i - j, -i0 - j0 + 1)


def region_sums(h: HeightFunction, face_exp: dict, label) -> tuple[int, int, int, int]:
    """(sum over P, Q, R, S) of face exponents for the edge ``label``."""
    (f1, t1), (f2, t2) = _region_tests(label)
    sums = {"P": 0, "Q": 0, "R": 0, "S": 0}
    for var, eps in face_exp.items():
        if not eps:
            continue
        n = h(var.i, var.j)
        lo1 = f1(n, var.i, var.j) < t1
        lo2 = f2(n, var.i, var.j) < t2
        key = "P" if lo1 and lo2 else "R" if not lo1 and not lo2 else "Q" if lo1 else "S"
        sums[key] += eps
    return sums["P"], sums["Q"], sums["R"], sums["S"]


def recover_edge_exponents(G: GraphWithOpenFaces, face_exp: dict) -> dict:
    """delta for every weighted edge of G, from the face exponents alone."""
    out = {}
    for e in G.edges:
        if e.label is None:
            continue
        P, Q, R, S = region_sums(G.h, face_exp, e.label)
        d = -P
        if not (d == Q == 1 - R == S) or d not in (0, 1):
            raise InconsistentExponents(f"{e.label}: sums P={P} Q={Q} R={R} S={S}")
        out[e.label] = d
    return out


# ---------------------------------------------------------------------------
# Propp heights


def propp_weights(G: GraphWithOpenFaces) -> dict:
    return {e.key: Fraction(1, 4) if e.label is not None else Fraction(1, 2) for e in G.edges}


def vertex_weight_sums(G: GraphWithOpenFaces, vertices=None) -> dict:
    w = propp_weights(G)
    sums = {}
    for v in vertices if vertices is not None else range(len(G)):
        sums[G.vertex_keys[v]] = sum(w[G.edges[e].key] for e in G.incidence[v])
    return sums


def full_degree_vertices(G: GraphWithOpenFaces) -> list[int]:
    """Vertices of G all of whose edges in the infinite graph are present in G."""
    from .graph import _Glyphs

    glyphs = _Glyphs(G.h)
    out = []
    for v, key in enumerate(G.vertex_keys):
        if len(glyphs.vertex_edges(key)) == len(G.incidence[v]):
            out.append(v)
    return out


def _face_center(face) -> tuple[int, int]:
    i, j = face.key
    return 4 * i, 4 * j


def _step_sign(G, e, f_from, f_to) -> int:
    """+1 when the white end of ``e`` is on the left looking from ``f_from`` to ``f_to``."""
    ed = G.edges[e]
    white = ed.u if G.colors[ed.u] == WHITE else ed.v
    fx, fy = _face_center(f_from)
    tx, ty = _face_center(f_to)
    wx, wy = G.positions[white]
    cross = (tx - fx) * (wy - fy) - (ty - fy) * (wx - fx)
    if cross == 0:
        raise PathInconsistency(f"vertex of {ed.key} lies on the line between faces")
    return 1 if cross > 0 else -1


def _dual(G):
    sides: dict = {}
    for n, f in enumerate(G.faces):
        for e in f.edges:
            sides.setdefault(e, []).append(n)
    return {e: fs for e, fs in sides.items() if len(fs) == 2}


def propp_height(G: GraphWithOpenFaces, M, root: int = 0) -> dict:
    """Face key -> Propp height, normalised so the minimum is 0."""
    M = frozenset(M)
    w = propp_weights(G)
    dual = _dual(G)
    adj: dict = {n: [] for n in range(len(G.faces))}
    for e, (a, b) in dual.items():
        adj[a].append((e, b))
        adj[b].append((e, a))
    H = {root: Fraction(0)}
    queue = deque([root])
    while queue:
        f = queue.popleft()
        for e, g in adj[f]:
            s = _step_sign(G, e, G.faces[f], G.faces[g])
            step = s * (w[G.edges[e].key] - (1 if e in M else 0))
            val = H[f] - step
            if g in H:
                if H[g] != val:
                    raise PathInconsistency(f"height of face {G.faces[g].key} is not well defined")
            else:
                H[g] = val
                queue.append(g)
    if len(H) != len(G.faces):
        raise PathInconsistency("dual graph is disconnected")
    low = min(H.values())
    return {G.faces[n].key: v - low for n, v in H.items()}


def matching_from_height(G: GraphWithOpenFaces, H: dict) -> frozenset:
    w = propp_weights(G)
    out = set()
    for e, (a, b) in _dual(G).items():
        fa, fb = G.faces[a], G.faces[b]
        s = _step_sign(G, e, fa, fb)
        diff = H[fa.key] - H[fb.key]
        wt = w[G.edges[e].key]
        if diff == s * (wt - 1):
            out.add(e)
        elif diff != s * wt:
            raise PathInconsistency(f"height step {diff} across {G.edges[e].key} is not allowed")
    return frozenset(out)


# ---------------------------------------------------------------------------
# acceptable matchings


@dataclass
class CompletionWindow:
    h: HeightFunction  # truncated
    window: tuple
    W: GraphWithOpenFaces
    G: GraphWithOpenFaces | None
    vmap: dict
    m_out: frozenset

    @property
    def collar(self) -> set:
        bi0, bi1, bj0, bj1 = self.window
        return {k for k in self.W.vertex_keys if k[0] in (bi0, bi1) or k[1] in (bj0, bj1)}


def completion(h: HeightFunction, apex, margin: int = 2) -> CompletionWindow:
    apex = LatticePoint(*apex).check()
    if margin < 1:
        raise CollarError("collar must be at least one block thick")
    ht, window = completion_window(h, apex, margin)
    W = window_graph(ht, window, apex)
    G = build_subgraph(h, apex) if apex.n > h(apex.i, apex.j) else None
    vmap = embed_vertices(G, W) if G is not None else {}
    return CompletionWindow(ht, window, W, G, vmap, standard_outer_matching(h, apex, window))


def verify_acceptable(h: HeightFunction, apex, window_or_completion, M_window) -> bool:
    """True iff the window matching coincides with M_out on every edge outside G.

    ``M_window`` is a set of edge keys of the completion window.
    """
    comp = window_or_completion
    if not isinstance(comp, CompletionWindow):
        apex = LatticePoint(*apex).check()
        ht, default = completion_window(h, apex, 1)
        window = comp or default
        if window[0] > default[0] or window[1] < default[1] or window[2] > default[2] or window[3] < default[3]:
            raise CollarError("window leaves no collar around G")
        W = window_graph(ht, window, apex)
        G = build_subgraph(h, apex) if apex.n > h(apex.i, apex.j) else None
        comp = CompletionWindow(ht, window, W, G, embed_vertices(G, W) if G else {}, standard_outer_matching(h, apex, window))
    W = comp.W
    M = {W.edge_index[k] for k in M_window}
    if not is_matching(W, M):
        raise NotAMatching("not a perfect matching of the window")
    collar = comp.collar
    for k in comp.m_out:
        e = W.edge(k)
        if (W.vertex_keys[e.u] in collar or W.vertex_keys[e.v] in collar) and W.edge_index[k] not in M:
            raise CollarError("matching disagrees with M_out on the collar")
    g_edges = {e.key for e in comp.G.edges} if comp.G is not None else set()
    outer = {W.edge_index[k] for k in W.edge_index if k not in g_edges}
    outer_used = {W.edges[e].key for e in M & outer}
    return outer_used == set(comp.m_out)


def acceptable_matchings(comp: CompletionWindow):
    """Matchings of the window that agree with M_out on the collar."""
    W = comp.W
    collar = comp.collar
    fixed = set()
    for k in comp.m_out:
        e = W.edge(k)
        if W.vertex_keys[e.u] in collar or W.vertex_keys[e.v] in collar:
            fixed.add(W.edge_index[k])
    covered = set()
    for e in fixed:
        covered.update((W.vertex_keys[W.edges[e].u], W.vertex_keys[W.edges[e].v]))
    rest = W.induced(k for k in W.vertex_keys if k not in covered)
    for M in enumerate_matchings(rest):
        yield frozenset({W.edge_index[rest.edges[e].key] for e in M} | fixed)


def window_face_exponents(comp: CompletionWindow, M) -> dict:
    """Face exponent of every complete face of the window under ``M``."""
    out = {}
    for f in comp.W.faces:
        used = sum(1 for e in f.edges if e in M)
        out[f.var] = epsilon(used, len(f.edges) - used, True)
    return out


def exponents_of(G, M) -> dict:
    return matching_exponents(G, M).face_exp


def coefficient_histogram(p: LaurentPoly) -> Counter:
    return Counter(c for _, c in p.items())
