"""Vertex splitting and urban renewal as graph rewrites, and face elevation.

Rewritten graphs keep the vertex keys of the input; new vertices and edges get
tagged tuple keys such as ``("split", n)`` or ``("leg", i, j, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import GEdge, GFace, GraphWithOpenFaces, build_subgraph, two_color
from .lattice import HeightFunction, LatticePoint, closed_faces, p_value
from .laurent import LaurentPoly, Var, aux, edge, substitute, x
from .matching import matching_polynomial


class InvalidSplitSite(ValueError):
    pass


class FaceNotRenewable(ValueError):
    pass


class NotALocalMinimum(ValueError):
    pass


# ---------------------------------------------------------------------------
# generic rebuild


def _rebuild(G, vertices, positions, edges, faces, root_color=None) -> GraphWithOpenFaces:
    """``edges`` are ``(key, ukey, vkey, label)``; ``faces`` are ``(key, var, closed, [edge keys], height)``."""
    vidx = {k: n for n, k in enumerate(vertices)}
    gedges = []
    for key, a, b, lab in edges:
        u, v = sorted((vidx[a], vidx[b]))
        gedges.append(GEdge(key, u, v, lab))
    eidx = {e.key: n for n, e in enumerate(gedges)}
    gfaces = tuple(GFace(k, var, closed, tuple(eidx[e] for e in cyc), ht) for k, var, closed, cyc, ht in faces)
    colors = two_color(len(vertices), [(e.u, e.v) for e in gedges], 0, root_color if root_color is not None else 0)
    return GraphWithOpenFaces(tuple(vertices), tuple(positions), tuple(colors), tuple(gedges), gfaces, G.apex, G.h)


def _parts(G):
    vertices = list(G.vertex_keys)
    positions = list(G.positions)
    edges = [(e.key, G.vertex_keys[e.u], G.vertex_keys[e.v], e.label) for e in G.edges]
    faces = [(f.key, f.var, f.closed, [G.edges[e].key for e in f.edges], f.height) for f in G.faces]
    return vertices, positions, edges, faces


def _angle(G, v, w) -> float:
    (x0, y0), (x1, y1) = G.positions[v], G.positions[w]
    return math.atan2(y1 - y0, x1 - x0)


def rotation(G: GraphWithOpenFaces, v: int) -> list[int]:
    """Edges at ``v`` in counter-clockwise order of direction."""
    return sorted(G.incidence[v], key=lambda e: _angle(G, v, G.other(e, v)))


def _insert_between(cyc: list, closed: bool, e_prev, e_next, new: list) -> bool:
    """Insert ``new`` between consecutive entries ``e_prev``/``e_next`` (either order)."""
    n = len(cyc)
    pairs = range(n) if closed else range(n - 1)
    for t in pairs:
        a, b = cyc[t], cyc[(t + 1) % n]
        if (a, b) == (e_prev, e_next):
            cyc[t + 1 : t + 1] = new
            return True
        if (a, b) == (e_next, e_prev):
            cyc[t + 1 : t + 1] = list(reversed(new))
            return True
    return False


# ---------------------------------------------------------------------------
# vertex splitting


def split_vertex(G: GraphWithOpenFaces, v: int, axis: int = 0, size: int | None = None) -> GraphWithOpenFaces:
    """Replace vertex ``v`` by a path ``v1 - w - v2`` of two unweighted edges.

    The edges at ``v`` in rotation order, starting at position ``axis``, are
    split into ``size`` edges that stay on ``v1`` (which keeps the key of
    ``v``) and the rest, which move to ``v2``.  The two faces at the cuts gain
    both new edges.
    """
    rot = rotation(G, v)
    d = len(rot)
    if d < 2:
        raise InvalidSplitSite(f"vertex {G.vertex_keys[v]} has degree {d}")
    size = (d + 1) // 2 if size is None else size
    if not 1 <= size < d:
        raise InvalidSplitSite(f"group size {size} invalid for degree {d}")
    rot = rot[axis % d :] + rot[: axis % d]
    group1, group2 = rot[:size], rot[size:]
    vertices, positions, edges, faces = _parts(G)
    vkey = G.vertex_keys[v]
    tag = 0
    while ("split", tag, "w") in G.vertex_index:
        tag += 1
    wkey, v2key = ("split", tag, "w"), ("split", tag, "v2")
    e1key, e2key = ("split", tag, "e1"), ("split", tag, "e2")

    px, py = G.positions[v]

    def push(group, sign):
        ang = [_angle(G, v, G.other(e, v)) for e in group]
        cx = sum(math.cos(a) for a in ang)
        cy = sum(math.sin(a) for a in ang)
        norm = math.hypot(cx, cy) or 1.0
        return (px + sign * 0.0 + 0.3 * cx / norm, py + 0.3 * cy / norm)

    positions[v] = push(group1, 1)
    vertices += [wkey, v2key]
    positions += [(px, py), push(group2, 1)]
    g2 = {G.edges[e].key for e in group2}
    edges = [(k, v2key if (a == vkey and k in g2) else a, v2key if (b == vkey and k in g2) else b, lab) for k, a, b, lab in edges]
    edges += [(e1key, vkey, wkey, None), (e2key, wkey, v2key, None)]
    # the cuts sit between group1[-1]/group2[0] and group2[-1]/group1[0]
    cuts = [(G.edges[group1[-1]].key, G.edges[group2[0]].key), (G.edges[group2[-1]].key, G.edges[group1[0]].key)]
    new_faces = []
    for fk, var, closed, cyc, ht in faces:
        cyc = list(cyc)
        for prev, nxt in cuts:
            # prev is on v1's side, nxt on v2's side for the first cut; reversed for the second
            if prev in g2:
                _insert_between(cyc, closed, prev, nxt, [e2key, e1key])
            else:
                _insert_between(cyc, closed, prev, nxt, [e1key, e2key])
        new_faces.append((fk, var, closed, cyc, ht))
    return _rebuild(G, vertices, positions, edges, new_faces, G.colors[0])


def merge_vertex(G: GraphWithOpenFaces, w: int) -> GraphWithOpenFaces:
    """Inverse of :func:`split_vertex`: contract a degree-2 vertex between two unweighted edges."""
    inc = G.incidence[w]
    if len(inc) != 2 or any(G.edges[e].label is not None for e in inc):
        raise InvalidSplitSite(f"vertex {G.vertex_keys[w]} is not between two unweighted edges")
    v1, v2 = sorted((G.other(inc[0], w), G.other(inc[1], w)))
    keep, drop = G.vertex_keys[v1], G.vertex_keys[v2]
    wkey = G.vertex_keys[w]
    # prefer keeping an original (non-tagged) key
    if isinstance(keep, tuple) and keep and keep[0] == "split" and not (drop and drop[0] == "split"):
        keep, drop = drop, keep
        v1, v2 = v2, v1
    removed = {G.edges[e].key for e in inc}
    vertices, positions, edges, faces = _parts(G)
    keep_idx = [n for n, k in enumerate(vertices) if k not in (wkey, drop)]
    pos_keep = G.positions[G.vertex_index[wkey]]
    new_vertices = [vertices[n] for n in keep_idx]
    new_positions = [pos_keep if vertices[n] == keep else positions[n] for n in keep_idx]
    new_edges = []
    for k, a, b, lab in edges:
        if k in removed:
            continue
        new_edges.append((k, keep if a == drop else a, keep if b == drop else b, lab))
    new_faces = [(fk, var, closed, [e for e in cyc if e not in removed], ht) for fk, var, closed, cyc, ht in faces]
    root = G.colors[G.vertex_index[new_vertices[0]]] if new_vertices else 0
    return _rebuild(G, new_vertices, new_positions, new_edges, new_faces, root)


def merge_all(G: GraphWithOpenFaces) -> GraphWithOpenFaces:
    """Contract every degree-2 vertex whose two edges are both unweighted."""
    while True:
        for w in range(len(G)):
            inc = G.incidence[w]
            if len(inc) == 2 and all(G.edges[e].label is None for e in inc):
                G = merge_vertex(G, w)
                break
        else:
            return G


# ---------------------------------------------------------------------------
# urban renewal


@dataclass(frozen=True)
class RenewalSubstitution:
    face: tuple[int, int]
    old_var: Var
    new_var: Var
    replacement: LaurentPoly

    def apply(self, poly: LaurentPoly) -> LaurentPoly:
        return substitute(poly, {self.new_var: self.replacement})


_COMPASS = {("ew", 0, 0): "E", ("ns", 0, 0): "N", ("ew", -1, 0): "W", ("ns", 0, -1): "S"}
_ACROSS = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}


def urban_renewal(G: GraphWithOpenFaces, face) -> tuple[GraphWithOpenFaces, RenewalSubstitution]:
    """Rewrite the closed square ``face`` (a lattice face key) as in the urban renewal theorem.

    The four square edges are removed; each corner gets an unweighted leg to
    a new inner vertex; the inner square edge parallel to a side carries the
    label of the opposite side; the centre face gets the auxiliary variable
    ``z[i,j]``.
    """
    face = tuple(face)
    if face not in G.face_index:
        raise FaceNotRenewable(f"{face} is not a face of G")
    F = G.face(face)
    if not F.closed or len(F.edges) != 4:
        raise FaceNotRenewable(f"{face} is not a closed square")
    i, j = face
    sides = {}
    for e in F.edges:
        k = G.edges[e].key
        rel = (k[0], k[1] - i, k[2] - j) if isinstance(k, tuple) and len(k) == 3 else None
        if rel not in _COMPASS or G.edges[e].label is None:
            raise FaceNotRenewable(f"{face} is not a square of weighted lattice edges")
        sides[_COMPASS[rel]] = e
    order = ["E", "N", "W", "S"]
    # corners: corner k sits between side order[k-1] and order[k]
    def shared(e1, e2):
        a, b = G.edges[e1], G.edges[e2]
        common = {a.u, a.v} & {b.u, b.v}
        if len(common) != 1:
            raise FaceNotRenewable(f"sides of {face} do not meet at a corner")
        return common.pop()

    corners = {}
    for k, s in enumerate(order):
        corners[(order[k - 1], s)] = shared(sides[order[k - 1]], sides[s])
    vertices, positions, edges, faces = _parts(G)
    side_keys = {s: G.edges[sides[s]].key for s in order}
    removed = set(side_keys.values())
    edges = [t for t in edges if t[0] not in removed]
    cx, cy = 4 * i, 4 * j
    inner = {}
    for (s_prev, s), c in corners.items():
        ck = G.vertex_keys[c]
        qk = ("q", i, j, s_prev + s)
        px, py = G.positions[c]
        inner[(s_prev, s)] = qk
        vertices.append(qk)
        positions.append((cx + (px - cx) / 2, cy + (py - cy) / 2))
        edges.append((("leg", i, j, s_prev + s), ck, qk, None))
    opposite = {"E": "W", "W": "E", "N": "S", "S": "N"}
    inner_edge = {}
    for k, s in enumerate(order):
        a = inner[(order[k - 1], s)]
        b = inner[(s, order[(k + 1) % 4])]
        key = ("in", i, j, s)
        inner_edge[s] = key
        edges.append((key, a, b, G.edges[sides[opposite[s]]].label))
    new_faces = []
    for fk, var, closed, cyc, ht in faces:
        if fk == face:
            new_faces.append((fk, aux(i, j), True, [inner_edge[s] for s in order], ht))
            continue
        out = []
        for ek in cyc:
            s = next((s for s in order if side_keys[s] == ek), None)
            if s is None:
                out.append(ek)
                continue
            k = order.index(s)
            leg_a = ("leg", i, j, order[k - 1] + s)
            leg_b = ("leg", i, j, s + order[(k + 1) % 4])
            out.append([leg_a, inner_edge[s], leg_b])
        new_faces.append((fk, var, closed, _orient_runs(out, edges, closed), ht))
    G2 = _rebuild(G, vertices, positions, edges, new_faces, G.colors[0])

    lab = {s: LaurentPoly.var(G.edges[sides[s]].label) for s in order}
    X = {s: LaurentPoly.var(x(i + _ACROSS[s][0], j + _ACROSS[s][1])) for s in order}
    repl = (lab["E"] * lab["W"] * X["N"] * X["S"] + lab["N"] * lab["S"] * X["E"] * X["W"]) * LaurentPoly.var(x(i, j), -1)
    return G2, RenewalSubstitution(face, x(i, j), aux(i, j), repl)


def _orient_runs(items, edges, closed: bool) -> list:
    """Flatten a face boundary in which side edges were replaced by ``[leg, inner, leg]`` runs."""
    ends = {k: set((a, b)) for k, a, b, _ in edges}
    n = len(items)
    flat: list = []
    for t, it in enumerate(items):
        if not isinstance(it, list):
            flat.append(it)
            continue
        run = list(it)
        if t > 0 or closed:
            prev = items[t - 1]
            prev = prev[-1] if isinstance(prev, list) else prev
            if not ends[run[0]] & ends[prev]:
                run.reverse()
        elif t + 1 < n:
            nxt = items[t + 1]
            nxt = nxt[0] if isinstance(nxt, list) else nxt
            if not ends[run[-1]] & ends[nxt]:
                run.reverse()
        flat.extend(run)
    return flat


# ---------------------------------------------------------------------------
# height-level moves


def is_local_minimum(h: HeightFunction, face) -> bool:
    i, j = face
    v = h(i, j)
    return all(h(i + di, j + dj) == v + 1 for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)))


def elevate_face(h: HeightFunction, face) -> HeightFunction:
    i, j = face
    if not is_local_minimum(h, face):
        raise NotALocalMinimum(f"{tuple(face)} is not a strict local minimum of h")
    return h.with_overrides({(i, j): h(i, j) + 2})


def select_local_minimum(h: HeightFunction, apex) -> tuple[int, int] | None:
    """Lowest closed face of G(apex), ties broken lexicographically; ``None`` at the base case."""
    faces = closed_faces(h, apex)
    if not faces:
        return None
    return min(faces, key=lambda f: (h(*f), f))


def drive_to_base(h: HeightFunction, apex) -> tuple[HeightFunction, list]:
    """Elevate local minima until the apex lies on the surface."""
    apex = LatticePoint(*apex).check()
    steps = []
    while True:
        f = select_local_minimum(h, apex)
        if f is None:
            return h, steps
        h = elevate_face(h, f)
        steps.append(f)


def elevation_binomial(h: HeightFunction, face) -> LaurentPoly:
    """f at the elevated point (h(i,j)+2, i, j) in terms of the variables of h."""
    i, j = face
    m = h(i, j)
    t1 = (
        LaurentPoly.var(edge("a", i + 1 + m, j))
        * LaurentPoly.var(edge("c", i - 1 - m, j))
        * LaurentPoly.var(x(i, j + 1))
        * LaurentPoly.var(x(i, j - 1))
    )
    t2 = (
        LaurentPoly.var(edge("b", i, j + 1 + m))
        * LaurentPoly.var(edge("d", i, j - 1 - m))
        * LaurentPoly.var(x(i + 1, j))
        * LaurentPoly.var(x(i - 1, j))
    )
    return (t1 + t2) * LaurentPoly.var(x(i, j), -1)


def graph_polynomial(h: HeightFunction, apex) -> LaurentPoly:
    """m(G(apex)); the base case (apex on the surface) gives the single face variable."""
    apex = LatticePoint(*apex).check()
    if h(apex.i, apex.j) == apex.n:
        return LaurentPoly.var(x(apex.i, apex.j))
    return matching_polynomial(build_subgraph(h, apex))


def induction_step_holds(h: HeightFunction, apex, face) -> bool:
    """m(G(h)) equals m(G(h')) with x(face) replaced by the elevation binomial."""
    h2 = elevate_face(h, face)
    lhs = graph_polynomial(h, apex)
    rhs = substitute(graph_polynomial(h2, apex), {x(*face): elevation_binomial(h, face)})
    return lhs == rhs


# ---------------------------------------------------------------------------
# structural comparison


def canonical_form(G: GraphWithOpenFaces, rename: dict | None = None):
    """A label-based fingerprint, equal for graphs that agree up to vertex names."""
    rename = rename or {}
    weighted = [set() for _ in range(len(G))]
    partner = [None] * len(G)
    for e in G.edges:
        if e.label is not None:
            weighted[e.u].add(e.label)
            weighted[e.v].add(e.label)
        else:
            partner[e.u], partner[e.v] = e.v, e.u
    vid = []
    for v in range(len(G)):
        p = partner[v]
        vid.append((frozenset(weighted[v]), frozenset(weighted[p]) if p is not None else None))
    eid = []
    for e in G.edges:
        eid.append((e.label or "u", frozenset((vid[e.u], vid[e.v]))))
    faces = frozenset((rename.get(f.var, f.var), f.closed, frozenset(eid[e] for e in f.edges)) for f in G.faces)
    return frozenset(vid), frozenset(eid), faces


def renewal_coherent(h: HeightFunction, apex, face) -> bool:
    """Urban renewal plus merging at ``face`` reproduces G(h') up to vertex names."""
    G = build_subgraph(h, apex)
    G2, _ = urban_renewal(G, face)
    G2 = merge_all(G2)
    H = build_subgraph(elevate_face(h, face), apex)
    return canonical_form(G2, {aux(*face): x(*face)}) == canonical_form(H)
