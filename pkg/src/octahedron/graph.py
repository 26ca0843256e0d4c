"""Crosses and wrenches: from a height function to graphs with open faces.

Coordinates are in quarter units.  Face ``(i, j)`` is centred at
``(4i, 4j)``; the 2x2 block with south-west face ``(i, j)`` is centred at
``(4i+2, 4j+2)``.  A cross puts one vertex at the block centre.  A wrench puts
two vertices one quarter unit off the centre along a diagonal and joins them
by an unweighted edge:

* ``MAIN``: vertices NW and SE of centre; the edge separates ``(i,j)`` from ``(i+1,j+1)``.
* ``ANTI``: vertices NE and SW of centre; the edge separates ``(i+1,j)`` from ``(i,j+1)``.

Edge keys: ``("ew", i, j)`` separates faces ``(i,j)`` and ``(i+1,j)``;
``("ns", i, j)`` separates ``(i,j)`` and ``(i,j+1)``; ``("dg", i, j)`` is the
middle edge of the wrench at block ``(i, j)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple

from .lattice import (
    EdgeLabel,
    HeightError,
    HeightFunction,
    LatticePoint,
    closed_faces,
    p_value,
    truncate_height,
)
from .laurent import EDGE, Var, edge, x


class Glyph(Enum):
    CROSS = "cross"
    MAIN = "wrench_main"
    ANTI = "wrench_anti"


class CellGlyph(NamedTuple):
    cell: tuple[int, int]
    kind: Glyph


# slot numbering inside a block
C, NW, NE, SE, SW = 0, 1, 2, 3, 4
SLOT_OFFSET = {C: (0, 0), NW: (-1, 1), NE: (1, 1), SE: (1, -1), SW: (-1, -1)}
BLACK, WHITE = 0, 1


class NotASubgraph(ValueError):
    pass


class GraphInvariantError(AssertionError):
    pass


def classify_cell(h, cell) -> CellGlyph:
    i, j = cell
    sw, se, nw, ne = h(i, j), h(i + 1, j), h(i, j + 1), h(i + 1, j + 1)
    for a, b in ((sw, se), (sw, nw), (se, ne), (nw, ne)):
        if abs(a - b) != 1:
            raise HeightError(f"block at {cell} violates the unit-step condition")
    if sw == ne and se == nw:
        return CellGlyph((i, j), Glyph.CROSS)
    if sw == ne:
        return CellGlyph((i, j), Glyph.MAIN)
    if se == nw:
        return CellGlyph((i, j), Glyph.ANTI)
    raise HeightError(f"block at {cell} matches no glyph")


def _arm_slot(kind: Glyph, arm: str) -> int:
    if kind is Glyph.CROSS:
        return C
    if kind is Glyph.MAIN:
        return NW if arm in "WN" else SE
    return NE if arm in "NE" else SW


def _diag_slots(kind: Glyph) -> tuple[int, int] | None:
    if kind is Glyph.MAIN:
        return NW, SE
    if kind is Glyph.ANTI:
        return SW, NE
    return None


class _Glyphs:
    """Memoised glyph lookup for one height function."""

    def __init__(self, h):
        self.h = h
        self.cache: dict = {}

    def __call__(self, i: int, j: int) -> Glyph:
        g = self.cache.get((i, j))
        if g is None:
            g = classify_cell(self.h, (i, j)).kind
            self.cache[(i, j)] = g
        return g

    def endpoints(self, key) -> tuple[tuple, tuple] | None:
        kind, i, j = key
        if kind == "ew":
            return (i, j - 1, _arm_slot(self(i, j - 1), "N")), (i, j, _arm_slot(self(i, j), "S"))
        if kind == "ns":
            return (i - 1, j, _arm_slot(self(i - 1, j), "E")), (i, j, _arm_slot(self(i, j), "W"))
        slots = _diag_slots(self(i, j))
        if slots is None:
            return None
        return (i, j, slots[0]), (i, j, slots[1])

    def face_cycle(self, i: int, j: int) -> list[tuple]:
        """Edge keys around face ``(i, j)`` counter-clockwise, starting with the east side."""
        out = [("ew", i, j)]
        if self(i, j) is Glyph.MAIN:
            out.append(("dg", i, j))
        out.append(("ns", i, j))
        if self(i - 1, j) is Glyph.ANTI:
            out.append(("dg", i - 1, j))
        out.append(("ew", i - 1, j))
        if self(i - 1, j - 1) is Glyph.MAIN:
            out.append(("dg", i - 1, j - 1))
        out.append(("ns", i, j - 1))
        if self(i, j - 1) is Glyph.ANTI:
            out.append(("dg", i, j - 1))
        return out

    def vertex_edges(self, vkey) -> list[tuple]:
        """All edge keys of the infinite graph at vertex ``vkey``."""
        bi, bj, slot = vkey
        kind = self(bi, bj)
        out = []
        arms = {"E": ("ns", bi + 1, bj), "N": ("ew", bi, bj + 1), "W": ("ns", bi, bj), "S": ("ew", bi, bj)}
        for arm, key in arms.items():
            if _arm_slot(kind, arm) == slot:
                out.append(key)
        if kind is not Glyph.CROSS:
            out.append(("dg", bi, bj))
        return out


def edge_label(h, key) -> EdgeLabel | None:
    """The label alpha(e) of a weighted edge; ``None`` for wrench diagonals."""
    kind, i, j = key
    if kind == "dg":
        return None
    if kind == "ew":
        n1, n2 = h(i + 1, j), h(i, j)
        if n1 > n2:
            return EdgeLabel(i + 1 + n2, j, "a")
        return EdgeLabel(i + 1 - n2, j, "c")
    n1, n2 = h(i, j + 1), h(i, j)
    if n1 > n2:
        return EdgeLabel(i, j + 1 + n2, "b")
    return EdgeLabel(i, j + 1 - n2, "d")


def vertex_position(vkey) -> tuple[int, int]:
    bi, bj, slot = vkey
    dx, dy = SLOT_OFFSET[slot]
    return 4 * bi + 2 + dx, 4 * bj + 2 + dy


# ---------------------------------------------------------------------------
# graph container


@dataclass(frozen=True)
class GEdge:
    key: object
    u: int
    v: int
    label: Var | None = None

    @property
    def weighted(self) -> bool:
        return self.label is not None


@dataclass(frozen=True)
class GFace:
    key: object
    var: Var | None
    closed: bool
    edges: tuple[int, ...]
    height: int | None = None


@dataclass(frozen=True, eq=False)
class GraphWithOpenFaces:
    vertex_keys: tuple
    positions: tuple
    colors: tuple
    edges: tuple
    faces: tuple = ()
    apex: LatticePoint | None = None
    h: HeightFunction | None = field(default=None, repr=False)

    @cached_property
    def vertex_index(self) -> dict:
        return {k: n for n, k in enumerate(self.vertex_keys)}

    @cached_property
    def edge_index(self) -> dict:
        return {e.key: n for n, e in enumerate(self.edges)}

    @cached_property
    def face_index(self) -> dict:
        return {f.key: n for n, f in enumerate(self.faces)}

    @cached_property
    def incidence(self) -> tuple:
        inc = [[] for _ in self.vertex_keys]
        for n, e in enumerate(self.edges):
            inc[e.u].append(n)
            inc[e.v].append(n)
        return tuple(tuple(v) for v in inc)

    @property
    def closed_faces(self) -> list[GFace]:
        return [f for f in self.faces if f.closed]

    @property
    def open_faces(self) -> list[GFace]:
        return [f for f in self.faces if not f.closed]

    def face(self, key) -> GFace:
        return self.faces[self.face_index[key]]

    def edge(self, key) -> GEdge:
        return self.edges[self.edge_index[key]]

    def other(self, e: int, v: int) -> int:
        ed = self.edges[e]
        return ed.v if ed.u == v else ed.u

    def __len__(self) -> int:
        return len(self.vertex_keys)

    def induced(self, keys: Iterable) -> "GraphWithOpenFaces":
        """Induced subgraph on a set of vertex keys; faces are dropped."""
        keep = sorted(set(keys), key=self.vertex_index.__getitem__)
        idx = {k: n for n, k in enumerate(keep)}
        old = self.vertex_index
        edges = []
        for e in self.edges:
            ku, kv = self.vertex_keys[e.u], self.vertex_keys[e.v]
            if ku in idx and kv in idx:
                edges.append(GEdge(e.key, idx[ku], idx[kv], e.label))
        return GraphWithOpenFaces(
            tuple(keep),
            tuple(self.positions[old[k]] for k in keep),
            tuple(self.colors[old[k]] for k in keep),
            tuple(edges),
            (),
            self.apex,
            self.h,
        )


def two_color(n: int, edges: Iterable[tuple[int, int]], root: int = 0, root_color: int = BLACK) -> list[int]:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    color = [-1] * n
    order = [root] + [v for v in range(n) if v != root] if n else []
    for start in order:
        if color[start] != -1:
            continue
        color[start] = root_color if start == root else BLACK
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    raise GraphInvariantError("graph is not bipartite")
    return color


def _assemble(h, glyphs: _Glyphs, edge_keys: list, face_specs: list, apex) -> GraphWithOpenFaces:
    """Build the container from edge keys and ``(face, closed, cycle)`` specs."""
    vset = set()
    ends = {}
    for key in edge_keys:
        a, b = glyphs.endpoints(key)
        ends[key] = (a, b)
        vset.add(a)
        vset.add(b)
    vkeys = sorted(vset)
    vidx = {k: n for n, k in enumerate(vkeys)}
    edges = []
    for key in sorted(edge_keys, key=_edge_sort_key):
        a, b = ends[key]
        u, v = sorted((vidx[a], vidx[b]))
        lab = edge_label(h, key)
        edges.append(GEdge(key, u, v, None if lab is None else edge(lab.q, lab.i, lab.j)))
    eidx = {e.key: n for n, e in enumerate(edges)}
    faces = []
    root = 0
    for fkey, closed, cyc in sorted(face_specs, key=lambda s: s[0]):
        faces.append(GFace(fkey, x(*fkey), closed, tuple(eidx[k] for k in cyc), h(*fkey)))
    closed_list = [f for f in faces if f.closed]
    if closed_list:
        first = closed_list[0]
        root = min((edges[e].u for e in first.edges))
    colors = two_color(len(vkeys), [(e.u, e.v) for e in edges], root)
    return GraphWithOpenFaces(
        tuple(vkeys),
        tuple(vertex_position(k) for k in vkeys),
        tuple(colors),
        tuple(edges),
        tuple(faces),
        apex,
        h,
    )


def _edge_sort_key(key):
    kind, i, j = key
    return (i, j, kind)


def build_subgraph(h: HeightFunction, apex) -> GraphWithOpenFaces:
    """The graph with open faces G(n0, i0, j0)."""
    apex = LatticePoint(*apex).check()
    if apex.n <= h(apex.i, apex.j):
        raise ValueError(f"apex {tuple(apex)} is not above the surface")
    glyphs = _Glyphs(h)
    closed = closed_faces(h, apex)
    closed_set = set(closed)
    edge_set = set()
    specs = []
    for f in closed:
        cyc = glyphs.face_cycle(*f)
        edge_set.update(cyc)
        specs.append((f, True, cyc))
    candidates = set()
    for i, j in closed:
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                g = (i + di, j + dj)
                if g not in closed_set:
                    candidates.add(g)
    for f in sorted(candidates):
        cyc = glyphs.face_cycle(*f)
        inside = [k in edge_set for k in cyc]
        if not any(inside):
            continue
        if all(inside):
            raise GraphInvariantError(f"face {f} is surrounded by G but is not closed")
        # rotate so the run of G edges is contiguous from position 0
        start = next(s for s in range(len(cyc)) if inside[s] and not inside[s - 1])
        rot = cyc[start:] + cyc[:start]
        run = [k for k in rot if k in edge_set]
        if rot[: len(run)] != run:
            raise GraphInvariantError(f"open face {f} meets G in more than one path")
        specs.append((f, False, run))
    return _assemble(h, glyphs, sorted(edge_set, key=_edge_sort_key), specs, apex)


def label_edges(G: GraphWithOpenFaces) -> dict:
    out = {}
    for e in G.edges:
        if e.label is not None:
            out[e.key] = EdgeLabel(e.label.i, e.label.j, e.label.q)
    if len(set(out.values())) != len(out):
        raise GraphInvariantError("edge labelling is not injective")
    return out


# ---------------------------------------------------------------------------
# windows of the infinite graph


def window_graph(h, window: tuple[int, int, int, int], apex=None) -> GraphWithOpenFaces:
    """All vertices of blocks ``bi0..bi1`` x ``bj0..bj1`` and the edges between them.

    Faces whose whole boundary lies in the window are recorded as closed faces.
    """
    bi0, bi1, bj0, bj1 = window
    glyphs = _Glyphs(h)
    edge_set = []
    for bi in range(bi0, bi1 + 1):
        for bj in range(bj0, bj1 + 1):
            if glyphs(bi, bj) is not Glyph.CROSS:
                edge_set.append(("dg", bi, bj))
            if bi + 1 <= bi1:
                edge_set.append(("ns", bi + 1, bj))
            if bj + 1 <= bj1:
                edge_set.append(("ew", bi, bj + 1))
    present = set(edge_set)
    specs = []
    for i in range(bi0 + 1, bi1 + 1):
        for j in range(bj0 + 1, bj1 + 1):
            cyc = glyphs.face_cycle(i, j)
            if all(k in present for k in cyc):
                specs.append(((i, j), True, cyc))
    G = _assemble(h, glyphs, edge_set, specs, apex)
    return G


def completion_window(h: HeightFunction, apex, margin: int = 2) -> tuple[HeightFunction, tuple[int, int, int, int]]:
    """The truncated height and a block window containing G(apex) plus ``margin`` blocks."""
    apex = LatticePoint(*apex).check()
    ht = truncate_height(h, apex)
    faces = closed_faces(h, apex) or [(apex.i, apex.j)]
    i_lo = min(i for i, _ in faces) - 1 - margin
    i_hi = max(i for i, _ in faces) + margin
    j_lo = min(j for _, j in faces) - 1 - margin
    j_hi = max(j for _, j in faces) + margin
    return ht, (i_lo, i_hi, j_lo, j_hi)


def standard_outer_matching(h: HeightFunction, apex, window=None) -> frozenset:
    """Edge keys of M_out inside the window: every wrench diagonal not belonging to G."""
    apex = LatticePoint(*apex).check()
    ht, default = completion_window(h, apex)
    window = window or default
    W = window_graph(ht, window, apex)
    g_edges = set()
    gverts = set()
    if apex.n > h(apex.i, apex.j):
        G = build_subgraph(h, apex)
        g_edges = {e.key for e in G.edges}
        try:
            vmap = embed_vertices(G, W)
        except NotASubgraph as exc:
            raise ValueError(f"window does not contain G: {exc}") from None
        gverts = {W.vertex_keys[v] for v in vmap.values()}
    out = set()
    for e in W.edges:
        if e.label is None and e.key not in g_edges:
            out.add(e.key)
    covered = set()
    for k in out:
        e = W.edge(k)
        covered.add(W.vertex_keys[e.u])
        covered.add(W.vertex_keys[e.v])
    for k in W.vertex_keys:
        if k in gverts:
            continue
        if k not in covered:
            raise GraphInvariantError(f"outer vertex {k} is not covered by a wrench diagonal")
    for k in out:
        e = W.edge(k)
        if W.vertex_keys[e.u] in gverts or W.vertex_keys[e.v] in gverts:
            raise GraphInvariantError(f"outer diagonal {k} touches G")
    return frozenset(out)


def embed_vertices(G: GraphWithOpenFaces, W: GraphWithOpenFaces) -> dict:
    """Map vertices of G into a window of the (truncated) infinite graph.

    Truncation can turn a wrench whose other vertex is unused by G into a
    cross, so vertices are matched through the global edge keys they carry
    rather than by slot.
    """
    vmap = {}
    for n, e in enumerate(G.edges):
        if e.key not in W.edge_index:
            raise NotASubgraph(f"edge {e.key} missing")
        we = W.edge(e.key)
        pairs = [(e.u, we.u), (e.v, we.v)]
        if e.label is None:
            swap = G.positions[e.u] != W.positions[we.u]
        else:
            swap = _block(G, e.u) != _block(W, we.u)
        if swap:
            pairs = [(e.u, we.v), (e.v, we.u)]
        for a, b in pairs:
            if vmap.setdefault(a, b) != b:
                raise NotASubgraph(f"vertex {G.vertex_keys[a]} maps inconsistently")
    if len(set(vmap.values())) != len(vmap):
        raise NotASubgraph("vertex map is not injective")
    return vmap


def _block(G, v):
    return G.vertex_keys[v][:2]


# ---------------------------------------------------------------------------
# boundary structure


@dataclass
class BoundaryPath:
    quadrant: tuple[int, int]
    vertices: list
    kinds: list[str]

    @property
    def odd(self) -> bool:
        return len(self.vertices) % 2 == 1


def outer_loop(G: GraphWithOpenFaces) -> list[int]:
    """Vertices of the boundary loop S in cyclic order."""
    closed_edges = {}
    for f in G.closed_faces:
        for e in f.edges:
            closed_edges[e] = closed_edges.get(e, 0) + 1
    loop_edges = [e for e, c in closed_edges.items() if c == 1]
    adj = {}
    for e in loop_edges:
        ed = G.edges[e]
        adj.setdefault(ed.u, []).append(ed.v)
        adj.setdefault(ed.v, []).append(ed.u)
    if any(len(v) != 2 for v in adj.values()):
        raise GraphInvariantError("boundary of G is not a simple loop")
    start = min(adj)
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        step = nxt[0] if prev is not None else min(adj[cur], key=lambda w: _angle_key(G, start, w))
        if step == start:
            break
        order.append(step)
        prev, cur = cur, step
        if len(order) > len(adj):
            raise GraphInvariantError("boundary walk did not close")
    if len(order) != len(adj):
        raise GraphInvariantError("boundary of G has several components")
    return order


def _angle_key(G, a, b):
    import math

    (x0, y0), (x1, y1) = G.positions[a], G.positions[b]
    return math.atan2(y1 - y0, x1 - x0)


def boundary_paths(G: GraphWithOpenFaces) -> list[BoundaryPath]:
    """Split S by the lines through the apex face and classify each vertex.

    ``"in"``: every neighbour in the infinite graph is in G; ``"out"``: no
    neighbour lies strictly inside S; ``"both"`` when both hold.
    """
    loop = outer_loop(G)
    on_loop = set(loop)
    glyphs = _Glyphs(G.h)
    gset = set(G.vertex_keys)
    interior = {G.vertex_keys[v] for v in range(len(G)) if v not in on_loop}
    cx, cy = 4 * G.apex.i, 4 * G.apex.j

    def quadrant(v):
        px, py = G.positions[v]
        return (1 if px > cx else -1, 1 if py > cy else -1)

    def kind(v):
        key = G.vertex_keys[v]
        nbrs = []
        for ek in glyphs.vertex_edges(key):
            a, b = glyphs.endpoints(ek)
            nbrs.append(b if a == key else a)
        inward = all(n in gset for n in nbrs)
        outward = all(n not in interior for n in nbrs)
        if inward and outward:
            return "both"
        if inward:
            return "in"
        if outward:
            return "out"
        return "neither"

    # rotate so the walk starts at a quadrant change
    qs = [quadrant(v) for v in loop]
    cut = next((k for k in range(len(loop)) if qs[k] != qs[k - 1]), 0)
    loop = loop[cut:] + loop[:cut]
    paths: list[BoundaryPath] = []
    for v in loop:
        q = quadrant(v)
        if not paths or paths[-1].quadrant != q:
            paths.append(BoundaryPath(q, [], []))
        paths[-1].vertices.append(G.vertex_keys[v])
        paths[-1].kinds.append(kind(v))
    return paths


def check_boundary(paths: list[BoundaryPath]) -> list[str]:
    problems = []
    if len(paths) != 4 or len({p.quadrant for p in paths}) != 4:
        problems.append(f"expected four quadrant paths, got {len(paths)}")
    for p in paths:
        if not p.odd:
            problems.append(f"path {p.quadrant} has {len(p.vertices)} vertices")
        for t, k in enumerate(p.kinds):
            want = "out" if t % 2 == 0 else "in"
            if k not in (want, "both"):
                problems.append(f"path {p.quadrant} vertex {t} is {k}, expected {want}")
    return problems


# ---------------------------------------------------------------------------
# inclusion and invariants


@dataclass
class Inclusion:
    vertices: dict
    edges: dict
    faces: dict


def subgraph_inclusion(inner: GraphWithOpenFaces, outer: GraphWithOpenFaces) -> Inclusion:
    """Embed ``inner`` into ``outer`` by global keys; raise NotASubgraph on failure."""
    if inner.h is not outer.h and inner.h != outer.h:
        raise NotASubgraph("graphs come from different height functions")
    vmap, emap, fmap = {}, {}, {}
    for n, k in enumerate(inner.vertex_keys):
        if k not in outer.vertex_index:
            raise NotASubgraph(f"vertex {k} missing")
        vmap[n] = outer.vertex_index[k]
    for n, e in enumerate(inner.edges):
        if e.key not in outer.edge_index:
            raise NotASubgraph(f"edge {e.key} missing")
        emap[n] = outer.edge_index[e.key]
    for n, f in enumerate(inner.faces):
        if f.key not in outer.face_index:
            raise NotASubgraph(f"face {f.key} missing")
        of = outer.face(f.key)
        if f.closed and not of.closed:
            raise NotASubgraph(f"closed face {f.key} is open in the outer graph")
        fmap[n] = outer.face_index[f.key]
    return Inclusion(vmap, emap, fmap)


def check_invariants(G: GraphWithOpenFaces) -> list[str]:
    """Structural facts every crosses-and-wrenches graph must satisfy."""
    problems = []
    h, apex = G.h, G.apex
    closed = {f.key for f in G.closed_faces}
    for f in G.closed_faces:
        if len(f.edges) not in (4, 6, 8):
            problems.append(f"closed face {f.key} has {len(f.edges)} sides")
    for e in G.edges:
        if G.colors[e.u] == G.colors[e.v]:
            problems.append(f"edge {e.key} joins equal colours")
    # connectivity
    seen = {0} if len(G) else set()
    stack = list(seen)
    while stack:
        v = stack.pop()
        for e in G.incidence[v]:
            w = G.other(e, v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(G):
        problems.append("graph is disconnected")
    labels = [e.label for e in G.edges if e.label is not None]
    if len(set(labels)) != len(labels):
        problems.append("alpha is not injective")
    used = set()
    for e in G.edges:
        if e.label is None:
            if e.u in used or e.v in used:
                problems.append("unweighted edges share a vertex")
            used.update((e.u, e.v))
    if apex is not None:
        i0, j0 = apex.i, apex.j
        for i, j in closed:
            for a in range(min(i, i0), max(i, i0) + 1):
                for b in range(min(j, j0), max(j, j0) + 1):
                    if (a, b) not in closed:
                        problems.append(f"staircase broken at {(a, b)}")
        expect = set(closed_faces(h, apex))
        if expect != closed:
            problems.append("closed faces differ from {h < p}")
        for f in G.open_faces:
            if h(*f.key) != p_value(apex, f.key):
                problems.append(f"open face {f.key} is not on the cone boundary")
    # no edge between two open faces
    sides: dict = {}
    for f in G.faces:
        for e in f.edges:
            sides.setdefault(e, []).append(f)
    for e, fs in sides.items():
        if len(fs) == 2 and not fs[0].closed and not fs[1].closed:
            problems.append(f"edge {G.edges[e].key} separates two open faces")
        if not any(f.closed for f in fs):
            problems.append(f"edge {G.edges[e].key} borders no closed face")
    # diagonal adjacency rule
    face_edges = {f.key: set(f.edges) for f in G.faces}
    for (i, j) in closed:
        for di, dj in ((1, 1), (1, -1)):
            g = (i + di, j + dj)
            if g in face_edges:
                share = bool(face_edges[(i, j)] & face_edges[g])
                rule = h(i, j + dj) != h(i + di, j)
                if share != rule:
                    problems.append(f"diagonal adjacency wrong between {(i, j)} and {g}")
    return problems
