"""Text, JSON, DOT and SVG output for graphs with open faces and their matchings."""

from __future__ import annotations

import json
from xml.sax.saxutils import escape

from .graph import WHITE, GraphWithOpenFaces
from .laurent import LaurentPoly, to_json, to_text
from .matching import matching_edge_labels

SCALE = 12
PAD = 3


def _key(k) -> str:
    return json.dumps(k, separators=(",", ":"))


def graph_to_json(G: GraphWithOpenFaces, M=None) -> dict:
    out = {
        "apex": list(G.apex) if G.apex is not None else None,
        "vertices": [
            {"key": list(k), "pos": list(G.positions[n]), "color": "white" if G.colors[n] == WHITE else "black"}
            for n, k in enumerate(G.vertex_keys)
        ],
        "edges": [
            {"key": list(e.key), "u": e.u, "v": e.v, "label": str(e.label) if e.label is not None else None}
            for e in G.edges
        ],
        "faces": [
            {"key": list(f.key), "closed": f.closed, "height": f.height, "edges": list(f.edges)}
            for f in G.faces
        ],
    }
    if M is not None:
        out["matching"] = sorted(M)
    return out


def graph_to_text(G: GraphWithOpenFaces, M=None) -> str:
    lines = [
        f"apex {tuple(G.apex) if G.apex is not None else None}",
        f"vertices {len(G)}  edges {len(G.edges)}  closed faces {len(G.closed_faces)}  open faces {len(G.open_faces)}",
    ]
    for e in G.edges:
        mark = " *" if M is not None and G.edge_index[e.key] in M else ""
        lab = str(e.label) if e.label is not None else "-"
        lines.append(f"{_key(e.key)} {_key(G.vertex_keys[e.u])} {_key(G.vertex_keys[e.v])} {lab}{mark}")
    return "\n".join(lines) + "\n"


def graph_to_dot(G: GraphWithOpenFaces, M=None) -> str:
    lines = ["graph G {", "  node [shape=circle, width=0.15, label=\"\"];"]
    for n, k in enumerate(G.vertex_keys):
        x, y = G.positions[n]
        fill = "white" if G.colors[n] == WHITE else "black"
        lines.append(f'  v{n} [pos="{x},{y}!", style=filled, fillcolor={fill}, tooltip="{escape(str(k))}"];')
    for n, e in enumerate(G.edges):
        attrs = [f'label="{e.label}"'] if e.label is not None else ["style=dotted"]
        if M is not None and n in M:
            attrs.append("penwidth=3")
        lines.append(f"  v{e.u} -- v{e.v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _face_path(G: GraphWithOpenFaces, f) -> list[int]:
    """Vertices along the boundary edges of a face, in order."""
    es = [G.edges[e] for e in f.edges]
    if len(es) == 1:
        return [es[0].u, es[0].v]
    path = []
    for a, b in zip(es, es[1:]):
        shared = {a.u, a.v} & {b.u, b.v}
        path.append(next(iter(shared)))
    first = ({es[0].u, es[0].v} - {path[0]}).pop()
    last = ({es[-1].u, es[-1].v} - {path[-1]}).pop()
    return [first] + path + [last]


def graph_to_svg(G: GraphWithOpenFaces, M=None) -> str:
    xs = [p[0] for p in G.positions] + [4 * f.key[0] for f in G.faces]
    ys = [p[1] for p in G.positions] + [4 * f.key[1] for f in G.faces]
    x0, x1 = min(xs) - PAD, max(xs) + PAD
    y0, y1 = min(ys) - PAD, max(ys) + PAD

    def pt(x, y):
        return f"{(x - x0) * SCALE},{(y1 - y) * SCALE}"

    width, height = (x1 - x0) * SCALE, (y1 - y0) * SCALE
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for f in G.faces:
        verts = _face_path(G, f)
        pts = [pt(*G.positions[v]) for v in verts]
        if f.closed:
            out.append(f'<polygon points="{" ".join(pts)}" fill="#dde6f0" stroke="none"/>')
        else:
            # open faces: dashed outline through the face centre
            centre = pt(4 * f.key[0], 4 * f.key[1])
            out.append(
                f'<polyline points="{centre} {pts[0]} {" ".join(pts[1:])} {centre}" fill="none" '
                f'stroke="#888" stroke-dasharray="4,3"/>'
            )
    for n, e in enumerate(G.edges):
        a, b = pt(*G.positions[e.u]).split(","), pt(*G.positions[e.v]).split(",")
        matched = M is not None and n in M
        width_ = 4 if matched else 1.5
        colour = "#c0392b" if matched else ("#333" if e.label is not None else "#999")
        out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="{colour}" stroke-width="{width_}"/>')
    for n in range(len(G)):
        x, y = pt(*G.positions[n]).split(",")
        fill = "white" if G.colors[n] == WHITE else "black"
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="{fill}" stroke="black"/>')
    for f in G.faces:
        x, y = pt(4 * f.key[0], 4 * f.key[1]).split(",")
        out.append(f'<text x="{x}" y="{y}" font-size="9" text-anchor="middle">{escape(str(f.var))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_graph(G: GraphWithOpenFaces, fmt: str, M=None) -> str:
    if fmt == "json":
        return json.dumps(graph_to_json(G, M), indent=1) + "\n"
    if fmt == "dot":
        return graph_to_dot(G, M)
    if fmt == "svg":
        return graph_to_svg(G, M)
    return graph_to_text(G, M)


def render_poly(p: LaurentPoly, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(to_json(p)) + "\n"
    return to_text(p) + "\n"


def matching_record(G: GraphWithOpenFaces, M) -> dict:
    return {"edges": sorted(M), "labels": [str(v) for v in matching_edge_labels(G, M)]}
