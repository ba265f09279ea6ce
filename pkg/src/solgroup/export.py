"""Text exports: Graphviz DOT and TikZ."""
from __future__ import annotations

import math

from .graphs import Graph
from .picture import Picture


def _dot_id(x) -> str:
    s = str(x).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def picture_to_dot(P: Picture, name: str = "picture") -> str:
    """Vertices show ``row / k``, edges ``column : a``, drawn source to target."""
    S = P.system
    lines = [f"digraph {_dot_id(name)} {{", "  node [shape=circle];"]
    for v in P.vertices:
        label = f"{S.row_name(P.hV[v])} / {P.k[v]}"
        lines.append(f"  {_dot_id(v)} [label={_dot_id(label)}];")
    for e in P.edges:
        label = f"{S.col_name(P.hE[e])} : {P.a[e]}"
        lines.append(f"  {_dot_id(P.source(e))} -> {_dot_id(P.target(e))} [label={_dot_id(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(G: Graph, name: str = "G") -> str:
    directed = G.src is not None
    arrow = "->" if directed else "--"
    lines = [f"{'digraph' if directed else 'graph'} {_dot_id(name)} {{"]
    for v in G.vertices:
        lines.append(f"  {_dot_id(v)};")
    for e, (u, w) in G.ends.items():
        if directed:
            u, w = G.source(e), G.target(e)
        lines.append(f"  {_dot_id(u)} {arrow} {_dot_id(w)} [label={_dot_id(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_TEX = {
    "\\": r"\textbackslash{}", "{": r"\{", "}": r"\}", "$": r"\$", "&": r"\&", "#": r"\#",
    "%": r"\%", "_": r"\_", "^": r"\^{}", "~": r"\~{}",
}


def tex_escape(s) -> str:
    return "".join(_TEX.get(c, c) for c in str(s))


def _circle(items, radius=3.0):
    n = max(len(items), 1)
    return {v: (radius * math.cos(2 * math.pi * i / n), radius * math.sin(2 * math.pi * i / n))
            for i, v in enumerate(items)}


def picture_to_tikz(P: Picture) -> str:
    """Vertices on a circle (pictures carry no coordinates); labels escaped."""
    S = P.system
    pos = _circle(P.vertices)
    ids = {v: f"v{i}" for i, v in enumerate(P.vertices)}
    out = [r"\begin{tikzpicture}[>=stealth, every node/.style={circle, draw, inner sep=1pt}]"]
    for v in P.vertices:
        x, y = pos[v]
        out.append(rf"  \node ({ids[v]}) at ({x:.3f},{y:.3f}) {{{tex_escape(S.row_name(P.hV[v]))}/{P.k[v]}}};")
    for e in P.edges:
        s, t = ids[P.source(e)], ids[P.target(e)]
        lab = tex_escape(f"{S.col_name(P.hE[e])}:{P.a[e]}")
        bend = "[->, loop above]" if s == t else "[->]"
        out.append(rf"  \draw{bend} ({s}) to node[draw=none, fill=white, font=\tiny] {{{lab}}} ({t});")
    out.append(r"\end{tikzpicture}")
    return "\n".join(out) + "\n"


def graph_to_tikz(G: Graph) -> str:
    pos = _circle(list(G.vertices))
    ids = {v: f"v{i}" for i, v in enumerate(G.vertices)}
    arrow = "->" if G.src is not None else "-"
    out = [r"\begin{tikzpicture}[>=stealth, every node/.style={circle, draw, inner sep=1pt}]"]
    for v in G.vertices:
        x, y = pos[v]
        out.append(rf"  \node ({ids[v]}) at ({x:.3f},{y:.3f}) {{{tex_escape(v)}}};")
    for e, (u, w) in G.ends.items():
        if G.src is not None:
            u, w = G.source(e), G.target(e)
        out.append(rf"  \draw[{arrow}] ({ids[u]}) -- ({ids[w]});")
    out.append(r"\end{tikzpicture}")
    return "\n".join(out) + "\n"
