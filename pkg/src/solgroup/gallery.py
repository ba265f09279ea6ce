"""Built-in instances: K33, K5, D17, Heawood and K44.

K33 and D17 ship with hand-transcribed pictures (``data/*.json``): each
picture vertex carries the graph vertex it maps to and a ``blue`` flag.
Blue vertices see only two of their image's neighbours (each twice), get
``k = 0``, and the edges joining two blue vertices carry ``a = -1`` so
that the two same-labelled edges at a blue vertex cancel.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional

from . import planemap
from .graphs import CoverMap, Graph, incidence_system, indicator
from .picture import Picture

NAMES = ("K33", "K5", "D17", "HEAWOOD", "K44")


def k33() -> Graph:
    return Graph.from_edges([(s, t) for s in "abc" for t in "123"], vertices=list("123abc"))


def k5() -> Graph:
    return Graph.from_edges(list(itertools.combinations("12345", 2)))


def k44() -> Graph:
    return Graph.from_edges([(s, t) for s in "abcd" for t in "1234"], vertices=list("1234abcd"))


def d17() -> Graph:
    """Two K4's on 1234 and abcd joined by the matching 1a, 2b, 3c, 4d."""
    edges = list(itertools.combinations("1234", 2)) + list(itertools.combinations("abcd", 2))
    edges += [("1", "a"), ("2", "b"), ("3", "c"), ("4", "d")]
    return Graph.from_edges(edges, vertices=list("1234abcd"))


def heawood() -> Graph:
    """14-cycle plus chords i -- i+5 from every even i."""
    edges = [(i, (i + 1) % 14) for i in range(14)] + [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return Graph.from_edges([(str(u), str(v)) for u, v in edges], vertices=[str(i) for i in range(14)])


def k4() -> Graph:
    return Graph.from_edges(list(itertools.combinations("1234", 2)))


def cycle(n: int) -> Graph:
    return Graph.from_edges([(str(i), str((i + 1) % n)) for i in range(n)], vertices=[str(i) for i in range(n)])


def petersen() -> Graph:
    outer = [(str(i), str((i + 1) % 5)) for i in range(5)]
    spokes = [(str(i), str(i + 5)) for i in range(5)]
    inner = [(str(5 + i), str(5 + (i + 2) % 5)) for i in range(5)]
    return Graph.from_edges(outer + spokes + inner, vertices=[str(i) for i in range(10)])


K4_ROTATION = {  # K4 drawn as a triangle 1,2,3 around the centre 4
    "1": ["2", "4", "3"], "2": ["3", "4", "1"], "3": ["1", "4", "2"], "4": ["1", "2", "3"],
}


def load_drawing(name: str) -> dict:
    with resources.files("solgroup").joinpath("data", name).open() as fh:
        return json.load(fh)


def picture_from_drawing(G: Graph, drawing: Mapping, b: Mapping, p) -> Picture:
    """Picture on a drawn graph whose vertices are labelled by vertices of G."""
    M, _ = planemap.from_neighbor_rotation(drawing["rotation"])
    info = drawing["vertices"]
    label = {v: info[v]["label"] for v in info}
    blue = {v for v in info if info[v].get("blue")}
    G = G.oriented()
    S = incidence_system(G, b, p)
    col = {e: j for j, e in enumerate(G.ends)}
    row = {v: i for i, v in enumerate(G.vertices)}
    direction, hE, a = {}, {}, {}
    for e in M.edges:
        d1, d2 = M.edge_darts(e)
        u, v = M.origin[d1], M.origin[d2]
        ge = G.edge_between(label[u], label[v])
        hE[e] = col[ge]
        direction[e] = d1 if label[u] == G.source(ge) else d2
        a[e] = -1 if (u in blue and v in blue) else 1
    hV = {v: row[label[v]] for v in M.rotation}
    k = {v: 0 if v in blue else int(b[label[v]]) for v in M.rotation}
    return Picture(S, M, direction, hV, hE, a, k)


def local_bijectivity_failures(G: Graph, drawing: Mapping) -> list:
    """Drawn vertices whose neighbour labels are not a bijection onto the neighbours of their image."""
    M, _ = planemap.from_neighbor_rotation(drawing["rotation"])
    label = {v: i["label"] for v, i in drawing["vertices"].items()}
    bad = []
    for v in M.rotation:
        seen = sorted(str(label[M.origin[M.pairing[d]]]) for d in M.rotation[v])
        if seen != sorted(str(w) for w in G.neighbors(label[v])):
            bad.append(v)
    return bad


@dataclass
class Bundle:
    name: str
    graph: Graph
    colouring: dict
    drawing: Optional[dict] = None
    notes: list = field(default_factory=list)

    def picture(self, b: Optional[Mapping] = None, p="inf") -> Picture:
        if self.drawing is None:
            raise ValueError(f"{self.name} has no shipped picture")
        return picture_from_drawing(self.graph, self.drawing, self.colouring if b is None else b, p)

    def system(self, b: Optional[Mapping] = None, p="inf"):
        return incidence_system(self.graph, self.colouring if b is None else b, p)

    def cover(self) -> Optional[CoverMap]:
        """The drawn picture as a cover (only when every vertex is a genuine cover vertex)."""
        if self.drawing is None or any(i.get("blue") for i in self.drawing["vertices"].values()):
            return None
        M, _ = planemap.from_neighbor_rotation(self.drawing["rotation"])
        pairs = sorted({tuple(sorted(M.ends(e))) for e in M.edges})
        H = Graph.from_edges(pairs, vertices=list(self.drawing["vertices"]))
        phi = {v: i["label"] for v, i in self.drawing["vertices"].items()}
        return CoverMap(H, self.graph, phi, M)


def gallery(name: str) -> Bundle:
    key = name.upper()
    if key == "K33":
        G = k33()
        return Bundle("K33", G, indicator(G), load_drawing("k33_double_cover.json"),
                      ["magic square: incidence system of K33",
                       "picture: planar double cover, phase 2|b|"])
    if key == "K5":
        G = k5()
        return Bundle("K5", G, indicator(G), None, ["magic pentagram: incidence system of K5"])
    if key == "D17":
        G = d17()
        return Bundle("D17", G, indicator(G), load_drawing("d17_picture.json"),
                      ["no planar cover of any arity", "picture of phase 2|b| with 8 non-cover vertices"])
    if key == "HEAWOOD":
        G = heawood()
        return Bundle("HEAWOOD", G, indicator(G), None, ["3-regular, girth 6"])
    if key == "K44":
        G = k44()
        return Bundle("K44", G, indicator(G), None, ["4-regular, girth 4"])
    raise KeyError(f"unknown gallery instance {name!r}; choose from {', '.join(NAMES)}")
