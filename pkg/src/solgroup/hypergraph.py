"""Hypergraphs H(A), minimum degree and Berge girth."""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence

from .zmod import INF, Modulus


def _key(x):
    # deterministic order for mixed int/str ids
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: tuple
    incidence: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        vs, es = set(self.vertices), set(self.edges)
        if len(vs) != len(self.vertices) or len(es) != len(self.edges):
            raise ValueError("duplicate vertex or edge id")
        object.__setattr__(self, "incidence", frozenset(self.incidence))
        for v, e in self.incidence:
            if v not in vs or e not in es:
                raise ValueError(f"incidence ({v!r}, {e!r}) references an unknown id")

    @classmethod
    def from_graph(cls, vertices: Iterable[Hashable], edges: dict) -> "Hypergraph":
        """2-uniform hypergraph of a multigraph given as ``{edge: (u, v)}``."""
        inc = {(u, e) for e, ends in edges.items() for u in ends}
        return cls(tuple(vertices), tuple(edges), frozenset(inc))

    def incident_edges(self, v) -> list:
        return sorted((e for (w, e) in self.incidence if w == v), key=_key)

    def edge_vertices(self, e) -> list:
        return sorted((v for (v, f) in self.incidence if f == e), key=_key)

    def degree(self, v) -> int:
        return sum(1 for (w, _) in self.incidence if w == v)


def from_matrix(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Hypergraph:
    """Vertex i is incident to edge j iff ``A[i][j] != 0``."""
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    inc = frozenset((i, j) for i in range(m) for j in range(n) if A[i][j] != 0)
    return Hypergraph(tuple(range(m)), tuple(range(n)), inc)


def min_degree(H: Hypergraph) -> int:
    if not H.vertices:
        raise ValueError("hypergraph has no vertices")
    deg = dict.fromkeys(H.vertices, 0)
    for v, _ in H.incidence:
        deg[v] += 1
    return min(deg.values())


@dataclass(frozen=True)
class GirthReport:
    girth: object  # int >= 2, or INF when there is no Berge cycle
    witness: Optional[tuple] = None  # (v1, e1, v2, ..., vk, ek, v1)

    @property
    def is_finite(self) -> bool:
        return self.girth is not INF


def is_berge_cycle(H: Hypergraph, seq: Sequence) -> bool:
    """Check ``(v1, e1, ..., vk, ek, v1)``: distinct vertices and edges, k >= 2."""
    if len(seq) < 5 or len(seq) % 2 == 0 or seq[0] != seq[-1]:
        return False
    vs, es = list(seq[0:-1:2]), list(seq[1::2])
    if len(set(vs)) != len(vs) or len(set(es)) != len(es):
        return False
    for i, e in enumerate(es):
        if (vs[i], e) not in H.incidence or (seq[2 * i + 2], e) not in H.incidence:
            return False
    return True


def _incidence_graph(H: Hypergraph) -> dict:
    adj = {("v", v): [] for v in H.vertices}
    adj.update({("e", e): [] for e in H.edges})
    for v, e in H.incidence:
        adj[("v", v)].append(("e", e))
        adj[("e", e)].append(("v", v))
    for nbrs in adj.values():
        nbrs.sort(key=lambda node: _key(node[1]))
    return adj


def berge_girth(H: Hypergraph) -> GirthReport:
    """Berge girth as half the girth of the vertex-edge incidence graph.

    BFS from every node (vertices before edges, ids ascending); the first
    strictly shorter cycle found is kept, which makes the witness
    deterministic.
    """
    adj = _incidence_graph(H)
    order = sorted(adj, key=lambda node: (node[0] != "v", _key(node[1])))
    best_len, best_cycle = None, None
    for s in order:
        dist, parent = {s: 0}, {s: None}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best_len is not None and 2 * dist[u] + 1 >= best_len:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u] and dist[w] >= dist[u]:
                    length = dist[u] + dist[w] + 1
                    if best_len is None or length < best_len:
                        cyc = _close_walk(parent, u, w)
                        if cyc is not None:
                            best_len, best_cycle = len(cyc), cyc
    if best_len is None:
        return GirthReport(INF, None)
    return GirthReport(best_len // 2, _to_berge(best_cycle))


def _close_walk(parent, u, w):
    """Cycle through the BFS tree paths to u and w plus the edge u-w, if simple."""
    pu, pw = [u], [w]
    while parent[pu[-1]] is not None:
        pu.append(parent[pu[-1]])
    while parent[pw[-1]] is not None:
        pw.append(parent[pw[-1]])
    # strip the common tail (the shared path to the root)
    while len(pu) > 1 and len(pw) > 1 and pu[-2] == pw[-2]:
        pu.pop()
        pw.pop()
    if pu[-1] != pw[-1]:
        return None
    cyc = list(reversed(pu)) + pw[:-1]  # root ... u, w ... (back to root)
    if len(set(cyc)) != len(cyc):
        return None
    return cyc


def _to_berge(cyc: list) -> tuple:
    i = next(i for i, node in enumerate(cyc) if node[0] == "v")
    cyc = cyc[i:] + cyc[:i]
    return tuple(node[1] for node in cyc) + (cyc[0][1],)


def brute_girth(H: Hypergraph, cap: Optional[int] = None) -> GirthReport:
    """Exhaustive girth for small hypergraphs.

    Searches vertex sequences ``v1..vk`` of distinct vertices whose
    consecutive pairs (cyclically) share an edge, and such that the shared
    edges can be chosen with at least two different edges.  A minimal such
    sequence is always a Berge cycle, so no Berge-specific search is used.
    """
    if cap is None:
        cap = len(H.vertices)
    verts = sorted(H.vertices, key=_key)
    inc = {v: set(H.incident_edges(v)) for v in verts}

    def common(u, v):
        return inc[u] & inc[v]

    for k in range(2, cap + 1):
        for seq in itertools.permutations(verts, k):
            if seq[0] != min(seq, key=_key):
                continue
            sets = [common(seq[i], seq[(i + 1) % k]) for i in range(k)]
            if not all(sets) or len(set().union(*sets)) < 2:
                continue
            for choice in itertools.product(*(sorted(s, key=_key) for s in sets)):
                if len(set(choice)) >= 2:
                    witness = tuple(itertools.chain.from_iterable(zip(seq, choice))) + (seq[0],)
                    return GirthReport(k, witness)
    return GirthReport(INF, None)


class TheoremHypothesis(enum.Enum):
    QUALIFIES_44 = "QUALIFIES_44"
    QUALIFIES_36 = "QUALIFIES_36"
    QUALIFIES_BOTH = "QUALIFIES_BOTH"
    NO = "NO"

    @property
    def qualifies(self) -> bool:
        return self is not TheoremHypothesis.NO


def _at_least(girth, g: int) -> bool:
    return girth is INF or girth >= g


def theorem_hypothesis(H: Hypergraph) -> TheoremHypothesis:
    """Which of the (min degree, girth) conditions (4, 4) and (3, 6) hold.

    (6, 3) is deliberately not accepted.
    """
    d = min_degree(H) if H.vertices else 0
    g = berge_girth(H).girth
    q44 = d >= 4 and _at_least(g, 4)
    q36 = d >= 3 and _at_least(g, 6)
    if q44 and q36:
        return TheoremHypothesis.QUALIFIES_BOTH
    if q44:
        return TheoremHypothesis.QUALIFIES_44
    if q36:
        return TheoremHypothesis.QUALIFIES_36
    return TheoremHypothesis.NO


__all__ = [
    "Hypergraph", "GirthReport", "TheoremHypothesis", "from_matrix", "min_degree",
    "berge_girth", "brute_girth", "is_berge_cycle", "theorem_hypothesis", "Modulus",
]
