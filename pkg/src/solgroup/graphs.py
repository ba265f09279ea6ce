"""Graphs, incidence systems, Z-colourings, covers and minors."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import planemap
from .hypergraph import Hypergraph
from .picture import LinearSystem, Picture
from .planemap import CombinatorialMap
from .zmod import Modulus, solve_mod


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph without loops, optionally oriented.

    ``ends[e] = (u, v)``; with an orientation, ``src[e]`` is the source.
    """

    vertices: tuple
    ends: Mapping
    src: Optional[Mapping] = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "ends", {e: tuple(uv) for e, uv in self.ends.items()})
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        for e, (u, v) in self.ends.items():
            if u not in vs or v not in vs:
                raise GraphError(f"edge {e!r} has an unknown endpoint")
            if u == v:
                raise GraphError(f"edge {e!r} is a loop")
        if self.src is not None:
            object.__setattr__(self, "src", dict(self.src))
            if set(self.src) != set(self.ends):
                raise GraphError("orientation is not total")
            for e, s in self.src.items():
                if s not in self.ends[e]:
                    raise GraphError(f"source of {e!r} is not an endpoint")

    @classmethod
    def from_edges(cls, edges: Sequence[tuple], vertices: Optional[Sequence] = None,
                   oriented: bool = True) -> "Graph":
        """Edges named ``"u-v"`` (with a numeric suffix for repeats), oriented u -> v."""
        vs = list(vertices) if vertices is not None else []
        seen = set(vs)
        ends = {}
        for u, v in edges:
            for x in (u, v):
                if x not in seen:
                    seen.add(x)
                    vs.append(x)
            name = f"{u}-{v}"
            i = 2
            while name in ends:
                name = f"{u}-{v}#{i}"
                i += 1
            ends[name] = (u, v)
        src = {e: uv[0] for e, uv in ends.items()} if oriented else None
        return cls(tuple(vs), ends, src)

    @property
    def edges(self) -> list:
        return list(self.ends)

    def source(self, e):
        return self.src[e]

    def target(self, e):
        u, v = self.ends[e]
        return v if self.src[e] == u else u

    def oriented(self) -> "Graph":
        """This graph, oriented from the first listed end when no orientation is stored."""
        if self.src is not None:
            return self
        return Graph(self.vertices, self.ends, {e: uv[0] for e, uv in self.ends.items()})

    def neighbors(self, v) -> list:
        out = []
        for u, w in self.ends.values():
            if u == v:
                out.append(w)
            elif w == v:
                out.append(u)
        return out

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def is_simple(self) -> bool:
        pairs = [frozenset(uv) for uv in self.ends.values()]
        return len(set(pairs)) == len(pairs)

    def edge_between(self, u, v):
        for e, uv in self.ends.items():
            if set(uv) == {u, v}:
                return e
        raise KeyError((u, v))

    def components(self) -> list[list]:
        adj = {v: [] for v in self.vertices}
        for u, v in self.ends.values():
            adj[u].append(v)
            adj[v].append(u)
        seen, comps = set(), []
        for s in self.vertices:
            if s in seen:
                continue
            comp, queue = [], deque([s])
            seen.add(s)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def hypergraph(self) -> Hypergraph:
        return Hypergraph.from_graph(self.vertices, self.ends)

    def to_json(self) -> dict:
        edges = []
        for e, (u, v) in self.ends.items():
            item = {"id": e, "ends": [u, v]}
            if self.src is not None:
                item["src"] = self.src[e]
            edges.append(item)
        return {"vertices": list(self.vertices), "edges": edges}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        ends, src = {}, {}
        for item in data["edges"]:
            ends[item["id"]] = tuple(item["ends"])
            if "src" in item:
                src[item["id"]] = item["src"]
        if src and len(src) != len(ends):
            raise GraphError("orientation given for only some edges")
        return cls(tuple(data["vertices"]), ends, src or None)


def incidence_matrix(G: Graph) -> list[list[int]]:
    """``+1`` where vertex i is the target of edge j, ``-1`` where it is the source."""
    if G.src is None:
        raise GraphError("incidence_matrix needs an oriented graph")
    row = {v: i for i, v in enumerate(G.vertices)}
    M = [[0] * len(G.ends) for _ in G.vertices]
    for j, e in enumerate(G.ends):
        M[row[G.target(e)]][j] = 1
        M[row[G.source(e)]][j] = -1
    return M


def colouring_vector(G: Graph, b: Mapping) -> tuple:
    missing = set(G.vertices) - set(b)
    if missing:
        raise GraphError(f"colouring misses vertices {sorted(map(str, missing))}")
    return tuple(int(b[v]) for v in G.vertices)


def indicator(G: Graph, v=None) -> dict:
    v = G.vertices[0] if v is None else v
    return {u: int(u == v) for u in G.vertices}


def incidence_system(G: Graph, b: Mapping, p) -> LinearSystem:
    G = G.oriented()
    return LinearSystem(tuple(map(tuple, incidence_matrix(G))), colouring_vector(G, b), Modulus.of(p),
                        tuple(map(str, G.vertices)), tuple(map(str, G.ends)), len(G.ends))


def incidence_solvable(G: Graph, b: Mapping, p) -> tuple[bool, Optional[list]]:
    """Classical solvability of ``I(G) x = b``: each component's colour sum must vanish mod p.

    The component criterion is cross-checked against :func:`solve_mod`.
    """
    p = Modulus.of(p)
    G = G.oriented()
    by_sum = all(p.is_zero(sum(int(b[v]) for v in comp)) for comp in G.components())
    S = incidence_system(G, b, p)
    x = solve_mod(S.A, S.b, p, S.n)
    if (x is not None) != by_sum:
        raise AssertionError("component criterion disagrees with the linear solver")
    return by_sum, x


def normalize_colouring(G: Graph, b: Mapping, v0) -> tuple[dict, list]:
    """Move all colour onto ``v0`` by edge shifts ``b -> b + λ b(e)``.

    ``b(e)`` is -1 at the source of e and +1 at its target.  Shifts run along
    a BFS spanning tree, leaves first; zero shifts are skipped.
    """
    G = G.oriented()
    if not G.is_connected():
        raise GraphError("normalize_colouring needs a connected graph")
    b = {v: int(b[v]) for v in G.vertices}
    parent = {v0: None}
    order = [v0]
    queue = deque([v0])
    while queue:
        x = queue.popleft()
        for e, (u, w) in G.ends.items():
            if x in (u, w):
                y = w if x == u else u
                if y not in parent:
                    parent[y] = e
                    order.append(y)
                    queue.append(y)
    shifts = []
    for u in reversed(order[1:]):
        e = parent[u]
        if b[u] == 0:
            continue
        lam = -b[u] if G.target(e) == u else b[u]
        b[G.source(e)] -= lam
        b[G.target(e)] += lam
        shifts.append((e, lam))
    return b, shifts


def apply_shift(G: Graph, b: Mapping, e, lam: int) -> dict:
    G = G.oriented()
    out = dict(b)
    out[G.source(e)] -= lam
    out[G.target(e)] += lam
    return out


# --- covers -----------------------------------------------------------------------

@dataclass(frozen=True)
class CoverMap:
    H: Graph
    G: Graph
    phi: Mapping
    embedding: Optional[CombinatorialMap] = None

    def __post_init__(self):
        object.__setattr__(self, "phi", dict(self.phi))


def _nbr_sets(G: Graph) -> dict:
    out = {v: set() for v in G.vertices}
    for u, v in G.ends.values():
        out[u].add(v)
        out[v].add(u)
    return out


def verify_cover(c: CoverMap) -> Optional[int]:
    """Arity k if phi is a surjective, locally bijective homomorphism with uniform fibres."""
    H, G, phi = c.H, c.G, c.phi
    if not H.is_simple() or not G.is_simple():
        raise GraphError("covers are defined for simple graphs")
    if set(phi) != set(H.vertices) or not set(phi.values()) <= set(G.vertices):
        return None
    NH, NG = _nbr_sets(H), _nbr_sets(G)
    for v in H.vertices:
        img = [phi[w] for w in NH[v]]
        if len(set(img)) != len(img) or set(img) != NG[phi[v]]:
            return None
    fibres = {}
    for v in H.vertices:
        fibres[phi[v]] = fibres.get(phi[v], 0) + 1
    if set(fibres) != set(G.vertices) or len(set(fibres.values())) != 1:
        return None
    return next(iter(fibres.values()))


def cover_to_picture(c: CoverMap, b: Mapping, p) -> Picture:
    """Picture on the embedded cover: hV = phi, hE the image edge, a = 1, k = b(phi(v)).

    Edges are oriented to match G's orientation.  Phase is arity * |b|.
    """
    if verify_cover(c) is None:
        raise GraphError("not a cover")
    M = c.embedding
    if M is None or not planemap.check_planar_embedding(M):
        raise GraphError("cover needs a plane embedding of H")
    want = sorted(sorted(map(str, uv)) for uv in c.H.ends.values())
    have = sorted(sorted(map(str, M.ends(e))) for e in M.edges)
    if want != have:
        raise GraphError("embedding does not match the edges of H")
    G = c.G.oriented()
    S = incidence_system(G, b, p)
    col = {e: j for j, e in enumerate(G.ends)}
    row = {v: i for i, v in enumerate(G.vertices)}
    direction, hE = {}, {}
    for e in M.edges:
        d1, d2 = M.edge_darts(e)
        u, v = M.origin[d1], M.origin[d2]
        ge = G.edge_between(c.phi[u], c.phi[v])
        hE[e] = col[ge]
        direction[e] = d1 if c.phi[u] == G.source(ge) else d2
    hV = {v: row[c.phi[v]] for v in M.rotation}
    k = {v: int(b[c.phi[v]]) for v in M.rotation}
    isolated = tuple(v for v in c.H.vertices if v not in M.rotation)
    for v in isolated:
        hV[v] = row[c.phi[v]]
        k[v] = int(b[c.phi[v]])
    return Picture(S, M, direction, hV, hE, {e: 1 for e in M.edges}, k, isolated)


def bipartite_double_cover(G: Graph) -> tuple[Graph, dict]:
    """H on V(G) x {0, 1} with (u,i) ~ (v,1-i) for each edge uv; phi projects."""
    if not G.is_simple():
        raise GraphError("bipartite_double_cover needs a simple graph")
    G = G.oriented()
    verts = [f"{v}:{i}" for i in (0, 1) for v in G.vertices]
    ends, src = {}, {}
    for e, (u, v) in G.ends.items():
        for i in (0, 1):
            name = f"{e}:{i}"
            a, b = f"{u}:{i}", f"{v}:{1 - i}"
            ends[name] = (a, b)
            src[name] = a if G.source(e) == u else b
    phi = {f"{v}:{i}": v for i in (0, 1) for v in G.vertices}
    return Graph(tuple(verts), ends, src), phi


# --- minors ----------------------------------------------------------------------------

class SizeGuardExceeded(ValueError):
    pass


def _simple_edges(G: Graph) -> frozenset:
    return frozenset(frozenset(uv) for uv in G.ends.values())


def has_minor(G: Graph, M: Graph, max_vertices: int = 12) -> bool:
    """Brute-force minor test.

    Any minor is a subgraph of a contraction, so the search contracts edges
    (merged vertices are frozensets of originals, which makes the memo key
    canonical) and tests subgraph monomorphism at each node.
    """
    import networkx as nx
    from networkx.algorithms import isomorphism

    if len(G.vertices) > max_vertices:
        raise SizeGuardExceeded(f"|V(G)| = {len(G.vertices)} exceeds {max_vertices}")
    target = nx.Graph()
    target.add_nodes_from(range(len(M.vertices)))
    idx = {v: i for i, v in enumerate(M.vertices)}
    target.add_edges_from((idx[u], idx[v]) for u, v in M.ends.values())
    nv, ne = target.number_of_nodes(), target.number_of_edges()
    tdeg = sorted((d for _, d in target.degree()), reverse=True)

    start_nodes = frozenset(frozenset([v]) for v in G.vertices)
    start_edges = frozenset(frozenset(frozenset([x]) for x in uv) for uv in _simple_edges(G))
    seen = set()

    def contains(nodes, edges) -> bool:
        H = nx.Graph()
        H.add_nodes_from(nodes)
        H.add_edges_from(tuple(e) for e in edges)
        hdeg = sorted((d for _, d in H.degree()), reverse=True)
        if any(h < t for h, t in zip(hdeg, tdeg)):
            return False
        return isomorphism.GraphMatcher(H, target).subgraph_is_monomorphic()

    def search(nodes, edges) -> bool:
        key = edges | {frozenset([x]) for x in nodes}
        if key in seen:
            return False
        seen.add(key)
        if len(nodes) < nv or len(edges) < ne:
            return False
        if contains(nodes, edges):
            return True
        for e in sorted(edges, key=lambda e: sorted(str(sorted(map(str, x))) for x in e)):
            x, y = tuple(e)
            merged = x | y
            new_nodes = (nodes - {x, y}) | {merged}
            new_edges = set()
            for f in edges:
                g = frozenset(merged if z in (x, y) else z for z in f)
                if len(g) == 2:
                    new_edges.add(g)
            if search(frozenset(new_nodes), frozenset(new_edges)):
                return True
        return False

    return search(start_nodes, start_edges)
