"""Seeded random instances for tests and experiments.

Every generator takes a ``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import random
from math import gcd
from typing import Optional

from . import gallery as _gallery
from .graphs import CoverMap, Graph, bipartite_double_cover, cover_to_picture, incidence_system
from .hypergraph import Hypergraph
from .picture import LinearSystem, Picture, phase
from .planemap import CombinatorialMap, from_neighbor_rotation, renumber, trace_faces

DEFAULT_SEED = 20240611


def rng_from(seed: Optional[int]) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def random_hypergraph(rng: random.Random, max_vertices: int = 8, max_edges: int = 10,
                      density: Optional[float] = None) -> Hypergraph:
    nv = rng.randint(1, max_vertices)
    ne = rng.randint(0, max_edges)
    dens = density if density is not None else rng.choice([0.2, 0.3, 0.45])
    inc = set()
    for e in range(ne):
        for v in range(nv):
            if rng.random() < dens:
                inc.add((v, e))
    return Hypergraph(tuple(range(nv)), tuple(range(ne)), frozenset(inc))


def random_matrix(rng: random.Random, m: int, n: int, lo: int = -5, hi: int = 5) -> list[list[int]]:
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


# --- plane maps ------------------------------------------------------------------------

class _MapBuilder:
    """Mutable rotation system grown by planarity-preserving operations."""

    def __init__(self):
        self.rot: dict = {0: [0], 1: [1]}
        self.pair: dict = {0: 1, 1: 0}
        self.next_dart = 2
        self.next_vertex = 2

    def _new_dart(self) -> int:
        self.next_dart += 1
        return self.next_dart - 1

    def _insert_before(self, d: int, new: int):
        for v, ds in self.rot.items():
            if d in ds:
                ds.insert(ds.index(d), new)
                return v
        raise KeyError(d)

    def origin(self, d):
        for v, ds in self.rot.items():
            if d in ds:
                return v
        raise KeyError(d)

    def freeze(self) -> CombinatorialMap:
        return CombinatorialMap({v: tuple(ds) for v, ds in self.rot.items()}, dict(self.pair))

    def add_leaf(self, rng):
        d = rng.choice(list(self.pair))
        x, y = self._new_dart(), self._new_dart()
        self._insert_before(d, x)
        w = self.next_vertex
        self.next_vertex += 1
        self.rot[w] = [y]
        self.pair[x], self.pair[y] = y, x

    def add_chord(self, rng, allow_parallel: bool = True) -> bool:
        faces = [f for f in trace_faces(self.freeze()).faces if len(f) >= 2]
        face = rng.choice(faces)
        i, j = rng.sample(range(len(face)), 2)
        di, dj = face[i], face[j]
        u, v = self.origin(di), self.origin(dj)
        if u == v:
            return False
        if not allow_parallel:
            nbrs = {self.origin(self.pair[d]) for d in self.rot[u]}
            if v in nbrs:
                return False
        x, y = self._new_dart(), self._new_dart()
        self._insert_before(di, x)
        self._insert_before(dj, y)
        self.pair[x], self.pair[y] = y, x
        return True

    def subdivide(self, rng):
        d = rng.choice(list(self.pair))
        e = self.pair[d]
        x, y = self._new_dart(), self._new_dart()
        w = self.next_vertex
        self.next_vertex += 1
        self.rot[w] = [x, y]
        self.pair[d], self.pair[x] = x, d
        self.pair[e], self.pair[y] = y, e


def random_plane_map(rng: random.Random, steps: Optional[int] = None, simple: bool = False) -> CombinatorialMap:
    """Connected plane map grown from a single edge by leaves, chords and subdivisions."""
    b = _MapBuilder()
    steps = rng.randint(1, 25) if steps is None else steps
    weights = rng.choice([(1, 1, 1), (1, 4, 1), (1, 8, 0), (2, 1, 3)])
    for _ in range(steps):
        op = rng.choices(("leaf", "chord", "sub"), weights=weights)[0]
        if op == "leaf":
            b.add_leaf(rng)
        elif op == "chord":
            b.add_chord(rng, allow_parallel=not simple)
        elif not simple:
            b.subdivide(rng)
        else:
            b.add_leaf(rng)
    return renumber(b.freeze())


def grid_map(rows: int, cols: int) -> CombinatorialMap:
    pos = {(r, c): (c, r) for r in range(rows) for c in range(cols)}
    edges = [((r, c), (r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [((r, c), (r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return _straight(pos, edges)


def triangulated_grid(rows: int, cols: int) -> CombinatorialMap:
    pos = {(r, c): (c, r) for r in range(rows) for c in range(cols)}
    edges = [((r, c), (r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [((r, c), (r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    edges += [((r, c), (r + 1, c + 1)) for r in range(rows - 1) for c in range(cols - 1)]
    return _straight(pos, edges)


def _straight(pos, edges):
    from .planemap import from_straight_line_drawing
    M, _ = from_straight_line_drawing(pos, edges)
    return M


def octahedron_map() -> CombinatorialMap:
    rot = {
        "N": ["1", "2", "3", "4"], "S": ["4", "3", "2", "1"],
        "1": ["N", "4", "S", "2"], "2": ["N", "1", "S", "3"],
        "3": ["N", "2", "S", "4"], "4": ["N", "3", "S", "1"],
    }
    M, _ = from_neighbor_rotation(rot)
    return M


def cube_map() -> CombinatorialMap:
    outer = {i: (2 * [1, -1, -1, 1][i], 2 * [1, 1, -1, -1][i]) for i in range(4)}
    inner = {i + 4: ([1, -1, -1, 1][i], [1, 1, -1, -1][i]) for i in range(4)}
    pos = {**outer, **inner}
    edges = [(i, (i + 1) % 4) for i in range(4)] + [(i + 4, (i + 1) % 4 + 4) for i in range(4)]
    edges += [(i, i + 4) for i in range(4)]
    return _straight(pos, edges)


def random_planar_sample(rng: random.Random) -> CombinatorialMap:
    """Mix of random grown maps, grids, triangulated grids and small solids."""
    kind = rng.choice(["grown", "grown", "simple", "grid", "tri", "solid"])
    if kind == "grown":
        return random_plane_map(rng)
    if kind == "simple":
        return random_plane_map(rng, simple=True)
    if kind == "grid":
        return grid_map(rng.randint(1, 6), rng.randint(2, 6))
    if kind == "tri":
        return triangulated_grid(rng.randint(2, 6), rng.randint(2, 6))
    return rng.choice([octahedron_map, cube_map])()


# --- systems and pictures ------------------------------------------------------------------

def random_system(rng: random.Random, m: int, n: int, p, lo: int = -3, hi: int = 3) -> LinearSystem:
    A = random_matrix(rng, m, n, lo, hi)
    for row in A:  # every row needs a variable
        if not any(row):
            row[rng.randrange(n)] = rng.choice([1, -1])
    b = [rng.randint(-3, 3) for _ in range(m)]
    return LinearSystem(tuple(map(tuple, A)), tuple(b), p)


def with_random_entries(rng: random.Random, S: LinearSystem, lo: int = -3, hi: int = 3,
                        units: bool = False) -> LinearSystem:
    """Same support, random non-zero entries and a random b.

    With ``units=True`` the entries are invertible mod p (+-1 over Z).
    """
    vals = [x for x in range(lo, hi + 1) if x]
    if units:
        P = S.p.value
        vals = [x for x in vals if (gcd(x, P) == 1 if P else abs(x) == 1)]
    A = tuple(tuple(rng.choice(vals) if x else 0 for x in row) for row in S.A)
    b = tuple(rng.randint(-3, 3) for _ in range(S.m))
    return LinearSystem(A, b, S.p, S.row_names, S.col_names, S.n)


class _PictureBuilder:
    """Grows a valid picture; every step keeps all vertex equations."""

    def __init__(self, S: LinearSystem, rng: random.Random):
        self.S, self.rng = S, rng
        self.rot: dict = {}
        self.pair: dict = {}
        self.direction, self.hV, self.hE, self.a, self.k = {}, {}, {}, {}, {}
        self.nd = 0
        self.nv = 0

    def _vertex(self, row, k) -> int:
        v = self.nv
        self.nv += 1
        self.rot[v] = []
        self.hV[v], self.k[v] = row, k
        return v

    def _edge(self, src, dst, j, a):
        x, y = self.nd, self.nd + 1
        self.nd += 2
        self.pair[x], self.pair[y] = y, x
        self.direction[x] = x
        self.hE[x], self.a[x] = j, a
        return x, y

    def dipole(self, row: Optional[int] = None, scale: int = 1):
        """Two copies of a row joined by one edge per variable: phases cancel."""
        S = self.S
        i = self.rng.randrange(S.m) if row is None else row
        R = S.support(i)
        w = self._vertex(i, -scale * S.b[i])
        v = self._vertex(i, scale * S.b[i])
        order = list(R)
        self.rng.shuffle(order)
        for j in order:
            x, y = self._edge(w, v, j, scale * S.A[i][j])
            self.rot[w].append(x)
            self.rot[v].insert(0, y)
        return v, w

    def subdivide(self):
        S = self.S
        e = self.rng.choice(list(self.hE))
        j = self.hE[e]
        rows = [i for i in range(S.m) if S.A[i][j]]
        i = self.rng.choice(rows)
        f = self.pair[e]
        src = self.direction[e]
        tgt = f if src == e else e
        u = self._vertex(i, 0)
        x, y = self.nd, self.nd + 1  # x pairs with the source end, y with the target end
        self.nd += 2
        self.rot[u] = [x, y]
        self.pair[src], self.pair[x] = x, src
        self.pair[tgt], self.pair[y] = y, tgt
        val = self.a.pop(e)
        for name in (self.hE, self.direction):
            name.pop(e)
        e1, e2 = min(src, x), min(tgt, y)
        self.direction[e1], self.hE[e1], self.a[e1] = src, j, val
        self.direction[e2], self.hE[e2], self.a[e2] = y, j, val

    def merge(self) -> bool:
        """Identify two same-label vertices from different components."""
        M = self.freeze_map()
        comps = M.components()
        if len(comps) < 2:
            return False
        c1, c2 = self.rng.sample(comps, 2)
        cands = [(v, w) for v in c1 for w in c2 if self.hV[v] == self.hV[w]]
        if not cands:
            return False
        v, w = self.rng.choice(cands)
        r1, r2 = self.rot[v], self.rot[w]
        i = self.rng.randrange(len(r1))
        j = self.rng.randrange(len(r2))
        self.rot[v] = r1[:i] + r2[j:] + r2[:j] + r1[i:]
        del self.rot[w]
        self.k[v] += self.k.pop(w)
        del self.hV[w]
        return True

    def flip(self):
        e = self.rng.choice(list(self.hE))
        self.direction[e] = self.pair[self.direction[e]]
        self.a[e] = -self.a[e]

    def freeze_map(self) -> CombinatorialMap:
        return CombinatorialMap({v: tuple(ds) for v, ds in self.rot.items()}, dict(self.pair))

    def freeze(self) -> Picture:
        M = self.freeze_map()
        return Picture(self.S, M, self.direction, self.hV, self.hE, self.a, self.k)


def random_cancellation_picture(rng: random.Random, S: LinearSystem, dipoles: Optional[int] = None,
                                subdivisions: Optional[int] = None, merges: Optional[int] = None,
                                flips: Optional[int] = None) -> Picture:
    """Valid phase-0 picture made of dipoles, subdivided, merged and flipped at random."""
    B = _PictureBuilder(S, rng)
    nd = rng.randint(1, 4) if dipoles is None else dipoles
    for _ in range(nd):
        B.dipole(scale=rng.choice([1, 1, 1, -1, 2]))
    for _ in range(rng.randint(0, 2 * nd) if merges is None else merges):
        B.merge()
    for _ in range(rng.randint(0, 4) if subdivisions is None else subdivisions):
        B.subdivide()
    for _ in range(rng.randint(0, 4) if flips is None else flips):
        B.flip()
    return B.freeze()


def cover_instances() -> list[tuple[str, CoverMap]]:
    """Plane covers for testing: planar K4, double covers of C3, C4, C5 and the K33 double cover."""
    out = []
    K4 = _gallery.k4()
    M, _ = from_neighbor_rotation(_gallery.K4_ROTATION)
    out.append(("K4", CoverMap(K4, K4, {v: v for v in K4.vertices}, M)))
    for n in (3, 4, 5):
        C = _gallery.cycle(n)
        H, phi = bipartite_double_cover(C)
        Mh, _ = from_neighbor_rotation({v: H.neighbors(v) for v in H.vertices})  # degree 2: one rotation
        out.append((f"C{2 * n}->C{n}", CoverMap(H, C, phi, Mh)))
    cov = _gallery.gallery("K33").cover()
    out.append(("K33", cov))
    return out


def random_b(rng: random.Random, G: Graph, lo: int = -4, hi: int = 4) -> dict:
    return {v: rng.randint(lo, hi) for v in G.vertices}


def random_valid_picture(rng: random.Random, p) -> Picture:
    """Either a cover picture with random b or a cancellation picture on a random system."""
    if rng.random() < 0.35:
        name, c = rng.choice(cover_instances())
        return cover_to_picture(c, random_b(rng, c.G), p)
    S = random_system(rng, rng.randint(1, 4), rng.randint(1, 5), p)
    return random_cancellation_picture(rng, S)


def qualifying_systems(p) -> list[tuple[str, LinearSystem]]:
    out = []
    for name in ("HEAWOOD", "K44"):
        G = _gallery.gallery(name).graph
        out.append((name, incidence_system(G, {v: 1 if i == 0 else 0 for i, v in enumerate(G.vertices)}, p)))
    return out


__all__ = [
    "DEFAULT_SEED", "rng_from", "random_hypergraph", "random_matrix", "random_plane_map", "grid_map",
    "triangulated_grid", "octahedron_map", "cube_map", "random_planar_sample", "random_system",
    "with_random_entries", "random_cancellation_picture", "cover_instances", "random_b",
    "random_valid_picture", "qualifying_systems", "phase",
]
