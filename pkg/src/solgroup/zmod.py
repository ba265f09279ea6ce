"""Exact arithmetic over Z_p (p >= 2 finite, or p = INF meaning Z).

Everything here works on plain Python ints, so entries never overflow.
Matrices are lists (or tuples) of rows.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Union


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Modulus:
    """A modulus p >= 2, or the infinite modulus (``value is None``)."""

    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None:
            if isinstance(self.value, bool) or not isinstance(self.value, int):
                raise TypeError(f"modulus must be an int, got {self.value!r}")
            if self.value < 2:
                raise ValueError(f"finite modulus must be >= 2, got {self.value}")

    @classmethod
    def of(cls, p: Union["Modulus", int, str, None]) -> "Modulus":
        if isinstance(p, Modulus):
            return p
        if p is None:
            return INF
        if isinstance(p, str):
            s = p.strip().lower()
            if s in ("inf", "infinity", "oo", "∞"):
                return INF
            return cls(int(s))
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def reduce(self, x: int) -> int:
        return x % self.value if self.value is not None else x

    def is_zero(self, x: int) -> bool:
        return self.reduce(x) == 0

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def __repr__(self):
        return "INF" if self.value is None else f"Modulus({self.value})"

    def to_json(self):
        return "inf" if self.value is None else self.value


INF = Modulus(None)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = gcd(|a|, |b|) >= 0`` and ``s*a + t*b == g``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    if old_r == 0:
        return 0, 0, 0
    return old_r, old_s, old_t


# --- small dense matrix helpers -------------------------------------------

def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    if not A:
        return []
    inner = len(B)
    if any(len(row) != inner for row in A):
        raise DimensionError("inner dimensions differ")
    cols = len(B[0]) if B else 0
    return [[sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x, strict=True)) for row in A]


def shape(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple[int, int]:
    """Shape of a dense matrix; ``ncols`` disambiguates matrices with no rows."""
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if any(len(row) != n for row in A):
        raise DimensionError("ragged matrix")
    return m, n


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    if any(len(row) != n for row in M):
        raise DimensionError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --- Smith normal form ------------------------------------------------------

def smith_normal_form(A: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Smith normal form ``U @ A @ V == D`` over Z.

    U (m x m) and V (n x n) are unimodular and D is diagonal with
    ``d1 | d2 | ...`` and all ``d_i >= 0``.  Pivots are chosen by least
    absolute value to keep intermediate entries small.
    """
    m, n = shape(A, ncols)
    D = [list(row) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        for M in (D, U):
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += c * rs[k]

    def add_col(src, dst, c):  # col_dst += c * col_src
        for M in (D, V):
            for row in M:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return U, D, V
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // piv
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // piv
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            # divisibility: fold any entry not divisible by the pivot into row t
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % piv), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-x for x in M[t]]
    return U, D, V


def snf_diagonal(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[int]:
    _, D, _ = smith_normal_form(A, ncols)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# --- solving ------------------------------------------------------------------

def _solve_over_z(A: Sequence[Sequence[int]], b: Sequence[int], n: int) -> Optional[list[int]]:
    """An integer solution of ``A x = b`` or None (A is m x n)."""
    m = len(A)
    U, D, V = smith_normal_form(A, n)
    c = matvec(U, b) if m else []
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(V, y) if n else []


def solve_mod(A: Sequence[Sequence[int]], b: Sequence[int], p, ncols: Optional[int] = None
              ) -> Optional[list[int]]:
    """Solve ``A x = b`` over Z_p.

    Returns a solution with entries in ``[0, p)`` (an integer solution
    when p is INF), or None when the system is inconsistent.  Finite p is
    handled by solving the augmented system ``[A | p I] (x, y) = b`` over Z,
    which is exact for composite p.
    """
    p = Modulus.of(p)
    m, n = shape(A, ncols)
    if len(b) != m:
        raise DimensionError(f"b has length {len(b)}, expected {m}")
    if not p.is_finite:
        return _solve_over_z(A, b, n)
    aug = [list(row) + [p.value * int(i == j) for j in range(m)] for i, row in enumerate(A)]
    sol = _solve_over_z(aug, b, n + m)
    if sol is None:
        return None
    return [x % p.value for x in sol[:n]]


def _crt_pair(a1: int, m1: int, a2: int, m2: int) -> Optional[tuple[int, int]]:
    """Combine ``x = a1 (mod m1)`` with ``x = a2 (mod m2)``; moduli >= 1."""
    g, s, _ = egcd(m1, m2)
    if (a2 - a1) % g:
        return None
    lcm = m1 // g * m2
    x = a1 + (a2 - a1) // g * s % (m2 // g) * m1
    return x % lcm, lcm


def cyclic_membership(gen: Sequence[int], target: Sequence[int], p) -> Optional[int]:
    """Find λ with ``λ * gen == target`` in Z_p^k, or None.

    Works coordinate by coordinate: each coordinate pins λ to a residue
    class modulo ``p / gcd(g_i, p)`` and the classes are merged by CRT.
    For finite p the smallest λ in ``[0, p)`` is returned.
    """
    p = Modulus.of(p)
    if len(gen) != len(target):
        raise DimensionError("gen and target differ in length")
    if not p.is_finite:
        lam = None
        for g, t in zip(gen, target):
            if g == 0:
                if t != 0:
                    return None
            elif t % g:
                return None
            elif lam is None:
                lam = t // g
            elif lam != t // g:
                return None
        return 0 if lam is None else lam
    P = p.value
    residue, modulus = 0, 1
    for g, t in zip(gen, target):
        g %= P
        t %= P
        d, s, _ = egcd(g, P)
        if d == 0:  # g == 0 (mod P)
            d = P
        if t % d:
            return None
        mod_i = P // d
        lam_i = (t // d) * s % mod_i if mod_i > 1 else 0
        merged = _crt_pair(residue, modulus, lam_i, mod_i)
        if merged is None:
            return None
        residue, modulus = merged
    return residue % P
