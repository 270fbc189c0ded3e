"""Bulk index tables for F_p^k (and mixed-radix) vector enumeration.

Vectors of dimension k are ranked lexicographically with the first
coordinate most significant: rank(v) = sum v_i * p^(k-1-i).  All bulk
machinery (Cayley tables, exhaustive identity scans) works on ranks.
"""

from __future__ import annotations

import numpy as np


def vector_table(moduli: tuple) -> np.ndarray:
    """All vectors with the given slot moduli, one per row, in rank order."""
    k = len(moduli)
    n = 1
    for m in moduli:
        n *= m
    out = np.zeros((n, k), dtype=np.int64)
    rep = n
    for i, m in enumerate(moduli):
        rep //= m
        tile = n // (rep * m)
        col = np.repeat(np.arange(m, dtype=np.int64), rep)
        out[:, i] = np.tile(col, tile)
    return out


def rank_rows(rows: np.ndarray, moduli: tuple) -> np.ndarray:
    """Rank of each row vector under the lexicographic convention."""
    k = len(moduli)
    r = np.zeros(rows.shape[:-1], dtype=np.int64)
    for i in range(k):
        r = r * moduli[i] + (rows[..., i] % moduli[i])
    return r


def add_index_table(moduli: tuple) -> np.ndarray:
    """n x n table: entry (a, b) is the rank of vector_a + vector_b.

    Accumulates one coordinate at a time so no (n, n, k) intermediate is
    ever materialized; that matters at |C| = 4096.
    """
    V = vector_table(moduli).astype(np.int32)
    n = V.shape[0]
    r = np.zeros((n, n), dtype=np.int32)
    for i, m in enumerate(moduli):
        r = r * m + (V[:, i, None] + V[None, :, i]) % m
    return r.astype(np.int64)


def neg_index(moduli: tuple) -> np.ndarray:
    V = vector_table(moduli)
    return rank_rows(-V, moduli)


def scale_index_table(moduli: tuple, nmax: int) -> np.ndarray:
    """(nmax+1) x n table: entry (s, a) is the rank of s * vector_a."""
    V = vector_table(moduli)
    out = np.zeros((nmax + 1, V.shape[0]), dtype=np.int64)
    for s in range(nmax + 1):
        out[s] = rank_rows(s * V, moduli)
    return out
