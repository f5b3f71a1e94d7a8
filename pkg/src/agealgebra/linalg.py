"""Exact integer linear algebra (fraction-free elimination)."""

from __future__ import annotations

from math import gcd
from typing import Mapping, Sequence

from .errors import InternalInconsistencyError


def rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in matrix]
    rows = len(M)
    if rows == 0:
        return 0
    cols = len(M[0])
    r, prev = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, rows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, cols):
                q, rem = divmod(p * row_i[j] - a * row_r[j], prev)
                if rem:
                    raise InternalInconsistencyError("non-exact division in fraction-free elimination")
                row_i[j] = q
            row_i[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r


def _primitive(v: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in v.values():
        g = gcd(g, x)
    if g > 1:
        v = {k: x // g for k, x in v.items()}
    if v and v[min(v)] < 0:
        v = {k: -x for k, x in v.items()}
    return v


class EchelonBasis:
    """Incrementally maintained echelon basis of sparse integer vectors.

    Each stored row is primitive and keyed by its smallest index (its pivot).
    """

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping[int, int]) -> dict[int, int]:
        v = {k: int(x) for k, x in vec.items() if x}
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                return v
            a, b = row[p], v[p]
            new = {k: a * x for k, x in v.items()}
            for k, x in row.items():
                new[k] = new.get(k, 0) - b * x
            v = _primitive({k: x for k, x in new.items() if x})
        return v

    def add(self, vec: Mapping[int, int]) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        v = _primitive(v)
        self.rows[min(v)] = v
        return True
