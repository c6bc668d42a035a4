"""Exact rank over an integral domain by fraction-free elimination.

Works for ``int``, ``Fraction`` and polynomial entries (``ClassExpr`` over
an untruncated space) alike: only ``*``, ``-`` and truthiness are used, so
no quotient field arithmetic is ever needed.
"""

from __future__ import annotations

from typing import List, Sequence


def rank(rows: Sequence[Sequence]) -> int:
    m: List[list] = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, len(m)):
            q = m[i][col]
            if q:
                m[i] = [p * x - q * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r
