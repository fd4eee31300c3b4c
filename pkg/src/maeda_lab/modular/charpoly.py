"""Characteristic polynomials of integer matrices by fraction-free elimination.

Bareiss elimination runs on x*I - M with entries in Z[x]. After step k the
pivot is the leading principal (k+1)-minor of x*I - M, a monic polynomial,
so no pivot search is needed and every division is an exact division by a
monic polynomial.
"""

from __future__ import annotations

from collections.abc import Sequence

from ..errors import ExactnessError, PreconditionError

Poly = list[int]


def _strip(a: Poly) -> Poly:
    while a and not a[-1]:
        a.pop()
    return a


def _sub(a: Poly, b: Poly) -> Poly:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _strip(out)


def _mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _exact_div_monic(a: Poly, b: Poly) -> Poly:
    """a / b for monic b, raising when the remainder is nonzero."""
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        if r:
            raise ExactnessError("Bareiss division left a remainder")
        return []
    q = [0] * (len(r) - db)
    for top in range(len(r) - 1, db - 1, -1):
        c = r[top]
        q[top - db] = c
        if c:
            for k in range(db + 1):
                r[top - db + k] -= c * b[k]
    if any(r[:db]):
        raise ExactnessError("Bareiss division left a remainder")
    return _strip(q)


def charpoly(matrix: Sequence[Sequence[int]]) -> list[int]:
    """det(x*I - M), constant term first; [1] for the empty matrix."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise PreconditionError("characteristic polynomial needs a square matrix")
    if n == 0:
        return [1]
    a = [[_strip([(-matrix[i][j])] + ([1] if i == j else [])) for j in range(n)] for i in range(n)]
    prev: Poly = [1]
    for k in range(n - 1):
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _sub(_mul(pivot, a[i][j]), _mul(a[i][k], a[k][j]))
                a[i][j] = _exact_div_monic(num, prev)
        prev = pivot
    det = a[n - 1][n - 1]
    if len(det) != n + 1 or det[-1] != 1:
        raise ExactnessError("characteristic polynomial is not monic of full degree")
    return det
