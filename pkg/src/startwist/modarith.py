"""Exact integer and modular linear algebra helpers.

Everything here works on Python integers, so determinants, adjugates and
Smith-style eliminations are exact at any size that occurs in this package.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["det_int", "mat_inv_mod", "solve_mod_system"]


def det_int(matrix) -> int:
    """Determinant of an integer matrix via fraction-free Bareiss elimination."""
    m = [[int(x) for x in row] for row in np.asarray(matrix)]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_inv_mod(matrix, modulus: int) -> np.ndarray:
    """Inverse of an integer matrix mod N via the adjugate; needs gcd(det, N) = 1."""
    a = np.asarray(matrix, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    det = det_int(a)
    try:
        det_inv = pow(det % modulus, -1, modulus)
    except ValueError:
        raise ValueError(
            f"matrix determinant {det} is not invertible mod {modulus}"
        ) from None
    if n == 1:
        return np.array([[det_inv % modulus]], dtype=np.int64)
    cof = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
            cof[i, j] = (-1) ** (i + j) * det_int(minor)
    adj = cof.T
    inv = np.vectorize(lambda x: (int(x) * det_inv) % modulus)(adj)
    return inv.astype(np.int64)


def _smith_eliminate(rows: list[list[int]], ncols: int):
    """Diagonalize over Z with elementary ops; returns (diag, transformed rhs map, V).

    The right transform V (ncols x ncols, unimodular) satisfies: solutions x of
    the original system are x = V y where y solves the diagonal system.  Row
    operations are applied to the right-hand side lazily via ``apply_rows``.
    """
    nrows = len(rows)
    a = [row[:] for row in rows]
    row_ops: list[tuple[str, int, int, int]] = []
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        row_ops.append(("swap", i, j, 0))

    def add_row(i, j, c):
        # row i += c * row j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        row_ops.append(("add", i, j, c))

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(i, j, c):
        # col i += c * col j
        for row in a:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    k = 0
    limit = min(nrows, ncols)
    while k < limit:
        pivot = None
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            swap_rows(k, pi)
        if pj != k:
            swap_cols(k, pj)
        reduced = True
        while reduced:
            reduced = False
            for i in range(k + 1, nrows):
                if a[i][k] != 0:
                    q = a[i][k] // a[k][k]
                    add_row(i, k, -q)
                    if a[i][k] != 0:
                        swap_rows(k, i)
                        reduced = True
            for j in range(k + 1, ncols):
                if a[k][j] != 0:
                    q = a[k][j] // a[k][k]
                    add_col(j, k, -q)
                    if a[k][j] != 0:
                        swap_cols(k, j)
                        reduced = True
        k += 1

    diag = [a[i][i] if i < ncols else 0 for i in range(min(nrows, ncols))]

    def apply_rows(rhs: list[int]) -> list[int]:
        out = rhs[:]
        for op, i, j, c in row_ops:
            if op == "swap":
                out[i], out[j] = out[j], out[i]
            else:
                out[i] += c * out[j]
        return out

    return diag, apply_rows, v


def solve_mod_system(a_rows, rhs, modulus: int):
    """Solve A x = rhs (mod modulus) over Z/modulus; returns one solution or None.

    ``a_rows`` is a dense integer matrix given as a list of rows.  Elimination
    is Smith-style over Z, so composite moduli are handled exactly.
    """
    nrows = len(a_rows)
    if nrows == 0:
        return []
    ncols = len(a_rows[0])
    diag, apply_rows, v = _smith_eliminate([list(map(int, r)) for r in a_rows], ncols)
    b = apply_rows([int(x) for x in rhs])
    y = [0] * ncols
    for i in range(nrows):
        d = diag[i] if i < len(diag) else 0
        bi = b[i] % modulus
        if d == 0:
            if bi % modulus != 0:
                return None
            continue
        g = math.gcd(d, modulus)
        if bi % g != 0:
            return None
        m_red = modulus // g
        y[i] = ((bi // g) * pow((d // g) % m_red, -1, m_red)) % m_red if m_red > 1 else 0
    x = [0] * ncols
    for i in range(ncols):
        x[i] = sum(v[i][j] * y[j] for j in range(ncols)) % modulus
    return x
