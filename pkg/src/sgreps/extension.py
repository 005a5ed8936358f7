"""Dyadic single-element extension columns of a weak dyadic matrix.

A column x extends a weak dyadic representation A iff every maximal
subdeterminant of [A | x] stays in {0} union {+-2^k}.  The subdeterminants
through x are linear in x: one cofactor functional per hyperplane of the
column matroid (functionals of subsets spanning the same hyperplane agree up
to a factor +-2^j, so one representative per hyperplane decides membership).
Candidates are scanned in bulk with integer numpy arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .exactmat import DYADIC, Dyadic, ExactMatrix, dyadic_rows_to_int


def _nullspace_functional(int_rows, cols):
    """Integer cofactor functional of an independent (r-1)-column subset.

    Returns c with c . y = det[A_cols | y] up to a fixed +-2^j factor, scaled
    only by powers of two (odd factors would break the power-of-two test).
    """
    r = len(int_rows)
    mat = [[Fraction(int_rows[i][j]) for j in cols] for i in range(r)]
    c = []
    minor_cols = list(range(len(cols)))
    for i in range(r):
        sub = [mat[k] for k in range(r) if k != i]
        det = _det_fraction(sub, minor_cols)
        c.append(det if (r - 1 - i) % 2 == 0 else -det)
    # clear powers of two from denominators; numerators of cofactors of an
    # integer matrix are integers already
    vals = [int(v) for v in c]
    if all(v == 0 for v in vals):
        return None
    shift = 0
    while all(v % 2 == 0 for v in vals if v):
        vals = [v // 2 for v in vals]
    return vals


def _det_fraction(rows, cols):
    m = [[row[j] for j in cols] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        det *= m[c][c]
    return det


def hyperplane_functionals(m: ExactMatrix):
    """One exact cofactor functional per hyperplane of the column matroid."""
    if m.domain != DYADIC:
        raise ValueError("hyperplane functionals need a dyadic matrix")
    int_rows, _ = dyadic_rows_to_int(m)
    r, n = m.nrows, m.ncols
    if r == 0:
        return []
    seen = set()
    out = []
    arr = np.array(int_rows, dtype=object)
    for cols in combinations(range(n), r - 1):
        func = _nullspace_functional(int_rows, cols)
        if func is None:
            continue  # subset does not span a hyperplane
        key_pos = tuple(func)
        key_neg = tuple(-v for v in func)
        if key_pos in seen or key_neg in seen:
            continue
        seen.add(key_pos)
        out.append(func)
    return out


def _candidate_values(bound):
    """Scaled-integer candidate entries: {0} union {+-2^k : |k| <= bound}."""
    scale = 1 << bound
    vals = [0]
    for k in range(-bound, bound + 1):
        v = (1 << (k + bound))  # 2^k * scale
        vals.extend([v, -v])
    return vals, scale


def _pow2_or_zero(arr):
    a = np.abs(arr)
    return (a & (a - 1)) == 0


def extension_columns(m, bound=2):
    """All dyadic extension columns with entries in {0, +-2^k : |k| <= bound},
    deduplicated up to column scaling by +-2^j.

    Returns a sorted list of (column, pattern) pairs: the column is a tuple of
    Dyadic entries scaled so its first nonzero is 1 (the zero column included),
    the pattern a tuple of booleans marking which hyperplane functionals
    vanish on it (equal patterns give equal labeled extension matroids).
    """
    rep = m.rep if hasattr(m, "rep") else m
    funcs = hyperplane_functionals(rep)
    r = rep.nrows
    vals, scale = _candidate_values(bound)
    fmat = np.array(funcs, dtype=np.int64).T if funcs else np.zeros((r, 0), np.int64)
    maxc = int(np.abs(fmat).sum(axis=0).max()) if funcs else 0
    if maxc * max(abs(v) for v in vals) * 2 >= 2 ** 62:
        raise OverflowError("functional magnitudes too large for int64 scan")
    grids = np.meshgrid(*([np.array(vals, dtype=np.int16)] * r), indexing="ij")
    cand = np.stack([g.ravel() for g in grids], axis=1) if r else np.zeros((1, 0), np.int16)
    results = {}
    chunk = 1 << 16
    for lo in range(0, len(cand), chunk):
        block = cand[lo:lo + chunk].astype(np.int64)
        prods = block @ fmat
        ok = _pow2_or_zero(prods).all(axis=1)
        for row, pat in zip(block[ok], prods[ok] == 0):
            col, key = _canonical_column(row, scale)
            if key not in results:
                results[key] = (col, tuple(bool(b) for b in pat))
    ordered = sorted(results.values(), key=lambda cp: _column_sort_key(cp[0]))
    return ordered


def _canonical_column(row, scale):
    """Scale an integer candidate row by +-2^j: first nonzero becomes 1."""
    entries = [Dyadic(int(v), -_log2(scale)) for v in row]
    first = next((v for v in entries if v.num), None)
    if first is None:
        col = tuple(entries)
        return col, tuple((0, 0) for _ in entries)
    col = tuple(v / first if v.num else v for v in entries)
    return col, tuple((v.num, v.exp) for v in col)


def _log2(n):
    return n.bit_length() - 1


def _column_sort_key(col):
    return tuple((v.num, v.exp) for v in col)
