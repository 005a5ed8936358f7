"""Enumeration of all signed-graph incidence representations of a matroid.

A representation of a rank-r matroid on n elements is an r x n matrix A over
GF(3) with at most two nonzero entries per column whose column matroid (in
groundset label order) equals the input.  The search picks r new basis
columns one at a time from the pool of all projective GF(3) columns, keeping
the working matrix pivoted so the chosen columns are the identity; a column
of the working matrix that accumulates three nonzeros in processed rows with
nothing below can never be repaired, which is the pruning rule.

Representations are deduplicated up to row permutation and row negation
(vertex relabeling and resigning of the underlying signed graph); the
canonical representative is the lexicographically least matrix in that
orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .exactmat import DYADIC, GF3, ExactMatrix, project_mod_p, rref
from .matroid import LinearMatroid

_NEG = (0, 2, 1)


# -- canonical forms ---------------------------------------------------------------


def _canonical_rows(cols):
    """Lex-least matrix in the row-permutation/row-negation orbit.

    Per row the smaller of the row and its negation is chosen; rows are then
    sorted.  Choices are independent across rows, so the greedy result is the
    orbit minimum.
    """
    rows = zip(*cols) if cols else ()
    best = sorted(min(row, tuple(_NEG[v] for v in row)) for row in rows)
    return tuple(best)


@dataclass(frozen=True)
class SgRepresentation:
    """A signed-graph incidence representation: <=2 nonzeros per column."""

    matrix: ExactMatrix          # GF(3), rank x size, columns = groundset
    basis_labels: tuple          # row labels (the auxiliary half-edge basis)

    def __post_init__(self):
        for j in range(self.matrix.ncols):
            if len(self.matrix.column_support(j)) > 2:
                raise ValueError(f"column {j} has more than two nonzeros")

    @property
    def col_labels(self):
        return self.matrix.col_labels

    def canonical_key(self):
        return _canonical_rows(self.matrix.columns())

    def row_tuples(self):
        return self.matrix.entries


def _wrap(rows, col_labels, nrows):
    matrix = ExactMatrix(GF3, rows, col_labels)
    return SgRepresentation(matrix, tuple(f"b{i + 1}" for i in range(nrows)))


# -- Property 1 --------------------------------------------------------------------


def satisfies_property1(a, n_processed):
    """Columns with >2 nonzeros in the first N rows must have one below.

    Accepts an ExactMatrix over GF(3) or a list of column tuples.
    """
    if isinstance(a, ExactMatrix):
        cols = a.columns()
        nrows = a.nrows
    else:
        cols = list(a)
        nrows = len(cols[0]) if cols else 0
    for col in cols:
        top = sum(1 for t in range(min(n_processed, nrows)) if col[t])
        if top > 2 and not any(col[s] for s in range(n_processed, nrows)):
            return False
    return True


# -- search state (one recursion node) ----------------------------------------------


@dataclass(frozen=True)
class SearchState:
    """Node of the recursive search; k is the 1-based next basis slot.

    R holds the k-1 unit columns found so far followed by the transformed
    original columns; X holds the surviving candidate columns (every one has
    a nonzero on or below row k).
    """

    k: int
    R: ExactMatrix
    X: ExactMatrix
    phase: str = "growing"

    @property
    def rank_target(self):
        return self.R.nrows

    def original_block(self):
        return [self.R.column(j) for j in range(self.k - 1, self.R.ncols)]


def _pivot_cols(cols, x, s, k):
    """Apply to each column the row operations that turn x into unit column k."""
    inv = x[s]  # over GF(3) every nonzero is its own inverse
    elim = [(t, (x[t] * inv) % 3) for t in range(len(x)) if t != s and x[t]]
    out = []
    for y in cols:
        ys = y[s]
        if ys:
            ny = list(y)
            ny[s] = (inv * ys) % 3
            for t, f in elim:
                ny[t] = (ny[t] - f * ys) % 3
        else:
            ny = list(y)
        ny[k], ny[s] = ny[s], ny[k]
        out.append(tuple(ny))
    return out


def _advance(k0, r_cols, x_cols, x, s, prune=True):
    """Pivot (x, s) into slot k0 (0-based), filter X, check Property 1.

    Returns (new R columns, new X columns) or None when pruned.
    """
    new_r = _pivot_cols(r_cols, x, s, k0)
    r = len(x)
    if prune and not _property1_cols(new_r, k0 + 1, r):
        return None
    new_x = [c for c in _pivot_cols(x_cols, x, s, k0)
             if any(c[i] for i in range(k0 + 1, r))]
    return new_r, new_x


def _property1_cols(cols, n_processed, nrows):
    for col in cols:
        cnt = 0
        for t in range(n_processed):
            if col[t]:
                cnt += 1
                if cnt > 2:
                    if not any(col[s] for s in range(n_processed, nrows)):
                        return False
                    break
    return True


def _shape(x, k, r):
    above = 0
    below = 0
    s = -1
    for t in range(k):
        if x[t]:
            above += 1
    for t in range(k, r):
        if x[t]:
            below += 1
            if s < 0:
                s = t
    return above, below, s


def _state_to_internal(state):
    k0 = state.k - 1
    r = state.R.nrows
    r_cols = [state.R.column(j) for j in range(k0, state.R.ncols)]
    x_cols = [state.X.column(j) for j in range(state.X.ncols)]
    return k0, r, r_cols, x_cols


def _internal_to_state(k0, r, r_cols, x_cols, labels, phase):
    # the returned state has processed k0 + 1 rows, hence that many unit columns
    ident = [tuple(1 if i == j else 0 for i in range(r)) for j in range(k0 + 1)]
    all_cols = ident + r_cols
    all_labels = tuple(f"_b{j + 1}" for j in range(k0 + 1)) + tuple(labels)
    rmat = ExactMatrix(GF3, list(zip(*all_cols)) if all_cols else [], all_labels)
    xlabels = tuple(f"x{j + 1}" for j in range(len(x_cols)))
    xmat = ExactMatrix(GF3, list(zip(*x_cols)) if x_cols else [], xlabels)
    return SearchState(k0 + 2, rmat, xmat, phase)


def step_grow(state, x):
    """Grow an existing component with a column that has one nonzero among the
    processed rows and exactly one below; returns the next state or None."""
    k0, r, r_cols, x_cols = _state_to_internal(state)
    above, below, s = _shape(x, k0, r)
    if above != 1 or below != 1:
        raise ValueError("column does not have the grow shape")
    adv = _advance(k0, r_cols, [c for c in x_cols if c != x], x, s)
    if adv is None:
        return None
    labels = state.R.col_labels[k0:]
    return _internal_to_state(k0, r, adv[0], adv[1], labels, "growing")


def step_negative_loop(state, x):
    """Add a negative loop: the column's only nonzero is on or below row k."""
    k0, r, r_cols, x_cols = _state_to_internal(state)
    above, below, s = _shape(x, k0, r)
    if above != 0 or below != 1:
        raise ValueError("column does not have the negative-loop shape")
    adv = _advance(k0, r_cols, [c for c in x_cols if c != x], x, s)
    if adv is None:
        return None
    labels = state.R.col_labels[k0:]
    return _internal_to_state(k0, r, adv[0], adv[1], labels, "growing")


def step_new_component(state):
    """Declare existing components done: drop candidates touching processed
    rows, then try each survivor as the first element of a new component.

    Returns one entry per surviving candidate, None where Property 1 prunes.
    """
    k0, r, r_cols, x_cols = _state_to_internal(state)
    filtered = [c for c in x_cols if not any(c[t] for t in range(k0))]
    labels = state.R.col_labels[k0:]
    results = []
    for x in filtered:
        s = next(t for t in range(k0, r) if x[t])
        adv = _advance(k0, r_cols, [c for c in filtered if c != x], x, s)
        if adv is None:
            results.append(None)
        else:
            results.append(_internal_to_state(k0, r, adv[0], adv[1], labels,
                                              "new_component"))
    return results


# -- full enumeration ------------------------------------------------------------


def projective_columns(r):
    """All (3^r - 1)/2 projective GF(3) columns, first nonzero scaled to 1."""
    cols = []
    for tup in product((0, 1, 2), repeat=r):
        first = next((v for v in tup if v), 0)
        if first == 1:
            cols.append(tup)
    return cols




def _gf3_standard(m):
    """Full-row-rank GF(3) matrix for a matroid, columns in groundset order."""
    rep = m.rep
    if rep.domain == DYADIC:
        rep = project_mod_p(rep, 3)
    elif rep.domain != GF3:
        raise ValueError("matroid must be representable over GF(3)")
    red, piv = rref(rep)
    rows = [red.entries[i] for i in range(len(piv))]
    return ExactMatrix(GF3, rows, rep.col_labels)


# Bitsliced GF(3) vectors: a column of length r is a pair (ones, twos) of row
# bitmasks.  Negation swaps the masks; addition is carry-free boolean algebra.


def _bs_encode(col):
    m1 = m2 = 0
    for i, v in enumerate(col):
        if v == 1:
            m1 |= 1 << i
        elif v == 2:
            m2 |= 1 << i
    return m1, m2


def _bs_decode(bs, r):
    m1, m2 = bs
    return tuple(1 if m1 >> i & 1 else 2 if m2 >> i & 1 else 0 for i in range(r))


def _bs_sub(a1, a2, b1, b2, full):
    # a - b = a + (swap of b)
    b1, b2 = b2, b1
    a0 = full & ~(a1 | a2)
    b0 = full & ~(b1 | b2)
    return (a0 & b1) | (a1 & b0) | (a2 & b2), (a0 & b2) | (a2 & b0) | (a1 & b1)


def _bs_pivot(cols, x, s, k, full):
    """Row operations turning bitsliced column x into unit column k."""
    x1, x2 = x
    inv_is_two = bool(x2 >> s & 1)
    if inv_is_two:
        x1, x2 = x2, x1           # scale x by 2 so the pivot entry is 1
    d1, d2 = x2, x1               # 2*x
    sbit = 1 << s
    kbit = 1 << k
    swap_mask = sbit | kbit
    out = []
    for c1, c2 in cols:
        if c1 & sbit:
            v = 1
            n1, n2 = _bs_sub(c1, c2, x1, x2, full)
        elif c2 & sbit:
            v = 2
            n1, n2 = _bs_sub(c1, c2, d1, d2, full)
        else:
            v = 0
            n1, n2 = c1, c2
        # the subtraction zeroed the pivot row; its value is inv * v
        if v:
            if inv_is_two:
                v = 3 - v
            if v == 1:
                n1 |= sbit
            else:
                n2 |= sbit
        if (n1 >> s ^ n1 >> k) & 1:
            n1 ^= swap_mask
        if (n2 >> s ^ n2 >> k) & 1:
            n2 ^= swap_mask
        out.append((n1, n2))
    return out


def enumerate_signed_graphic(m, *, method="transpose", property1_prune=True,
                             compact_branches=True):
    """All deduplicated signed-graph representations of a GF(3)-representable
    matroid, canonically sorted.

    ``method`` selects between two enumerations of the same solution set:

    * "transpose" (default) enumerates the representation's rows -- unordered
      independent sets of projective functionals hitting every original
      column at most twice; sorted-set enumeration visits each deduplicated
      representation exactly once and saturation ("a column already hit
      twice") filters the pool very quickly.
    * "recursive" is the pivot-at-a-time search over candidate basis columns
      with the three growth cases; it revisits solutions once per admissible
      build order, so it is kept for cross-checking and small instances.

    ``property1_prune`` disables the unrepairable-column pruning rule of the
    recursive method (the output must not change); ``compact_branches``
    disables its redundancy shortcut that skips single-nonzero candidates in
    the new-component step (ditto).  Both knobs exist for the mutation checks
    in the verification suites.
    """
    rep = _gf3_standard(m)
    r, n = rep.nrows, rep.ncols
    if r == 0:
        found = {_canonical_rows([() for _ in range(n)]) if n else ()}
        return _finalize(found, rep.col_labels, 0)
    if method == "transpose":
        found = _enumerate_transpose(rep)
    elif method == "recursive":
        found = _enumerate_recursive(rep, property1_prune, compact_branches)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finalize(found, rep.col_labels, r)


def _enumerate_transpose(rep):
    """Enumerate row sets: independent projective functionals, each original
    column evaluated nonzero by at most two of them."""
    r, n = rep.nrows, rep.ncols
    funcs = projective_columns(r)
    cols = [rep.column(j) for j in range(n)]
    hits = []
    rows_of = []
    for h in funcs:
        row = tuple(sum(a * b for a, b in zip(h, col)) % 3 for col in cols)
        rows_of.append(row)
        mask = 0
        for j, v in enumerate(row):
            if v:
                mask |= 1 << j
        hits.append(mask)
    enc = [_bs_encode(h) for h in funcs]
    full = (1 << r) - 1
    found = set()
    indices = range(len(funcs))

    def reduce_against(basis, vec):
        # GF(3) elimination of a bitsliced functional against an echelon basis
        v1, v2 = vec
        for b1, b2, lead in basis:
            if v1 & lead:
                v1, v2 = _bs_sub(v1, v2, b1, b2, full)
            elif v2 & lead:
                v1, v2 = _bs_sub(v1, v2, b2, b1, full)
        return v1, v2

    def extend(chosen, basis, once, twice, pool):
        depth = len(chosen)
        if depth == r:
            found.add(_canonical_rows_from_rows([rows_of[i] for i in chosen]))
            return
        need = r - depth
        if len(pool) < need:
            return
        for pos, i in enumerate(pool):
            if len(pool) - pos < need:
                break
            hm = hits[i]
            if hm & twice:
                continue
            v1, v2 = reduce_against(basis, enc[i])
            if not (v1 | v2):
                continue
            lead = 1 << ((v1 | v2).bit_length() - 1)
            if v2 & lead:
                v1, v2 = v2, v1   # scale by 2: the lead digit becomes 1
            new_twice = twice | (once & hm)
            new_pool = [j for j in pool[pos + 1:] if not hits[j] & new_twice]
            extend(chosen + [i], basis + [(v1, v2, lead)],
                   once | hm, new_twice, new_pool)

    extend([], [], 0, 0, list(indices))
    return found


def _canonical_rows_from_rows(rows):
    return tuple(sorted(min(tuple(row), tuple(_NEG[v] for v in row))
                        for row in rows))


def _enumerate_recursive(rep, property1_prune, compact_branches):
    r, n = rep.nrows, rep.ncols
    found = set()
    full = (1 << r) - 1
    r_cols0 = [_bs_encode(rep.column(j)) for j in range(n)]
    x_cols0 = [_bs_encode(c) for c in projective_columns(r)]
    popcount = int.bit_count

    def property1_ok(cols, upto_mask, below_mask):
        for c1, c2 in cols:
            supp = c1 | c2
            if popcount(supp & upto_mask) > 2 and not supp & below_mask:
                return False
        return True

    def recurse(k0, r_cols, x_cols):
        if k0 == r:
            found.add(_canonical_rows([_bs_decode(c, r) for c in r_cols]))
            return
        low = (1 << k0) - 1
        grow = []
        loops = []
        fresh = []
        for x in x_cols:
            supp = x[0] | x[1]
            above = popcount(supp & low)
            if above > 1:
                continue
            below = popcount(supp & ~low)
            if above == 1 and below == 1:
                grow.append((x, (supp & ~low).bit_length() - 1))
            elif above == 0:
                s = (supp & ~low & -(supp & ~low)).bit_length() - 1
                if below == 1:
                    loops.append((x, s))
                else:
                    fresh.append((x, s))
        upto = (1 << (k0 + 1)) - 1
        below_mask = full & ~upto

        def descend(pool, x, s):
            new_r = _bs_pivot(r_cols, x, s, k0, full)
            if property1_prune and not property1_ok(new_r, upto, below_mask):
                return
            new_x = [c for c in _bs_pivot(pool, x, s, k0, full)
                     if (c[0] | c[1]) & below_mask]
            recurse(k0 + 1, new_r, new_x)

        for x, s in grow:
            descend(x_cols, x, s)
        for x, s in loops:
            descend(x_cols, x, s)
        if fresh or not compact_branches:
            filtered = [x for x in x_cols if not (x[0] | x[1]) & low]
            if compact_branches:
                pool = fresh
            else:
                pool = []
                for x in filtered:
                    supp = (x[0] | x[1]) & ~low
                    pool.append((x, (supp & -supp).bit_length() - 1))
            for x, s in pool:
                descend(filtered, x, s)

    recurse(0, r_cols0, x_cols0)
    return found


def _finalize(found, col_labels, r):
    out = []
    for key in sorted(found):
        rows = [list(row) for row in key]
        out.append(_wrap(rows, col_labels, r))
    return out


def dedup_representations(reps):
    """Quotient by row permutation and row negation; columns stay fixed.

    Returns one canonical representative per orbit, sorted.
    """
    seen = {}
    for rep in reps:
        seen.setdefault(rep.canonical_key(), rep)
    out = []
    for key in sorted(seen):
        r = len(key)
        out.append(_wrap([list(row) for row in key], seen[key].col_labels, r))
    return out


def is_signed_graphic(a):
    """Recognize whether [I | A] is row-equivalent to a signed-graph incidence
    matrix, by exhaustive enumeration; returns a witness or None."""
    if a.domain == DYADIC:
        a = project_mod_p(a, 3)
    r = a.nrows
    base_labels = tuple(f"g{i + 1}" for i in range(r))
    if set(base_labels) & set(a.col_labels):
        base_labels = tuple(f"_g{i + 1}" for i in range(r))
    full = ExactMatrix.identity(GF3, r, base_labels).hstack(a)
    reps = enumerate_signed_graphic(LinearMatroid(full))
    return reps[0] if reps else None


def representation_to_text(rep):
    """Matrix text with a leading basis-label header line."""
    return "basis " + " ".join(rep.basis_labels) + "\n" + rep.matrix.to_text()


def representation_from_text(text, col_labels=None):
    head, _, rest = text.partition("\n")
    parts = head.split()
    if not parts or parts[0] != "basis":
        raise ValueError("representation text must start with a basis line")
    matrix = ExactMatrix.from_text(rest, col_labels)
    return SgRepresentation(matrix, tuple(parts[1:]))


# -- independent oracle ------------------------------------------------------------


def brute_force_representations(m):
    """All representations by trying every projective r-subset as a basis.

    Independent of the recursive search; intended for ranks <= 4 where the
    full scan is cheap.  Returns the same canonically sorted list as
    enumerate_signed_graphic.
    """
    rep = _gf3_standard(m)
    r, n = rep.nrows, rep.ncols
    if r == 0:
        return enumerate_signed_graphic(m)
    if r > 4:
        raise ValueError("brute-force oracle is limited to rank <= 4")
    points = np.array(projective_columns(r), dtype=np.int64)
    rmat = np.array([[v for v in row] for row in rep.entries], dtype=np.int64)
    combos = np.array(list(combinations(range(len(points)), r)), dtype=np.int64)
    found = set()
    chunk = 20000
    for lo in range(0, len(combos), chunk):
        part = combos[lo:lo + chunk]
        bases = points[part]                      # (m, r, r): rows are the points
        mats = np.swapaxes(bases, 1, 2).astype(np.float64)   # columns are the points
        dets = np.rint(np.linalg.det(mats)).astype(np.int64) % 3
        ok = np.nonzero(dets)[0]
        if len(ok) == 0:
            continue
        good = mats[ok]
        inv = np.linalg.inv(good)
        adj = np.rint(inv * np.linalg.det(good)[:, None, None]).astype(np.int64)
        det_inv = dets[ok]                        # det^-1 = det over GF(3)
        a = np.einsum("mij,jk->mik", adj, rmat) * det_inv[:, None, None] % 3
        counts = (a != 0).sum(axis=1)
        usable = np.nonzero((counts <= 2).all(axis=1))[0]
        for idx in usable:
            cols = [tuple(int(v) for v in a[idx][:, j]) for j in range(n)]
            found.add(_canonical_rows(cols))
    return _finalize(found, rep.col_labels, r)
