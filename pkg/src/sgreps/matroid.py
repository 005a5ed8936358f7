"""Linear matroids from exact matrices, at desk scale (n <= 12).

Rank queries, bases, circuits, duality, minors, connectivity, equality and
isomorphism all derive from a single memoized rank oracle on the representing
matrix.  Dyadic representations are handled with exact integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .exactmat import (DYADIC, GF3, GF5, ExactMatrix, _FIELD_MOD, det_int,
                       det_mod, dyadic_rows_to_int, rref)


class UnknownElement(KeyError):
    """A label outside the groundset was supplied."""


class GroundsetMismatch(ValueError):
    """Two matroids on different groundsets were compared."""


def label_key(label):
    """Natural sort key: e2 before e10."""
    head = label.rstrip("0123456789")
    tail = label[len(head):]
    return (head, int(tail) if tail else -1)


class SubsetFamily:
    """A deduplicated, canonically sorted family of element-label sets."""

    __slots__ = ("member_sets",)

    def __init__(self, sets):
        uniq = {frozenset(s) for s in sets}
        self.member_sets = tuple(
            sorted(uniq, key=lambda s: (len(s), sorted(label_key(x) for x in s)))
        )

    def __iter__(self):
        return iter(self.member_sets)

    def __len__(self):
        return len(self.member_sets)

    def __contains__(self, s):
        return frozenset(s) in set(self.member_sets)

    def __eq__(self, other):
        return isinstance(other, SubsetFamily) and self.member_sets == other.member_sets

    def __hash__(self):
        return hash(self.member_sets)

    def __repr__(self):
        shown = [sorted(s, key=label_key) for s in self.member_sets[:6]]
        more = "" if len(self.member_sets) <= 6 else f", ... ({len(self.member_sets)} total)"
        return f"SubsetFamily({shown}{more})"


class LinearMatroid:
    """Matroid of the column dependencies of an exact matrix.

    The representation is normalized to full row rank on construction (zero
    rows of the reduced form are dropped), so a column r-subset is a basis
    iff its representing determinant is nonzero.
    """

    def __init__(self, rep: ExactMatrix):
        red, piv = rref(rep)
        if len(piv) < red.nrows:
            red = ExactMatrix(red.domain, [red.entries[i] for i in range(len(piv))],
                              red.col_labels)
        self.rep = rep if rep.nrows == len(piv) else red
        self.groundset = self.rep.col_labels
        self.cached_rank = len(piv)
        self._idx = {lab: j for j, lab in enumerate(self.groundset)}
        if self.rep.domain in _FIELD_MOD:
            self._int_rows = [list(r) for r in self.rep.entries]
            self._mod = _FIELD_MOD[self.rep.domain]
        else:
            self._int_rows, _ = dyadic_rows_to_int(self.rep)
            self._mod = 0
        self._rank_cache = {}
        self._bases = None
        self._circuits = None

    # -- basic accessors ------------------------------------------------------

    @property
    def size(self):
        return len(self.groundset)

    @property
    def rank(self):
        return self.cached_rank

    def _positions(self, subset):
        try:
            return [self._idx[e] for e in subset]
        except KeyError as err:
            raise UnknownElement(f"{err.args[0]!r} is not in the groundset") from None

    # -- rank oracle ----------------------------------------------------------

    def _rank_of_positions(self, positions):
        mask = 0
        for j in positions:
            mask |= 1 << j
        cached = self._rank_cache.get(mask)
        if cached is not None:
            return cached
        cols = sorted(positions)
        if self._mod:
            p = self._mod
            mat = [[row[j] for j in cols] for row in self._int_rows]
            r = 0
            nr = len(mat)
            for c in range(len(cols)):
                pr = next((i for i in range(r, nr) if mat[i][c] % p), None)
                if pr is None:
                    continue
                mat[r], mat[pr] = mat[pr], mat[r]
                inv = pow(mat[r][c], p - 2, p)
                for i in range(r + 1, nr):
                    if mat[i][c]:
                        f = (mat[i][c] * inv) % p
                        mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
                r += 1
        else:
            mat = [[Fraction(row[j]) for j in cols] for row in self._int_rows]
            r = 0
            nr = len(mat)
            for c in range(len(cols)):
                pr = next((i for i in range(r, nr) if mat[i][c]), None)
                if pr is None:
                    continue
                mat[r], mat[pr] = mat[pr], mat[r]
                for i in range(r + 1, nr):
                    if mat[i][c]:
                        f = mat[i][c] / mat[r][c]
                        mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
                r += 1
        self._rank_cache[mask] = r
        return r

    def rank_of(self, subset):
        """Rank of the column submatrix on the given labels."""
        return self._rank_of_positions(self._positions(subset))

    # -- bases and circuits -----------------------------------------------------

    def _basis_position_sets(self):
        r = self.cached_rank
        n = self.size
        out = []
        for cols in combinations(range(n), r):
            if self._mod:
                d = det_mod(self._int_rows, cols, self._mod)
            else:
                d = det_int(self._int_rows, cols)
            if d:
                out.append(frozenset(cols))
        return out

    def bases(self):
        """All r-subsets with nonzero representing determinant."""
        if self._bases is None:
            labels = self.groundset
            self._bases = SubsetFamily(
                frozenset(labels[j] for j in s) for s in self._basis_position_sets()
            )
        return self._bases

    def circuits(self):
        """All minimal dependent subsets."""
        if self._circuits is not None:
            return self._circuits
        n = self.size
        found = []
        found_masks = []
        for size in range(1, self.cached_rank + 2):
            for combo in combinations(range(n), size):
                mask = 0
                for j in combo:
                    mask |= 1 << j
                if any(mask & cm == cm for cm in found_masks):
                    continue
                if self._rank_of_positions(combo) < size:
                    found.append(frozenset(self.groundset[j] for j in combo))
                    found_masks.append(mask)
        self._circuits = SubsetFamily(found)
        return self._circuits

    # -- duality and minors -------------------------------------------------------

    def standard_form(self):
        """Equivalent representation [I_r | D] with pivot columns first."""
        red, piv = rref(self.rep)
        others = [j for j in range(self.size) if j not in piv]
        return red.submatrix_cols(list(piv) + others), len(piv)

    def dual(self):
        """Standard-form dual [I_{n-r} | -D^T] on the same labels."""
        std, r = self.standard_form()
        n = self.size
        dom = std.domain
        if dom in _FIELD_MOD:
            p = _FIELD_MOD[dom]
            negdt = [[(-std.entries[i][r + j]) % p for i in range(r)] for j in range(n - r)]
            ident = ExactMatrix.identity(dom, n - r, std.col_labels[r:])
        else:
            negdt = [[-std.entries[i][r + j] for i in range(r)] for j in range(n - r)]
            ident = ExactMatrix.identity(dom, n - r, std.col_labels[r:])
        tail = ExactMatrix(dom, negdt, std.col_labels[:r])
        return LinearMatroid(ident.hstack(tail))

    def delete(self, e):
        """Matroid on the groundset minus e."""
        j = self._positions([e])[0]
        keep = [k for k in range(self.size) if k != j]
        return LinearMatroid(self.rep.submatrix_cols(keep))

    def contract(self, e):
        """Contract e; contraction of a loop is defined as deletion."""
        j = self._positions([e])[0]
        if self._rank_of_positions([j]) == 0:
            return self.delete(e)
        order = [j] + [k for k in range(self.size) if k != j]
        red, piv = rref(self.rep.submatrix_cols(order))
        rows = [[red.entries[i][c] for c in range(1, red.ncols)]
                for i in range(red.nrows) if i != 0]
        inner = ExactMatrix(red.domain, rows, red.col_labels[1:])
        back = sorted(range(inner.ncols), key=lambda c: self._idx[inner.col_labels[c]])
        return LinearMatroid(inner.submatrix_cols(back))

    # -- structure predicates -------------------------------------------------------

    def is_simple(self):
        """No loops and no parallel pairs (no circuit of size <= 2)."""
        n = self.size
        for j in range(n):
            if self._rank_of_positions([j]) == 0:
                return False
        for i, j in combinations(range(n), 2):
            if self._rank_of_positions([i, j]) < 2:
                return False
        return True

    def is_cosimple(self):
        return self.dual().is_simple()

    def is_3connected(self):
        """Connected with no 2-separation; brute force over all partitions."""
        n = self.size
        r = self.cached_rank
        full = list(range(n))
        for bits in range(1, 1 << (n - 1)):
            side = [j for j in full if bits & (1 << j)]
            other = [j for j in full if not bits & (1 << j)]
            lam = (self._rank_of_positions(side) + self._rank_of_positions(other) - r)
            if lam == 0:
                return False
            if lam <= 1 and len(side) >= 2 and len(other) >= 2:
                return False
        return True


def matroids_equal(a, b):
    """True iff the two matroids have the same bases as label sets."""
    if set(a.groundset) != set(b.groundset):
        raise GroundsetMismatch("matroids live on different groundsets")
    return a.bases() == b.bases()


def _pair_key(e, f):
    return (e, f) if label_key(e) <= label_key(f) else (f, e)


def _iso_invariants(m):
    basis_sets = m.bases().member_sets
    count = {e: 0 for e in m.groundset}
    pair = {}
    for b in basis_sets:
        ordered = sorted(b, key=label_key)
        for e in ordered:
            count[e] += 1
        for e, f in combinations(ordered, 2):
            pair[(e, f)] = pair.get((e, f), 0) + 1
    nb = len(basis_sets)
    loops = {e for e in m.groundset if m.rank_of([e]) == 0}
    coloops = {e for e in m.groundset if count[e] == nb}
    init = {e: (count[e], e in loops, e in coloops) for e in m.groundset}
    return init, pair


def _refine_colors(elems, init, pair):
    """Iterated refinement of element classes by pairwise basis counts.

    Renaming is by sorted signature value, so colors are comparable across
    matroids.
    """
    color = dict(init)
    nclasses = len(set(color.values()))
    while True:
        sig = {}
        for e in elems:
            around = sorted((color[f], pair.get(_pair_key(e, f), 0))
                            for f in elems if f != e)
            sig[e] = (color[e], tuple(around))
        ids = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        color = {e: ids[sig[e]] for e in elems}
        if len(ids) == nclasses:
            return color
        nclasses = len(ids)


def are_isomorphic(a, b):
    """A groundset bijection carrying bases(a) onto bases(b), or None.

    Backtracking over label assignments in lexicographic label order, pruned
    by refined per-element invariants and pairwise basis counts.
    """
    if a.size != b.size or a.rank != b.rank:
        return None
    ab = a.bases().member_sets
    bb = b.bases().member_sets
    if len(ab) != len(bb):
        return None
    ia, pa = _iso_invariants(a)
    ib, pb = _iso_invariants(b)
    if sorted(ia.values()) != sorted(ib.values()):
        return None
    cola = _refine_colors(list(a.groundset), ia, pa)
    colb = _refine_colors(list(b.groundset), ib, pb)
    if sorted(cola.values()) != sorted(colb.values()):
        return None
    elems_a = sorted(a.groundset, key=label_key)
    elems_b = sorted(b.groundset, key=label_key)
    bases_b = set(bb)
    assignment = {}

    def extend(i):
        if i == len(elems_a):
            mapped = {frozenset(assignment[e] for e in s) for s in ab}
            return mapped == bases_b
        e = elems_a[i]
        used = set(assignment.values())
        for f in elems_b:
            if f in used or cola[e] != colb[f]:
                continue
            if any(pa.get(_pair_key(e, e2), 0) != pb.get(_pair_key(f, f2), 0)
                   for e2, f2 in assignment.items()):
                continue
            assignment[e] = f
            if extend(i + 1):
                return True
            del assignment[e]
        return False

    if extend(0):
        return dict(assignment)
    return None
