"""Exact scalars and labeled dense matrices over GF(3) and the dyadic rationals.

Two coefficient domains are supported:

* ``gf3`` -- integers mod 3, stored as 0/1/2 and printed as 0/1/-1;
* ``dyadic`` -- rationals of the form odd * 2^exp, stored exactly.

Row reduction over the dyadic domain runs through ``fractions.Fraction``
internally; the reduced matrix is converted back to dyadic form, which is
always possible when the input is a weak dyadic matrix (the reduced entries
are then ratios of maximal subdeterminants).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

GF3 = "gf3"
GF5 = "gf5"
DYADIC = "dyadic"

_FIELD_MOD = {GF3: 3, GF5: 5}


class ZeroPivot(ValueError):
    """Pivot requested on a zero entry."""


class NonDyadicValue(ArithmeticError):
    """An exact operation left the dyadic rationals (odd denominator)."""


def _split_pow2(n):
    """n = odd * 2^k for n != 0; returns (odd, k)."""
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return n, k


class Dyadic:
    """A dyadic rational num * 2^exp with num odd (or the canonical zero 0*2^0)."""

    __slots__ = ("num", "exp")

    def __init__(self, num, exp=0):
        num = int(num)
        if num == 0:
            self.num, self.exp = 0, 0
        else:
            odd, k = _split_pow2(num)
            self.num, self.exp = odd, exp + k

    @classmethod
    def from_fraction(cls, q):
        q = Fraction(q)
        odd, k = _split_pow2(q.denominator)
        if odd != 1:
            raise NonDyadicValue(f"{q} has non-power-of-two denominator")
        return cls(q.numerator, -k)

    def to_fraction(self):
        if self.exp >= 0:
            return Fraction(self.num * (1 << self.exp))
        return Fraction(self.num, 1 << (-self.exp))

    def is_zero(self):
        return self.num == 0

    def is_signed_power_of_two(self):
        """True iff the value is +-2^k (or zero)."""
        return self.num in (0, 1, -1)

    def __bool__(self):
        return self.num != 0

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        if self.num == 0:
            return other
        if other.num == 0:
            return self
        lo = min(self.exp, other.exp)
        return Dyadic((self.num << (self.exp - lo)) + (other.num << (other.exp - lo)), lo)

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __sub__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.num * other.num, self.exp + other.exp)

    def __truediv__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        if other.num == 0:
            raise ZeroDivisionError("dyadic division by zero")
        if self.num % other.num != 0:
            raise NonDyadicValue(f"{self} / {other} is not dyadic")
        return Dyadic(self.num // other.num, self.exp - other.exp)

    def __eq__(self, other):
        return isinstance(other, Dyadic) and self.num == other.num and self.exp == other.exp

    def __hash__(self):
        return hash((self.num, self.exp))

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self):
        if self.exp >= 0:
            return str(self.num << self.exp) if self.num else "0"
        return f"{self.num}/2^{-self.exp}"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            if not den.startswith("2^"):
                raise ValueError(f"bad dyadic literal {text!r}")
            return cls(int(num), -int(den[2:]))
        return cls(int(text))


DY_ZERO = Dyadic(0)
DY_ONE = Dyadic(1)


def gf3_str(v):
    return "-1" if v % 3 == 2 else str(v % 3)


def parse_field_entry(text, mod):
    return int(text) % mod


class ExactMatrix:
    """Immutable dense matrix with labeled columns over one exact domain.

    Entries are plain ints for the finite-field domains and ``Dyadic`` values
    for the dyadic domain.  Column labels are pairwise distinct strings.
    """

    __slots__ = ("domain", "nrows", "ncols", "entries", "col_labels")

    def __init__(self, domain, entries, col_labels=None):
        if domain not in (GF3, GF5, DYADIC):
            raise ValueError(f"unknown domain {domain!r}")
        rows = tuple(tuple(row) for row in entries)
        if rows:
            ncols = len(rows[0])
        elif col_labels is not None:
            ncols = len(tuple(col_labels))
        else:
            ncols = 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        if domain in _FIELD_MOD:
            p = _FIELD_MOD[domain]
            rows = tuple(tuple(int(v) % p for v in row) for row in rows)
        else:
            rows = tuple(
                tuple(v if isinstance(v, Dyadic) else Dyadic(v) for v in row) for row in rows
            )
        if col_labels is None:
            col_labels = tuple(f"e{j + 1}" for j in range(ncols))
        else:
            col_labels = tuple(col_labels)
        if len(col_labels) != ncols:
            raise ValueError("label count does not match column count")
        if len(set(col_labels)) != ncols:
            raise ValueError("column labels must be pairwise distinct")
        self.domain = domain
        self.nrows = len(rows)
        self.ncols = ncols
        self.entries = rows
        self.col_labels = col_labels

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, domain, n, col_labels=None):
        one = DY_ONE if domain == DYADIC else 1
        zero = DY_ZERO if domain == DYADIC else 0
        return cls(domain, [[one if i == j else zero for j in range(n)] for i in range(n)],
                   col_labels)

    def with_labels(self, col_labels):
        return ExactMatrix(self.domain, self.entries, col_labels)

    def zero(self):
        return DY_ZERO if self.domain == DYADIC else 0

    # -- access ---------------------------------------------------------------

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(r[j] for r in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def submatrix_cols(self, col_indices):
        idx = list(col_indices)
        return ExactMatrix(self.domain, [[r[j] for j in idx] for r in self.entries],
                           [self.col_labels[j] for j in idx])

    def hstack(self, other):
        if other.domain != self.domain or other.nrows != self.nrows:
            raise ValueError("incompatible hstack")
        return ExactMatrix(self.domain,
                           [ra + rb for ra, rb in zip(self.entries, other.entries)],
                           self.col_labels + other.col_labels)

    def is_zero_entry(self, i, j):
        v = self.entries[i][j]
        return v.is_zero() if self.domain == DYADIC else v == 0

    def column_support(self, j):
        return tuple(i for i in range(self.nrows) if not self.is_zero_entry(i, j))

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.domain == other.domain
                and self.entries == other.entries and self.col_labels == other.col_labels)

    def __hash__(self):
        return hash((self.domain, self.entries, self.col_labels))

    def __repr__(self):
        return f"ExactMatrix({self.domain}, {self.nrows}x{self.ncols})"

    # -- fraction bridge (dyadic only) ----------------------------------------

    def to_fraction_rows(self):
        if self.domain == DYADIC:
            return [[v.to_fraction() for v in row] for row in self.entries]
        return [[Fraction(v) for v in row] for row in self.entries]

    # -- text format ------------------------------------------------------------
    # Line 1: "rows cols domain"; then one line per row, whitespace separated.
    # GF(3) entries print as 0/1/-1; dyadic entries as integers or "a/2^b".

    def to_text(self):
        lines = [f"{self.nrows} {self.ncols} {self.domain}"]
        for row in self.entries:
            if self.domain == DYADIC:
                lines.append(" ".join(str(v) for v in row))
            elif self.domain == GF3:
                lines.append(" ".join(gf3_str(v) for v in row))
            else:
                lines.append(" ".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, col_labels=None):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        head = lines[0].split()
        if len(head) != 3:
            raise ValueError(f"bad matrix header {lines[0]!r}")
        nrows, ncols, domain = int(head[0]), int(head[1]), head[2]
        if domain not in (GF3, GF5, DYADIC):
            raise ValueError(f"unknown domain {domain!r}")
        if len(lines) != 1 + nrows:
            raise ValueError(f"expected {nrows} rows, found {len(lines) - 1}")
        rows = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != ncols:
                raise ValueError(f"expected {ncols} entries in row {ln!r}")
            if domain == DYADIC:
                rows.append([Dyadic.parse(p) for p in parts])
            else:
                rows.append([parse_field_entry(p, _FIELD_MOD[domain]) for p in parts])
        return cls(domain, rows, col_labels)


# -- elimination ----------------------------------------------------------------


def _rref_mod(rows, p):
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if m[i][c] % p), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def _rref_fraction(rows):
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m):
    """Reduced row echelon form over the matrix's own domain.

    Returns ``(reduced, pivot_columns)``; the input is unchanged.
    """
    if m.domain in _FIELD_MOD:
        red, piv = _rref_mod(m.entries, _FIELD_MOD[m.domain])
        return ExactMatrix(m.domain, red, m.col_labels), piv
    red, piv = _rref_fraction(m.to_fraction_rows())
    dy = [[Dyadic.from_fraction(v) for v in row] for row in red]
    return ExactMatrix(DYADIC, dy, m.col_labels), piv


def rank(m):
    """Number of pivots of rref(m)."""
    if m.domain in _FIELD_MOD:
        return len(_rref_mod(m.entries, _FIELD_MOD[m.domain])[1])
    return len(_rref_fraction(m.to_fraction_rows())[1])


def pivot_swap(m, pivot_row, pivot_col, swap_to_row):
    """Scale the pivot row, clear the pivot column elsewhere, swap rows.

    The pivot entry must be nonzero; raises ZeroPivot otherwise.
    """
    if m.is_zero_entry(pivot_row, pivot_col):
        raise ZeroPivot(f"zero pivot at ({pivot_row}, {pivot_col})")
    if m.domain in _FIELD_MOD:
        p = _FIELD_MOD[m.domain]
        rows = [list(r) for r in m.entries]
        inv = pow(rows[pivot_row][pivot_col], p - 2, p)
        rows[pivot_row] = [(v * inv) % p for v in rows[pivot_row]]
        for i in range(m.nrows):
            if i != pivot_row and rows[i][pivot_col]:
                f = rows[i][pivot_col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[pivot_row])]
        rows[pivot_row], rows[swap_to_row] = rows[swap_to_row], rows[pivot_row]
        return ExactMatrix(m.domain, rows, m.col_labels)
    rows = m.to_fraction_rows()
    inv = 1 / rows[pivot_row][pivot_col]
    rows[pivot_row] = [v * inv for v in rows[pivot_row]]
    for i in range(m.nrows):
        if i != pivot_row and rows[i][pivot_col]:
            f = rows[i][pivot_col]
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[pivot_row])]
    rows[pivot_row], rows[swap_to_row] = rows[swap_to_row], rows[pivot_row]
    return ExactMatrix(DYADIC, [[Dyadic.from_fraction(v) for v in row] for row in rows],
                       m.col_labels)


# -- determinants ----------------------------------------------------------------


def det_mod(rows, cols, p):
    """Determinant mod p of the square submatrix on the given column indices."""
    m = [[row[j] % p for j in cols] for row in rows]
    n = len(m)
    d = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            d = -d
        piv = m[c][c]
        inv = pow(piv, p - 2, p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = (m[i][c] * inv) % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[c])]
        d = (d * piv) % p
    return d % p


def det_int(rows, cols):
    """Exact determinant of an integer submatrix by fraction-free elimination."""
    m = [[row[j] for j in cols] for row in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def dyadic_rows_to_int(m):
    """Scale a dyadic matrix by a power of two into integer rows.

    Returns (integer rows, scale exponent s) with int value = true * 2^s.
    """
    shift = 0
    for row in m.entries:
        for v in row:
            if v.num and v.exp < -shift:
                shift = -v.exp
    rows = []
    for row in m.entries:
        rows.append([v.num << (v.exp + shift) if v.num else 0 for v in row])
    return rows, shift


def _is_pow2_or_zero(n):
    n = abs(n)
    return n & (n - 1) == 0


def is_weak_dyadic(m):
    """True iff every maximal (rows x rows) subdeterminant is 0 or +-2^k.

    Exact scan over all column subsets; requires a dyadic matrix with
    rows <= cols.
    """
    if m.domain != DYADIC:
        raise ValueError("is_weak_dyadic needs a dyadic matrix")
    if m.nrows > m.ncols:
        raise ValueError("is_weak_dyadic needs rows <= cols")
    rows, _ = dyadic_rows_to_int(m)
    for cols in combinations(range(m.ncols), m.nrows):
        if not _is_pow2_or_zero(det_int(rows, cols)):
            return False
    return True


def project_mod_p(m, p):
    """Reduce a dyadic matrix mod an odd prime p (2 is invertible mod p)."""
    if m.domain != DYADIC:
        raise ValueError("project_mod_p needs a dyadic matrix")
    if p % 2 == 0 or p < 3:
        raise ValueError("p must be an odd prime")
    domain = {3: GF3, 5: GF5}.get(p)
    if domain is None:
        raise ValueError("only GF(3) and GF(5) projections are supported")
    inv2 = pow(2, p - 2, p)
    out = []
    for row in m.entries:
        line = []
        for v in row:
            if v.num == 0:
                line.append(0)
            elif v.exp >= 0:
                line.append((v.num % p) * pow(2, v.exp, p) % p)
            else:
                line.append((v.num % p) * pow(inv2, -v.exp, p) % p)
        out.append(line)
    return ExactMatrix(domain, out, m.col_labels)


def lift_gf3_to_dyadic(m):
    """Lift a GF(3) matrix to the rationals with entries in {0, 1, -1}."""
    if m.domain != GF3:
        raise ValueError("expected a GF(3) matrix")
    conv = {0: DY_ZERO, 1: DY_ONE, 2: Dyadic(-1)}
    return ExactMatrix(DYADIC, [[conv[v] for v in row] for row in m.entries], m.col_labels)
