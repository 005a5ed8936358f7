"""Breadth-first generation of small 3-connected dyadic matroids.

Starting from the seven-element rank-3 seed (the non-Fano) and its dual, the
closure under simple dyadic single-element extensions and cosimple
single-element coextensions is computed size by size, with isomorphism
deduplication.  Candidates whose matroid has an eight-element P8 minor are
excluded: such matroids have no signed-graph representation.

Extension columns carry entries {0, +-2^k : |k| <= bound}; because the
sources never state a bound, every level is re-scanned at bound + 1 and a
genuinely new matroid there raises CandidateBoundExceeded instead of being
silently dropped.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactmat import DYADIC, Dyadic, ExactMatrix, is_weak_dyadic, rref
from .extension import extension_columns
from .matroid import LinearMatroid, are_isomorphic, label_key


class CandidateBoundExceeded(RuntimeError):
    """Raising the entry bound produced a new non-isomorphic matroid."""


def nonfano_seed():
    """Dyadic standard representation of the seven-point rank-3 seed."""
    d = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1]]
    rows = [[1 if i == j else 0 for j in range(3)] + d[i] for i in range(3)]
    return LinearMatroid(ExactMatrix(DYADIC, rows))


def p8_fixture():
    """The eight-element rank-4 excluded minor, in its dyadic form."""
    d = [[0, 1, 1, 2], [1, 0, 1, 1], [1, 1, 0, 1], [2, 1, 1, 0]]
    rows = [[1 if i == j else 0 for j in range(4)] + d[i] for i in range(4)]
    return LinearMatroid(ExactMatrix(DYADIC, rows))


def seed_set():
    """The two seeds, validated: 3-connected, simple, cosimple, weak dyadic."""
    first = _canonical_matroid(nonfano_seed().rep)
    second = _canonical_matroid(first.dual().rep)
    for m in (first, second):
        if not (m.is_simple() and m.is_cosimple() and m.is_3connected()
                and is_weak_dyadic(m.rep)):
            raise AssertionError("seed fails its structural invariants")
    return first, second


def _canonical_matroid(rep):
    """Reduced representation with columns in natural label order."""
    order = sorted(range(rep.ncols), key=lambda j: label_key(rep.col_labels[j]))
    red, piv = rref(rep.submatrix_cols(order))
    if len(piv) < red.nrows:
        red = ExactMatrix(red.domain, red.entries[:len(piv)], red.col_labels)
    return LinearMatroid(red)


def _fresh_label(labels):
    used = set(labels)
    k = len(labels) + 1
    while f"e{k}" in used:
        k += 1
    return f"e{k}"


def _is_parallel(cols, x):
    """x proportional (over Q) to one of the existing columns."""
    xfrac = [v.to_fraction() for v in x]
    n = len(xfrac)
    for col in cols:
        c = [v.to_fraction() for v in col]
        if all(xfrac[i] * c[j] == xfrac[j] * c[i]
               for i in range(n) for j in range(i + 1, n)):
            return True
    return False


def single_extensions(m, bound=2):
    """Simple single-element dyadic extensions of a weak dyadic matroid.

    One extension per distinct labeled matroid: candidate columns whose
    subdeterminants vanish on the same hyperplane set yield equal extensions,
    so only the first (canonically least) column of each pattern is kept.
    The zero column (a loop) and columns parallel to existing ones are
    filtered out, which is exactly the simplicity condition.
    """
    rep = m.rep
    new_label = _fresh_label(rep.col_labels)
    cols = [rep.column(j) for j in range(rep.ncols)]
    out = []
    seen_patterns = set()
    for col, pattern in extension_columns(m, bound=bound):
        if all(v.is_zero() for v in col):
            continue
        if pattern in seen_patterns:
            continue
        seen_patterns.add(pattern)
        if _is_parallel(cols, col):
            continue
        tail = ExactMatrix(DYADIC, [[v] for v in col], [new_label])
        out.append(LinearMatroid(rep.hstack(tail)))
    return out


def single_coextensions(m, bound=2):
    """Cosimple coextensions: duals of the simple extensions of the dual."""
    return [ext.dual() for ext in single_extensions(m.dual(), bound=bound)]


@dataclass(frozen=True)
class CatalogEntry:
    matroid: LinearMatroid
    seed: str
    ancestry: tuple        # sequence of "EXT" / "COEXT" moves
    entry_id: str

    @property
    def size(self):
        return self.matroid.size

    @property
    def rank(self):
        return self.matroid.rank


def _entry_id(rep):
    return hashlib.sha256(rep.to_text().encode()).hexdigest()[:12]


def _iso_fingerprint(m):
    counts = {}
    for b in m.bases():
        for e in b:
            counts[e] = counts.get(e, 0) + 1
    return (m.size, m.rank, len(m.bases()), tuple(sorted(counts.values())))


def has_p8_minor(m, p8=None):
    """Brute force over disjoint contraction/deletion sets down to 8 elements.

    Restricting to independent contraction sets is complete: contracting a
    dependent set equals contracting a maximal independent subset and
    deleting the rest.
    """
    if m.size < 8:
        return False
    if p8 is None:
        p8 = p8_fixture()
    drop = m.size - 8
    ground = list(m.groundset)
    nb_p8 = len(p8.bases())
    for csize in range(drop + 1):
        dsize = drop - csize
        for cset in combinations(ground, csize):
            if m.rank_of(cset) != csize:
                continue
            contracted = m
            for e in cset:
                contracted = contracted.contract(e)
            rest = [e for e in ground if e not in cset]
            for dset in combinations(rest, dsize):
                minor = contracted
                for e in dset:
                    minor = minor.delete(e)
                if minor.rank != p8.rank or len(minor.bases()) != nb_p8:
                    continue
                if are_isomorphic(minor, p8) is not None:
                    return True
    return False


def generate_matroids(max_size, bound=2, escalate=True):
    """Size-by-size closure of the seeds under extensions and coextensions.

    Every accepted entry is validated: 3-connected, simple, cosimple, weak
    dyadic, and free of P8 minors.  With ``escalate`` the candidate scan is
    repeated at bound + 1 and CandidateBoundExceeded is raised if any extra
    candidate produces a matroid not isomorphic to an accepted one.
    """
    if max_size < 7:
        raise ValueError("max_size must be at least 7")
    p8 = p8_fixture()
    first, second = seed_set()
    entries = [CatalogEntry(first, "seed3", (), _entry_id(first.rep)),
               CatalogEntry(second, "seed4", (), _entry_id(second.rep))]
    by_size = {7: list(entries)}
    for size in range(7, max_size):
        parents = by_size.get(size, [])
        candidates = []
        extras = []
        for parent in parents:
            moves = [(single_extensions, "EXT"), (single_coextensions, "COEXT")]
            for fn, tag in moves:
                for child in fn(parent.matroid, bound=bound):
                    candidates.append((parent, tag, _canonical_matroid(child.rep)))
                if escalate:
                    for child in fn(parent.matroid, bound=bound + 1):
                        extras.append(_canonical_matroid(child.rep))
        candidates.sort(key=lambda t: t[2].rep.to_text())
        accepted = []
        buckets = {}
        for parent, tag, child in candidates:
            if has_p8_minor(child, p8):
                continue
            fp = _iso_fingerprint(child)
            known = buckets.get(fp, [])
            if any(are_isomorphic(child, other.matroid) is not None
                   for other in known):
                continue
            _validate_entry(child)
            entry = CatalogEntry(child, parent.seed,
                                 parent.ancestry + (tag,),
                                 _entry_id(child.rep))
            accepted.append(entry)
            buckets.setdefault(fp, []).append(entry)
        by_size[size + 1] = accepted
        entries.extend(accepted)
        if escalate:
            _check_escalation(extras, buckets, p8)
    return entries


def _validate_entry(m):
    if not m.is_simple():
        raise AssertionError("generated matroid is not simple")
    if not m.is_cosimple():
        raise AssertionError("generated matroid is not cosimple")
    if not m.is_3connected():
        raise AssertionError("generated matroid is not 3-connected")
    if not is_weak_dyadic(m.rep):
        raise AssertionError("generated representation is not weak dyadic")


def _check_escalation(extras, buckets, p8):
    for child in extras:
        if has_p8_minor(child, p8):
            continue
        fp = _iso_fingerprint(child)
        known = buckets.get(fp, [])
        if not any(are_isomorphic(child, other.matroid) is not None
                   for other in known):
            raise CandidateBoundExceeded(
                "a larger entry bound produced a new matroid of size "
                f"{child.size}")


# -- catalog persistence --------------------------------------------------------------


def catalog_to_text(entries):
    lines = []
    for e in entries:
        flat = e.matroid.rep.to_text().strip().replace("\n", ";")
        ancestry = ",".join(e.ancestry) if e.ancestry else "-"
        lines.append(f"id={e.entry_id} size={e.size} rank={e.rank} "
                     f"seed={e.seed} ancestry={ancestry} matrix={flat}")
    return "\n".join(lines) + "\n"


def catalog_from_text(text):
    entries = []
    for ln in text.strip().splitlines():
        if not ln.strip():
            continue
        fields = {}
        head, _, matrix = ln.partition(" matrix=")
        for part in head.split():
            key, _, val = part.partition("=")
            fields[key] = val
        rep = ExactMatrix.from_text(matrix.replace(";", "\n"))
        ancestry = () if fields["ancestry"] == "-" else tuple(fields["ancestry"].split(","))
        entry = CatalogEntry(LinearMatroid(rep), fields["seed"], ancestry,
                             fields["id"])
        if entry.entry_id != _entry_id(entry.matroid.rep):
            raise ValueError(f"catalog id mismatch for {fields['id']}")
        if entry.size != int(fields["size"]) or entry.rank != int(fields["rank"]):
            raise ValueError(f"catalog size/rank mismatch for {fields['id']}")
        entries.append(entry)
    return entries
