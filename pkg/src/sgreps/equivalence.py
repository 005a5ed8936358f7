"""Row equivalence and scaling normal forms of standard representations.

Two representations with the same column labels are row-equivalent when they
share a reduced row echelon form.  The classification field matters: the
appendix-style partitions of signed-graph representations are computed over
the exact rationals (entries lifted 0/1/-1), where row operations cannot
absorb column scaling; a GF(3) variant is kept for comparison.

The forest-scaling normal form pins the entries of D on a spanning forest of
the associated bipartite graph to chosen targets by leaf peeling: scale the
leaf's row or column last, so earlier assignments stay fixed.  Restricting
column scaling factors to +-1 weakens this to targets that are +-(current
entry), which is checked and rejected otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .exactmat import (DYADIC, GF3, Dyadic, ExactMatrix, lift_gf3_to_dyadic,
                       rref)
from .matroid import label_key
from .sgsearch import SgRepresentation


class LabelMismatch(ValueError):
    """Representations with different column labels were compared."""


class InvalidForest(ValueError):
    """The assignment's edges are not an acyclic subset of the support."""


class ZeroTarget(ValueError):
    """Scaling targets must be nonzero."""


class UnreachableTarget(ValueError):
    """A +-1-restricted target must be +-(the current entry)."""


@dataclass(frozen=True)
class FundamentalIncidence:
    """0/1 support pattern of D in a standard representation [I | D]."""

    entries: tuple          # rows over {0, 1}
    row_labels: tuple
    col_labels: tuple

    def bipartite_edges(self):
        out = []
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if v:
                    out.append((self.row_labels[i], self.col_labels[j]))
        return out


@dataclass(frozen=True)
class ForestAssignment:
    """Forest edges of the associated bipartite graph with scaling targets."""

    edges: tuple            # (row_label, col_label) pairs
    targets: tuple = None   # one nonzero scalar per edge, or None

    def with_targets(self, targets):
        return replace(self, targets=tuple(targets))


def _split_standard(rep):
    """Split [I_r | D]; raises if the leading block is not the identity."""
    r = rep.nrows
    for i in range(r):
        for j in range(r):
            want_zero = i != j
            if rep.is_zero_entry(i, j) != want_zero:
                raise ValueError("representation is not in standard form [I | D]")
            if i == j:
                v = rep.entries[i][j]
                one = v == Dyadic(1) if rep.domain == DYADIC else v == 1
                if not one:
                    raise ValueError("representation is not in standard form [I | D]")
    d_rows = [row[r:] for row in rep.entries]
    return d_rows, rep.col_labels[:r], rep.col_labels[r:]


def fundamental_incidence(rep):
    """Replace each nonzero entry of D by a 1; labels inherited from D."""
    d_rows, row_labels, col_labels = _split_standard(rep)
    if rep.domain == DYADIC:
        pattern = tuple(tuple(0 if v.is_zero() else 1 for v in row) for row in d_rows)
    else:
        pattern = tuple(tuple(0 if v == 0 else 1 for v in row) for row in d_rows)
    return FundamentalIncidence(pattern, tuple(row_labels), tuple(col_labels))


def cycle_basis_size(fi):
    """n minus the number of components of the associated bipartite graph."""
    labels = list(fi.row_labels) + list(fi.col_labels)
    parent = {v: v for v in labels}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in fi.bipartite_edges():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = {find(v) for v in labels}
    return len(labels) - len(comps)


def spanning_forest(fi):
    """Deterministic spanning forest: lexicographic breadth-first search."""
    adj = {v: [] for v in list(fi.row_labels) + list(fi.col_labels)}
    for a, b in fi.bipartite_edges():
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v].sort(key=label_key)
    rows = set(fi.row_labels)
    seen = set()
    edges = []
    for root in sorted(adj, key=label_key):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            w = queue.pop(0)
            for nb in adj[w]:
                if nb in seen:
                    continue
                seen.add(nb)
                pair = (w, nb) if w in rows else (nb, w)
                edges.append(pair)
                queue.append(nb)
    return ForestAssignment(tuple(edges))


def _check_forest(fi, fa):
    support = set(fi.bipartite_edges())
    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for edge in fa.edges:
        if edge not in support:
            raise InvalidForest(f"edge {edge} is not in the support of D")
        for w in edge:
            parent.setdefault(w, w)
        ra, rb = find(edge[0]), find(edge[1])
        if ra == rb:
            raise InvalidForest(f"edge {edge} closes a cycle")
        parent[ra] = rb
    if len(set(fa.edges)) != len(fa.edges):
        raise InvalidForest("duplicate forest edges")


def _peel_order(fa):
    """Leaf removal order: repeatedly drop the lexicographically least
    degree-one vertex with its unique edge."""
    remaining = list(fa.edges)
    order = []
    while remaining:
        degree = {}
        for a, b in remaining:
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        leaves = sorted((v for v, d in degree.items() if d == 1), key=label_key)
        leaf = leaves[0]
        edge = next(e for e in remaining if leaf in e)
        order.append((leaf, edge))
        remaining.remove(edge)
    return order


def _normalize(rep, fa, restricted):
    if fa.targets is None or len(fa.targets) != len(fa.edges):
        raise ZeroTarget("one target per forest edge is required")
    fi = fundamental_incidence(rep)
    _check_forest(fi, fa)
    dom = rep.domain
    zero = Dyadic(0) if dom == DYADIC else 0

    def is_zero(v):
        return v.is_zero() if dom == DYADIC else v % 3 == 0

    for t in fa.targets:
        if is_zero(t):
            raise ZeroTarget("scaling targets must be nonzero")
    target_of = dict(zip(fa.edges, fa.targets))
    d_rows, row_labels, col_labels = _split_standard(rep)
    d = [list(row) for row in d_rows]
    ridx = {lab: i for i, lab in enumerate(row_labels)}
    cidx = {lab: j for j, lab in enumerate(col_labels)}

    if restricted:
        for edge in fa.edges:
            cur = d[ridx[edge[0]]][cidx[edge[1]]]
            t = target_of[edge]
            if dom == DYADIC:
                ok = t == cur or t == -cur
            else:
                ok = t % 3 == cur % 3 or t % 3 == (-cur) % 3
            if not ok:
                raise UnreachableTarget(
                    f"target for {edge} must be +-(current entry)")

    def scale_row(i, factor):
        d[i] = [_mul(dom, v, factor) for v in d[i]]

    def scale_col(j, factor):
        for i in range(len(d)):
            d[i][j] = _mul(dom, d[i][j], factor)

    for leaf, edge in reversed(_peel_order(fa)):
        i, j = ridx[edge[0]], cidx[edge[1]]
        cur = d[i][j]
        factor = _div(dom, target_of[edge], cur)
        if leaf == edge[1]:
            scale_col(j, factor)
        else:
            # row scaling; the identity column absorbs the inverse factor
            scale_row(i, factor)
    ident = ExactMatrix.identity(dom, len(row_labels), row_labels)
    tail = ExactMatrix(dom, d, col_labels)
    return ident.hstack(tail)


def _mul(dom, a, b):
    if dom == DYADIC:
        return a * b
    return (a * b) % 3


def _div(dom, a, b):
    if dom == DYADIC:
        return a / b
    return (a * b) % 3  # over GF(3) every nonzero is its own inverse


def normalize_brylawski(rep, fa):
    """Scale rows and columns so each forest entry equals its target.

    The result is the unique projectively equivalent standard representation
    with those forest values.
    """
    return _normalize(rep, fa, restricted=False)


def normalize_restricted(rep, fa):
    """Forest scaling with column factors restricted to +-1.

    Only targets of the form +-(current entry) are reachable; anything else
    raises UnreachableTarget.
    """
    return _normalize(rep, fa, restricted=True)


# -- row equivalence -----------------------------------------------------------------


def _as_matrix(rep):
    return rep.matrix if isinstance(rep, SgRepresentation) else rep


def rref_fingerprint(rep, field="rational"):
    """Canonical serialized rref of the representation over the given field."""
    m = _as_matrix(rep)
    if field == "rational":
        if m.domain == GF3:
            m = lift_gf3_to_dyadic(m)
        reduced, _ = rref(m)
    elif field == "gf3":
        if m.domain == DYADIC:
            from .exactmat import project_mod_p
            m = project_mod_p(m, 3)
        reduced, _ = rref(m)
    else:
        raise ValueError(f"unknown field {field!r}")
    return reduced.to_text()


def row_equivalent(a, b, field="rational"):
    """True iff the representations share a reduced row echelon form.

    Columns stay pinned in groundset order; the default field is the exact
    rationals on the 0/1/-1 lifts (the convention validated by the shipped
    classification fixtures).
    """
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.col_labels != mb.col_labels:
        raise LabelMismatch("column labels differ or are ordered differently")
    return rref_fingerprint(a, field) == rref_fingerprint(b, field)


def classify_row_equivalence(reps, field="rational"):
    """Partition indices of the representations into row-equivalence classes.

    Classes are sorted canonically by their rref fingerprint.
    """
    groups = {}
    for i, rep in enumerate(reps):
        groups.setdefault(rref_fingerprint(rep, field), []).append(i)
    return [groups[f] for f in sorted(groups)]


def partition_report(reps, field="rational"):
    """Text block: class sizes, member indices, and per-class fingerprints."""
    classes = classify_row_equivalence(reps, field)
    lines = [f"classes {len(classes)} of {len(reps)} representations"]
    for c, members in enumerate(classes):
        lines.append(f"class {c + 1} size {len(members)} members "
                     + " ".join(str(i) for i in members))
    for c, members in enumerate(classes):
        fp = rref_fingerprint(reps[members[0]], field)
        lines.append(f"fingerprint {c + 1}:")
        lines.extend("  " + ln for ln in fp.strip().splitlines())
    return "\n".join(lines) + "\n"


def projectively_equivalent(a, b):
    """True iff row plus column scalings carry one D onto the other.

    Decided by normalizing both on a common spanning forest with all-ones
    targets; representations with different supports are never equivalent.
    """
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.col_labels != mb.col_labels:
        raise LabelMismatch("column labels differ or are ordered differently")
    if ma.domain != mb.domain:
        raise ValueError("representations must share a domain")
    fa_i = fundamental_incidence(ma)
    fb_i = fundamental_incidence(mb)
    if fa_i.entries != fb_i.entries:
        return False
    forest = spanning_forest(fa_i)
    one = Dyadic(1) if ma.domain == DYADIC else 1
    fa = forest.with_targets([one] * len(forest.edges))
    return normalize_brylawski(ma, fa) == normalize_brylawski(mb, fa)
