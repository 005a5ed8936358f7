"""Signed graphs: incidence matrices, circuits, balance, resigning, and the
cylinder flip.

Edges carry a sign and an orientation bit chosen so that the incidence matrix
is an exact function of the graph: resigning around a vertex set equals
negating those rows, and building a graph from a sparse matrix reproduces the
matrix exactly.

Circuits of a signed graph are the positive cycles, pairs of negative cycles
meeting in exactly one vertex, and pairs of vertex-disjoint negative cycles
joined by a path; equivalently, the minimal edge sets that are dependent in
the incidence matroid, which is how they are computed here (the graph-side
independence test is a union-find over vertex sign potentials).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations

from .exactmat import GF3, ExactMatrix
from .matroid import SubsetFamily, label_key


class InvalidSplit(ValueError):
    """A cylinder split violates one of its preconditions."""


class LabelMismatch(ValueError):
    """Two graphs with different edge labels were compared."""


class TooManyNonzeros(ValueError):
    """A column with three or more nonzeros cannot be an edge."""


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    sign: int           # +1 or -1
    label: str
    orient: int = 1     # column scale bit; see incidence_matrix

    def __post_init__(self):
        if self.sign not in (1, -1) or self.orient not in (1, -1):
            raise ValueError("sign and orient must be +1 or -1")

    @property
    def is_loop(self):
        return self.u == self.v

    def touches(self, w):
        return self.u == w or self.v == w


class SignedGraph:
    """Immutable signed graph with labeled edges."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(sorted(set(vertices), key=label_key))
        vset = set(self.vertices)
        norm = []
        for e in edges:
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e.label} uses an unknown vertex")
            if label_key(e.v) < label_key(e.u):
                e = replace(e, u=e.v, v=e.u,
                            orient=-e.orient if e.sign > 0 else e.orient)
            norm.append(e)
        self.edges = tuple(sorted(norm, key=lambda e: label_key(e.label)))
        if len({e.label for e in self.edges}) != len(self.edges):
            raise ValueError("edge labels must be pairwise distinct")

    def edge_labels(self):
        return tuple(e.label for e in self.edges)

    def edge(self, label):
        for e in self.edges:
            if e.label == label:
                return e
        raise KeyError(label)

    def __eq__(self, other):
        return (isinstance(other, SignedGraph) and self.vertices == other.vertices
                and self.edges == other.edges)

    def __repr__(self):
        return f"SignedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- incidence ----------------------------------------------------------------

    def incidence_matrix(self):
        """|V| x |E| GF(3) matrix; +1 into, -1 out of, negative edges both
        equal, negative loops a single -1 (up to the stored orientation)."""
        vidx = {v: i for i, v in enumerate(self.vertices)}
        rows = [[0] * len(self.edges) for _ in self.vertices]
        for j, e in enumerate(self.edges):
            if e.is_loop:
                if e.sign < 0:
                    rows[vidx[e.u]][j] = (-e.orient) % 3
            elif e.sign > 0:
                rows[vidx[e.u]][j] = e.orient % 3
                rows[vidx[e.v]][j] = (-e.orient) % 3
            else:
                rows[vidx[e.u]][j] = e.orient % 3
                rows[vidx[e.v]][j] = e.orient % 3
        return ExactMatrix(GF3, rows, self.edge_labels())

    # -- resigning -----------------------------------------------------------------

    def resign(self, around):
        """Flip the signs of the edges with exactly one endpoint in ``around``.

        The orientation bits are updated so the incidence matrix of the result
        equals the original with the rows of ``around`` negated.
        """
        s = set(around)
        out = []
        for e in self.edges:
            if e.is_loop:
                out.append(replace(e, orient=-e.orient) if e.u in s else e)
                continue
            flips = (e.u in s) + (e.v in s)
            if flips == 0:
                out.append(e)
            elif flips == 2:
                out.append(replace(e, orient=-e.orient))
            elif e.sign > 0:
                new_orient = -e.orient if e.u in s else e.orient
                out.append(replace(e, sign=-1, orient=new_orient))
            else:
                new_orient = -e.orient if e.u in s else e.orient
                out.append(replace(e, sign=1, orient=new_orient))
        return SignedGraph(self.vertices, out)

    # -- balance and blocking pairs ---------------------------------------------------

    def is_balanced(self):
        """No negative cycle: vertex potentials realize every edge sign."""
        pot = {}
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.is_loop:
                if e.sign < 0:
                    return False
                continue
            adj[e.u].append((e.v, e.sign))
            adj[e.v].append((e.u, e.sign))
        for root in self.vertices:
            if root in pot:
                continue
            pot[root] = 1
            stack = [root]
            while stack:
                w = stack.pop()
                for nb, sign in adj[w]:
                    want = pot[w] * sign
                    if nb in pot:
                        if pot[nb] != want:
                            return False
                    else:
                        pot[nb] = want
                        stack.append(nb)
        return True

    def balancing_set(self):
        """Vertices to resign so all edges turn positive, or None."""
        if not self.is_balanced():
            return None
        pot = {}
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            if not e.is_loop:
                adj[e.u].append((e.v, e.sign))
                adj[e.v].append((e.u, e.sign))
        for root in self.vertices:
            if root in pot:
                continue
            pot[root] = 1
            stack = [root]
            while stack:
                w = stack.pop()
                for nb, sign in adj[w]:
                    if nb not in pot:
                        pot[nb] = pot[w] * sign
                        stack.append(nb)
        return frozenset(v for v, p in pot.items() if p < 0)

    def delete_vertices(self, drop):
        drop = set(drop)
        keep_v = [v for v in self.vertices if v not in drop]
        keep_e = [e for e in self.edges if not (e.u in drop or e.v in drop)]
        return SignedGraph(keep_v, keep_e)

    def is_blocking_pair(self, u, v):
        """Every negative cycle meets u or v (allowing u == v)."""
        if u not in self.vertices or v not in self.vertices:
            raise ValueError("blocking pair vertices must exist")
        return self.delete_vertices({u, v}).is_balanced()

    # -- circuits ------------------------------------------------------------------

    def _independent(self, edge_subset):
        parent = {}
        parity = {}
        cycled = {}

        def find_sign(w):
            root = w
            sign = 1
            while parent[root] != root:
                sign *= parity[root]
                root = parent[root]
            return root, sign

        for e in edge_subset:
            for w in (e.u, e.v):
                if w not in parent:
                    parent[w] = w
                    parity[w] = 1
                    cycled[w] = False
            if e.is_loop:
                if e.sign > 0:
                    return False
                root, _ = find_sign(e.u)
                if cycled[root]:
                    return False
                cycled[root] = True
                continue
            ru, su = find_sign(e.u)
            rv, sv = find_sign(e.v)
            if ru != rv:
                if cycled[ru] and cycled[rv]:
                    return False
                parent[rv] = ru
                parity[rv] = su * sv * e.sign
                cycled[ru] = cycled[ru] or cycled[rv]
            else:
                if su * sv * e.sign > 0:
                    return False  # positive cycle
                if cycled[ru]:
                    return False  # second negative cycle in one component
                cycled[ru] = True
        return True

    def circuits_sg(self):
        """Minimal dependent edge sets: positive cycles, tight and loose
        handcuffs of negative cycles."""
        edges = self.edges
        n = len(edges)
        circuits = []
        masks = []
        for size in range(1, n + 1):
            for combo in combinations(range(n), size):
                mask = 0
                for j in combo:
                    mask |= 1 << j
                if any(mask & m == m for m in masks):
                    continue
                subset = [edges[j] for j in combo]
                if not self._independent(subset):
                    circuits.append(frozenset(e.label for e in subset))
                    masks.append(mask)
        return SubsetFamily(circuits)

    # -- serialization ----------------------------------------------------------------

    def to_text(self):
        lines = ["signedgraph"]
        lines.append("vertices " + " ".join(self.vertices))
        for e in self.edges:
            sign = "+" if e.sign > 0 else "-"
            orient = "+" if e.orient > 0 else "-"
            lines.append(f"edge {e.label} {e.u} {e.v} {sign} {orient}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0] != "signedgraph":
            raise ValueError("expected a signedgraph header")
        if len(lines) < 2 or not lines[1].startswith("vertices"):
            raise ValueError("expected a vertices line")
        vertices = lines[1].split()[1:]
        edges = []
        for ln in lines[2:]:
            parts = ln.split()
            if len(parts) != 6 or parts[0] != "edge":
                raise ValueError(f"bad edge line {ln!r}")
            _, label, u, v, sign, orient = parts
            edges.append(Edge(u, v, 1 if sign == "+" else -1, label,
                              1 if orient == "+" else -1))
        return cls(vertices, edges)

    def to_dot(self):
        lines = ["graph sg {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in self.edges:
            style = "solid" if e.sign > 0 else "dashed"
            lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.label}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def from_representation(a, basis_labels=()):
    """Signed graph of [I | A]: one vertex per row, identity columns become
    basis edges (negative loops), then one edge per column of A."""
    r = a.nrows
    vertices = [f"v{i + 1}" for i in range(r)]
    edges = []
    for i, lab in enumerate(basis_labels):
        edges.append(Edge(vertices[i], vertices[i], -1, lab, orient=-1))
    for j in range(a.ncols):
        col = a.column(j)
        edges.append(_column_edge(col, vertices, a.col_labels[j]))
    return SignedGraph(vertices, edges)


def _column_edge(col, vertices, label):
    support = [i for i, v in enumerate(col) if v]
    if len(support) > 2:
        raise TooManyNonzeros(f"column {label} has {len(support)} nonzeros")
    if not support:
        return Edge(vertices[0], vertices[0], 1, label)
    if len(support) == 1:
        i = support[0]
        orient = 1 if col[i] == 2 else -1
        return Edge(vertices[i], vertices[i], -1, label, orient)
    i, j = support
    vi, vj = col[i], col[j]
    if vi == vj:
        return Edge(vertices[i], vertices[j], -1, label, 1 if vi == 1 else -1)
    return Edge(vertices[i], vertices[j], 1, label, 1 if vi == 1 else -1)


def resign(g, around):
    return g.resign(around)


def is_balanced(g):
    return g.is_balanced()


def is_blocking_pair(g, u, v):
    return g.is_blocking_pair(u, v)


def circuits_sg(g):
    return g.circuits_sg()


def incidence_matrix(g):
    return g.incidence_matrix()


@dataclass(frozen=True)
class CylinderSplit:
    """Explicit data of a cylinder flip: the two blocking pairs forming the
    cut (coincidences allowed), and the edge labels of the side to reattach."""

    s1: str
    s2: str
    t1: str
    t2: str
    side2: frozenset

    def cut(self):
        return {self.s1, self.s2, self.t1, self.t2}


def cylinder_flip(g, split):
    """Split at the cut, reflect the second side (exchange the s-attachments
    and the t-attachments), and re-glue.

    Requires {s1,s2} and {t1,t2} to be blocking pairs, the sides to share no
    vertex outside the cut, and a resigning putting every negative edge on one
    side and incident with t1 or t2.  Raises InvalidSplit naming the violated
    precondition.  The incidence matroid is preserved.
    """
    for w in split.cut():
        if w not in g.vertices:
            raise InvalidSplit(f"cut vertex {w} is not in the graph")
    labels = set(g.edge_labels())
    side2 = set(split.side2)
    if not side2 <= labels:
        raise InvalidSplit("side assignment names unknown edges")
    cut = split.cut()
    touched2 = {w for lab in side2 for w in (g.edge(lab).u, g.edge(lab).v)}
    touched1 = {w for e in g.edges if e.label not in side2 for w in (e.u, e.v)}
    shared = (touched1 & touched2) - cut
    if shared:
        raise InvalidSplit(f"sides share non-cut vertices {sorted(shared)}")
    if not g.is_blocking_pair(split.s1, split.s2):
        raise InvalidSplit(f"{{{split.s1},{split.s2}}} is not a blocking pair")
    if not g.is_blocking_pair(split.t1, split.t2):
        raise InvalidSplit(f"{{{split.t1},{split.t2}}} is not a blocking pair")
    resigned = _resign_onto_side(g, split)
    if resigned is None:
        raise InvalidSplit("no resigning puts all negative edges on one side "
                           "incident with t1 or t2")
    mapping = {split.s1: split.s2, split.s2: split.s1}
    tmapping = {split.t1: split.t2, split.t2: split.t1}
    out = []
    for e in resigned.edges:
        if e.label not in side2:
            out.append(e)
            continue
        out.append(replace(e, u=_flip_end(e.u, e.sign, mapping, tmapping),
                           v=_flip_end(e.v, e.sign, mapping, tmapping)))
    return SignedGraph(resigned.vertices, out)


def _flip_end(w, sign, smap, tmap):
    in_s = w in smap
    in_t = w in tmap
    if in_s and in_t:
        # degenerate coincidence: negative edges cross by their t-role,
        # positive edges by their s-role
        return tmap[w] if sign < 0 else smap[w]
    if in_s:
        return smap[w]
    if in_t:
        return tmap[w]
    return w


def _resign_onto_side(g, split):
    """Resign so every negative edge lies on one side and meets t1 or t2."""
    side2 = set(split.side2)
    for side_labels in (side2, set(g.edge_labels()) - side2):
        allowed = {e.label for e in g.edges
                   if e.label in side_labels and (e.touches(split.t1)
                                                  or e.touches(split.t2))}
        rest = SignedGraph(g.vertices,
                           [e for e in g.edges if e.label not in allowed])
        around = rest.balancing_set()
        if around is None:
            continue
        resigned = g.resign(around)
        bad = [e.label for e in resigned.edges if e.sign < 0
               and e.label not in allowed]
        if bad:
            continue
        return resigned
    return None


def verify_flip(g, g2):
    """True iff the two graphs have identical circuits as label sets."""
    if set(g.edge_labels()) != set(g2.edge_labels()):
        raise LabelMismatch("graphs have different edge labels")
    return g.circuits_sg() == g2.circuits_sg()
