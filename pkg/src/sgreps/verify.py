"""Seeded property suites and the random instance generators they use.

Each suite function takes a seed and returns a list of (check name, passed,
detail) triples; the CLI ``verify`` command prints one line per check and the
test suite asserts they all pass.
"""

from __future__ import annotations

import random

from .exactmat import GF3, ExactMatrix
from .siggraph import CylinderSplit, Edge, SignedGraph


def random_signed_graph(rng, max_vertices=8, max_edges=12, loops=True):
    """Random signed graph; includes parallel edges and negative loops."""
    nv = rng.randrange(1, max_vertices + 1)
    vertices = [f"v{i + 1}" for i in range(nv)]
    ne = rng.randrange(1, max_edges + 1)
    edges = []
    for j in range(ne):
        if loops and rng.random() < 0.15:
            u = v = rng.choice(vertices)
        else:
            u = rng.choice(vertices)
            v = rng.choice([w for w in vertices if w != u] or [u])
        edges.append(Edge(u, v, rng.choice((1, -1)), f"e{j + 1}",
                          rng.choice((1, -1))))
    return SignedGraph(vertices, edges)


def _random_positive_component(rng, names, min_v=2, max_v=4, tag="h"):
    """Connected all-positive graph on fresh vertices; returns (vertices, edges)."""
    nv = rng.randrange(min_v, max_v + 1)
    vertices = [next(names) for _ in range(nv)]
    edges = []
    for i in range(1, nv):
        j = rng.randrange(i)
        edges.append((vertices[j], vertices[i]))
    extra = rng.randrange(0, nv)
    for _ in range(extra):
        u = rng.choice(vertices)
        v = rng.choice(vertices)
        if u != v:
            edges.append((u, v))
    return vertices, edges


def lemma_cylinder_instance(rng, degenerate=False):
    """A two-sided cylinder instance: all-positive sides joined by two
    positive s-connectors and two negative t-connectors.

    Returns (graph, split) where the split reattaches the second side.  With
    ``degenerate`` the first s-vertex coincides with the first t-vertex.
    """
    counter = iter(f"v{i}" for i in range(1, 100))
    v1, e1 = _random_positive_component(rng, counter,
                                        min_v=3 if degenerate else 4, max_v=5)
    v2, e2 = _random_positive_component(rng, counter, min_v=2, max_v=4)
    s1, s2, t2 = rng.sample(v1, 3)
    t1 = s1 if degenerate else rng.choice(
        [w for w in v1 if w not in (s1, s2, t2)])
    s1p, t1p = rng.sample(v2, 2)
    s2p = rng.choice(v2)
    t2p = rng.choice(v2)
    edges = []
    labels = iter(f"e{i}" for i in range(1, 200))
    side1 = []
    side2 = []
    for u, v in e1:
        lab = next(labels)
        side1.append(lab)
        edges.append(Edge(u, v, 1, lab))
    for u, v in e2:
        lab = next(labels)
        side2.append(lab)
        edges.append(Edge(u, v, 1, lab))
    for u, v, sign in ((s1, s1p, 1), (s2, s2p, 1), (t1, t1p, -1), (t2, t2p, -1)):
        lab = next(labels)
        side2.append(lab)
        edges.append(Edge(u, v, sign, lab))
    graph = SignedGraph(v1 + v2, edges)
    split = CylinderSplit(s1, s2, t1, t2, frozenset(side2))
    return graph, split
