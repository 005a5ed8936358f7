"""Shared loaders for the shipped fixture matrices."""

import os

from sgreps.exactmat import ExactMatrix
from sgreps.sgsearch import SgRepresentation

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "sgreps", "data")
TESTDATA = os.path.join(os.path.dirname(__file__), "data")


def fixture_matrix(name):
    with open(os.path.join(DATA, name + ".matrix")) as fh:
        return ExactMatrix.from_text(fh.read())


def fixture_reps(name):
    """The classification fixture representations, as SgRepresentation list."""
    with open(os.path.join(TESTDATA, name + "_reps.txt")) as fh:
        text = fh.read()
    blocks, cur = [], []
    for ln in text.splitlines():
        if ln.strip():
            cur.append(ln)
        elif cur:
            blocks.append("\n".join(cur))
            cur = []
    if cur:
        blocks.append("\n".join(cur))
    out = []
    for block in blocks:
        m = ExactMatrix.from_text(block)
        out.append(SgRepresentation(m, tuple(f"b{i + 1}" for i in range(m.nrows))))
    return out
