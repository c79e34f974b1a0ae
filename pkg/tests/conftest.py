"""Shared fixtures: reference systems and a seeded random generator."""

from __future__ import annotations

import numpy as np
import pytest

from lqcarpet import validate_gifs
from lqcarpet.digraph import is_strongly_connected


def edge(eid, src, dst, kind, a, b, p, tx=0, ty=0, sign_a=1, sign_b=1):
    return {"id": eid, "from": src, "to": dst, "kind": kind, "a": a, "b": b,
            "sign_a": sign_a, "sign_b": sign_b, "tx": tx, "ty": ty, "p": p}


# the two-map system with widths 3/4, 1/4 and its rotated twin
SYS1_RAW = {
    "vertices": ["v"],
    "edges": [
        edge("e1", "v", "v", "diagonal", "3/4", "1/4", "1/2"),
        edge("e2", "v", "v", "diagonal", "1/4", "3/4", "1/2",
             tx="3/4", ty="1/4"),
    ],
}

SYS1P_RAW = {
    "vertices": ["v"],
    "edges": [
        edge("e1", "v", "v", "anti-diagonal", "3/4", "1/4", "1/2"),
        edge("e2", "v", "v", "diagonal", "1/4", "3/4", "1/2",
             tx="3/4", ty="1/4"),
    ],
}

# two half-scale corner maps; spectrum 1 - q, exact pressure cancellation
SYS2_RAW = {
    "vertices": ["v"],
    "edges": [
        edge("e1", "v", "v", "diagonal", "1/2", "1/2", "1/2"),
        edge("e2", "v", "v", "diagonal", "1/2", "1/2", "1/2",
             tx="1/2", ty="1/2"),
    ],
}

# asymmetric diagonal IFS whose interior-minimum branch is exercised at
# moderate q; also the regression case for the reducible hat split
ASYM_DIAG_RAW = {
    "vertices": ["v"],
    "edges": [
        edge("d1", "v", "v", "diagonal", 0.6, 0.2, 0.4),
        edge("d2", "v", "v", "diagonal", 0.3, 0.45, 0.6, ty=0.5),
    ],
}

# two-vertex mixed system, hat pattern irreducible
MIXED_2V_RAW = {
    "vertices": ["u", "w"],
    "edges": [
        edge("e1", "u", "w", "anti-diagonal", 0.55, 0.3, 0.65),
        edge("e2", "u", "u", "diagonal", 0.35, 0.5, 0.35, tx=0.6, ty=0.4),
        edge("e3", "w", "u", "diagonal", 0.6, 0.25, 0.6, ty=0.6),
        edge("e4", "w", "w", "anti-diagonal", 0.45, 0.35, 0.4,
             tx=0.5, ty=0.55),
    ],
}

# two-vertex anti-diagonal cycle: mixed kinds with a reducible hat
# pattern (the doubled projection graph splits into two families)
MIXED_SPLIT_RAW = {
    "vertices": ["u", "w"],
    "edges": [
        edge("e1", "u", "w", "anti-diagonal", 0.6, 0.25, 0.55),
        edge("e2", "u", "u", "diagonal", 0.3, 0.45, 0.45, tx=0.65, ty=0.3),
        edge("e3", "w", "u", "anti-diagonal", 0.5, 0.35, 1.0, ty=0.6),
    ],
}


@pytest.fixture(scope="session")
def sys1():
    return validate_gifs(SYS1_RAW)


@pytest.fixture(scope="session")
def sys1p():
    return validate_gifs(SYS1P_RAW)


@pytest.fixture(scope="session")
def sys2():
    return validate_gifs(SYS2_RAW)


@pytest.fixture(scope="session")
def asym_diag():
    return validate_gifs(ASYM_DIAG_RAW)


@pytest.fixture(scope="session")
def mixed_2v():
    return validate_gifs(MIXED_2V_RAW)


@pytest.fixture(scope="session")
def mixed_split():
    return validate_gifs(MIXED_SPLIT_RAW)


def random_system(rng, n_vertices=None, total_edges=None, kinds="mixed"):
    """A random valid system satisfying the open set condition by
    construction (per vertex, image rectangles are stacked rows).

    kinds: "mixed" flips each edge independently, "diagonal" keeps all
    linear parts diagonal."""
    n_v = int(n_vertices) if n_vertices else int(rng.integers(1, 3))
    vertices = [f"v{i + 1}" for i in range(n_v)]
    if total_edges is None:
        total_edges = int(rng.integers(2, 5))
    total_edges = max(total_edges, 2 if n_v == 1 else n_v)
    if n_v == 1:
        counts = [total_edges]
    else:
        c1 = int(rng.integers(1, total_edges))
        counts = [c1, total_edges - c1]

    while True:
        dsts = [[vertices[int(rng.integers(0, n_v))] for _ in range(c)]
                for c in counts]
        succ = [[] for _ in range(n_v)]
        for vi, lst in enumerate(dsts):
            for d in lst:
                succ[vi].append(vertices.index(d))
        if is_strongly_connected(n_v, succ):
            break

    edges = []
    eid = 0
    for vi, v in enumerate(vertices):
        c = counts[vi]
        raw_h = rng.uniform(0.5, 1.0, size=c)
        heights = raw_h / raw_h.sum() * rng.uniform(0.6, 0.92)
        y_off = np.concatenate([[0.0], np.cumsum(heights)])[:-1]
        raw_p = rng.uniform(0.6, 1.4, size=c)
        probs = raw_p / raw_p.sum()
        for j in range(c):
            eid += 1
            kind = "diagonal"
            if kinds == "mixed" and rng.random() < 0.5:
                kind = "anti-diagonal"
            edges.append(edge(f"e{eid}", v, dsts[vi][j], kind,
                              float(rng.uniform(0.3, 0.7)),
                              float(heights[j]), float(probs[j]),
                              tx=float(rng.uniform(0, 0.3)),
                              ty=float(y_off[j])))
    return validate_gifs({"vertices": vertices, "edges": edges})
