"""Axis-projection analysis.

Projecting every vertex measure onto the two coordinate axes yields a
self-similar graph-directed family on the doubled vertex set
{v_x, v_y}: a diagonal edge keeps axes apart (v_x -> v'_x with ratio a,
v_y -> v'_y with ratio b), an anti-diagonal edge crosses them
(v_x -> v'_y with ratio a, v_y -> v'_x with ratio b). The doubled graph
is either strongly connected, or it splits into exactly two strongly
connected families A and B that pick one axis per vertex.

Each family's spectrum tau_F(q) is the unique s with rho(M) = 1, where
M sums p^q * r^s over the family's arcs between node pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import strongly_connected_components
from .model import GifsModel
from .spectral import solve_rho_one

IRREDUCIBLE = "irreducible"
SPLIT = "split"


@dataclass(frozen=True)
class DoubledArc:
    edge_id: str
    axis: str      # which projection of the source vertex this arc carries
    src: int       # node index
    dst: int
    ratio: float   # a_e on the x-copy, b_e on the y-copy
    p: float


@dataclass(frozen=True, eq=False)
class DoubledGraph:
    nodes: tuple   # (vertex, axis) pairs: v1_x, v1_y, v2_x, ...
    arcs: tuple

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def successors(self):
        succ = [[] for _ in self.nodes]
        for a in self.arcs:
            succ[a.src].append(a.dst)
        return succ


@dataclass(frozen=True)
class FamilySplit:
    mode: str            # IRREDUCIBLE or SPLIT
    family_a: tuple      # node indices; all nodes when irreducible
    family_b: tuple      # () when irreducible
    role_in_a: dict      # vertex -> "x" | "y" | "both"


@dataclass(frozen=True)
class TauPair:
    """Projection spectra at one q, with the per-vertex axis roles."""

    q: float
    tau_a: float
    tau_b: float
    t: float                 # tau_a + tau_b
    tau_x: dict              # vertex -> spectrum of its x-projection
    tau_y: dict
    role_in_a: dict          # carried through for the hat machinery


def build_doubled_graph(model: GifsModel) -> DoubledGraph:
    nodes = []
    for v in model.vertices:
        nodes.append((v, "x"))
        nodes.append((v, "y"))
    node_index = {n: i for i, n in enumerate(nodes)}
    arcs = []
    for e in model.edges:
        if e.is_anti:
            wiring = (("x", "y", e.a), ("y", "x", e.b))
        else:
            wiring = (("x", "x", e.a), ("y", "y", e.b))
        for src_axis, dst_axis, ratio in wiring:
            arcs.append(DoubledArc(edge_id=e.id, axis=src_axis,
                                   src=node_index[(e.src, src_axis)],
                                   dst=node_index[(e.dst, dst_axis)],
                                   ratio=ratio, p=e.p))
    return DoubledGraph(nodes=tuple(nodes), arcs=tuple(arcs))


def partition_families(doubled: DoubledGraph) -> FamilySplit:
    """Split the doubled graph into its one or two strongly connected
    families. When it splits, family A is the component containing the
    first vertex's x-copy."""
    comps = strongly_connected_components(doubled.node_count,
                                          doubled.successors())
    if len(comps) == 1:
        role = {v: "both" for v, axis in doubled.nodes if axis == "x"}
        return FamilySplit(mode=IRREDUCIBLE,
                           family_a=tuple(range(doubled.node_count)),
                           family_b=(), role_in_a=role)
    if len(comps) != 2:
        raise AssertionError(
            f"doubled graph has {len(comps)} components; a valid strongly "
            "connected system admits one or two")
    one, two = comps
    if 0 in two:
        one, two = two, one
    in_one = set(one)
    role = {}
    for v, axis in doubled.nodes:
        if axis == "x":
            role[v] = "x" if doubled.nodes.index((v, "x")) in in_one else "y"
    # exactly one copy of each vertex per family
    for v in role:
        x_in = doubled.nodes.index((v, "x")) in in_one
        y_in = doubled.nodes.index((v, "y")) in in_one
        if x_in == y_in:
            raise AssertionError(f"vertex {v!r} has both copies in one family")
    return FamilySplit(mode=SPLIT, family_a=tuple(one), family_b=tuple(two),
                       role_in_a=role)


def _family_tau(doubled: DoubledGraph, nodes, q: float) -> float:
    """Unique s with rho(M^{ q,s }) = 1 for one family's arc system."""
    pos = {n: i for i, n in enumerate(nodes)}
    arcs = [a for a in doubled.arcs if a.src in pos and a.dst in pos]
    n = len(nodes)
    p = np.array([a.p for a in arcs])
    r = np.array([a.ratio for a in arcs])
    rows = np.array([pos[a.src] for a in arcs])
    cols = np.array([pos[a.dst] for a in arcs])

    def matrix_at(s: float) -> np.ndarray:
        M = np.zeros((n, n))
        np.add.at(M, (rows, cols), p ** q * r ** s)
        return M

    return solve_rho_one(matrix_at)


def projection_tau(doubled: DoubledGraph, split: FamilySplit,
                   q: float) -> TauPair:
    if q < 0:
        raise ValueError("q must be nonnegative")
    if split.mode == IRREDUCIBLE:
        tau = _family_tau(doubled, split.family_a, q)
        tau_a = tau_b = tau
    else:
        tau_a = _family_tau(doubled, split.family_a, q)
        tau_b = _family_tau(doubled, split.family_b, q)
    t = tau_a + tau_b
    tau_x, tau_y = {}, {}
    for v, r in split.role_in_a.items():
        if r == "both":
            tau_x[v] = tau_y[v] = tau_a
        elif r == "x":
            tau_x[v], tau_y[v] = tau_a, tau_b
        else:
            tau_x[v], tau_y[v] = tau_b, tau_a
    return TauPair(q=q, tau_a=tau_a, tau_b=tau_b, t=t,
                   tau_x=tau_x, tau_y=tau_y, role_in_a=dict(split.role_in_a))


def tau_pair(model: GifsModel, q: float) -> TauPair:
    """Convenience wrapper: doubled graph, family split, spectra."""
    doubled = build_doubled_graph(model)
    split = partition_families(doubled)
    return projection_tau(doubled, split, q)
