"""Planar box-like graph-directed systems: parsing, validation, geometry.

A system is a strongly connected digraph whose edges carry contracting
affine maps with diagonal or anti-diagonal linear part,

    diagonal:       (x, y) -> (sa*a*x + tx, sb*b*y + ty)
    anti-diagonal:  (x, y) -> (sa*a*y + tx, sb*b*x + ty)

with 0 < a, b < 1 and signs sa, sb in {+1, -1}, plus a probability
weight p; weights of the out-edges of each vertex sum to one.

Input file format (JSON)::

    {"vertices": ["v1", ...],
     "edges": [{"id": "e1", "from": "v1", "to": "v1",
                "kind": "diagonal", "a": "3/4", "b": 0.25,
                "sign_a": 1, "sign_b": 1, "tx": 0, "ty": 0,
                "p": 0.5}, ...]}

Numbers may be floats or decimal/rational strings; string inputs are
kept as exact fractions so the open-set check never flaps on ties.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .digraph import is_strongly_connected
from .errors import FormatError, GifsValidationError, NotAdmissible, Violation

DIAGONAL = "diagonal"
ANTI_DIAGONAL = "anti-diagonal"

PSUM_TOL = 1e-12   # per-vertex probability row-sum tolerance
GEO_TOL = 1e-12    # float fallback tolerance for rectangle comparisons


def _parse_number(value, where: str):
    """Return (float, exact Fraction or None)."""
    if isinstance(value, bool):
        raise FormatError(f"{where}: expected a number, got a boolean")
    if isinstance(value, str):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{where}: cannot parse number {value!r}") from exc
        return float(frac), frac
    if isinstance(value, int):
        return float(value), Fraction(value)
    if isinstance(value, float):
        return value, None
    raise FormatError(f"{where}: expected a number, got {type(value).__name__}")


def _parse_sign(value, where: str) -> int:
    flt, _ = _parse_number(value, where)
    if flt not in (1.0, -1.0):
        raise FormatError(f"{where}: sign must be +1 or -1, got {value!r}")
    return int(flt)


@dataclass(frozen=True)
class AffineEdge:
    """One directed edge with its contraction data."""

    id: str
    src: str
    dst: str
    kind: str          # DIAGONAL or ANTI_DIAGONAL
    a: float           # |first-row nonzero entry|, in (0, 1)
    b: float           # |second-row nonzero entry|, in (0, 1)
    sign_a: int
    sign_b: int
    tx: float
    ty: float
    p: float
    # exact values when the input supplied strings/ints, else None
    a_exact: Optional[Fraction] = None
    b_exact: Optional[Fraction] = None
    tx_exact: Optional[Fraction] = None
    ty_exact: Optional[Fraction] = None

    @property
    def is_anti(self) -> bool:
        return self.kind == ANTI_DIAGONAL

    def rect(self, exact: bool = False):
        """Image of the unit square: (x0, x1, y0, y1).

        The x-extent has width a and the y-extent width b for either
        kind; the kind only matters under composition.
        """
        if exact and None not in (self.a_exact, self.b_exact,
                                  self.tx_exact, self.ty_exact):
            a, b, tx, ty = self.a_exact, self.b_exact, self.tx_exact, self.ty_exact
        else:
            a, b, tx, ty = self.a, self.b, self.tx, self.ty
        x0, x1 = (tx, tx + a) if self.sign_a > 0 else (tx - a, tx)
        y0, y1 = (ty, ty + b) if self.sign_b > 0 else (ty - b, ty)
        return x0, x1, y0, y1

    def linear(self) -> np.ndarray:
        if self.is_anti:
            return np.array([[0.0, self.sign_a * self.a],
                             [self.sign_b * self.b, 0.0]])
        return np.array([[self.sign_a * self.a, 0.0],
                         [0.0, self.sign_b * self.b]])

    def translation(self) -> np.ndarray:
        return np.array([self.tx, self.ty])


@dataclass(frozen=True, eq=False)
class GifsModel:
    """A validated system. Immutable; hashable by identity so results
    keyed on the model can be cached."""

    vertices: tuple
    edges: tuple

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def out_edges(self) -> dict:
        out = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            out[e.src].append(i)
        return {v: tuple(idx) for v, idx in out.items()}

    # --- flat arrays used by the numeric engines -------------------------
    @cached_property
    def a_arr(self) -> np.ndarray:
        return np.array([e.a for e in self.edges])

    @cached_property
    def b_arr(self) -> np.ndarray:
        return np.array([e.b for e in self.edges])

    @cached_property
    def p_arr(self) -> np.ndarray:
        return np.array([e.p for e in self.edges])

    @cached_property
    def anti_arr(self) -> np.ndarray:
        return np.array([e.is_anti for e in self.edges], dtype=bool)

    @cached_property
    def src_idx(self) -> np.ndarray:
        return np.array([self.vertex_index[e.src] for e in self.edges])

    @cached_property
    def dst_idx(self) -> np.ndarray:
        return np.array([self.vertex_index[e.dst] for e in self.edges])

    @cached_property
    def edge_chain(self) -> np.ndarray:
        """Boolean (E, E): edge e may be followed by edge e'."""
        return self.dst_idx[:, None] == self.src_idx[None, :]

    # --- derived constants ------------------------------------------------
    @property
    def alpha_star(self) -> float:
        return float(min(np.minimum(self.a_arr, self.b_arr)))

    @property
    def alpha_sup(self) -> float:
        return float(max(np.maximum(self.a_arr, self.b_arr)))

    @property
    def p_star(self) -> float:
        return float(self.p_arr.min())

    @property
    def p_sup(self) -> float:
        return float(self.p_arr.max())

    @property
    def is_diagonal(self) -> bool:
        return not bool(self.anti_arr.any())

    @property
    def is_single_vertex(self) -> bool:
        return len(self.vertices) == 1

    def edge(self, edge_id: str) -> AffineEdge:
        return self.edges[self.edge_index[edge_id]]


def _parse_edge(obj, index: int, vertex_set) -> AffineEdge:
    if not isinstance(obj, dict):
        raise FormatError(f"edges[{index}]: expected an object")
    try:
        eid = obj["id"]
        src, dst = obj["from"], obj["to"]
        kind = obj["kind"]
    except KeyError as exc:
        raise FormatError(f"edges[{index}]: missing field {exc.args[0]!r}") from exc
    if not isinstance(eid, str) or not eid:
        raise FormatError(f"edges[{index}]: id must be a nonempty string")
    where = f"edge {eid!r}"
    if kind not in (DIAGONAL, ANTI_DIAGONAL):
        raise FormatError(f"{where}: kind must be 'diagonal' or 'anti-diagonal'")
    for v, field in ((src, "from"), (dst, "to")):
        if v not in vertex_set:
            raise FormatError(f"{where}: {field} references unknown vertex {v!r}")
    missing = [k for k in ("a", "b", "sign_a", "sign_b", "tx", "ty", "p")
               if k not in obj]
    if missing:
        raise FormatError(f"{where}: missing field {missing[0]!r}")
    a, a_ex = _parse_number(obj["a"], f"{where}.a")
    b, b_ex = _parse_number(obj["b"], f"{where}.b")
    tx, tx_ex = _parse_number(obj["tx"], f"{where}.tx")
    ty, ty_ex = _parse_number(obj["ty"], f"{where}.ty")
    p, _ = _parse_number(obj["p"], f"{where}.p")
    return AffineEdge(id=eid, src=src, dst=dst, kind=kind, a=a, b=b,
                      sign_a=_parse_sign(obj["sign_a"], f"{where}.sign_a"),
                      sign_b=_parse_sign(obj["sign_b"], f"{where}.sign_b"),
                      tx=tx, ty=ty, p=p,
                      a_exact=a_ex, b_exact=b_ex, tx_exact=tx_ex, ty_exact=ty_ex)


def validate_gifs(raw: dict) -> GifsModel:
    """Parse and validate a raw system description.

    Structural problems raise FormatError; semantic ones raise
    GifsValidationError carrying the full violation list.
    """
    if not isinstance(raw, dict):
        raise FormatError("top level: expected an object")
    vertices = raw.get("vertices")
    edges_raw = raw.get("edges")
    if not isinstance(vertices, list) or not vertices:
        raise FormatError("'vertices' must be a nonempty list")
    if any(not isinstance(v, str) or not v for v in vertices):
        raise FormatError("vertex labels must be nonempty strings")
    if len(set(vertices)) != len(vertices):
        raise FormatError("duplicate vertex labels")
    if not isinstance(edges_raw, list) or not edges_raw:
        raise FormatError("'edges' must be a nonempty list")

    vertex_set = set(vertices)
    edges = [_parse_edge(obj, i, vertex_set) for i, obj in enumerate(edges_raw)]
    if len({e.id for e in edges}) != len(edges):
        raise FormatError("duplicate edge ids")

    violations: list[Violation] = []
    for e in edges:
        if not (0.0 < e.a < 1.0 and 0.0 < e.b < 1.0):
            violations.append(Violation(
                "NonContraction", e.id,
                f"a={e.a!r}, b={e.b!r} must lie in (0,1)"))
        if not (0.0 < e.p <= 1.0):
            violations.append(Violation(
                "ProbabilityRange", e.id, f"p={e.p!r} must lie in (0,1]"))

    out_sums = {v: 0.0 for v in vertices}
    out_count = {v: 0 for v in vertices}
    for e in edges:
        out_sums[e.src] += e.p
        out_count[e.src] += 1
    for v in vertices:
        if out_count[v] == 0:
            violations.append(Violation(
                "DanglingVertex", v, "vertex has no outgoing edge"))
        elif abs(out_sums[v] - 1.0) > PSUM_TOL:
            violations.append(Violation(
                "ProbabilityRowSum", v,
                f"out-edge probabilities sum to {out_sums[v]!r}, not 1"))

    vi = {v: i for i, v in enumerate(vertices)}
    succ = [[] for _ in vertices]
    for e in edges:
        succ[vi[e.src]].append(vi[e.dst])
    if not is_strongly_connected(len(vertices), succ):
        violations.append(Violation(
            "NotStronglyConnected", "",
            "the directed graph is not strongly connected"))

    if violations:
        raise GifsValidationError(violations)
    return GifsModel(vertices=tuple(vertices), edges=tuple(edges))


def load_model(path) -> GifsModel:
    """Read a system from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return validate_gifs(raw)


# --------------------------------------------------------------------------
# Rectangular open set condition
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RoscReport:
    passed: bool
    containment_failures: tuple   # (vertex, edge_id)
    overlap_pairs: tuple          # (vertex, edge_id, edge_id)


def _intervals_overlap(lo1, hi1, lo2, hi2, tol) -> bool:
    # open-interior overlap
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    if isinstance(lo, Fraction) and isinstance(hi, Fraction):
        return hi > lo
    return float(hi) - float(lo) > tol


def check_rosc(model: GifsModel) -> RoscReport:
    """For each vertex, check that the open-square images of its
    out-edges sit inside the open unit square with pairwise disjoint
    interiors. Exact arithmetic is used whenever the edge geometry was
    given as strings; otherwise comparisons use a 1e-12 band."""
    containment = []
    overlaps = []
    for v in model.vertices:
        rects = []
        for i in model.out_edges[v]:
            e = model.edges[i]
            r = e.rect(exact=True)
            exact = isinstance(r[0], Fraction)
            x0, x1, y0, y1 = r
            if exact:
                ok = x0 >= 0 and x1 <= 1 and y0 >= 0 and y1 <= 1
            else:
                ok = (float(x0) >= -GEO_TOL and float(x1) <= 1 + GEO_TOL
                      and float(y0) >= -GEO_TOL and float(y1) <= 1 + GEO_TOL)
            if not ok:
                containment.append((v, e.id))
            rects.append((e.id, r))
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                id1, (ax0, ax1, ay0, ay1) = rects[i]
                id2, (bx0, bx1, by0, by1) = rects[j]
                if (_intervals_overlap(ax0, ax1, bx0, bx1, GEO_TOL)
                        and _intervals_overlap(ay0, ay1, by0, by1, GEO_TOL)):
                    overlaps.append((v, id1, id2))
    return RoscReport(passed=not containment and not overlaps,
                      containment_failures=tuple(containment),
                      overlap_pairs=tuple(overlaps))


# --------------------------------------------------------------------------
# Word geometry
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WordGeometry:
    word: tuple        # edge ids
    c: float           # width of the image rectangle
    d: float           # height of the image rectangle
    orientation: str   # DIAGONAL if the composed linear part is diagonal
    p: float           # product of edge probabilities
    alpha1: float      # max(c, d)
    alpha2: float      # min(c, d)
    rect: tuple        # (x0, y0, x1, y1), exact image of the unit square


def compose_word(model: GifsModel, word: Sequence[str]) -> WordGeometry:
    """Geometry of the composed map along an admissible word."""
    if len(word) == 0:
        raise NotAdmissible("empty word")
    try:
        idx = [model.edge_index[w] for w in word]
    except KeyError as exc:
        raise NotAdmissible(f"unknown edge id {exc.args[0]!r}") from exc
    for k in range(1, len(idx)):
        prev, cur = model.edges[idx[k - 1]], model.edges[idx[k]]
        if prev.dst != cur.src:
            raise NotAdmissible(
                f"edges {prev.id!r} -> {cur.id!r} do not chain "
                f"({prev.dst!r} != {cur.src!r})")

    c, d, p = 1.0, 1.0, 1.0
    anti = False                      # orientation of the running product
    lin = np.eye(2)
    trans = np.zeros(2)
    for i in idx:
        e = model.edges[i]
        # width multiplies by a if the running product is diagonal, by b
        # if it is anti-diagonal (column swap); height symmetrically.
        c *= e.a if not anti else e.b
        d *= e.b if not anti else e.a
        p *= e.p
        trans = trans + lin @ e.translation()
        lin = lin @ e.linear()
        anti ^= e.is_anti

    # image of [0,1]^2 under xi -> lin @ xi + trans
    neg = np.minimum(lin, 0.0).sum(axis=1)
    pos = np.maximum(lin, 0.0).sum(axis=1)
    x0, y0 = trans + neg
    x1, y1 = trans + pos
    return WordGeometry(word=tuple(word), c=c, d=d,
                        orientation=ANTI_DIAGONAL if anti else DIAGONAL,
                        p=p, alpha1=max(c, d), alpha2=min(c, d),
                        rect=(float(x0), float(y0), float(x1), float(y1)))
