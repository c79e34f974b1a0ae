"""Closed-form Lq-spectrum for general (mixed-kind) systems.

Orientation bookkeeping is linearized by splitting every edge e into
two hat-edges e(1), e(2) carrying the side lengths in both orders:

    diagonal e:       e(1) = (a, b)   e(2) = (b, a)
    anti-diagonal e:  e(1) = (b, a)   e(2) = (a, b)

with slot 1 tied to the x-projection spectrum of the target vertex and
slot 2 to the y-projection. Hat-edges chain like the underlying edges,
staying in their slot across diagonal edges and swapping slots across
anti-diagonal ones, so each admissible word lifts to exactly two
hat-words that mirror each other under the slot swap.

The engine works on the (2E x 2E) hat-edge weight matrix

    G(q; x, y)[h, h'] = p_{h'}^q * a_{h'}^(x + tau_{h'}) * b_{h'}^(y - tau_{h'})

for chaining hat-edge pairs. Writing t = tau_a + tau_b and hat_gamma
for the y-root of G at x = 0:

  case a  (hat_gamma <= t):  gamma = hat_gamma.
  case b  (hat_gamma > t):   constrained minimum of x + y(x) along the
      relevant rho = 1 curve, located through the sign of the
      stationary-weighted log side ratio (the derivative of x + y(x)
      up to a positive factor).

When the hat pattern is irreducible the curve is the rho(G) = 1 curve
itself and the paper-style endpoint antisymmetry applies. When the
pattern splits into two mirrored blocks, each block alone carries the
constrained minimum (the mirror block traces the same values through
the duality reflection), so the engine runs the endpoint-certificate
logic of the diagonal theory on the first block, with the window
[0, x_t] ending where the block curve crosses y = t. Minimizing over
the joint rho(G) = 1 curve (the upper envelope of the two block
curves) would overestimate the spectrum; see the engine-consistency
tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CrossCheckError, NotAdmissible, NotSingleVertex
from .model import GifsModel, compose_word
from .optimize import bisect_sign_change, refined_grid_min
from .projections import TauPair, tau_pair
from .spectral import (CurveSolver, LabeledMatrix, StationaryTracker,
                       perron_data, reducible_split, solve_rho_one,
                       spectral_radius)
from .tolerances import BRANCH_BAND, CHECK_TOL, CROSS_CHECK_TOL

# x + y(x) is quadratically flat at the sign root (smooth curves), so
# a modest x tolerance gives the value to ~1e-14
_ROOT_XATOL = 1e-7


@dataclass(frozen=True)
class HatEdge:
    base: str        # underlying edge id
    base_idx: int
    slot: int        # 1 or 2
    a: float
    b: float
    p: float
    dst: str         # terminal vertex of the underlying edge
    tau_role: str    # "x" for slot 1, "y" for slot 2

    @property
    def label(self):
        return (self.base, self.slot)


def mate(label):
    """The slot swap on hat-edge labels."""
    base, slot = label
    return (base, 3 - slot)


@lru_cache(maxsize=None)
def _hat_structure(model: GifsModel):
    hats = []
    for idx, e in enumerate(model.edges):
        pairs = ((e.b, e.a), (e.a, e.b)) if e.is_anti else ((e.a, e.b), (e.b, e.a))
        for slot, (a, b) in zip((1, 2), pairs):
            hats.append(HatEdge(base=e.id, base_idx=idx, slot=slot,
                                a=a, b=b, p=e.p, dst=e.dst,
                                tau_role="x" if slot == 1 else "y"))
    n = len(hats)
    allow = np.zeros((n, n), dtype=bool)
    for i, h in enumerate(hats):
        for j, h2 in enumerate(hats):
            e, e2 = model.edges[h.base_idx], model.edges[h2.base_idx]
            if e.dst != e2.src:
                continue
            allow[i, j] = (h2.slot != h.slot) if e2.is_anti else (h2.slot == h.slot)
    return tuple(hats), allow


def hat_edges(model: GifsModel):
    return _hat_structure(model)[0]


def hat_words(model: GifsModel, word):
    """The two hat-words over an admissible word, as label tuples.

    Returned as (w1, w2) where w1 ends in slot 1; the slot swap maps
    one onto the other letterwise."""
    compose_word(model, word)  # admissibility check
    chains = []
    for first_slot in (1, 2):
        slots = [first_slot]
        for w in word[1:]:
            e = model.edge(w)
            slots.append(3 - slots[-1] if e.is_anti else slots[-1])
        chains.append(tuple((w, s) for w, s in zip(word, slots)))
    if chains[0][-1][1] == 2:
        chains.reverse()
    if chains[0][-1][1] != 1 or chains[1][-1][1] != 2:
        raise NotAdmissible("hat chains must end in distinct slots")
    return chains[0], chains[1]


def _hat_tau_values(model: GifsModel, tau: TauPair) -> np.ndarray:
    hats, _ = _hat_structure(model)
    return np.array([tau.tau_x[h.dst] if h.tau_role == "x" else tau.tau_y[h.dst]
                     for h in hats])


def _hat_family(model: GifsModel, tau: TauPair, q: float):
    """(x, y) -> dense hat matrix, with the static arrays hoisted out so
    tight solve loops only pay a few vector operations per call."""
    hats, allow = _hat_structure(model)
    tau_h = _hat_tau_values(model, tau)
    a = np.array([h.a for h in hats])
    b = np.array([h.b for h in hats])
    wq = np.array([h.p for h in hats]) ** q
    mask = allow.astype(float)

    def matrix(x: float, y: float) -> np.ndarray:
        col = wq * a ** (x + tau_h) * b ** (y - tau_h)
        return mask * col[None, :]

    return matrix


def hat_edge_matrix(model: GifsModel, tau: TauPair, q: float, x: float,
                    y: float) -> LabeledMatrix:
    """The hat-edge weight matrix G at exponents (x, y)."""
    hats, _ = _hat_structure(model)
    return LabeledMatrix(labels=tuple(h.label for h in hats),
                         data=_hat_family(model, tau, q)(x, y))


def hat_gamma(model: GifsModel, tau: TauPair, q: float) -> float:
    """y-root of G at x = 0; checked against its duality twin."""
    family = _hat_family(model, tau, q)
    gh = solve_rho_one(lambda y: family(0.0, y))
    twin = spectral_radius(family(gh - tau.t, tau.t))
    if abs(twin - 1.0) > CHECK_TOL:
        raise CrossCheckError(
            f"duality check failed: rho at (hat_gamma - t, t) = {twin!r}")
    return gh


@dataclass(frozen=True)
class GeneralBranch:
    case: str            # "a" | "b"
    branch: str          # "a" | "b" | "b-endpoint" | "b1" | "b2" | "b3"
    hat_gamma: float
    reducible: bool
    x_star: float | None = None
    y_star: float | None = None


def _log_ratio_hat(model: GifsModel) -> np.ndarray:
    hats, _ = _hat_structure(model)
    return np.array([np.log(h.a) - np.log(h.b) for h in hats])


def lq_spectrum_general(model: GifsModel, tau: TauPair, q: float):
    """(gamma, GeneralBranch) for any strongly connected system."""
    gh = hat_gamma(model, tau, q)
    t = tau.t
    split = reducible_split(hat_edge_matrix(model, tau, q, 0.0, t))
    if gh <= t + BRANCH_BAND:
        return gh, GeneralBranch(case="a", branch="a", hat_gamma=gh,
                                 reducible=not split.irreducible)
    log_ratio = _log_ratio_hat(model)
    family = _hat_family(model, tau, q)

    if split.irreducible:
        matrix = family
        curve = CurveSolver(matrix)
        x_hi = gh - t
        tracker = StationaryTracker()

        def sign_fn(x: float) -> float:
            return float(tracker(matrix(x, curve(x))) @ log_ratio)

        s0, s1 = sign_fn(0.0), sign_fn(x_hi)
        if s0 < -BRANCH_BAND and s1 > BRANCH_BAND:
            x_star = bisect_sign_change(sign_fn, 0.0, x_hi, atol=_ROOT_XATOL,
                                        f_lo=s0, f_hi=s1)
            gamma = x_star + curve(x_star)
            branch = "b"
        else:
            # endpoint antisymmetry makes both ends equivalent; flat case
            x_star, gamma, branch = None, gh, "b-endpoint"
        check = CurveSolver(matrix)
        _, grid_min = refined_grid_min(lambda x: x + check(x), 0.0, x_hi)
        if abs(gamma - grid_min) > CROSS_CHECK_TOL:
            raise CrossCheckError(
                f"case-b value {gamma!r} vs grid minimum {grid_min!r}")
        return gamma, GeneralBranch(
            case="b", branch=branch, hat_gamma=gh, reducible=False,
            x_star=x_star, y_star=None if x_star is None else gamma - x_star)

    # reducible: one mirror block carries the constrained minimum
    idx = list(split.idx_one)
    ratio_blk = log_ratio[idx]

    sub = np.ix_(idx, idx)

    def block(x, y):
        return family(x, y)[sub]

    curve = CurveSolver(block)
    x_hi = solve_rho_one(lambda x: block(x, t))   # block curve meets y = t
    if x_hi < -CHECK_TOL:
        raise CrossCheckError(
            "case b with an empty block window; dichotomy violated")
    x_hi = max(x_hi, 0.0)
    tracker = StationaryTracker()

    def sign_fn(x: float) -> float:
        return float(tracker(block(x, curve(x))) @ ratio_blk)

    s0 = sign_fn(0.0)
    if s0 >= -BRANCH_BAND:
        gamma, branch, x_star = curve(0.0), "b1", None
    else:
        s1 = sign_fn(x_hi)
        if s1 <= BRANCH_BAND:
            gamma, branch, x_star = x_hi + t, "b2", None
        else:
            x_star = bisect_sign_change(sign_fn, 0.0, x_hi, atol=_ROOT_XATOL,
                                        f_lo=s0, f_hi=s1)
            gamma, branch = x_star + curve(x_star), "b3"
    check = CurveSolver(block)
    _, grid_min = refined_grid_min(lambda x: x + check(x), 0.0, x_hi)
    if abs(gamma - grid_min) > CROSS_CHECK_TOL:
        raise CrossCheckError(
            f"case-b block value {gamma!r} vs grid minimum {grid_min!r}")
    return gamma, GeneralBranch(
        case="b", branch=branch, hat_gamma=gh, reducible=True,
        x_star=x_star, y_star=None if x_star is None else gamma - x_star)


def box_dimension_general(model: GifsModel) -> float:
    """Box dimension of the attractors: hat_gamma at q = 0."""
    tau = tau_pair(model, 0.0)
    gh = hat_gamma(model, tau, 0.0)
    if gh > tau.t + CHECK_TOL:
        raise AssertionError("q=0 must satisfy hat_gamma <= t")
    return gh


# --------------------------------------------------------------------------
# Single-vertex collapse to a 2x2 matrix
# --------------------------------------------------------------------------

def ifs_collapsed_matrix(model: GifsModel, tau: TauPair, q: float, x: float,
                         y: float) -> LabeledMatrix:
    """Aggregate the hat-edge matrix of a single-vertex system into the
    2x2 slot matrix with identical spectral radius (all block rows of
    the hat matrix coincide, so summing the cells preserves the root).
    The radius identity is asserted on every call."""
    if not model.is_single_vertex:
        raise NotSingleVertex("collapse requires one vertex")
    v = model.vertices[0]
    tx, ty = tau.tau_x[v], tau.tau_y[v]
    a, b, p, anti = model.a_arr, model.b_arr, model.p_arr, model.anti_arr
    w = p ** q
    diag = ~anti
    h11 = float((w * a ** (x + tx) * b ** (y - tx))[diag].sum())
    h12 = float((w * a ** (x + ty) * b ** (y - ty))[anti].sum())
    h21 = float((w * b ** (x + tx) * a ** (y - tx))[anti].sum())
    h22 = float((w * b ** (x + ty) * a ** (y - ty))[diag].sum())
    H = LabeledMatrix(labels=("slot1", "slot2"),
                      data=np.array([[h11, h12], [h21, h22]]))
    full = spectral_radius(hat_edge_matrix(model, tau, q, x, y).data)
    if abs(spectral_radius(H.data) - full) > 1e-10 * max(1.0, full):
        raise CrossCheckError("collapsed 2x2 radius differs from hat radius")
    return H


def ifs_spectrum_via_collapsed(model: GifsModel, tau: TauPair,
                               q: float) -> float:
    """Spectrum of a single-vertex system computed purely through the
    2x2 collapsed matrix; value-based (grid-refined constrained
    minimum), used to cross-check the hat-edge engine."""
    def H(x, y):
        return ifs_collapsed_matrix(model, tau, q, x, y).data

    t = tau.t
    gh = solve_rho_one(lambda y: H(0.0, y))
    if gh <= t + BRANCH_BAND:
        return gh
    off_diag_empty = H(0.0, 0.0)[0, 1] == 0.0 and H(0.0, 0.0)[1, 0] == 0.0
    if off_diag_empty:
        def block(x, y):
            return H(x, y)[:1, :1]
        curve = CurveSolver(block)
        x_hi = max(solve_rho_one(lambda x: block(x, t)), 0.0)
    else:
        curve = CurveSolver(H)
        x_hi = gh - t
    _, val = refined_grid_min(lambda x: x + curve(x), 0.0, x_hi, n=128,
                              xatol=1e-11)
    return val
