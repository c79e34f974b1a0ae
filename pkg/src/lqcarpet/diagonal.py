"""Closed-form Lq-spectrum for all-diagonal systems.

The engine works on the edge-to-edge weight matrix

    F(q; x, y)[e, e'] = p_{e'}^q * a_{e'}^x * b_{e'}^y   when e' follows e,

whose Perron root is strictly decreasing in x and y. With the two
projection spectra tau_a, tau_b in hand, the spectrum candidates are

    gamma_a:  rho(F at (tau_a, gamma_a - tau_a)) = 1
    gamma_b:  rho(F at (gamma_b - tau_b, tau_b)) = 1

and the value is picked by the regime/branch logic:

  regime e1  (max candidate <= t):  gamma = max(gamma_a, gamma_b)
  regime e2  (min candidate >= t):  constrained minimum of x + y(x) on
      [tau_a, gamma_b - tau_b], decided by the sign of
      S(x) = sum_e f_e(x) * log(a_e / b_e)
      at the interval ends (branches b1 / b2), else at its interior
      root (branch b3), where f(x) is the stationary distribution of
      the stochasticized F at (x, y(x)).

Branch b3 is cross-checked against a grid-refined minimum of x + y(x);
disagreement beyond tolerance is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (CrossCheckError, NotDiagonalSystem, NotSingleVertex,
                     RegimeAmbiguous)
from .model import GifsModel
from .optimize import bisect_sign_change, decreasing_root, refined_grid_min
from .projections import TauPair, tau_pair
from .spectral import (CurveSolver, LabeledMatrix, StationaryTracker,
                       perron_data, solve_rho_one)
from .tolerances import BRANCH_BAND, CHECK_TOL, CROSS_CHECK_TOL

# the value x + y(x) is quadratically flat at the sign root, so a
# modest x tolerance already gives the value to ~1e-14
_ROOT_XATOL = 1e-7


@dataclass(frozen=True)
class DiagonalBranch:
    regime: str          # "e1" | "e2"
    branch: str          # "a-max" | "b1" | "b2" | "b3"
    gamma_a: float
    gamma_b: float
    x_star: float | None = None   # b3 only
    y_star: float | None = None


def _require_diagonal(model: GifsModel):
    if not model.is_diagonal:
        raise NotDiagonalSystem("system has anti-diagonal edges")


def _diag_family(model: GifsModel, q: float):
    """(x, y) -> dense edge matrix, static arrays hoisted."""
    a, b = model.a_arr, model.b_arr
    wq = model.p_arr ** q
    mask = model.edge_chain.astype(float)

    def matrix(x: float, y: float) -> np.ndarray:
        col = wq * a ** x * b ** y
        return mask * col[None, :]

    return matrix


def diag_weight_matrix(model: GifsModel, q: float, x: float,
                       y: float) -> LabeledMatrix:
    """The F-type matrix over edges at exponents (x, y)."""
    _require_diagonal(model)
    return LabeledMatrix(labels=tuple(e.id for e in model.edges),
                         data=_diag_family(model, q)(x, y))


def _curve(model: GifsModel, q: float) -> CurveSolver:
    return CurveSolver(_diag_family(model, q))


def edge_stationary(model: GifsModel, q: float, x: float,
                    y: float | None = None) -> np.ndarray:
    """f(x): stationary distribution of F at (x, y(x))."""
    if y is None:
        y = solve_rho_one(lambda yy: diag_weight_matrix(model, q, x, yy).data)
    return perron_data(diag_weight_matrix(model, q, x, y).data).stationary


def gamma_endpoints(model: GifsModel, tau: TauPair, q: float):
    """(gamma_a, gamma_b): the two axis-anchored spectrum candidates."""
    _require_diagonal(model)
    ga = tau.tau_a + solve_rho_one(
        lambda y: diag_weight_matrix(model, q, tau.tau_a, y).data)
    gb = tau.tau_b + solve_rho_one(
        lambda x: diag_weight_matrix(model, q, x, tau.tau_b).data)
    return ga, gb


def _log_ratio(model: GifsModel) -> np.ndarray:
    return np.log(model.a_arr) - np.log(model.b_arr)


def lq_spectrum_diagonal(model: GifsModel, tau: TauPair, q: float):
    """(gamma, DiagonalBranch) for an all-diagonal system."""
    _require_diagonal(model)
    ga, gb = gamma_endpoints(model, tau, q)
    t = tau.t
    hi, lo = max(ga, gb), min(ga, gb)

    if hi <= t + BRANCH_BAND:
        return hi, DiagonalBranch(regime="e1", branch="a-max",
                                  gamma_a=ga, gamma_b=gb)
    if lo < t - BRANCH_BAND:
        raise RegimeAmbiguous(
            f"candidates {ga!r}, {gb!r} straddle t={t!r}")

    x_lo, x_hi = tau.tau_a, gb - tau.tau_b
    log_ratio = _log_ratio(model)
    family = _diag_family(model, q)
    curve = CurveSolver(family)
    tracker = StationaryTracker()

    def sign_fn(x: float) -> float:
        return float(tracker(family(x, curve(x))) @ log_ratio)

    s_lo = sign_fn(x_lo)
    if s_lo >= -BRANCH_BAND:
        return ga, DiagonalBranch(regime="e2", branch="b1",
                                  gamma_a=ga, gamma_b=gb)
    s_hi = sign_fn(x_hi)
    if s_hi <= BRANCH_BAND:
        return gb, DiagonalBranch(regime="e2", branch="b2",
                                  gamma_a=ga, gamma_b=gb)

    # interior roots of S; the decreasing-then-increasing structure makes
    # a single root typical, but every sign-change cell is refined and
    # the smallest x + y(x) wins
    grid = np.linspace(x_lo, x_hi, 65)
    signs = [s_lo] + [sign_fn(float(x)) for x in grid[1:-1]] + [s_hi]
    best = None
    for i in range(len(grid) - 1):
        if signs[i] == 0.0 or (signs[i] < 0) != (signs[i + 1] < 0):
            x_root = bisect_sign_change(sign_fn, float(grid[i]),
                                        float(grid[i + 1]), atol=_ROOT_XATOL,
                                        f_lo=signs[i], f_hi=signs[i + 1])
            val = x_root + curve(x_root)
            if best is None or val < best[1]:
                best = (x_root, val)
    if best is None:
        raise RegimeAmbiguous("no sign change found for branch b3")
    x_star, gamma = best
    y_star = gamma - x_star

    check_curve = _curve(model, q)
    _, grid_min = refined_grid_min(lambda x: x + check_curve(x), x_lo, x_hi)
    if abs(gamma - grid_min) > CROSS_CHECK_TOL:
        raise CrossCheckError(
            f"b3 root value {gamma!r} vs grid minimum {grid_min!r}")
    return gamma, DiagonalBranch(regime="e2", branch="b3",
                                 gamma_a=ga, gamma_b=gb,
                                 x_star=x_star, y_star=y_star)


def box_dimension_diagonal(model: GifsModel) -> float:
    """Box dimension of the attractors: max candidate at q = 0."""
    _require_diagonal(model)
    tau = tau_pair(model, 0.0)
    ga, gb = gamma_endpoints(model, tau, 0.0)
    if max(ga, gb) > tau.t + CHECK_TOL:
        raise AssertionError(
            "q=0 must fall in regime e1; got candidates above t")
    return max(ga, gb)


# --------------------------------------------------------------------------
# Degenerate single-vertex route: scalar equations, no matrices
# --------------------------------------------------------------------------

def lq_spectrum_ifs_diagonal(model: GifsModel, q: float):
    """Single-vertex diagonal spectrum via the scalar equations
    sum_i p_i^q a_i^x b_i^y = 1 (all matrix rows coincide, so the
    Perron root is the row sum). Returns (gamma, DiagonalBranch,
    strict) where strict marks the b3 case with gamma strictly below
    both candidates."""
    _require_diagonal(model)
    if not model.is_single_vertex:
        raise NotSingleVertex("scalar route needs one vertex")
    a, b, p = model.a_arr, model.b_arr, model.p_arr
    w = p ** q
    log_ratio = np.log(a) - np.log(b)

    tau_a = decreasing_root(lambda s: float(w @ a ** s) - 1.0)
    tau_b = decreasing_root(lambda s: float(w @ b ** s) - 1.0)
    t = tau_a + tau_b

    def y_of(x: float) -> float:
        return decreasing_root(lambda y: float(w @ (a ** x * b ** y)) - 1.0)

    def x_of(y: float) -> float:
        return decreasing_root(lambda x: float(w @ (a ** x * b ** y)) - 1.0)

    ga = tau_a + y_of(tau_a)
    gb = tau_b + x_of(tau_b)

    if max(ga, gb) <= t + BRANCH_BAND:
        return max(ga, gb), DiagonalBranch(regime="e1", branch="a-max",
                                           gamma_a=ga, gamma_b=gb), False
    if min(ga, gb) < t - BRANCH_BAND:
        raise RegimeAmbiguous(f"candidates {ga!r}, {gb!r} straddle t={t!r}")

    def sign_fn(x: float) -> float:
        return float((w * a ** x * b ** y_of(x)) @ log_ratio)

    x_lo, x_hi = tau_a, gb - tau_b
    s_lo = sign_fn(x_lo)
    if s_lo >= -BRANCH_BAND:
        return ga, DiagonalBranch(regime="e2", branch="b1",
                                  gamma_a=ga, gamma_b=gb), False
    s_hi = sign_fn(x_hi)
    if s_hi <= BRANCH_BAND:
        return gb, DiagonalBranch(regime="e2", branch="b2",
                                  gamma_a=ga, gamma_b=gb), False

    x_star = bisect_sign_change(sign_fn, x_lo, x_hi, atol=_ROOT_XATOL,
                                f_lo=s_lo, f_hi=s_hi)
    y_star = y_of(x_star)
    gamma = x_star + y_star
    if not gamma < min(ga, gb) - BRANCH_BAND:
        raise AssertionError(
            "b3 value must sit strictly below both candidates")
    return gamma, DiagonalBranch(regime="e2", branch="b3",
                                 gamma_a=ga, gamma_b=gb,
                                 x_star=x_star, y_star=y_star), True
