"""Nonnegative-matrix kernels shared by the closed-form engines.

Spectral radius and Perron data are computed by shifted power iteration
with Collatz-Wielandt bounds: for an irreducible nonnegative block M
the iteration runs on M + c*I (positive diagonal makes it primitive and
adds exactly c to the Perron root), and min/max of (Bv)_i / v_i bracket
the root at every step. Reducible patterns fall back to the maximum
over strongly connected blocks. A dense eigensolver is kept as a last
resort for pathologically slow gaps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import strongly_connected_components
from .errors import (BracketFailure, MalformedPattern, NotAtRhoOne,
                     NotIrreducible)
from .tolerances import CHECK_TOL, EIGEN_RTOL, ROOT_ATOL

_MAX_POWER_ITERS = 20000


@dataclass(frozen=True)
class LabeledMatrix:
    """Dense nonnegative square matrix with a fixed label order."""

    labels: tuple
    data: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        if self.data.shape != (n, n):
            raise ValueError("labels/data shape mismatch")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class PerronData:
    rho: float
    u: np.ndarray           # right eigenvector, positive, unit 1-norm
    v: np.ndarray           # left eigenvector, scaled so v @ u = 1
    stationary: np.ndarray  # elementwise v*u, a probability vector


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, LabeledMatrix):
        return matrix.data
    return np.asarray(matrix, dtype=float)


def _pattern_components(A: np.ndarray):
    n = A.shape[0]
    succ = [np.nonzero(A[i] > 0)[0].tolist() for i in range(n)]
    return strongly_connected_components(n, succ)


def _root_2x2(A: np.ndarray) -> float:
    tr = A[0, 0] + A[1, 1]
    disc = (A[0, 0] - A[1, 1]) ** 2 + 4.0 * A[0, 1] * A[1, 0]
    return 0.5 * (tr + np.sqrt(disc))


def _perron_root_block(A: np.ndarray, rtol: float, warm=None):
    """Perron root of an irreducible nonnegative block, with an
    optional warm-start vector. Returns (root, last_vector)."""
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0]), None
    if n == 2:
        return float(_root_2x2(A)), None
    shift = float(A.sum(axis=1).max())
    if shift == 0.0:
        return 0.0, None
    B = A + shift * np.eye(n)
    v = warm if warm is not None else np.full(n, 1.0 / n)
    for _ in range(_MAX_POWER_ITERS):
        w = B @ v
        r = w / v
        lo, hi = float(r.min()), float(r.max())
        v = w / w.sum()
        if hi - lo <= rtol * max(hi - shift, 1e-300):
            return 0.5 * (lo + hi) - shift, v
    return float(np.abs(np.linalg.eigvals(A)).max()), v


class RadiusEvaluator:
    """Perron root of a fixed-pattern matrix family.

    The strongly-connected split of the positivity pattern is computed
    once from a sample matrix and reused. Blocks of size <= 2 use exact
    closed forms; larger blocks use a dense eigensolver, whose flat
    ~30us cost beats shifted power iteration inside tight solve loops
    (the two agree to eigenvalue tolerance; see the spectral tests)."""

    def __init__(self, sample):
        A = _as_array(sample)
        if (A < 0).any():
            raise ValueError("matrix has negative entries")
        self._trivial = A.size == 0 or not A.any()
        self._blocks = []
        if not self._trivial:
            for comp in _pattern_components(A):
                self._blocks.append(np.array(comp))

    def __call__(self, matrix) -> float:
        if self._trivial:
            return 0.0
        A = _as_array(matrix)
        best = 0.0
        for idx in self._blocks:
            if len(idx) == 1:
                i = int(idx[0])
                best = max(best, float(A[i, i]))
            elif len(idx) == 2:
                best = max(best, float(_root_2x2(A[np.ix_(idx, idx)])))
            else:
                sub = A[np.ix_(idx, idx)]
                best = max(best, float(np.abs(np.linalg.eigvals(sub)).max()))
        return best


def spectral_radius(matrix, rtol: float = EIGEN_RTOL) -> float:
    """Perron root of a nonnegative square matrix; exact 0 for the zero
    matrix. Reducible patterns are handled per strongly connected block."""
    A = _as_array(matrix)
    if A.size == 0 or not A.any():
        return 0.0
    if (A < 0).any():
        raise ValueError("matrix has negative entries")
    best = 0.0
    for comp in _pattern_components(A):
        if len(comp) == 1:
            i = comp[0]
            best = max(best, float(A[i, i]))
            continue
        sub = A[np.ix_(comp, comp)]
        root, _ = _perron_root_block(sub, rtol)
        best = max(best, root)
    return best


def _perron_vector_block(A: np.ndarray, warm=None) -> np.ndarray:
    """Right Perron vector of an irreducible nonnegative matrix,
    normalized to unit 1-norm."""
    n = A.shape[0]
    if n == 1:
        return np.ones(1)
    if n == 2:
        rho = _root_2x2(A)
        # (A - rho I) u = 0 with a12 > 0 for an irreducible block
        u = np.array([A[0, 1], rho - A[0, 0]])
        if u[1] <= 0.0 or u[0] <= 0.0:
            u = np.array([rho - A[1, 1], A[1, 0]])
        return u / u.sum()
    shift = float(A.sum(axis=1).max())
    B = A + shift * np.eye(n)
    v = warm if warm is not None else np.full(n, 1.0 / n)
    for _ in range(_MAX_POWER_ITERS):
        w = B @ v
        w /= w.sum()
        if np.abs(w - v).max() <= 1e-15:
            return w
        v = w
    # slow gap: dense fallback, pick the eigenvector of the largest
    # real eigenvalue (the Perron root of an irreducible matrix)
    vals, vecs = np.linalg.eig(A)
    i = int(np.argmax(vals.real))
    u = np.abs(vecs[:, i].real)
    return u / u.sum()


class StationaryTracker:
    """Stationary distribution of an irreducible matrix family,
    warm-starting both Perron vectors across evaluations."""

    def __init__(self):
        self._u = None
        self._v = None

    def __call__(self, matrix) -> np.ndarray:
        A = _as_array(matrix)
        u = _perron_vector_block(A, self._u)
        v = _perron_vector_block(A.T, self._v)
        self._u, self._v = u, v
        v = v / (v @ u)
        return v * u


def perron_data(matrix) -> PerronData:
    """Perron root with right/left vectors and stationary distribution.

    Requires an irreducible positivity pattern (raises NotIrreducible).
    The left vector is scaled so that v @ u = 1, which makes v*u a
    probability vector: the stationary distribution of the stochastic
    rescaling M(i,j)*u_j / (rho*u_i).
    """
    A = _as_array(matrix)
    comps = _pattern_components(A)
    if len(comps) != 1 or (A.shape[0] > 1 and not A.any()):
        raise NotIrreducible(f"pattern splits into {len(comps)} components")
    if A.shape[0] == 1:
        rho = float(A[0, 0])
        if rho <= 0:
            raise NotIrreducible("1x1 zero matrix")
        one = np.ones(1)
        return PerronData(rho=rho, u=one, v=one.copy(), stationary=one.copy())
    rho, _ = _perron_root_block(A, EIGEN_RTOL)
    u = _perron_vector_block(A)
    v = _perron_vector_block(A.T)
    v = v / (v @ u)
    return PerronData(rho=rho, u=u, v=v, stationary=v * u)


def solve_rho_one(matrix_at, lo: float = -64.0, hi: float = 64.0,
                  atol: float = ROOT_ATOL, evaluator=None) -> float:
    """The unique z with spectral_radius(matrix_at(z)) = 1.

    matrix_at must yield entrywise log-linear families, so the radius is
    continuous and strictly decreasing in z with limits +inf / 0. The
    initial bracket is expanded geometrically until it straddles the
    root, then bisected to absolute tolerance atol. The positivity
    pattern must not depend on z; a RadiusEvaluator may be passed in to
    share pattern analysis across solves.
    """
    state = {"ev": evaluator}

    def excess(z: float) -> float:
        M = _as_array(matrix_at(z))
        if state["ev"] is None:
            state["ev"] = RadiusEvaluator(M)
        return state["ev"](M) - 1.0

    if not lo < hi:
        lo, hi = hi - 1.0, lo + 1.0
    g_lo, g_hi = excess(lo), excess(hi)
    span = hi - lo
    while g_lo < 0.0:            # radius too small already: move left
        hi, g_hi = lo, g_lo
        lo -= span
        span *= 2.0
        if span > 2 ** 22:
            raise BracketFailure("no sign change while expanding left")
        g_lo = excess(lo)
    while g_hi > 0.0:            # radius still too large: move right
        lo, g_lo = hi, g_hi
        hi += span
        span *= 2.0
        if span > 2 ** 22:
            raise BracketFailure("no sign change while expanding right")
        g_hi = excess(hi)
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class CurveSolver:
    """y(x) on the rho(matrix(x, y)) = 1 curve.

    Keeps the previous solution as a warm bracket: sweeps along x (grid
    scans, root refinements) then pay a handful of radius evaluations
    per point instead of a cold 128-wide bisection."""

    def __init__(self, matrix_xy, atol: float = ROOT_ATOL):
        self._matrix = matrix_xy
        self._atol = atol
        self._last = None
        self._ev = None

    def __call__(self, x: float) -> float:
        if self._ev is None:
            self._ev = RadiusEvaluator(_as_array(self._matrix(x, 0.0)))
        if self._last is None:
            y = solve_rho_one(lambda yy: self._matrix(x, yy),
                              atol=self._atol, evaluator=self._ev)
        else:
            lx, ly = self._last
            pad = 4.0 * abs(x - lx) + 1e-6
            y = solve_rho_one(lambda yy: self._matrix(x, yy),
                              lo=ly - pad, hi=ly + pad, atol=self._atol,
                              evaluator=self._ev)
        self._last = (x, y)
        return y


# --------------------------------------------------------------------------
# Hat-edge matrix structure: irreducible, or two mirrored blocks
# --------------------------------------------------------------------------

def _mate(label):
    base, slot = label
    return (base, 3 - slot)


@dataclass(frozen=True)
class HatSplit:
    """Positivity-pattern structure of a hat-edge matrix."""

    irreducible: bool
    part_one: tuple = ()     # labels, () when irreducible
    part_two: tuple = ()
    idx_one: tuple = ()      # positions into the label order
    idx_two: tuple = ()


def reducible_split(lm: LabeledMatrix) -> HatSplit:
    """Classify a hat-edge matrix: irreducible, or exactly two
    irreducible diagonal blocks of equal size mapped onto each other by
    the slot swap, with no arcs between them. Any other pattern raises
    MalformedPattern."""
    A = lm.data
    comps = _pattern_components(A)
    if len(comps) == 1:
        return HatSplit(irreducible=True)
    if len(comps) != 2:
        raise MalformedPattern(f"{len(comps)} pattern components, expected 1 or 2")
    one, two = comps
    # order so that part one contains the first label
    if 0 in two:
        one, two = two, one
    n = lm.size
    if len(one) != len(two) or len(one) != n // 2:
        raise MalformedPattern("pattern blocks have unequal sizes")
    if A[np.ix_(one, two)].any() or A[np.ix_(two, one)].any():
        raise MalformedPattern("arcs cross between pattern blocks")
    labels_one = tuple(lm.labels[i] for i in one)
    labels_two = tuple(lm.labels[i] for i in two)
    if {_mate(l) for l in labels_one} != set(labels_two):
        raise MalformedPattern("slot swap does not exchange the blocks")
    return HatSplit(irreducible=False,
                    part_one=labels_one, part_two=labels_two,
                    idx_one=tuple(one), idx_two=tuple(two))


def stationary_g(lm: LabeledMatrix, tol: float = CHECK_TOL) -> np.ndarray:
    """Stationary vector of a hat-edge matrix evaluated on its rho = 1
    curve. Irreducible: the Perron stationary distribution (mass 1).
    Reducible: each block contributes its own Perron stationary
    distribution in place (total mass 2); blocks are normalized by
    their own spectral radius, so the construction is insensitive to
    which block attains the overall radius."""
    rho = spectral_radius(lm)
    if abs(rho - 1.0) > tol:
        raise NotAtRhoOne(f"spectral radius is {rho!r}, not 1")
    split = reducible_split(lm)
    if split.irreducible:
        return perron_data(lm.data).stationary
    g = np.zeros(lm.size)
    for idx in (split.idx_one, split.idx_two):
        block = lm.data[np.ix_(idx, idx)]
        g[list(idx)] = perron_data(block).stationary
    return g
