"""Brute-force validators, independent of the closed-form engines.

* pressure / gamma_pressure: exact finite-depth pressure sums via a
  count-vector dynamic program over hat-words.
* stopping_set_sum: exact sums over the words whose short image side
  first drops below a threshold.
* box_count_tau: Monte-Carlo mesh sums over sampled measure points.
* variational_tau_ifs: the entropy-ratio maximization for diagonal
  single-vertex systems.

The pressure DP exploits that the weight of a word depends only on the
hat-edge occurrence counts of its lifted hat-word plus the terminal
slot role: states are (terminal hat-edge, count vector), multiplicities
are exact integers, and one DP table serves every (s, q) pair. The
word weight selects the hat-word with the larger side product; the
log side ratio is accumulated in a pair-differenced form so mirrored
hat-words get exactly opposite ratios and ties are detected exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import ceil, log

import numpy as np

from .errors import BudgetExceeded, NotDiagonalSystem, NotSingleVertex
from .general import _hat_structure
from .model import GifsModel
from .optimize import bisect_sign_change, decreasing_root
from .projections import TauPair, build_doubled_graph, partition_families

_STATE_CAP = 10 ** 8
_WORD_CAP = 10 ** 7
_MAX_HAT = 10
_MAX_DEPTH = 24


# --------------------------------------------------------------------------
# Finite-depth pressure via the count-vector DP
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _PressureClasses:
    k: int
    mult: np.ndarray      # float64 view of exact int64 multiplicities
    log_p: np.ndarray
    log_a: np.ndarray
    log_b: np.ndarray
    sel: np.ndarray       # 1 / 0.5 / 0 selection weight per class
    fam_a: np.ndarray     # terminal role lies in projection family A


def _hat_family_flags(model: GifsModel) -> np.ndarray:
    split = partition_families(build_doubled_graph(model))
    hats, _ = _hat_structure(model)
    flags = []
    for h in hats:
        role = split.role_in_a[h.dst]
        flags.append(role == "both" or role == h.tau_role)
    return np.array(flags, dtype=bool)


@lru_cache(maxsize=8)
def _pressure_classes(model: GifsModel, k: int) -> _PressureClasses:
    hats, allow = _hat_structure(model)
    m = len(hats)
    if m > _MAX_HAT or k > _MAX_DEPTH or k < 1:
        raise BudgetExceeded(
            f"pressure DP guarded to <= {_MAX_HAT} hat-edges and depth "
            f"<= {_MAX_DEPTH}; got {m} and {k}")
    base = np.int64(k + 1)
    if (k + 1) ** m * m >= 2 ** 62:
        raise BudgetExceeded("state keys would overflow int64")
    place = base ** np.arange(m, dtype=np.int64)

    # states encoded as counts_key * m + last_hat_index
    keys = place * np.int64(m) + np.arange(m, dtype=np.int64)
    mult = np.ones(m, dtype=np.int64)
    for _ in range(k - 1):
        last = keys % m
        ckey = keys // m
        new_keys, new_mult = [], []
        for j in range(m):
            sel = allow[last, j]
            if not sel.any():
                continue
            new_keys.append((ckey[sel] + place[j]) * m + j)
            new_mult.append(mult[sel])
        if not new_keys:
            raise BudgetExceeded("hat graph has no admissible extension")
        cat_keys = np.concatenate(new_keys)
        cat_mult = np.concatenate(new_mult)
        keys, inverse = np.unique(cat_keys, return_inverse=True)
        mult = np.zeros(len(keys), dtype=np.int64)
        np.add.at(mult, inverse, cat_mult)
        if len(keys) > _STATE_CAP:
            raise BudgetExceeded(f"{len(keys)} DP states exceed the cap")

    last = keys % m
    ckey = keys // m
    fam = _hat_family_flags(model)[last]
    # aggregate states that share counts and terminal family
    agg_keys, inverse = np.unique(ckey * 2 + fam.astype(np.int64),
                                  return_inverse=True)
    agg_mult = np.zeros(len(agg_keys), dtype=np.int64)
    np.add.at(agg_mult, inverse, mult)
    fam_a = (agg_keys % 2).astype(bool)
    counts_key = agg_keys // 2

    counts = np.empty((len(counts_key), m), dtype=np.int64)
    rem = counts_key.copy()
    for i in range(m):
        counts[:, i] = rem % base
        rem //= base

    la = np.array([log(h.a) for h in hats])
    lb = np.array([log(h.b) for h in hats])
    lp = np.array([log(h.p) for h in hats])
    cf = counts.astype(float)
    # pair-differenced ratio: exact sign symmetry between mirrored words
    n_edges = m // 2
    slot1 = np.arange(n_edges) * 2
    diff = (counts[:, slot1] - counts[:, slot1 + 1]).astype(float)
    d_pair = np.array([la[i] - lb[i] for i in slot1])
    ratio = diff @ d_pair
    sel = np.where(ratio > 0, 1.0, np.where(ratio < 0, 0.0, 0.5))
    return _PressureClasses(k=k, mult=agg_mult.astype(float),
                            log_p=cf @ lp, log_a=cf @ la, log_b=cf @ lb,
                            sel=sel, fam_a=fam_a)


def pressure(model: GifsModel, tau: TauPair, s: float, q: float,
             k: int) -> float:
    """The finite-depth pressure value: the k-th root of the exact sum
    of word weights p_w^q * long^tau_w * short^(s - tau_w) over all
    admissible length-k words."""
    cls = _pressure_classes(model, k)
    tau_vals = np.where(cls.fam_a, tau.tau_a, tau.tau_b)
    log_val = q * cls.log_p + tau_vals * cls.log_a \
        + (s - tau_vals) * cls.log_b
    weight = cls.sel * cls.mult
    active = weight > 0
    lv = log_val[active]
    shift = float(lv.max())
    total = float(np.exp(lv - shift) @ weight[active])
    return float(np.exp((shift + log(total)) / k))


@dataclass(frozen=True)
class PressureBracket:
    estimate: float
    lower: float
    upper: float


def gamma_pressure(model: GifsModel, tau: TauPair, q: float,
                   k: int) -> PressureBracket:
    """Root of the finite-depth pressure in s, bracketed empirically.

    Below t(q) the depth-k pressure over-estimates the limit
    (submultiplicative side), so the depth-k root is an upper bound;
    above t(q) the direction flips. The other side of the bracket is a
    drift estimate from depth k/2, not a proved bound."""
    def root_at(depth: int) -> float:
        return decreasing_root(
            lambda s: pressure(model, tau, s, q, depth) - 1.0,
            lo=-8.0, hi=8.0, atol=1e-6)

    est = root_at(k)
    drift = abs(est - root_at(max(1, k // 2)))
    if est <= tau.t:
        return PressureBracket(estimate=est, lower=est - drift, upper=est)
    return PressureBracket(estimate=est, lower=est, upper=est + drift)


# --------------------------------------------------------------------------
# Stopping-set sums
# --------------------------------------------------------------------------

def stopping_set_sum(model: GifsModel, tau: TauPair, s: float, q: float,
                     delta: float) -> float:
    """Exact sum of word weights over the stopping set: admissible
    words whose short side first drops below delta."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    a, b, p_arr = model.a_arr, model.b_arr, model.p_arr
    anti = model.anti_arr
    chain = model.edge_chain
    tau_x = {v: tau.tau_x[v] for v in model.vertices}
    tau_y = {v: tau.tau_y[v] for v in model.vertices}
    dst = [e.dst for e in model.edges]

    total = 0.0
    visited = 0
    # stack of live prefixes: (last edge, width, height, prob, anti parity)
    stack = [(i, a[i], b[i], p_arr[i], bool(anti[i]))
             for i in range(len(model.edges))]
    while stack:
        i, c, d, p, is_anti = stack.pop()
        visited += 1
        if visited > _WORD_CAP:
            raise BudgetExceeded("stopping-set enumeration budget exceeded")
        if min(c, d) < delta:
            wide = c >= d
            if is_anti:
                tw = tau_y[dst[i]] if wide else tau_x[dst[i]]
            else:
                tw = tau_x[dst[i]] if wide else tau_y[dst[i]]
            a1, a2 = (c, d) if wide else (d, c)
            total += p ** q * a1 ** tw * a2 ** (s - tw)
            continue
        for j in np.nonzero(chain[i])[0]:
            nc = c * (b[j] if is_anti else a[j])
            nd = d * (a[j] if is_anti else b[j])
            stack.append((int(j), nc, nd, p * p_arr[j],
                          is_anti ^ bool(anti[j])))
    return total


# --------------------------------------------------------------------------
# Monte-Carlo box counting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxCountResult:
    q: float
    slope: float
    deltas: tuple
    sums: tuple          # mesh moment sum per delta


def default_deltas():
    return tuple(2.0 ** -j for j in range(4, 11))


def _sample_points(model: GifsModel, vertex: str, n_samples: int,
                   d_min: float, rng) -> np.ndarray:
    """Draw measure samples by the random edge walk, refined until the
    long side of the composed rectangle is below d_min (so the binning
    error per point is below the finest mesh)."""
    n_v = len(model.vertices)
    out_idx = [np.array(model.out_edges[v]) for v in model.vertices]
    out_p = [model.p_arr[idx] for idx in out_idx]
    ue_all = np.array([e.sign_a * e.a for e in model.edges])
    ve_all = np.array([e.sign_b * e.b for e in model.edges])
    te_x = np.array([e.tx for e in model.edges])
    te_y = np.array([e.ty for e in model.edges])
    ge_all = model.anti_arr
    dst = model.dst_idx

    pts = np.empty((n_samples, 2))
    idx_alive = np.arange(n_samples)
    u = np.ones(n_samples)
    v = np.ones(n_samples)
    g = np.zeros(n_samples, dtype=bool)
    tx = np.zeros(n_samples)
    ty = np.zeros(n_samples)
    vert = np.full(n_samples, model.vertex_index[vertex])

    max_steps = int(ceil(log(d_min) / log(model.alpha_sup))) + 64
    for _ in range(max_steps):
        done = np.maximum(np.abs(u), np.abs(v)) < d_min
        if done.any():
            sel = idx_alive[done]
            pts[sel, 0] = tx[done] + 0.5 * u[done]
            pts[sel, 1] = ty[done] + 0.5 * v[done]
            keep = ~done
            idx_alive, u, v, g = idx_alive[keep], u[keep], v[keep], g[keep]
            tx, ty, vert = tx[keep], ty[keep], vert[keep]
        if idx_alive.size == 0:
            break
        choice = np.empty(idx_alive.size, dtype=np.int64)
        for vi in range(n_v):
            mask = vert == vi
            cnt = int(mask.sum())
            if cnt:
                choice[mask] = rng.choice(out_idx[vi], size=cnt, p=out_p[vi])
        ue, ve, ge = ue_all[choice], ve_all[choice], ge_all[choice]
        tex, tey = te_x[choice], te_y[choice]
        tx = tx + np.where(g, u * tey, u * tex)
        ty = ty + np.where(g, v * tex, v * tey)
        u, v = np.where(g, u * ve, u * ue), np.where(g, v * ue, v * ve)
        g = g ^ ge
        vert = dst[choice]
    if idx_alive.size:
        pts[idx_alive, 0] = tx + 0.5 * u
        pts[idx_alive, 1] = ty + 0.5 * v
    return pts


def _mesh_sums(pts: np.ndarray, deltas, q: float) -> np.ndarray:
    n = pts.shape[0]
    sums = []
    for d in deltas:
        ix = np.floor(pts[:, 0] / d).astype(np.int64)
        iy = np.floor(pts[:, 1] / d).astype(np.int64)
        _, counts = np.unique(ix * np.int64(2 ** 31) + iy,
                              return_counts=True)
        sums.append(float(((counts / n) ** q).sum()))
    return np.array(sums)


def box_count_spectrum(model: GifsModel, vertex: str, qs, deltas=None,
                       n_samples: int = 10 ** 6, seed: int = 0) -> dict:
    """Box-count slope estimates for several q values from one shared
    sample set. Returns {q: BoxCountResult}."""
    deltas = tuple(default_deltas() if deltas is None else deltas)
    rng = np.random.default_rng(seed)
    pts = _sample_points(model, vertex, n_samples, min(deltas), rng)
    x = -np.log(np.array(deltas))
    out = {}
    for q in qs:
        sums = _mesh_sums(pts, deltas, q)
        slope = float(np.polyfit(x, np.log(sums), 1)[0])
        out[q] = BoxCountResult(q=q, slope=slope, deltas=deltas,
                                sums=tuple(sums))
    return out


def box_count_tau(model: GifsModel, vertex: str, q: float, deltas=None,
                  n_samples: int = 10 ** 6, seed: int = 0) -> BoxCountResult:
    """Least-squares slope of log mesh moments against -log delta."""
    return box_count_spectrum(model, vertex, [q], deltas=deltas,
                              n_samples=n_samples, seed=seed)[q]


# --------------------------------------------------------------------------
# Variational value for diagonal single-vertex systems
# --------------------------------------------------------------------------

def variational_tau_ifs(model: GifsModel, q: float) -> float:
    """Spectrum of a diagonal IFS as the larger of two constrained
    entropy-ratio maxima over the probability simplex.

    Candidates are evaluated along the one-parameter stationary family
    t_i(x) = p_i^q a_i^x b_i^(y(x)): the unconstrained maximizer of
    each ratio is the family point anchored at that axis' projection
    spectrum; if it violates the half-space constraint the maximum
    moves to the boundary (zero mean log side ratio), shared by both
    ratios. A side whose constraint set is empty contributes -inf.
    """
    if not model.is_single_vertex:
        raise NotSingleVertex("variational route needs one vertex")
    if not model.is_diagonal:
        raise NotDiagonalSystem("variational route needs diagonal maps")
    a, b, p = model.a_arr, model.b_arr, model.p_arr
    w = p ** q
    la, lb, lp = np.log(a), np.log(b), np.log(p)
    lr = la - lb

    tau_a = decreasing_root(lambda s: float(w @ a ** s) - 1.0)
    tau_b = decreasing_root(lambda s: float(w @ b ** s) - 1.0)

    def y_of(x: float) -> float:
        return decreasing_root(lambda y: float(w @ (a ** x * b ** y)) - 1.0)

    def family(x: float) -> np.ndarray:
        return w * a ** x * b ** y_of(x)

    def ratio_a(t: np.ndarray) -> float:
        num = float(t @ (np.log(t) - tau_a * lr - q * lp))
        return num / float(t @ lb)

    def ratio_b(t: np.ndarray) -> float:
        num = float(t @ (np.log(t) + tau_b * lr - q * lp))
        return num / float(t @ la)

    def mean_ratio(x: float) -> float:
        return float(family(x) @ lr)

    x_a = tau_a
    x_b = decreasing_root(lambda x: float(w @ (a ** x * b ** tau_b)) - 1.0)
    c_a = mean_ratio(x_a)
    c_b = mean_ratio(x_b)

    boundary = None
    if c_a < 0 or c_b > 0:
        # mean log ratio is increasing in x; expand until bracketed
        lo, hi = min(x_a, x_b), max(x_a, x_b)
        f_lo, f_hi = mean_ratio(lo), mean_ratio(hi)
        span = max(hi - lo, 1.0)
        while f_lo > 0 and span < 2 ** 16:
            lo -= span
            span *= 2
            f_lo = mean_ratio(lo)
        while f_hi < 0 and span < 2 ** 16:
            hi += span
            span *= 2
            f_hi = mean_ratio(hi)
        if f_lo <= 0 <= f_hi:
            x0 = bisect_sign_change(mean_ratio, lo, hi, atol=1e-12,
                                    f_lo=f_lo, f_hi=f_hi)
            boundary = family(x0)

    if c_a >= 0:
        theta_a = ratio_a(family(x_a))
    elif boundary is not None:
        theta_a = ratio_a(boundary)
    else:
        theta_a = -np.inf
    if c_b <= 0:
        theta_b = ratio_b(family(x_b))
    elif boundary is not None:
        theta_b = ratio_b(boundary)
    else:
        theta_b = -np.inf
    return float(max(theta_a, theta_b))
