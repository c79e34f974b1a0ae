"""Scalar root and minimum search used by the branch logic."""

from __future__ import annotations

import numpy as np

from .errors import BracketFailure


def bisect_sign_change(fn, lo: float, hi: float, atol: float = 1e-12,
                       f_lo: float | None = None,
                       f_hi: float | None = None) -> float:
    """Root of a continuous fn with fn(lo), fn(hi) of opposite sign."""
    if f_lo is None:
        f_lo = fn(lo)
    if f_hi is None:
        f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketFailure(f"no sign change on [{lo}, {hi}]")
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


def decreasing_root(fn, lo: float = -64.0, hi: float = 64.0,
                    atol: float = 1e-13) -> float:
    """Root of a continuous strictly decreasing scalar function with
    limits +inf / -inf; the bracket expands geometrically as needed."""
    f_lo, f_hi = fn(lo), fn(hi)
    span = hi - lo
    while f_lo < 0:
        hi, f_hi = lo, f_lo
        lo -= span
        span *= 2
        if span > 2 ** 22:
            raise BracketFailure("no sign change while expanding left")
        f_lo = fn(lo)
    while f_hi > 0:
        lo, f_lo = hi, f_hi
        hi += span
        span *= 2
        if span > 2 ** 22:
            raise BracketFailure("no sign change while expanding right")
        f_hi = fn(hi)
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        if fn(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def refined_grid_min(fn, lo: float, hi: float, n: int = 64,
                     xatol: float = 1e-10):
    """Minimum of a continuous unimodal-enough fn on [lo, hi]: coarse
    n-cell grid, then golden-section refinement of the best cell.

    Returns (x_min, f_min)."""
    if hi <= lo:
        return lo, fn(lo)
    xs = np.linspace(lo, hi, n + 1)
    vals = [fn(float(x)) for x in xs]
    i = int(np.argmin(vals))
    best_x, best_f = float(xs[i]), vals[i]
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, n)])
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > xatol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    for x, f in ((c, fc), (d, fd)):
        if f < best_f:
            best_x, best_f = x, f
    return best_x, best_f
