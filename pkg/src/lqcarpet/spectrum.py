"""Per-q result rows shared by the CLI and the acceptance suite."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .diagonal import gamma_endpoints, lq_spectrum_diagonal
from .errors import NotDiagonalSystem
from .general import lq_spectrum_general
from .model import GifsModel, check_rosc
from .projections import tau_pair

ENGINES = ("auto", "diagonal", "general")


@dataclass(frozen=True)
class SpectrumPoint:
    q: float
    tau_a: float
    tau_b: float
    t: float
    gamma_a: float | None     # diagonal systems only
    gamma_b: float | None
    hat_gamma: float | None   # general engine only
    gamma: float
    branch: str
    rosc: bool


def resolve_engine(model: GifsModel, engine: str) -> str:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "auto":
        return "diagonal" if model.is_diagonal else "general"
    if engine == "diagonal" and not model.is_diagonal:
        raise NotDiagonalSystem(
            "engine 'diagonal' rejected: system has anti-diagonal edges")
    return engine


def spectrum_point(model: GifsModel, q: float, engine: str = "auto",
                   rosc: bool | None = None) -> SpectrumPoint:
    engine = resolve_engine(model, engine)
    if rosc is None:
        rosc = check_rosc(model).passed
    tau = tau_pair(model, q)
    if engine == "diagonal":
        gamma, br = lq_spectrum_diagonal(model, tau, q)
        return SpectrumPoint(q=q, tau_a=tau.tau_a, tau_b=tau.tau_b, t=tau.t,
                             gamma_a=br.gamma_a, gamma_b=br.gamma_b,
                             hat_gamma=None, gamma=gamma, branch=br.branch,
                             rosc=rosc)
    gamma, br = lq_spectrum_general(model, tau, q)
    ga = gb = None
    if model.is_diagonal:
        ga, gb = gamma_endpoints(model, tau, q)
    return SpectrumPoint(q=q, tau_a=tau.tau_a, tau_b=tau.tau_b, t=tau.t,
                         gamma_a=ga, gamma_b=gb, hat_gamma=br.hat_gamma,
                         gamma=gamma, branch=br.branch, rosc=rosc)


def spectrum_rows(model: GifsModel, qs, engine: str = "auto",
                  threads: int = 1):
    """SpectrumPoints for a q grid, ordered by q regardless of the
    evaluation order."""
    engine = resolve_engine(model, engine)
    rosc = check_rosc(model).passed
    qs = list(qs)
    if threads > 1 and len(qs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda q: spectrum_point(model, q, engine, rosc), qs))
    else:
        rows = [spectrum_point(model, q, engine, rosc) for q in qs]
    return sorted(rows, key=lambda r: r.q)


def q_grid(q_min: float, q_max: float, q_step: float):
    """Inclusive arithmetic grid, robust to float step accumulation."""
    if q_step <= 0:
        raise ValueError("q_step must be positive")
    if q_max < q_min:
        raise ValueError("q_max must be >= q_min")
    count = int(round((q_max - q_min) / q_step))
    qs = [q_min + i * q_step for i in range(count + 1)]
    if qs[-1] > q_max + 1e-9:
        qs.pop()
    return [round(q, 12) for q in qs]
