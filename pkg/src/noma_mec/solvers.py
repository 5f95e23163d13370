"""Mode solvers and the dispatching entry point.

Three closed-form/scalar solvers (pure NOMA, OMA, hybrid NOMA) plus a
dispatcher that classifies the budget, runs every feasible mode, and picks
the smallest delay. The hybrid mode is solved iteratively by driving the
auxiliary objective F(mu) to zero, either with the ratio update
mu <- a/b (Dinkelbach-style) or with Newton steps mu <- mu - F/F'.

Both iterations start from the infinite-mu limit: the first iterate is
mu_1 = a/b evaluated at the limit allocation, which lands right of the root
and keeps every subsequent F value negative, so the parameter decreases
monotonically onto the root from above.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .auxiliary import MU_INF, allocate, eval_f, objective_terms
from .model import (
    Allocation,
    EnergyRegime,
    Mode,
    SystemParams,
    classify_regime,
    derive_constants,
)

# Mode preference when delays tie within 1e-12 relative: hybrid wins over the
# closed-form modes, pure NOMA wins over OMA.
_MODE_RANK = {Mode.HYBRID_NOMA: 0, Mode.PURE_NOMA: 1, Mode.OMA: 2}
_TIE_REL = 1e-12


class RegimeError(ValueError):
    """A solver was invoked outside the energy regime it handles."""


class InitializationError(RuntimeError):
    """Newton start landed left of the root (F(mu0) > 0)."""


class ConvergenceError(RuntimeError):
    """Iteration cap exceeded; carries the trace accumulated so far."""

    def __init__(self, message: str, trace: list["TracePoint"]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class SolverConfig:
    delta: float = 1e-10
    max_iters: int = 200
    newton_mu0_factor: float = 10.0

    def __post_init__(self) -> None:
        if not (self.delta > 0.0):
            raise ValueError(f"delta must be positive, got {self.delta!r}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if not (self.newton_mu0_factor > 1.0):
            raise ValueError(
                f"newton_mu0_factor must be > 1, got {self.newton_mu0_factor!r}"
            )


@dataclass(frozen=True)
class TracePoint:
    t: int
    mu: float
    f: float
    p_n1: float
    p_n2: float
    delay: float


@dataclass(frozen=True)
class Solution:
    regime: EnergyRegime
    best: Allocation | None
    per_mode: dict[Mode, Allocation | None]
    trace: list[TracePoint] = field(default_factory=list)
    mu_star: float | None = None
    iterations: int | None = None

    def to_dict(self) -> dict:
        def block(alloc: Allocation | None) -> dict:
            if alloc is None:
                return {"feasible": False}
            return {
                "feasible": True,
                "mode": alloc.mode.value,
                "p_n1": alloc.p_n1,
                "p_n2": alloc.p_n2,
                "t_n": alloc.t_n,
                "delay": alloc.delay,
                "energy_used": alloc.energy_used,
            }

        return {
            "regime": self.regime.value,
            "best_mode": self.best.mode.value if self.best is not None else None,
            "best_delay": self.best.delay if self.best is not None else None,
            "mu_star": self.mu_star,
            "iterations": self.iterations,
            "per_mode": {mode.value: block(a) for mode, a in self.per_mode.items()},
            "trace": [
                {"t": p.t, "mu": p.mu, "f": p.f, "p_n1": p.p_n1, "p_n2": p.p_n2, "delay": p.delay}
                for p in self.trace
            ],
        }


def solve_pure_noma(params: SystemParams, energy: float) -> Allocation | None:
    """All-in NOMA phase: p_n1 = E/d_m, no dedicated slot, delay = d_m.

    Returns None below the pure-NOMA threshold or if the full-budget NOMA
    rate cannot carry the task within d_m.
    """
    d = derive_constants(params)
    if energy < d.e2:
        return None
    p_n1 = energy / params.d_m
    nats_in_slot = params.d_m * math.log1p(params.h_n_sq * p_n1 / d.exp_rate)
    if nats_in_slot < params.n_nats * (1.0 - 1e-12):
        return None
    return Allocation(
        p_n1=p_n1,
        p_n2=0.0,
        t_n=0.0,
        mode=Mode.PURE_NOMA,
        energy_used=params.d_m * p_n1,
        delay=params.d_m,
    )


def _oma_energy(params: SystemParams, p: float) -> float:
    # energy needed to push all nats at dedicated-slot power p: N*p / ln(1+g*p)
    return params.n_nats * p / math.log1p(params.h_n_sq * p)


def solve_oma(params: SystemParams, energy: float) -> Allocation | None:
    """Dedicated slot only: bisect for the power at which the budget binds.

    The required energy N*p/ln(1+g*p) is increasing and the delay decreasing
    in p, so the optimum spends the whole budget. Returns None below the
    feasibility floor N/|h_n|^2.
    """
    d = derive_constants(params)
    if energy < d.e_oma_min:
        return None
    hi = 1.0
    while _oma_energy(params, hi) <= energy:
        hi *= 2.0
    lo = 0.0  # limit energy at p -> 0 is N/|h_n|^2 <= E
    for _ in range(200):
        if hi - lo <= 1e-12 * hi:
            break
        mid = 0.5 * (lo + hi)
        if _oma_energy(params, mid) > energy:
            hi = mid
        else:
            lo = mid
    p_n2 = 0.5 * (lo + hi)
    t_n = params.n_nats / math.log1p(params.h_n_sq * p_n2)
    return Allocation(
        p_n1=0.0,
        p_n2=p_n2,
        t_n=t_n,
        mode=Mode.OMA,
        energy_used=t_n * p_n2,
        delay=params.d_m + t_n,
    )


def _require_hybrid(params: SystemParams, energy: float) -> None:
    d = derive_constants(params)
    if not (d.e1 < energy < d.e2):
        raise RegimeError(
            f"hybrid solver requires e1 < E < e2 "
            f"(e1={d.e1!r}, e2={d.e2!r}, E={energy!r})"
        )


def matched_init_mu(params: SystemParams, energy: float) -> float:
    """First iterate from the infinite-mu start: a/b at the limit allocation."""
    p_n1, p_n2 = allocate(params, energy, MU_INF)
    a, b = objective_terms(params, p_n1, p_n2)
    return a / b


def _hybrid_allocation(params: SystemParams, energy: float, mu_star: float) -> Allocation:
    p_n1, p_n2 = allocate(params, energy, mu_star)
    t_n = 1.0 / mu_star
    return Allocation(
        p_n1=p_n1,
        p_n2=p_n2,
        t_n=t_n,
        mode=Mode.HYBRID_NOMA,
        energy_used=params.d_m * p_n1 + t_n * p_n2,
        delay=params.d_m + t_n,
    )


def _record(params: SystemParams, energy: float, t: int, mu: float, f: float) -> TracePoint:
    p_n1, p_n2 = allocate(params, energy, mu)
    return TracePoint(t=t, mu=mu, f=f, p_n1=p_n1, p_n2=p_n2, delay=params.d_m + 1.0 / mu)


def solve_hnoma_dinkelbach(
    params: SystemParams, energy: float, cfg: SolverConfig | None = None
) -> tuple[Allocation, list[TracePoint], float]:
    """Hybrid solver with the ratio update mu <- a/b.

    Stops once F(mu) >= -delta; returns (allocation at mu*, trace, mu*) with
    t_n = 1/mu*.
    """
    cfg = cfg or SolverConfig()
    _require_hybrid(params, energy)
    mu = matched_init_mu(params, energy)
    trace: list[TracePoint] = []
    for t in range(1, cfg.max_iters + 1):
        point = eval_f(params, energy, mu)
        trace.append(_record(params, energy, t, mu, point.f))
        if point.f >= -cfg.delta:
            return _hybrid_allocation(params, energy, mu), trace, mu
        mu = point.a / point.b
    raise ConvergenceError(
        f"ratio iteration did not reach |F| <= {cfg.delta!r} in {cfg.max_iters} iterations",
        trace,
    )


def solve_hnoma_newton(
    params: SystemParams,
    energy: float,
    cfg: SolverConfig | None = None,
    init: Literal["matched", "factor"] = "matched",
) -> tuple[Allocation, list[TracePoint], float]:
    """Hybrid solver with Newton steps mu <- mu - F/F'.

    The default start is the same first iterate as the ratio method, which is
    guaranteed to lie right of the root; ``init="factor"`` starts instead at
    newton_mu0_factor * mu_lb(E) for sensitivity studies and raises
    InitializationError when that lands left of the root.
    """
    cfg = cfg or SolverConfig()
    _require_hybrid(params, energy)
    if init == "matched":
        mu = matched_init_mu(params, energy)
    elif init == "factor":
        mu = cfg.newton_mu0_factor * derive_constants(params).mu_lb(energy)
    else:
        raise ValueError(f"init must be 'matched' or 'factor', got {init!r}")
    trace: list[TracePoint] = []
    for t in range(1, cfg.max_iters + 1):
        point = eval_f(params, energy, mu)
        trace.append(_record(params, energy, t, mu, point.f))
        if point.f >= -cfg.delta:
            # The guard only applies to the free-start variant: the matched
            # start sits right of the root by construction, so a positive
            # first reading there is evaluation noise at convergence level.
            if t == 1 and init == "factor" and point.f > cfg.delta:
                raise InitializationError(
                    f"F(mu0={mu!r}) = {point.f!r} > 0: start is left of the root; "
                    "increase newton_mu0_factor or use the matched start"
                )
            return _hybrid_allocation(params, energy, mu), trace, mu
        if point.f_prime >= 0.0:
            raise ConvergenceError(
                f"nonnegative derivative {point.f_prime!r} at mu={mu!r}; cannot step", trace
            )
        mu = mu - point.f / point.f_prime
    raise ConvergenceError(
        f"Newton iteration did not reach |F| <= {cfg.delta!r} in {cfg.max_iters} iterations",
        trace,
    )


def pick_best(candidates: list[Allocation]) -> Allocation | None:
    """Minimum-delay allocation with the fixed tie preference."""
    if not candidates:
        return None
    best_delay = min(a.delay for a in candidates)
    tied = [a for a in candidates if a.delay <= best_delay * (1.0 + _TIE_REL)]
    return min(tied, key=lambda a: _MODE_RANK[a.mode])


def solve(
    params: SystemParams,
    energy: float,
    cfg: SolverConfig | None = None,
    method: Literal["newton", "dinkelbach"] = "newton",
) -> Solution:
    """Classify the budget, run every feasible mode, return the best point.

    An infeasible budget yields a Solution with best=None rather than an
    exception. In the hybrid regime both the iterative solver (``method``)
    and OMA run, and the smaller delay wins.
    """
    if method not in ("newton", "dinkelbach"):
        raise ValueError(f"method must be 'newton' or 'dinkelbach', got {method!r}")
    cfg = cfg or SolverConfig()
    regime = classify_regime(params, energy)
    per_mode: dict[Mode, Allocation | None] = {
        Mode.OMA: None,
        Mode.PURE_NOMA: None,
        Mode.HYBRID_NOMA: None,
    }
    trace: list[TracePoint] = []
    mu_star: float | None = None
    iterations: int | None = None

    if regime is not EnergyRegime.INFEASIBLE:
        per_mode[Mode.OMA] = solve_oma(params, energy)
    if regime is EnergyRegime.PURE_NOMA:
        per_mode[Mode.PURE_NOMA] = solve_pure_noma(params, energy)
    if regime is EnergyRegime.HYBRID:
        runner = solve_hnoma_newton if method == "newton" else solve_hnoma_dinkelbach
        alloc, trace, mu_star = runner(params, energy, cfg)
        per_mode[Mode.HYBRID_NOMA] = alloc
        iterations = trace[-1].t

    best = pick_best([a for a in per_mode.values() if a is not None])
    return Solution(
        regime=regime,
        best=best,
        per_mode=per_mode,
        trace=trace,
        mu_star=mu_star,
        iterations=iterations,
    )
