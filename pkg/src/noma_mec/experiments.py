"""Energy sweeps and convergence traces, emitted as deterministic CSV.

The sweep reports, per budget: the regime, the OMA delay, the NOMA delay
(pure NOMA above e2, hybrid below it), the winning mode, and the iteration
counts of both hybrid solvers. The trace comparison runs both solvers from
the matched start on one instance and records delay per iteration.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

from .model import Allocation, EnergyRegime, SystemParams, classify_regime
from .solvers import (
    SolverConfig,
    TracePoint,
    pick_best,
    solve_hnoma_dinkelbach,
    solve_hnoma_newton,
    solve_oma,
    solve_pure_noma,
)

SWEEP_COLUMNS = [
    "E",
    "regime",
    "delay_oma",
    "delay_noma",
    "best_mode",
    "mu_star",
    "iters_dinkelbach",
    "iters_newton",
    "p_n1",
    "p_n2",
    "t_n",
]

TRACE_COLUMNS = ["method", "t", "mu", "f", "delay"]


@dataclass(frozen=True)
class SweepSpec:
    params: SystemParams
    e_min: float
    e_max: float
    n_points: int = 200
    spacing: str = "linear"
    cfg: SolverConfig = SolverConfig()

    def __post_init__(self) -> None:
        if not (self.e_min > 0.0):
            raise ValueError(f"e_min must be positive, got {self.e_min!r}")
        if not (self.e_max > self.e_min):
            raise ValueError(f"e_max must exceed e_min, got {self.e_max!r}")
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points!r}")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")

    def energies(self) -> list[float]:
        n = self.n_points
        if self.spacing == "linear":
            step = (self.e_max - self.e_min) / (n - 1)
            return [self.e_min + i * step for i in range(n - 1)] + [self.e_max]
        ratio = (self.e_max / self.e_min) ** (1.0 / (n - 1))
        return [self.e_min * ratio**i for i in range(n - 1)] + [self.e_max]


@dataclass(frozen=True)
class SweepRow:
    energy: float
    regime: EnergyRegime
    delay_oma: float | None
    delay_noma: float | None
    best_mode: str | None
    mu_star: float | None
    iters_dinkelbach: int | None
    iters_newton: int | None
    p_n1: float | None
    p_n2: float | None
    t_n: float | None


def _sweep_point(params: SystemParams, energy: float, cfg: SolverConfig) -> SweepRow:
    regime = classify_regime(params, energy)
    oma = solve_oma(params, energy) if regime is not EnergyRegime.INFEASIBLE else None

    noma: Allocation | None = None
    mu_star = None
    iters_d = iters_n = None
    if regime is EnergyRegime.PURE_NOMA:
        noma = solve_pure_noma(params, energy)
    elif regime is EnergyRegime.HYBRID:
        _, trace_d, _ = solve_hnoma_dinkelbach(params, energy, cfg)
        noma, trace_n, mu_star = solve_hnoma_newton(params, energy, cfg)
        iters_d = trace_d[-1].t
        iters_n = trace_n[-1].t

    if oma is not None and noma is not None and noma.delay > oma.delay * (1.0 + 1e-9):
        warnings.warn(
            f"hybrid NOMA delay {noma.delay!r} exceeds OMA delay {oma.delay!r} "
            f"at E={energy!r}; expected NOMA <= OMA",
            stacklevel=2,
        )

    best = pick_best([a for a in (oma, noma) if a is not None])
    return SweepRow(
        energy=energy,
        regime=regime,
        delay_oma=oma.delay if oma else None,
        delay_noma=noma.delay if noma else None,
        best_mode=best.mode.value if best else None,
        mu_star=mu_star,
        iters_dinkelbach=iters_d,
        iters_newton=iters_n,
        p_n1=best.p_n1 if best else None,
        p_n2=best.p_n2 if best else None,
        t_n=best.t_n if best else None,
    )


def energy_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One SweepRow per budget, ordered by E ascending."""
    return [_sweep_point(spec.params, e, spec.cfg) for e in spec.energies()]


@dataclass(frozen=True)
class TraceComparison:
    dinkelbach: list[TracePoint]
    newton: list[TracePoint]
    final_gap: float  # relative delay disagreement after convergence


def convergence_trace(
    params: SystemParams, energy: float, cfg: SolverConfig | None = None
) -> TraceComparison:
    """Run both hybrid solvers from the matched start on one instance."""
    cfg = cfg or SolverConfig()
    alloc_d, trace_d, _ = solve_hnoma_dinkelbach(params, energy, cfg)
    alloc_n, trace_n, _ = solve_hnoma_newton(params, energy, cfg)
    gap = abs(alloc_d.delay - alloc_n.delay) / alloc_n.delay
    return TraceComparison(dinkelbach=trace_d, newton=trace_n, final_gap=gap)


def _cell(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_sweep_csv(rows: list[SweepRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    _cell(row.energy),
                    row.regime.value,
                    _cell(row.delay_oma),
                    _cell(row.delay_noma),
                    _cell(row.best_mode),
                    _cell(row.mu_star),
                    _cell(row.iters_dinkelbach),
                    _cell(row.iters_newton),
                    _cell(row.p_n1),
                    _cell(row.p_n2),
                    _cell(row.t_n),
                ]
            )


def write_trace_csv(comparison: TraceComparison, d_m: float, path: str) -> None:
    """Per-iteration rows for both methods, preceded by the infinite-mu start.

    The t=0 row records the common start (mu = +inf, no dedicated slot, so
    delay is the d_m floor and F is left blank).
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for method, trace in (("dinkelbach", comparison.dinkelbach), ("newton", comparison.newton)):
            writer.writerow([method, "0", repr(math.inf), "", repr(d_m)])
            for point in trace:
                writer.writerow(
                    [method, str(point.t), repr(point.mu), repr(point.f), repr(point.delay)]
                )
