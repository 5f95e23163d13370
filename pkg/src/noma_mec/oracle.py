"""Brute-force grid validation of the OMA/hybrid optima.

Evaluates the exact delay objective on a power grid and keeps the best point
that respects the energy budget. Independent of the closed-form machinery,
so it serves as an upper-bound oracle for the solvers: the grid minimum can
never beat the true optimum, and it must come within grid resolution of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import EnergyRegime, SystemParams, classify_regime, derive_constants
from .solvers import RegimeError

_ROW_BLOCK = 256


@dataclass(frozen=True)
class GridSpec:
    p1_points: int = 2001
    p2_points: int = 2001
    p2_max_multiplier: float = 2.0
    log_spacing: bool = False

    def __post_init__(self) -> None:
        if self.p1_points < 2 or self.p2_points < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.p2_max_multiplier < 1.0:
            raise ValueError(
                f"p2_max_multiplier must be >= 1, got {self.p2_max_multiplier!r}"
            )


def grid_min_delay(
    params: SystemParams, energy: float, spec: GridSpec | None = None
) -> tuple[float, float, float]:
    """Minimum delay over the grid; returns (delay, p_n1, p_n2).

    p_n1 spans [0, E/d_m] (the 0 column covers OMA); p_n2 spans
    (0, multiplier * limit-allocation p_n2]. Points that overshoot the budget
    are discarded. Ties resolve to the lexicographically smallest (p1, p2).
    """
    spec = spec or GridSpec()
    regime = classify_regime(params, energy)
    if regime not in (EnergyRegime.OMA_ONLY, EnergyRegime.HYBRID):
        raise RegimeError(
            f"grid oracle handles the OMA-only and hybrid regimes, got {regime.value} "
            f"at E={energy!r}"
        )

    d = derive_constants(params)
    g = params.h_n_sq
    p1_max = energy / params.d_m
    p2_max = spec.p2_max_multiplier * (energy + params.d_m * d.exp_rate_m1 / g) / params.d_m
    if spec.log_spacing:
        p1 = np.concatenate(([0.0], np.geomspace(p1_max * 1e-6, p1_max, spec.p1_points - 1)))
        p2 = np.geomspace(p2_max * 1e-6, p2_max, spec.p2_points)
    else:
        p1 = np.linspace(0.0, p1_max, spec.p1_points)
        p2 = np.linspace(p2_max / spec.p2_points, p2_max, spec.p2_points)

    slot_rate = np.log1p(g * p2)  # > 0 since p2 > 0
    remaining = params.n_nats - params.d_m * np.log1p(g * p1 / d.exp_rate)

    best_delay = math.inf
    best_i = best_j = -1
    for start in range(0, spec.p1_points, _ROW_BLOCK):
        stop = min(start + _ROW_BLOCK, spec.p1_points)
        t_n = remaining[start:stop, None] / slot_rate[None, :]
        used = params.d_m * p1[start:stop, None] + t_n * p2[None, :]
        delay = np.where((used > energy) | (t_n < 0.0), math.inf, params.d_m + t_n)
        flat = int(np.argmin(delay))
        i, j = divmod(flat, spec.p2_points)
        if delay[i, j] < best_delay:  # strict: earlier rows win ties
            best_delay = float(delay[i, j])
            best_i, best_j = start + i, j

    if not math.isfinite(best_delay):
        raise RegimeError(
            f"empty feasible set on the grid at E={energy!r}; "
            "the budget is below the OMA feasibility floor"
        )
    return best_delay, float(p1[best_i]), float(p2[best_j])
