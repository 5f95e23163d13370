"""Domain types, derived constants, and energy-regime classification.

Two users offload tasks of equal size (in nats) to an edge server. User m
keeps its OMA rate and deadline ``d_m``; user n piggybacks on user m's slot
(NOMA phase) and may extend into a dedicated slot of length ``t_n``. The
energy budget E decides which offloading modes are open to user n.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass


class EnergyRegime(enum.Enum):
    """Partition of the energy budget for a fixed set of system parameters."""

    INFEASIBLE = "infeasible"
    OMA_ONLY = "oma_only"
    HYBRID = "hybrid"
    PURE_NOMA = "pure_noma"


class Mode(enum.Enum):
    OMA = "oma"
    PURE_NOMA = "pure_noma"
    HYBRID_NOMA = "hybrid_noma"


@dataclass(frozen=True)
class SystemParams:
    """Immutable problem instance (task size, deadline, channel power gains)."""

    n_nats: float
    d_m: float
    h_m_sq: float
    h_n_sq: float

    def __post_init__(self) -> None:
        for name in ("n_nats", "d_m", "h_m_sq", "h_n_sq"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{name} must be a number, got {value!r}")
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def to_dict(self) -> dict[str, float]:
        return {
            "n_nats": float(self.n_nats),
            "d_m": float(self.d_m),
            "h_m_sq": float(self.h_m_sq),
            "h_n_sq": float(self.h_n_sq),
        }


@dataclass(frozen=True)
class DerivedConstants:
    """Constants shared by every formula of one instance.

    ``exp_rate`` is e^(N/d_m), computed exactly once; all modules read it from
    here so identities stay bit-stable across formulas.
    """

    p_m: float         # user m's OMA transmit power
    e1: float          # budget above which hybrid NOMA has an interior solution
    e2: float          # budget above which pure NOMA finishes within d_m
    e_oma_min: float   # minimum budget for OMA feasibility, N / |h_n|^2
    exp_rate: float    # e^(N/d_m)
    exp_rate_m1: float # e^(N/d_m) - 1
    h_n_sq: float

    def mu_lb(self, energy: float) -> float:
        """Lower bracket of the auxiliary parameter for a given budget."""
        if energy <= 0.0:
            raise ValueError(f"energy must be positive, got {energy!r}")
        return self.exp_rate_m1 / (self.h_n_sq * energy)


@dataclass(frozen=True)
class Allocation:
    """A candidate operating point for user n.

    ``p_n1`` is the power spent during user m's slot (NOMA phase), ``p_n2``
    the power in the dedicated slot of length ``t_n``.
    """

    p_n1: float
    p_n2: float
    t_n: float
    mode: Mode
    energy_used: float
    delay: float


def derive_constants(params: SystemParams) -> DerivedConstants:
    """Evaluate the closed-form constants for one instance.

    Raises OverflowError when e^(N/d_m) exceeds the double range.
    """
    rate = params.n_nats / params.d_m
    exp_rate_m1 = math.expm1(rate)
    exp_rate = math.exp(rate)
    e1 = params.d_m * exp_rate_m1 / params.h_n_sq
    return DerivedConstants(
        p_m=exp_rate_m1 / params.h_m_sq,
        e1=e1,
        e2=e1 * exp_rate,
        e_oma_min=params.n_nats / params.h_n_sq,
        exp_rate=exp_rate,
        exp_rate_m1=exp_rate_m1,
        h_n_sq=params.h_n_sq,
    )


def classify_regime(params: SystemParams, energy: float) -> EnergyRegime:
    """Map a budget to its regime.

    Boundary convention: at E = e1 the hybrid solution degenerates
    (p_n1 = 0), so e1 itself classifies as OMA_ONLY; E = e2 classifies as
    PURE_NOMA.
    """
    if not math.isfinite(energy) or energy < 0.0:
        raise ValueError(f"energy must be a finite nonnegative number, got {energy!r}")
    d = derive_constants(params)
    if energy < d.e_oma_min:
        return EnergyRegime.INFEASIBLE
    if energy <= d.e1:
        return EnergyRegime.OMA_ONLY
    if energy < d.e2:
        return EnergyRegime.HYBRID
    return EnergyRegime.PURE_NOMA


INSTANCE_KEYS = ("n_nats", "d_m", "h_m_sq", "h_n_sq", "energy")


def instance_from_dict(data: dict) -> tuple[SystemParams, float]:
    """Parse the instance-file schema; key names are fixed."""
    unknown = sorted(set(data) - set(INSTANCE_KEYS))
    if unknown:
        raise ValueError(f"unknown instance key(s): {', '.join(unknown)}")
    missing = [k for k in INSTANCE_KEYS if k not in data]
    if missing:
        raise ValueError(f"missing instance key(s): {', '.join(missing)}")
    values = {}
    for key in INSTANCE_KEYS:
        value = data[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValueError(f"instance key {key} must be a number, got {value!r}")
        values[key] = float(value)
    energy = values.pop("energy")
    if not math.isfinite(energy) or energy < 0.0:
        raise ValueError(f"energy must be a finite nonnegative number, got {energy!r}")
    return SystemParams(**values), energy


def load_instance(path: str) -> tuple[SystemParams, float]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"instance file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"instance file {path} must contain a JSON object")
    return instance_from_dict(data)
