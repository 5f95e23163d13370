"""Auxiliary objective for the fractional form of the delay problem.

The dedicated-slot time is a ratio of rate terms, so the problem is handled
through the parameterized objective

    F(mu) = max  ln(1 + |h_n|^2 p_n2) - mu * (N - d_m ln(1 + e^(-N/d_m) p_n1 |h_n|^2))

over power pairs with the mu-weighted budget d_m*p_n1 + p_n2/mu <= E. For a
fixed mu the maximizer has a closed form (``allocate``); substituting it in
makes F an explicit, strictly concave function of mu whose largest root mu*
gives the optimal slot length t_n = 1/mu*.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import DerivedConstants, SystemParams, derive_constants

MU_INF = math.inf  # symbolic start of the iterative schemes; only allocate() accepts it


@dataclass(frozen=True)
class MuPoint:
    """F and its pieces at one parameter value.

    ``a`` is the dedicated-slot rate term ln(1 + |h_n|^2 p_n2); ``b`` is the
    nats left after the NOMA phase, N - d_m ln(1 + e^(-N/d_m) p_n1 |h_n|^2).
    By construction f = a - mu*b.
    """

    mu: float
    f: float
    f_prime: float
    a: float
    b: float


def _check_mu(d: DerivedConstants, energy: float, mu: float) -> None:
    lb = d.mu_lb(energy)
    if math.isnan(mu) or mu <= lb:
        raise ValueError(
            f"mu={mu!r} is outside the allocation domain (requires mu > {lb!r}); "
            "at or below the bracket the NOMA-phase power p_n1 is nonpositive"
        )


def allocate(params: SystemParams, energy: float, mu: float) -> tuple[float, float]:
    """Budget-saturating power split for a fixed mu.

    Accepts mu = +inf (``MU_INF``) and returns the limit pair
    (E/d_m, (E + d_m*(e^(N/d_m)-1)/|h_n|^2)/d_m). The identity
    d_m*p_n1 + p_n2/mu = E holds at every admissible mu.
    """
    d = derive_constants(params)
    _check_mu(d, energy, mu)
    inv = 1.0 / mu  # 0.0 at mu = +inf, which yields the limit allocation
    c = d.exp_rate_m1 / d.h_n_sq
    p_n1 = (energy - inv * c) / (params.d_m + inv)
    p_n2 = (energy + params.d_m * c) / (params.d_m + inv)
    return p_n1, p_n2


def objective_terms(params: SystemParams, p_n1: float, p_n2: float) -> tuple[float, float]:
    """(a, b) decomposition of the objective at a given power pair."""
    d = derive_constants(params)
    a = math.log1p(d.h_n_sq * p_n2)
    b = params.n_nats - params.d_m * math.log1p(d.h_n_sq * p_n1 / d.exp_rate)
    return a, b


def eval_f(params: SystemParams, energy: float, mu: float) -> MuPoint:
    """Evaluate F, its decomposition, and its first derivative at a finite mu."""
    if not math.isfinite(mu):
        raise ValueError("eval_f requires a finite mu; MU_INF is only valid for allocate()")
    d = derive_constants(params)
    _check_mu(d, energy, mu)
    p_n1, p_n2 = allocate(params, energy, mu)
    a, b = objective_terms(params, p_n1, p_n2)
    q = d.h_n_sq * energy + params.d_m * d.exp_rate_m1
    w = (d.exp_rate * params.d_m + d.h_n_sq * energy) * mu + 1.0
    return MuPoint(mu=mu, f=a - mu * b, f_prime=q / w - b, a=a, b=b)


def eval_f_second(params: SystemParams, energy: float, mu: float) -> float:
    """Second derivative of F at a finite mu; strictly negative everywhere.

    The numerator is the square of |h_n|^2 E + d_m (e^(N/d_m) - 1), the same
    quantity that appears as the positive part of F'.
    """
    if not math.isfinite(mu):
        raise ValueError("eval_f_second requires a finite mu")
    d = derive_constants(params)
    _check_mu(d, energy, mu)
    q = d.h_n_sq * energy + params.d_m * d.exp_rate_m1
    w = (d.exp_rate * params.d_m + d.h_n_sq * energy) * mu + 1.0
    return -(q * q) / (w * w * (mu * params.d_m + 1.0))
