import json
import math

import numpy as np
import pytest

from noma_mec import (
    EnergyRegime,
    SystemParams,
    classify_regime,
    derive_constants,
    instance_from_dict,
    load_instance,
)
from conftest import random_params

REGIME_ORDER = [
    EnergyRegime.INFEASIBLE,
    EnergyRegime.OMA_ONLY,
    EnergyRegime.HYBRID,
    EnergyRegime.PURE_NOMA,
]


def test_derived_constants_reference_instance(fig_params):
    d = derive_constants(fig_params)
    # direct evaluation of the closed forms at N=15, d_m=5, unit gains
    assert d.p_m == pytest.approx(math.expm1(3.0), rel=1e-12)
    assert d.e1 == pytest.approx(5.0 * math.expm1(3.0), rel=1e-12)
    assert d.e2 == pytest.approx(5.0 * math.expm1(3.0) * math.exp(3.0), rel=1e-12)
    assert d.e1 == pytest.approx(95.42768461593835, rel=1e-12)
    assert d.e2 == pytest.approx(1916.7162828477374, rel=1e-12)
    assert d.e_oma_min == 15.0


def test_mu_lb_reference_value(fig_params):
    d = derive_constants(fig_params)
    assert d.mu_lb(500.0) == pytest.approx(math.expm1(3.0) / 500.0, rel=1e-12)
    assert d.mu_lb(500.0) == pytest.approx(0.0381710738, rel=1e-8)
    with pytest.raises(ValueError):
        d.mu_lb(0.0)


def test_pm_satisfies_rate_equation():
    rng = np.random.default_rng(7)
    for _ in range(500):
        p = random_params(rng)
        d = derive_constants(p)
        nats = p.d_m * math.log1p(d.p_m * p.h_m_sq)
        assert nats == pytest.approx(p.n_nats, rel=1e-12)
        assert d.p_m * p.h_m_sq + 1.0 == pytest.approx(d.exp_rate, rel=1e-12)


def test_threshold_ordering_randomized():
    rng = np.random.default_rng(11)
    for _ in range(500):
        d = derive_constants(random_params(rng))
        assert d.e_oma_min < d.e1 < d.e2


def test_thresholds_collapse_for_small_rate():
    p = SystemParams(n_nats=1e-7, d_m=1.0, h_m_sq=0.7, h_n_sq=1.3)
    d = derive_constants(p)
    assert d.e1 == pytest.approx(d.e_oma_min, rel=1e-6)
    assert d.e2 == pytest.approx(d.e1, rel=1e-6)


def test_extreme_rate_overflows():
    with pytest.raises(OverflowError):
        derive_constants(SystemParams(n_nats=1e6, d_m=1.0, h_m_sq=1.0, h_n_sq=1.0))


def test_params_validation():
    for bad in (
        {"n_nats": 0.0, "d_m": 1.0, "h_m_sq": 1.0, "h_n_sq": 1.0},
        {"n_nats": 1.0, "d_m": -2.0, "h_m_sq": 1.0, "h_n_sq": 1.0},
        {"n_nats": 1.0, "d_m": 1.0, "h_m_sq": math.nan, "h_n_sq": 1.0},
        {"n_nats": 1.0, "d_m": 1.0, "h_m_sq": 1.0, "h_n_sq": math.inf},
    ):
        with pytest.raises(ValueError):
            SystemParams(**bad)


def test_classify_examples(fig_params):
    assert classify_regime(fig_params, 2000.0) is EnergyRegime.PURE_NOMA
    assert classify_regime(fig_params, 50.0) is EnergyRegime.OMA_ONLY
    assert classify_regime(fig_params, 0.0) is EnergyRegime.INFEASIBLE
    assert classify_regime(fig_params, 500.0) is EnergyRegime.HYBRID


def test_classify_boundaries(fig_params):
    d = derive_constants(fig_params)
    assert classify_regime(fig_params, d.e_oma_min) is EnergyRegime.OMA_ONLY
    assert classify_regime(fig_params, d.e1) is EnergyRegime.OMA_ONLY
    assert classify_regime(fig_params, d.e1 * (1.0 + 1e-12)) is EnergyRegime.HYBRID
    assert classify_regime(fig_params, d.e2) is EnergyRegime.PURE_NOMA
    assert classify_regime(fig_params, d.e2 * (1.0 - 1e-12)) is EnergyRegime.HYBRID


def test_classify_rejects_bad_energy(fig_params):
    with pytest.raises(ValueError):
        classify_regime(fig_params, -1.0)
    with pytest.raises(ValueError):
        classify_regime(fig_params, math.inf)


def test_partition_monotone_in_energy():
    rng = np.random.default_rng(23)
    for _ in range(200):
        p = random_params(rng)
        d = derive_constants(p)
        energies = np.sort(rng.uniform(0.0, 1.5 * d.e2, size=50))
        indices = [REGIME_ORDER.index(classify_regime(p, float(e))) for e in energies]
        assert indices == sorted(indices)


def test_pure_noma_rate_equality_at_e2():
    # at E = e2 the full-budget NOMA phase carries exactly the task size
    rng = np.random.default_rng(31)
    for _ in range(200):
        p = random_params(rng)
        d = derive_constants(p)
        nats = p.d_m * math.log1p(p.h_n_sq * (d.e2 / p.d_m) / d.exp_rate)
        assert abs(nats - p.n_nats) <= 1e-9 * p.n_nats
        assert classify_regime(p, d.e2) is EnergyRegime.PURE_NOMA


def test_instance_roundtrip(tmp_path):
    data = {"n_nats": 15.0, "d_m": 5.0, "h_m_sq": 1.0, "h_n_sq": 1.0, "energy": 500.0}
    path = tmp_path / "instance.json"
    path.write_text(json.dumps(data))
    params, energy = load_instance(str(path))
    assert params == SystemParams(15.0, 5.0, 1.0, 1.0)
    assert energy == 500.0


def test_instance_validation():
    with pytest.raises(ValueError, match="missing"):
        instance_from_dict({"n_nats": 1.0})
    with pytest.raises(ValueError, match="unknown"):
        instance_from_dict(
            {"n_nats": 1.0, "d_m": 1.0, "h_m_sq": 1.0, "h_n_sq": 1.0, "energy": 1.0, "extra": 2}
        )
    with pytest.raises(ValueError, match="number"):
        instance_from_dict(
            {"n_nats": "x", "d_m": 1.0, "h_m_sq": 1.0, "h_n_sq": 1.0, "energy": 1.0}
        )


def test_instance_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ValueError, match="not valid JSON"):
        load_instance(str(path))
