import numpy as np
import pytest

from noma_mec import SystemParams, derive_constants

# Instance sampling keeps N/d_m in [0.5, 6] so e^(N/d_m) stays far from
# overflow and the hybrid root sits well inside (mu_lb, 1e6*mu_lb).


def random_params(rng: np.random.Generator) -> SystemParams:
    d_m = rng.uniform(1.0, 8.0)
    rate = rng.uniform(0.5, 6.0)
    return SystemParams(
        n_nats=rate * d_m,
        d_m=d_m,
        h_m_sq=rng.uniform(0.25, 4.0),
        h_n_sq=rng.uniform(0.25, 4.0),
    )


def random_hybrid_instance(rng: np.random.Generator, u_lo: float = 0.02, u_hi: float = 0.98):
    params = random_params(rng)
    d = derive_constants(params)
    energy = d.e1 + rng.uniform(u_lo, u_hi) * (d.e2 - d.e1)
    return params, energy


def random_oma_instance(rng: np.random.Generator, x_lo: float = 0.3, x_hi: float = 0.95):
    params = random_params(rng)
    d = derive_constants(params)
    energy = d.e_oma_min + rng.uniform(x_lo, x_hi) * (d.e1 - d.e_oma_min)
    return params, energy


@pytest.fixture
def fig_params() -> SystemParams:
    return SystemParams(n_nats=15.0, d_m=5.0, h_m_sq=1.0, h_n_sq=1.0)


@pytest.fixture
def hybrid_instances():
    def make(seed: int, count: int, u_lo: float = 0.02, u_hi: float = 0.98):
        rng = np.random.default_rng(seed)
        return [random_hybrid_instance(rng, u_lo, u_hi) for _ in range(count)]

    return make


@pytest.fixture
def oma_instances():
    def make(seed: int, count: int, x_lo: float = 0.3, x_hi: float = 0.95):
        rng = np.random.default_rng(seed)
        return [random_oma_instance(rng, x_lo, x_hi) for _ in range(count)]

    return make
