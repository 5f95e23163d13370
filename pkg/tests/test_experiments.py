import math

import pytest

from noma_mec import (
    SWEEP_COLUMNS,
    EnergyRegime,
    SolverConfig,
    SweepSpec,
    convergence_trace,
    derive_constants,
    energy_sweep,
    solve,
    write_sweep_csv,
    write_trace_csv,
)


@pytest.fixture
def default_sweep(fig_params):
    spec = SweepSpec(params=fig_params, e_min=20.0, e_max=2500.0, n_points=60)
    return spec, energy_sweep(spec)


def test_sweep_spec_validation(fig_params):
    with pytest.raises(ValueError):
        SweepSpec(params=fig_params, e_min=0.0, e_max=10.0)
    with pytest.raises(ValueError):
        SweepSpec(params=fig_params, e_min=10.0, e_max=5.0)
    with pytest.raises(ValueError):
        SweepSpec(params=fig_params, e_min=1.0, e_max=10.0, n_points=1)
    with pytest.raises(ValueError):
        SweepSpec(params=fig_params, e_min=1.0, e_max=10.0, spacing="cubic")


def test_energy_grids(fig_params):
    lin = SweepSpec(params=fig_params, e_min=10.0, e_max=20.0, n_points=5)
    assert lin.energies() == [10.0, 12.5, 15.0, 17.5, 20.0]
    log = SweepSpec(params=fig_params, e_min=1.0, e_max=100.0, n_points=3, spacing="log")
    assert log.energies() == pytest.approx([1.0, 10.0, 100.0])
    assert log.energies()[-1] == 100.0


def test_sweep_rows_match_regimes(fig_params, default_sweep):
    _, rows = default_sweep
    d = derive_constants(fig_params)
    assert len(rows) == 60
    for row in rows:
        if row.regime is EnergyRegime.OMA_ONLY:
            assert row.delay_oma is not None and row.delay_noma is None
            assert row.best_mode == "oma"
            assert row.iters_dinkelbach is None and row.mu_star is None
        elif row.regime is EnergyRegime.HYBRID:
            assert row.delay_oma is not None and row.delay_noma is not None
            assert row.mu_star is not None
            assert row.iters_dinkelbach >= row.iters_newton >= 1
        elif row.regime is EnergyRegime.PURE_NOMA:
            assert row.delay_noma == fig_params.d_m
            assert row.t_n == 0.0
            assert row.iters_dinkelbach is None and row.mu_star is None
        if row.energy <= d.e1:
            assert row.delay_noma is None
        if row.energy >= d.e2:
            assert row.delay_noma == 5.0


def test_sweep_noma_never_worse_than_oma(default_sweep):
    _, rows = default_sweep
    compared = 0
    for row in rows:
        if row.delay_oma is not None and row.delay_noma is not None:
            assert row.delay_noma <= row.delay_oma * (1.0 + 1e-9)
            compared += 1
    assert compared > 10


def test_sweep_best_delay_nonincreasing(default_sweep):
    _, rows = default_sweep
    best = [min(x for x in (r.delay_oma, r.delay_noma) if x is not None) for r in rows]
    for earlier, later in zip(best, best[1:]):
        assert later <= earlier * (1.0 + 1e-9)


def test_sweep_marks_infeasible_budgets(fig_params):
    spec = SweepSpec(params=fig_params, e_min=5.0, e_max=30.0, n_points=6)
    rows = energy_sweep(spec)
    for row in rows:
        if row.energy < 15.0:
            assert row.regime is EnergyRegime.INFEASIBLE
            assert row.delay_oma is None and row.best_mode is None
        else:
            assert row.delay_oma is not None


def test_delay_continuous_at_pure_noma_threshold(fig_params):
    d = derive_constants(fig_params)
    sol = solve(fig_params, d.e2 * (1.0 - 1e-9))
    assert sol.regime is EnergyRegime.HYBRID
    assert abs(sol.best.delay - fig_params.d_m) <= 1e-6 * fig_params.d_m


def test_sweep_deterministic(fig_params, tmp_path):
    spec = SweepSpec(params=fig_params, e_min=20.0, e_max=2500.0, n_points=25)
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    write_sweep_csv(energy_sweep(spec), str(first))
    write_sweep_csv(energy_sweep(spec), str(second))
    assert first.read_bytes() == second.read_bytes()


def test_sweep_csv_schema(fig_params, tmp_path):
    spec = SweepSpec(params=fig_params, e_min=20.0, e_max=2500.0, n_points=5)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(energy_sweep(spec), str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 6
    first = lines[1].split(",")
    assert first[0] == "20.0"
    assert first[1] == "oma_only"
    assert first[3] == ""  # no NOMA delay in the OMA-only regime


def test_convergence_trace(fig_params):
    cmp = convergence_trace(fig_params, 500.0)
    assert cmp.final_gap <= 1e-8
    assert cmp.newton[-1].t <= cmp.dinkelbach[-1].t
    assert cmp.newton[-1].delay == pytest.approx(cmp.dinkelbach[-1].delay, rel=1e-8)
    for trace in (cmp.dinkelbach, cmp.newton):
        delays = [p.delay for p in trace]
        assert all(a < b for a, b in zip(delays, delays[1:]))
        assert all(d > fig_params.d_m for d in delays)


def test_convergence_trace_respects_config(fig_params):
    cfg = SolverConfig(delta=1e-4)
    loose = convergence_trace(fig_params, 500.0, cfg)
    tight = convergence_trace(fig_params, 500.0)
    assert loose.dinkelbach[-1].t <= tight.dinkelbach[-1].t


def test_trace_csv_layout(fig_params, tmp_path):
    cmp = convergence_trace(fig_params, 500.0)
    path = tmp_path / "trace.csv"
    write_trace_csv(cmp, fig_params.d_m, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "method,t,mu,f,delay"
    # both methods start from the infinite-mu row at the d_m floor
    start_rows = [line for line in lines[1:] if line.split(",")[1] == "0"]
    assert len(start_rows) == 2
    for line in start_rows:
        method, t, mu, f, delay = line.split(",")
        assert mu == "inf" and f == "" and delay == "5.0"
    assert {line.split(",")[0] for line in lines[1:]} == {"dinkelbach", "newton"}
    assert len(lines) == 1 + 2 + len(cmp.dinkelbach) + len(cmp.newton)


def test_pure_rows_have_exact_floor_delay(fig_params):
    spec = SweepSpec(params=fig_params, e_min=1920.0, e_max=2500.0, n_points=4)
    for row in energy_sweep(spec):
        assert row.regime is EnergyRegime.PURE_NOMA
        assert row.delay_noma == 5.0
        assert row.best_mode == "pure_noma"
        assert row.delay_oma > 5.0


def test_log_spaced_sweep(fig_params):
    spec = SweepSpec(params=fig_params, e_min=20.0, e_max=2500.0, n_points=10, spacing="log")
    rows = energy_sweep(spec)
    energies = [r.energy for r in rows]
    ratios = [b / a for a, b in zip(energies, energies[1:])]
    assert all(r == pytest.approx(ratios[0], rel=1e-9) for r in ratios)
    assert not math.isclose(energies[1] - energies[0], energies[-1] - energies[-2])
