"""Command-line front end: solve, sweep, trace, compare.

Exit codes: 0 success, 2 infeasible instance, 3 convergence failure,
64 bad input (malformed flags/files or a request outside a command's regime).
Output directory defaults to $NOMA_MEC_OUTDIR, then the working directory.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .experiments import (
    SweepSpec,
    convergence_trace,
    energy_sweep,
    write_sweep_csv,
    write_trace_csv,
)
from .model import EnergyRegime, SystemParams, classify_regime, load_instance
from .oracle import GridSpec, grid_min_delay
from .solvers import ConvergenceError, SolverConfig, solve

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64

COMPARE_GAP_LIMIT = 1e-3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default, which collides with the
    # infeasible exit code; route usage problems to 64 instead.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce one run; round-trips through JSON."""

    params: SystemParams
    cfg: SolverConfig
    energy: float | None
    sweep: dict | None  # e_min / e_max / n_points / spacing
    outputs: dict[str, str]
    version: str

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "params": self.params.to_dict(),
            "solver": {
                "delta": self.cfg.delta,
                "max_iters": self.cfg.max_iters,
                "newton_mu0_factor": self.cfg.newton_mu0_factor,
            },
            "energy": self.energy,
            "sweep": self.sweep,
            "outputs": dict(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        solver = data.get("solver", {})
        return cls(
            params=SystemParams(**data["params"]),
            cfg=SolverConfig(
                delta=solver.get("delta", 1e-10),
                max_iters=solver.get("max_iters", 200),
                newton_mu0_factor=solver.get("newton_mu0_factor", 10.0),
            ),
            energy=data.get("energy"),
            sweep=data.get("sweep"),
            outputs=dict(data.get("outputs", {})),
            version=data.get("version", __version__),
        )

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _add_param_flags(parser: argparse.ArgumentParser, energy_required: bool = True) -> None:
    parser.add_argument("--file", "-f", help="instance JSON file (flags override its values)")
    parser.add_argument("--n", "--n-nats", dest="n_nats", type=float, help="task size in nats")
    parser.add_argument("--dm", "--d-m", dest="d_m", type=float, help="user m deadline, seconds")
    parser.add_argument("--hm2", "--h-m-sq", dest="h_m_sq", type=float, help="|h_m|^2")
    parser.add_argument("--hn2", "--h-n-sq", dest="h_n_sq", type=float, help="|h_n|^2")
    parser.add_argument("--energy", dest="energy", type=float, required=False,
                        help="energy budget E" + (" (required)" if energy_required else ""))


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, default=1e-10, help="stopping threshold on |F|")
    parser.add_argument("--max-iters", type=int, default=200)
    parser.add_argument("--newton-mu0-factor", type=float, default=10.0)


def _gather_instance(args: argparse.Namespace) -> tuple[SystemParams, float]:
    values: dict[str, float] = {}
    energy: float | None = None
    if args.file:
        params, energy = load_instance(args.file)
        values = params.to_dict()
    for key in ("n_nats", "d_m", "h_m_sq", "h_n_sq"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.energy is not None:
        energy = args.energy
    missing = [k for k in ("n_nats", "d_m", "h_m_sq", "h_n_sq") if k not in values]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join(missing)} (pass flags or --file)")
    if energy is None:
        raise UsageError("missing energy (pass --energy or include it in --file)")
    if not math.isfinite(energy) or energy < 0.0:
        raise UsageError(f"energy must be a finite nonnegative number, got {energy!r}")
    return SystemParams(**values), energy


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        delta=args.delta,
        max_iters=args.max_iters,
        newton_mu0_factor=args.newton_mu0_factor,
    )


def _out_dir(args: argparse.Namespace) -> str:
    out = args.out or os.environ.get("NOMA_MEC_OUTDIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_solve(args: argparse.Namespace) -> int:
    params, energy = _gather_instance(args)
    cfg = _solver_config(args)
    solution = solve(params, energy, cfg, method=args.method)
    print(json.dumps(solution.to_dict(), indent=2))
    if solution.best is None:
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.manifest:
        manifest = RunManifest.load(args.manifest)
        if manifest.sweep is None:
            raise UsageError(f"manifest {args.manifest} does not describe a sweep")
        params, cfg = manifest.params, manifest.cfg
        grid = dict(manifest.sweep)
    else:
        params, _energy = _gather_instance_no_energy(args)
        cfg = _solver_config(args)
        grid = {
            "e_min": args.e_min,
            "e_max": args.e_max,
            "n_points": args.points,
            "spacing": args.spacing,
        }
    spec = SweepSpec(params=params, cfg=cfg, **grid)
    rows = energy_sweep(spec)

    out = _out_dir(args)
    csv_path = os.path.join(out, f"{args.name}.csv")
    manifest_path = os.path.join(out, f"{args.name}.manifest.json")
    write_sweep_csv(rows, csv_path)
    RunManifest(
        params=params,
        cfg=cfg,
        energy=None,
        sweep=grid,
        outputs={"csv": os.path.basename(csv_path)},
        version=__version__,
    ).write(manifest_path)
    feasible = sum(1 for r in rows if r.best_mode is not None)
    print(f"wrote {csv_path} ({len(rows)} rows, {feasible} feasible) and {manifest_path}")
    return EXIT_OK


def _gather_instance_no_energy(args: argparse.Namespace) -> tuple[SystemParams, float | None]:
    # sweep has its own energy grid; reuse the shared parsing with energy optional
    values: dict[str, float] = {}
    if args.file:
        params, _ = load_instance(args.file)
        values = params.to_dict()
    for key in ("n_nats", "d_m", "h_m_sq", "h_n_sq"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    missing = [k for k in ("n_nats", "d_m", "h_m_sq", "h_n_sq") if k not in values]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join(missing)} (pass flags or --file)")
    return SystemParams(**values), None


def _cmd_trace(args: argparse.Namespace) -> int:
    params, energy = _gather_instance(args)
    cfg = _solver_config(args)
    regime = classify_regime(params, energy)
    if regime is EnergyRegime.INFEASIBLE:
        print(f"instance infeasible: E={energy!r} is below the OMA floor", file=sys.stderr)
        return EXIT_INFEASIBLE
    if regime is not EnergyRegime.HYBRID:
        raise UsageError(
            f"trace requires the hybrid regime, but E={energy!r} classifies as {regime.value}"
        )
    comparison = convergence_trace(params, energy, cfg)
    out = _out_dir(args)
    csv_path = os.path.join(out, f"{args.name}.csv")
    manifest_path = os.path.join(out, f"{args.name}.manifest.json")
    write_trace_csv(comparison, params.d_m, csv_path)
    RunManifest(
        params=params,
        cfg=cfg,
        energy=energy,
        sweep=None,
        outputs={"csv": os.path.basename(csv_path)},
        version=__version__,
    ).write(manifest_path)
    print(
        f"wrote {csv_path}: dinkelbach {comparison.dinkelbach[-1].t} iters, "
        f"newton {comparison.newton[-1].t} iters, final gap {comparison.final_gap:.3e}"
    )
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    params, energy = _gather_instance(args)
    cfg = _solver_config(args)
    regime = classify_regime(params, energy)
    if regime is EnergyRegime.INFEASIBLE:
        print(f"instance infeasible: E={energy!r} is below the OMA floor", file=sys.stderr)
        return EXIT_INFEASIBLE
    if regime not in (EnergyRegime.OMA_ONLY, EnergyRegime.HYBRID):
        raise UsageError(
            f"compare requires the OMA-only or hybrid regime, but E={energy!r} "
            f"classifies as {regime.value}"
        )
    solution = solve(params, energy, cfg)
    oracle_delay, _, _ = grid_min_delay(
        params,
        energy,
        GridSpec(p1_points=args.grid, p2_points=args.grid, p2_max_multiplier=args.multiplier),
    )
    solver_delay = solution.best.delay
    gap = (oracle_delay - solver_delay) / solver_delay
    print(
        json.dumps(
            {"solver_delay": solver_delay, "oracle_delay": oracle_delay, "relative_gap": gap},
            indent=2,
        )
    )
    if abs(gap) > COMPARE_GAP_LIMIT:
        print(f"relative gap {gap:.3e} exceeds {COMPARE_GAP_LIMIT:.0e}", file=sys.stderr)
        return 1
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noma-mec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance, print the solution JSON")
    _add_param_flags(p_solve)
    _add_solver_flags(p_solve)
    p_solve.add_argument("--method", choices=("newton", "dinkelbach"), default="newton")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="delay-vs-energy sweep, write CSV + manifest")
    _add_param_flags(p_sweep, energy_required=False)
    _add_solver_flags(p_sweep)
    p_sweep.add_argument("--e-min", type=float, default=20.0)
    p_sweep.add_argument("--e-max", type=float, default=2500.0)
    p_sweep.add_argument("--points", type=int, default=200)
    p_sweep.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p_sweep.add_argument("--manifest", help="rerun the sweep described by a manifest file")
    p_sweep.add_argument("--out", "-o", help="output directory (default $NOMA_MEC_OUTDIR or .)")
    p_sweep.add_argument("--name", default="sweep", help="basename for CSV and manifest")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_trace = sub.add_parser("trace", help="per-iteration comparison of both hybrid solvers")
    _add_param_flags(p_trace)
    _add_solver_flags(p_trace)
    p_trace.add_argument("--out", "-o", help="output directory (default $NOMA_MEC_OUTDIR or .)")
    p_trace.add_argument("--name", default="trace", help="basename for CSV and manifest")
    p_trace.set_defaults(func=_cmd_trace)

    p_cmp = sub.add_parser("compare", help="solver vs. grid oracle on one instance")
    _add_param_flags(p_cmp)
    _add_solver_flags(p_cmp)
    p_cmp.add_argument("--grid", type=int, default=2001, help="points per grid axis")
    p_cmp.add_argument("--multiplier", type=float, default=2.0, help="p_n2 range multiplier")
    p_cmp.set_defaults(func=_cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"convergence failure: {exc} ({len(exc.trace)} iterations recorded)", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
