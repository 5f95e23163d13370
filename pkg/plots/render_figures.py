#!/usr/bin/env python3
"""Render sweep / trace CSVs from the noma-mec CLI into figure-style images.

Two plot kinds:
  delay_vs_energy  - OMA and NOMA delay curves over the energy budget, with a
                     horizontal reference at the pure-NOMA delay floor
  convergence      - per-iteration delay of both hybrid solvers

The renderer only reads the CSVs; it never recomputes solver quantities.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

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

KINDS = ("delay_vs_energy", "convergence")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class PlotJob:
    csv_path: str
    image_path: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _read_rows(path: str, required: list[str]) -> list[dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaError(
                f"{path} does not match the expected schema; missing column(s): "
                + ", ".join(missing)
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path} contains a header but no data rows")
    return rows


def _number(cell: str | None) -> float | None:
    if cell is None or cell == "":
        return None
    return float(cell)


def _render_delay_vs_energy(job: PlotJob) -> None:
    rows = _read_rows(job.csv_path, SWEEP_COLUMNS)
    energy = [float(r["E"]) for r in rows]
    oma = [_number(r["delay_oma"]) for r in rows]
    noma = [_number(r["delay_noma"]) for r in rows]

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    oma_pts = [(e, d) for e, d in zip(energy, oma) if d is not None]
    noma_pts = [(e, d) for e, d in zip(energy, noma) if d is not None]
    if oma_pts:
        ax.plot(*zip(*oma_pts), label="OMA", color="tab:red", lw=1.6)
    if noma_pts:
        ax.plot(*zip(*noma_pts), label="NOMA (hybrid / pure)", color="tab:blue", lw=1.6)

    # delay floor as recorded in the pure-NOMA rows
    floors = [d for r, d in zip(rows, noma) if r["regime"] == "pure_noma" and d is not None]
    if floors:
        ax.axhline(floors[0], color="gray", ls="--", lw=1.0, label="deadline $d_m$")

    ax.set_xlabel("energy budget $E$")
    ax.set_ylabel("offloading delay of user $n$ (s)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(job.image_path, dpi=150)
    plt.close(fig)


def _render_convergence(job: PlotJob) -> None:
    rows = _read_rows(job.csv_path, TRACE_COLUMNS)
    by_method: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        by_method.setdefault(row["method"], []).append((int(row["t"]), float(row["delay"])))

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    styles = {"dinkelbach": ("tab:red", "o"), "newton": ("tab:blue", "s")}
    for method, points in by_method.items():
        points.sort()
        color, marker = styles.get(method, ("tab:green", "^"))
        ax.plot(
            [t for t, _ in points],
            [d for _, d in points],
            label=method,
            color=color,
            marker=marker,
            ms=4,
            lw=1.4,
        )
    ax.set_xlabel("iteration $t$")
    ax.set_ylabel("delay $d_m + 1/\\mu_t$ (s)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(job.image_path, dpi=150)
    plt.close(fig)


def render(job: PlotJob) -> str:
    """Render one job; returns the image path. No file is written on error."""
    if job.kind == "delay_vs_energy":
        _render_delay_vs_energy(job)
    else:
        _render_convergence(job)
    return job.image_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", required=True, help="input CSV from the noma-mec CLI")
    parser.add_argument("--out", required=True, help="output image path (png/pdf/svg)")
    parser.add_argument("--kind", required=True, choices=KINDS)
    args = parser.parse_args(argv)
    try:
        render(PlotJob(csv_path=args.csv, image_path=args.out, kind=args.kind))
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
