"""Benchmark command-line interface.

Subcommands mirror the experiment protocol: `sweep-snr`, `sweep-doppler`,
`run-cell` and `bench-scaling`. Every sweep writes a CSV plus a companion
PNG figure next to it.
"""

from __future__ import annotations

import csv
import pathlib
import sys

import click

from gfkmimo import bench
from gfkmimo.plots import render_scaling_figure, render_sweep_figure

_CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(exists=True), help="key = value config file"),
    click.option("--seeds", type=str, default=None, help="comma-separated seed list"),
    click.option("--methods", type=str, default=None, help="comma-separated method list"),
    click.option("--snr-db", "snr_db", type=str, default=None, help="comma-separated SNR grid (dB)"),
    click.option("--fd-ts", "fd_ts", type=str, default=None, help="comma-separated Doppler grid"),
    click.option("--n-train", "n_train", type=int, default=None),
    click.option("--n-test", "n_test", type=int, default=None),
    click.option("--svm-c", "svm_c", type=float, default=None),
    click.option("--svm-tol", "svm_tol", type=float, default=None),
    click.option("--mog-seed", "mog_seed", type=int, default=None),
    click.option("--trace-mode", "trace_mode", type=click.Choice(["shared", "per_frame"]), default=None),
    click.option("--no-timings", is_flag=True, help="zero timing columns for byte-stable CSV"),
]


def _with_config_options(fn):
    for opt in reversed(_CONFIG_OPTIONS):
        fn = opt(fn)
    return fn


def _build_config(config_path, no_timings, **overrides) -> bench.ExperimentConfig:
    cfg = bench.load_config_file(config_path) if config_path else bench.ExperimentConfig()
    cfg = bench.apply_overrides(cfg, {k: v for k, v in overrides.items() if v is not None})
    if no_timings:
        cfg = bench.apply_overrides(cfg, {"record_timings": "false"})
    return cfg


def _write_outputs(rows, out, dump_predictions_flag, figure_axis):
    out = pathlib.Path(out)
    bench.emit_results(rows, out)
    click.echo(f"wrote {out}")
    if figure_axis is not None:
        fig_path = out.with_suffix(".png")
        render_sweep_figure(rows, figure_axis, fig_path)
        click.echo(f"wrote {fig_path}")
    if dump_predictions_flag:
        pred_path = out.with_name(out.stem + "_predictions.csv")
        bench.dump_predictions(rows, pred_path)
        click.echo(f"wrote {pred_path}")


@click.group()
def main():
    """Geodesic-flow-kernel MIMO detection benchmarks."""


@main.command("sweep-snr")
@_with_config_options
@click.option("--out", type=click.Path(), default="sweep_snr.csv", show_default=True)
@click.option("--dump-predictions", is_flag=True)
def cmd_sweep_snr(config_path, no_timings, out, dump_predictions, **overrides):
    """SER versus SNR at fixed normalized Doppler 0.006."""
    cfg = _build_config(config_path, no_timings, **overrides)
    rows = bench.sweep_snr(cfg, keep_predictions=dump_predictions)
    _write_outputs(rows, out, dump_predictions, "snr_db")


@main.command("sweep-doppler")
@_with_config_options
@click.option("--out", type=click.Path(), default="sweep_doppler.csv", show_default=True)
@click.option("--dump-predictions", is_flag=True)
def cmd_sweep_doppler(config_path, no_timings, out, dump_predictions, **overrides):
    """SER versus normalized Doppler at fixed 15 dB SNR."""
    cfg = _build_config(config_path, no_timings, **overrides)
    rows = bench.sweep_doppler(cfg, keep_predictions=dump_predictions)
    _write_outputs(rows, out, dump_predictions, "fd_ts")


@main.command("run-cell")
@_with_config_options
@click.option("--method", type=click.Choice(bench.METHODS), default="gfk_gsvm", show_default=True)
@click.option("--snr", type=float, default=15.0, show_default=True)
@click.option("--doppler", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="CSV destination (default stdout)")
@click.option("--dump-predictions", is_flag=True)
def cmd_run_cell(config_path, no_timings, method, snr, doppler, seed, out, dump_predictions, **overrides):
    """Run one (method, snr, doppler, seed) cell."""
    cfg = _build_config(config_path, no_timings, **overrides)
    row = bench.run_cell(cfg, method, snr, doppler, seed, keep_predictions=dump_predictions)
    if out is None:
        bench.emit_results([row], sys.stdout)
    else:
        _write_outputs([row], out, dump_predictions, None)


@main.command("bench-scaling")
@click.option("--out", type=click.Path(), default="scaling.csv", show_default=True)
@click.option("--antennas", type=str, default="2,4,8", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_bench_scaling(out, antennas, seed):
    """Kernel-path timing across receive-antenna counts."""
    counts = tuple(int(v) for v in antennas.split(","))
    report = bench.bench_scaling(receive_antennas=counts, seed=seed)
    out = pathlib.Path(out)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["receive_antennas", "ambient", "build_kernel_seconds", "gram_row_seconds"])
        for n, amb, bt, gt in zip(
            report["receive_antennas"],
            report["ambient"],
            report["build_kernel_seconds"],
            report["gram_row_seconds"],
        ):
            writer.writerow([n, amb, repr(bt), repr(gt)])
    click.echo(f"wrote {out}")
    click.echo(
        f"build_kernel exponent {report['build_kernel_exponent']:.2f}, "
        f"gram-row exponent {report['gram_row_exponent']:.2f}"
    )
    fig_path = out.with_suffix(".png")
    render_scaling_figure(report, fig_path)
    click.echo(f"wrote {fig_path}")


if __name__ == "__main__":
    main()
