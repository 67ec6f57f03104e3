"""Figure rendering for sweep and scaling reports.

Each sweep CSV gets a companion PNG: median SER (over seeds) per method
against the swept axis, on a log error scale.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_sweep_figure", "render_scaling_figure"]

_LABELS = {
    "gfk_gsvm": "GFK G-SVM",
    "mmse": "MMSE (stale CSI)",
    "zf": "ZF (stale CSI)",
    "ml": "ML (perfect CSI)",
}

_AXIS_LABELS = {
    "snr_db": "average transmit SNR (dB)",
    "fd_ts": "normalized Doppler shift",
}


def render_sweep_figure(rows, x_key: str, out_path) -> None:
    """Plot median-over-seeds SER per method versus the swept variable."""
    if x_key not in ("snr_db", "fd_ts"):
        raise ValueError(f"unsupported sweep axis {x_key!r}")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    methods = sorted({r.method for r in rows})
    floor = 0.5 / max(r.n_test for r in rows)
    for method in methods:
        xs = sorted({getattr(r, x_key) for r in rows if r.method == method})
        med = [
            np.median([r.ser for r in rows if r.method == method and getattr(r, x_key) == x])
            for x in xs
        ]
        med = np.maximum(med, floor)  # keep zero-error points on the log axis
        ax.semilogy(xs, med, marker="o", label=_LABELS.get(method, method))
    ax.set_xlabel(_AXIS_LABELS[x_key])
    ax.set_ylabel("symbol error rate (median over seeds)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_scaling_figure(report: dict, out_path) -> None:
    """Log-log timing plot of kernel construction and gram-row evaluation."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.loglog(
        report["ambient"],
        report["build_kernel_seconds"],
        marker="o",
        label=f"build_kernel (exp {report['build_kernel_exponent']:.2f})",
    )
    ax.loglog(
        report["ambient"],
        report["gram_row_seconds"],
        marker="s",
        label=f"gram row (exp {report['gram_row_exponent']:.2f} in N)",
    )
    ax.set_xlabel("ambient dimension L'")
    ax.set_ylabel("seconds")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
