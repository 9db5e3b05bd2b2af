"""Report figures rendered to files alongside the delimited outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_timeseries_figure(record, path):
    fig, axes = plt.subplots(3, 1, figsize=(9, 8), sharex=True)
    for k, label in enumerate(("ia", "ib", "ic")):
        axes[0].plot(record.t, record.i_s[:, k], lw=0.6, label=label)
    axes[0].set_ylabel("stator current (A)")
    axes[0].legend(loc="upper right", fontsize=8)
    axes[1].plot(record.t, record.omega, "k", lw=0.8)
    axes[1].set_ylabel("speed (rad/s)")
    axes[2].plot(record.t, record.torque, "tab:orange", lw=0.6)
    axes[2].set_ylabel("torque (N m)")
    axes[2].set_xlabel("time (s)")
    for ax in axes:
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_spectrum_figure(spec, path, f_max=1200.0):
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(9, 7))
    sel = spec.f <= f_max
    for ax, (lo, hi) in ((ax1, (0.0, f_max)), (ax2, (0.0, 120.0))):
        sel = (spec.f >= lo) & (spec.f <= hi)
        ax.plot(spec.f[sel], spec.mag_db[sel], "k", lw=0.6)
        ax.set_xlim(lo, hi)
        ax.set_xlabel("frequency (Hz)")
        ax.set_ylabel("magnitude (dB)")
        ax.grid(alpha=0.3)
        for p in spec.labeled_peaks:
            if p.present and lo <= p.measured_hz <= hi:
                ax.plot([p.measured_hz], [p.mag_db], "rv", ms=5)
                ax.annotate(p.family, (p.measured_hz, p.mag_db),
                            textcoords="offset points", xytext=(2, 4),
                            fontsize=7, color="tab:red")
    ax2.set_title("detail near the supply frequency", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_profile_figure(thetas, values, label, path):
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(thetas, values, "k", lw=0.8)
    ax.set_xlabel("rotor angle (rad)")
    ax.set_ylabel(f"{label} (H)")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_sweep_figure(values, rows, metrics, axis_label, path):
    metrics = [m for m in metrics if any(m in r and r[m] is not None for r in rows)]
    if not metrics:
        return
    fig, axes = plt.subplots(len(metrics), 1, figsize=(8, 2.6 * len(metrics)),
                             sharex=True, squeeze=False)
    for ax, metric in zip(axes[:, 0], metrics):
        ys = [r.get(metric) for r in rows]
        xs = [v for v, y in zip(values, ys) if y is not None]
        ys = [y for y in ys if y is not None]
        ax.plot(xs, ys, "o-", ms=4)
        ax.set_ylabel(metric, fontsize=8)
        ax.grid(alpha=0.3)
    axes[-1, 0].set_xlabel(axis_label)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
