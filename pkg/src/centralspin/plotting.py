"""Figure rendering for CLI datasets (file output only, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _finite(values):
    return np.array([np.nan if v is None else v for v in values], dtype=float)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_ground(rows: list[dict], path, title: str = ""):
    g = _finite([r["g_tilde"] for r in rows])
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, key in zip(axes, ("xi_s2", "xi_r2")):
        ax.plot(g, _finite([r[f"{key}_numeric"] for r in rows]), label="numeric")
        analytic = _finite([r[f"{key}_analytic"] for r in rows])
        if np.isfinite(analytic).any():
            ax.plot(g, analytic, "--", label="analytic")
        ax.set_xlabel(r"$\tilde g$")
        ax.set_ylabel(r"$\xi_S^2$" if key == "xi_s2" else r"$\xi_R^2$")
        ax.set_yscale("log")
        ax.legend()
    fig.suptitle(title)
    _save(fig, path)


def plot_dynamics(rows: list[dict], path, summary: dict | None = None, title: str = ""):
    t = _finite([r["t"] for r in rows])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(t, _finite([r["xi_s2"] for r in rows]), label=r"$\xi_S^2$")
    ax.plot(t, _finite([r["xi_r2"] for r in rows]), label=r"$\xi_R^2$")
    if summary and summary.get("predicted_xi_min2") is not None:
        ax.axhline(summary["predicted_xi_min2"], ls="-.", c="g", label="one-axis twisting")
    ax.set_xlabel(r"$\omega t$")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title(title)
    _save(fig, path)


def plot_qfi(rows: list[dict], path, title: str = ""):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for n in sorted({r["N"] for r in rows}):
        sel = [r for r in rows if r["N"] == n]
        ax.plot(_finite([r["g_tilde"] for r in sel]), _finite([r["qfi"] for r in sel]), label=f"N={n}")
    ax.set_xlabel(r"$\tilde g$")
    ax.set_ylabel("QFI")
    ax.legend()
    ax.set_title(title)
    _save(fig, path)


def plot_swcheck(rows: list[dict], path, title: str = ""):
    eta = _finite([r["eta"] for r in rows])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog(eta, _finite([r["residual_offdiag"] for r in rows]), "o-", label="off-block residual")
    ax.loglog(eta, _finite([r["block_error"] for r in rows]), "s-", label="block error")
    ax.set_xlabel(r"$\eta$")
    ax.legend()
    ax.set_title(title)
    _save(fig, path)
