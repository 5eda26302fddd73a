"""Static SVG plots for the experiment CSV outputs."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.fonttype"] = "none"  # keep labels as text in the SVG
import matplotlib.pyplot as plt
import numpy as np

from .experiments import _KIND_SCHEMA


class PlotError(ValueError):
    """CSV does not match the requested plot kind (or is empty)."""


def _load(csv_path, kind: str) -> list[dict]:
    schema = _KIND_SCHEMA.get(kind)
    if schema is None:
        raise PlotError(f"no plot defined for kind {kind!r}")
    path = Path(csv_path)
    with open(path) as fh:
        first = fh.readline().strip()
        if first != f"# schema={schema}/v1":
            raise PlotError(f"{path}: schema line {first!r} does not match kind {kind!r}")
        rows = list(csv.DictReader(fh))
    if not rows:
        raise PlotError(f"{path}: no data rows")
    return rows


def plot(csv_path, kind: str, out_svg) -> Path:
    """Render the CSV to a static SVG; returns the output path."""
    rows = _load(csv_path, kind)
    out = Path(out_svg)
    fig, ax = plt.subplots(figsize=(7, 5))

    if kind == "theta-scan":
        sizes = sorted({int(r["L"]) for r in rows})
        for l in sizes:
            pts = sorted(
                ((float(r["beta"]), float(r["estimate"]), float(r["stderr"]))
                 for r in rows if int(r["L"]) == l)
            )
            b, e, se = (np.array(z) for z in zip(*pts))
            ax.errorbar(b, e, yerr=3 * se, marker="o", label=f"L={l}")
        bgrid = np.linspace(max(1.0, min(float(r["beta"]) for r in rows)),
                            max(float(r["beta"]) for r in rows) + 0.5, 200)
        ax.plot(bgrid, 1.0 / np.sqrt(bgrid), "k--",
                label="discontinuity floor theta=1/sqrt(beta)")
        ax.axvline(1.0, color="gray", lw=1, label="beta=1")
        ax.set_xlabel("beta")
        ax.set_ylabel("P[0 reaches box boundary]")
        ax.set_ylim(-0.02, 1.02)
    elif kind in ("p-bad", "pbar"):
        key = "K"
        est = "p_hat" if kind == "p-bad" else "estimate"
        combos = sorted({(r["beta"], r["lambda"]) for r in rows})
        for b, l in combos:
            pts = sorted(
                ((int(r[key]), float(r[est])) for r in rows
                 if r["beta"] == b and r["lambda"] == l)
            )
            k, e = zip(*pts)
            ax.loglog(k, np.maximum(e, 1e-12), marker="o",
                      label=f"beta={b}, lambda={l}")
        ax.set_xlabel("K")
        ax.set_ylabel("estimate")
    elif kind == "multiscale":
        pts = sorted((int(r["n"]), float(r["u_hat"]), float(r["target"])) for r in rows)
        n, u, t = (np.array(z, dtype=float) for z in zip(*pts))
        ax.semilogy(n, np.maximum(u, 1e-12), marker="o", label="u_hat")
        ax.semilogy(n, t, "k--", label="target 1/(400 C_n^2)")
        ax.set_xlabel("level n")
        ax.set_ylabel("bad-block probability")
    else:
        plt.close(fig)
        raise PlotError(f"no plot defined for kind {kind!r}")

    ax.legend(fontsize=8)
    ax.set_title(kind)
    fig.tight_layout()
    fig.savefig(out, format="svg")
    plt.close(fig)
    return out
