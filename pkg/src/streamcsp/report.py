"""Batch reporting: delimited estimate tables plus bound-curve figures.

``build_record`` summarizes one instance (counts, bias, estimate, optional
oracle optimum); ``write_report`` renders the records as a TSV file alongside
PNG figures: the bias-versus-value bound envelopes for 2AND and unit/2OR
instances, and an estimate-versus-optimum scatter when the oracle ran.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bias import BiasAccumulator  # noqa: E402
from .estimators import dispatch  # noqa: E402
from .formula import Formula, stats  # noqa: E402
from .oracle import exact_val  # noqa: E402

__all__ = ["build_record", "write_report", "and_bound_curves", "or_bound_curves"]

COLUMNS = ["name", "n", "m", "bias", "branch", "v", "alpha", "ub", "val", "ratio"]


def and_bound_curves(m: float, points: int = 257):
    """Value envelopes for a 2AND instance with m clauses as bias varies.

    Returns (bias grid, upper (m+b)/2, linear lower max(m/4, b), quadratic
    lower m/4 + b^2/(4(m-2b)) extended by b past m/3).
    """
    b = np.linspace(0.0, m, points)
    upper = (m + b) / 2.0
    lower_linear = np.maximum(m / 4.0, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        quad = m / 4.0 + b * b / (4.0 * (m - 2.0 * b))
    lower_quad = np.where(b <= m / 3.0, quad, b)
    return b, upper, lower_linear, lower_quad


def or_bound_curves(m1: float, m2: float, points: int = 257):
    """Value envelopes for a unit/2OR instance as bias varies in [0, m1+m2]."""
    m = m1 + m2
    b = np.linspace(0.0, m, points)
    upper = np.minimum(m, (m1 + 2.0 * m2 + b) / 2.0)
    lower_linear = (m1 + m2 + b) / 2.0
    if m2 > 0:
        quad = m1 / 2.0 + 3.0 * m2 / 4.0 + b * b / (4.0 * m2)
        lower = np.where(b <= m2, np.maximum(lower_linear, quad), lower_linear)
    else:
        lower = lower_linear
    return b, upper, lower


def build_record(name: str, formula: Formula, backend: str = "exact", epsilon: float = 0.01,
                 seed: int = 0, oracle_limit: int = 20) -> dict:
    st = stats(formula)
    acc = BiasAccumulator(mode="exact", k_max=max(st.max_arity, 2))
    acc.ingest_formula(formula)
    bias = acc.total_bias()
    est = dispatch(formula, epsilon=epsilon, backend=backend, seed=seed)
    rec = {
        "name": name,
        "n": formula.n,
        "m": formula.m,
        "bias": "%.6g" % bias,
        "branch": est.branch,
        "v": "%.6g" % est.v,
        "alpha": "%.6g" % est.alpha,
        "ub": "%.6g" % est.certified_ub,
        "val": "",
        "ratio": "",
    }
    if formula.n <= oracle_limit:
        val = exact_val(formula, oracle_limit).val
        rec["val"] = str(val)
        rec["ratio"] = "%.6g" % (est.v / val) if val else ""
    return rec


def _bounds_figure(path: str) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    b, upper, lin, quad = and_bound_curves(1.0)
    ax = axes[0]
    ax.plot(b, upper, label="(m+b)/2 upper")
    ax.plot(b, lin, label="max(m/4, b) lower")
    ax.plot(b, quad, label="quadratic lower")
    ax.set_title("2AND value envelope (m=1)")
    ax.set_xlabel("bias / m")
    ax.set_ylabel("val / m")
    ax.legend(fontsize=8)
    b, upper, lower = or_bound_curves(0.5, 0.5)
    ax = axes[1]
    ax.plot(b, upper, label="count upper")
    ax.plot(b, lower, label="sampling lower")
    ax.set_title("unit/2OR value envelope (m1=m2=m/2)")
    ax.set_xlabel("bias / m")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _scatter_figure(records, path: str) -> None:
    pts = [(float(r["v"]), float(r["val"])) for r in records if r["val"] != ""]
    if not pts:
        return
    v, val = np.array(pts).T
    fig, ax = plt.subplots(figsize=(5, 5))
    lim = max(float(val.max()), float(v.max()), 1.0)
    ax.plot([0, lim], [0, lim], "k--", lw=0.8, label="v = val")
    ax.scatter(val, v, s=12)
    ax.set_xlabel("oracle val")
    ax.set_ylabel("estimate v")
    ax.set_title("estimate vs optimum")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(records, outdir: str, delimiter: str = "\t") -> list:
    """Write report.tsv plus figures into outdir; returns the paths written."""
    os.makedirs(outdir, exist_ok=True)
    paths = []
    table = os.path.join(outdir, "report.tsv")
    with open(table, "w") as fh:
        fh.write(delimiter.join(COLUMNS) + "\n")
        for rec in records:
            fh.write(delimiter.join(str(rec[c]) for c in COLUMNS) + "\n")
    paths.append(table)
    bounds = os.path.join(outdir, "bound_curves.png")
    _bounds_figure(bounds)
    paths.append(bounds)
    scatter = os.path.join(outdir, "estimate_vs_val.png")
    _scatter_figure(records, scatter)
    if os.path.exists(scatter):
        paths.append(scatter)
    return paths
