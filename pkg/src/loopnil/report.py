"""Text tables, delimited output and figures for analysis reports."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

COLUMNS = ("id", "order", "group", "comm", "cl_cn", "|Mlt|", "cl_m", "sn_lower", "sn_upper", "levels", "factors")


def _fmt(v) -> str:
    if v is None:
        return "inf"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def summary_row(rep: dict) -> list[str]:
    sn = rep["sn"]
    levels = ",".join(
        {"ForkFound": "F", "SupernilpotentAtK": "S", "Inconclusive": "?"}[lv["status"]] for lv in sn["levels"]
    )
    dec = rep.get("decomposition")
    factors = "x".join(str(f["order"]) for f in dec["factors"]) if dec else "-"
    mlt_order = rep["mlt_order"] if rep.get("mlt_status") == "ok" else f">{rep.get('mlt_partial', '?')}"
    cl_m = _fmt(rep["cl_m"]) if rep.get("mlt_status") == "ok" else "?"
    return [
        rep["id"], str(rep["order"]), _fmt(rep["is_group"]), _fmt(rep["is_commutative"]),
        _fmt(rep["cl_cn"]), str(mlt_order), cl_m, str(sn["lower"]), _fmt(sn["upper"]), levels, factors,
    ]


def format_table(reports: list[dict]) -> str:
    rows = [list(COLUMNS)] + [summary_row(r) for r in reports]
    widths = [max(len(r[i]) for r in rows) for i in range(len(COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def format_delimited(reports: list[dict], delimiter: str = "\t") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in reports:
        writer.writerow(summary_row(r))
    return buf.getvalue()


def to_json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _finite_or(v, cap):
    return cap if v is None else v


def plot_classes(reports: list[dict], path: str | Path) -> Path:
    """Grouped bars of cl_cn, cl_m and the certified supernilpotence bounds.

    Infinite classes are drawn as hatched bars at the top of the axis.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    ids = [r["id"].split("#")[0].rsplit("/", 1)[-1].replace(".tbl", "") + (
        "" if r["id"].endswith("#0") else "#" + r["id"].rsplit("#", 1)[-1]) for r in reports]
    finite = [v for r in reports for v in (r["cl_cn"], r["cl_m"], r["sn"]["upper"], r["sn"]["lower"]) if v is not None]
    cap = (max(finite) if finite else 1) + 1
    series = [
        ("cl_cn", [r["cl_cn"] for r in reports], "#4c72b0"),
        ("cl_m", [r["cl_m"] for r in reports], "#dd8452"),
        ("cl_sn lower (exclusive)", [r["sn"]["lower"] for r in reports], "#55a868"),
        ("cl_sn upper", [r["sn"]["upper"] for r in reports], "#c44e52"),
    ]
    x = np.arange(len(reports))
    width = 0.2
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(reports) + 2), 3.6))
    for i, (label, vals, color) in enumerate(series):
        heights = [_finite_or(v, cap) for v in vals]
        hatches = ["//" if v is None else "" for v in vals]
        bars = ax.bar(x + (i - 1.5) * width, heights, width, label=label, color=color)
        for bar, h in zip(bars, hatches):
            bar.set_hatch(h)
    ax.set_xticks(x)
    ax.set_xticklabels(ids, rotation=45, ha="right", fontsize=8)
    ax.set_ylim(0, cap + 0.5)
    ax.set_ylabel("class (hatched = infinite / unknown)")
    ax.legend(fontsize=7, ncol=2, frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_closure_growth(reports: list[dict], path: str | Path) -> Path:
    """Closure size against processed elements, one curve per (loop, level)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    drawn = 0
    for r in reports:
        for level in r["sn"]["levels"]:
            points = level.get("growth") or []
            if not points:
                continue
            xs, ys = zip(*points)
            ax.plot(xs, ys, lw=1, label=f"{r['id'].rsplit('/', 1)[-1]} k={level['k']}")
            drawn += 1
    ax.set_xscale("symlog")
    ax.set_yscale("log")
    ax.set_xlabel("elements processed")
    ax.set_ylabel("closure size")
    if drawn:
        ax.legend(fontsize=6, frameon=False, ncol=2)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
