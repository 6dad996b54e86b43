"""Per-loop analysis: the three nilpotence classes plus supporting evidence."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .decomp import prime_decompose
from .errors import BudgetExceeded, VerificationFailed
from .loop import Loop
from .nilpotence import cl_cn, nil_report
from .permgrp import DEFAULT_GROUP_BUDGET
from .supernil import DEFAULT_TUPLE_BUDGET, absorber_falsifier, sn_bounds


@dataclass
class AnalysisOptions:
    k_max: int = 2
    budget_tuples: int = DEFAULT_TUPLE_BUDGET
    budget_group: int = DEFAULT_GROUP_BUDGET
    seed: int = 0
    trials: int = 200
    term_depth: int = 3
    time_limit: float | None = None
    traces: bool = False


def _le(a, b) -> bool:
    """a <= b with None standing for infinity."""
    if b is None:
        return True
    if a is None:
        return False
    return a <= b


def check_main_inequality(report: dict) -> list[str]:
    """Violations of sn.upper >= cl_m >= cl_cn and of the bound bookkeeping."""
    problems = []
    if report.get("mlt_status") != "ok":
        return problems
    cn, cm = report["cl_cn"], report["cl_m"]
    sn = report["sn"]
    if not _le(cn, cm):
        problems.append(f"cl_cn = {cn} exceeds cl_m = {cm}")
    if sn["upper"] is not None:
        if not _le(cm, sn["upper"]):
            problems.append(f"cl_m = {cm} exceeds certified cl_sn <= {sn['upper']}")
        if sn["lower"] >= sn["upper"]:
            problems.append(f"sn lower {sn['lower']} is not below upper {sn['upper']}")
        for w in report.get("absorbers", []):
            if w["arity"] > sn["upper"]:
                problems.append(f"nonconstant absorber of arity {w['arity']} contradicts cl_sn <= {sn['upper']}")
    if cm is not None:
        for level in sn["levels"]:
            if level["k"] < cm and level["status"] == "SupernilpotentAtK":
                problems.append(f"no fork at level {level['k']} although cl_m = {cm}")
    return problems


def analyze_loop(Q: Loop, loop_id: str, opts: AnalysisOptions | None = None) -> dict:
    """Run every analysis on one loop and return a JSON-ready report.

    Raises VerificationFailed when any internal consistency check fails.
    """
    opts = opts or AnalysisOptions()
    timings = {}
    report: dict = {
        "id": loop_id,
        "order": Q.order,
        "is_group": Q.is_group(),
        "is_commutative": Q.is_commutative(),
        "seed": opts.seed,
        "budgets": {
            "tuples": opts.budget_tuples,
            "group": opts.budget_group,
            "time_limit": opts.time_limit,
            "k_max": opts.k_max,
            "trials": opts.trials,
        },
    }

    t0 = time.perf_counter()
    try:
        nil = nil_report(Q, opts.budget_group)
        report.update(
            mlt_status="ok",
            cl_cn=nil.cl_cn,
            cl_m=nil.cl_m,
            mlt_order=nil.mlt_order,
            inn_order=nil.inn_order,
            normalizer_depth=nil.normalizer_depth,
        )
    except BudgetExceeded as exc:
        report.update(mlt_status="budget", cl_cn=cl_cn(Q), cl_m=None, mlt_order=None,
                      inn_order=None, normalizer_depth=None, mlt_partial=exc.partial)
    timings["nilpotence"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    bounds = sn_bounds(Q, opts.k_max, opts.budget_tuples, opts.time_limit)
    sn = bounds.to_dict(Q)
    if not opts.traces:
        for level in sn["levels"]:
            level.pop("traces", None)
    report["sn"] = sn
    timings["supernilpotence"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    absorbers = []
    for arity in range(2, opts.k_max + 2):
        w = absorber_falsifier(Q, arity, trials=opts.trials, term_depth=opts.term_depth, seed=opts.seed)
        if w is not None:
            absorbers.append(w.to_dict())
    report["absorbers"] = absorbers
    timings["falsifiers"] = time.perf_counter() - t0

    if report["mlt_status"] == "ok" and report["cl_m"] is not None:
        t0 = time.perf_counter()
        report["decomposition"] = prime_decompose(Q, opts.budget_group).to_dict(Q)
        timings["decomposition"] = time.perf_counter() - t0

    problems = check_main_inequality(report)
    if problems:
        raise VerificationFailed(f"{loop_id}: " + "; ".join(problems))

    report["meta"] = {
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "timings": {k: round(v, 4) for k, v in timings.items()},
    }
    return report


def strip_volatile(report: dict) -> dict:
    """Copy of a report without the timestamp/timing block."""
    return {k: v for k, v in report.items() if k != "meta"}
