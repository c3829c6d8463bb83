"""Parameter-aware solver dispatch, instance generation, and corpus tools."""

from __future__ import annotations

import csv
import io
import math
import os
import random
import time
from dataclasses import dataclass

from . import fpt, oracle, poly, twdp
from .core import (
    CCAV,
    compute_params,
    Election,
    FormatError,
    MAV,
    meets_threshold,
    parse_instance,
    PAV,
    score,
    SolveResult,
)
from .oracle import BudgetExceededError


class AllSolversExceededError(RuntimeError):
    """No solver fits within the policy budgets."""


@dataclass(frozen=True)
class DispatchPolicy:
    """Budgets and cost caps steering solver selection."""

    fpt_cost_cap: int = 10**7
    class_vote_budget: int = 16
    brute_m_budget: int = 22
    tw_width_cap: int = 8


DEFAULT_POLICY = DispatchPolicy()


def _av_result(instance):
    w = poly.av_optimal(instance.election, instance.k)
    s = score(instance.election, instance.rule, w)
    return SolveResult(
        decision=meets_threshold(instance.rule, s, instance.d),
        opt_score=s,
        witness=w,
        algorithm="av_optimal",
        stats={},
    )


def _fpt_candidates(instance, params, policy):
    """(cost estimate, name, callable) rows for the applicable exact solvers."""
    e = instance.election
    k, d = instance.k, instance.d
    p = params
    rows = []
    tw_table = 2 ** (p.tw_upper + 1) * (p.m + p.n + 1)
    if instance.rule == MAV:
        if p.n <= policy.class_vote_budget:
            rows.append((2 ** p.n, "mav_by_classes", lambda: fpt.mav_by_classes(instance)))
        keep = k * p.delta_c + 1
        if min(p.n, keep) <= policy.class_vote_budget:
            rows.append((2 ** min(p.n, keep), "mav_k_deltac", lambda: fpt.mav_k_deltac(instance)))
        rows.append((max(2, p.m) ** p.kbar, "mav_dual_grsp", lambda: fpt.mav_dual_grsp(instance)))
        if p.alpha <= policy.class_vote_budget:
            rows.append((4 ** p.alpha, "mav_by_matching", lambda: fpt.mav_by_matching(instance)))
        if p.tw_upper <= policy.tw_width_cap:
            rows.append(((k + 1) ** (p.tw_upper + 1) * tw_table, "mav_tw_dp", lambda: twdp.mav_tw_dp(instance)))
    elif instance.rule == CCAV:
        rows.append((max(2, p.delta_c * p.kbar) ** p.kbar, "ccav_bb_dual", lambda: fpt.ccav_bb_dual(instance)))
        if p.tw_upper <= policy.tw_width_cap:
            rows.append((2 * tw_table * (k + 1), "ccav_tw_dp", lambda: twdp.ccav_tw_dp(instance)))
    else:
        depth = max(0, min(k, math.ceil(max(d, 0) * max(p.delta_v, 1))))
        branch = max(2, math.ceil(max(d, 1) * max(p.delta_v, 1)))
        rows.append((branch ** depth, "pav_bb_dv", lambda: fpt.pav_bb_dv(instance)))
        if p.n <= policy.class_vote_budget:
            rows.append((
                2 ** p.n,
                "pav_annotated",
                lambda: fpt.pav_annotated(
                    fpt.AnnotatedPavInstance(e, frozenset(), k, d),
                    max_n=policy.class_vote_budget,
                ),
            ))
        if p.alpha <= policy.class_vote_budget:
            rows.append((4 ** p.alpha, "pav_by_matching", lambda: fpt.pav_by_matching(instance)))
        if p.tw_upper <= policy.tw_width_cap:
            rows.append(((k + 1) ** (p.tw_upper + 1) * tw_table, "pav_tw_dp", lambda: twdp.pav_tw_dp(instance)))
    return rows


def dispatch(instance, policy=DEFAULT_POLICY):
    """Route the instance to the cheapest applicable exact solver."""
    e = instance.election
    if e.delta_v <= 1:
        return _av_result(instance)
    if instance.rule == MAV and e.delta_c <= 2:
        return poly.mav_deg2(instance)
    if instance.rule == CCAV and e.delta_c <= 2:
        return poly.ccav_deg2(instance)
    if instance.rule == PAV and e.delta_c <= 1:
        return poly.pav_deg1(instance)
    if instance.rule == PAV and e.delta_v <= 2 and e.delta_c <= 2:
        return poly.pav_deg22(instance)
    params = compute_params(instance)
    rows = sorted(
        _fpt_candidates(instance, params, policy), key=lambda r: (r[0], r[1])
    )
    for cost, name, run in rows:
        if cost > policy.fpt_cost_cap:
            continue
        try:
            return run()
        except BudgetExceededError:
            continue
    if e.m <= policy.brute_m_budget:
        return oracle.brute_force(instance, max_m=policy.brute_m_budget)
    raise AllSolversExceededError("no solver within policy budgets")


# ---------------------------------------------------------------------------
# Instance generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorConfig:
    m: int
    n: int
    max_dv: int | None = None
    max_dc: int | None = None


def generate(config, seed):
    """Seed-reproducible random election honoring the degree caps."""
    if config.m < 0 or config.n < 0:
        raise ValueError("negative sizes")
    max_dv = config.m if config.max_dv is None else config.max_dv
    max_dc = config.n if config.max_dc is None else config.max_dc
    if max_dv < 0 or max_dc < 0:
        raise ValueError("negative degree cap")
    rng = random.Random(seed)
    capacity = {c: max_dc for c in range(config.m)}
    votes = []
    for _ in range(config.n):
        available = [c for c in range(config.m) if capacity[c] > 0]
        size = rng.randint(0, min(max_dv, len(available)))
        vote = rng.sample(available, size)
        for c in vote:
            capacity[c] -= 1
        votes.append(frozenset(vote))
    return Election(m=config.m, votes=tuple(votes))


# ---------------------------------------------------------------------------
# Corpus verification and benchmarking
# ---------------------------------------------------------------------------

def _applicable_solvers(instance):
    e = instance.election
    rows = [("dispatch", lambda: dispatch(instance))]
    if e.delta_v <= 1:
        rows.append(("av_optimal", lambda: _av_result(instance)))
    if instance.rule == MAV:
        if e.delta_c <= 2:
            rows.append(("mav_deg2", lambda: poly.mav_deg2(instance)))
        rows.append(("mav_by_classes", lambda: fpt.mav_by_classes(instance)))
        rows.append(("mav_k_deltac", lambda: fpt.mav_k_deltac(instance)))
        rows.append(("mav_dual_grsp", lambda: fpt.mav_dual_grsp(instance)))
        rows.append(("mav_by_matching", lambda: fpt.mav_by_matching(instance)))
        rows.append(("mav_tw_dp", lambda: twdp.mav_tw_dp(instance)))
    elif instance.rule == CCAV:
        if e.delta_c <= 2:
            rows.append(("ccav_deg2", lambda: poly.ccav_deg2(instance)))
        rows.append(("ccav_bb_dual", lambda: fpt.ccav_bb_dual(instance)))
        rows.append(("ccav_tw_dp", lambda: twdp.ccav_tw_dp(instance)))
    else:
        if e.delta_c <= 1:
            rows.append(("pav_deg1", lambda: poly.pav_deg1(instance)))
        if e.delta_v <= 2 and e.delta_c <= 2:
            rows.append(("pav_deg22", lambda: poly.pav_deg22(instance)))
        rows.append(("pav_bb_dv", lambda: fpt.pav_bb_dv(instance)))
        rows.append(("pav_by_matching", lambda: fpt.pav_by_matching(instance)))
        rows.append(("pav_tw_dp", lambda: twdp.pav_tw_dp(instance)))
    return rows


def check_result(instance, res, truth):
    """Mismatch strings for one solver result against the oracle result."""
    problems = []
    if res.decision != truth.decision:
        problems.append(f"decision {res.decision} vs {truth.decision}")
    if res.opt_score is not None and res.opt_score != truth.opt_score:
        problems.append(f"optScore {res.opt_score} vs {truth.opt_score}")
    if res.decision:
        if res.witness is None:
            problems.append("yes without witness")
        else:
            if len(res.witness) != instance.k:
                problems.append("witness size != k")
            s = score(instance.election, instance.rule, res.witness)
            if not meets_threshold(instance.rule, s, instance.d):
                problems.append(f"witness score {s} misses threshold {instance.d}")
    return problems


def verify(corpus_dir, budget=22):
    """Run every applicable solver against the oracle on each corpus file."""
    report = []
    for name in sorted(os.listdir(corpus_dir)):
        if not name.endswith(".appr"):
            continue
        path = os.path.join(corpus_dir, name)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            instance = parse_instance(text)
        except FormatError as exc:
            report.append({"instance": name, "status": "parse-error", "detail": str(exc)})
            continue
        try:
            truth = oracle.brute_force(instance, max_m=budget)
        except BudgetExceededError:
            report.append({"instance": name, "status": "skipped", "detail": "oracle budget"})
            continue
        for solver, run in _applicable_solvers(instance):
            try:
                res = run()
            except BudgetExceededError:
                continue
            problems = check_result(instance, res, truth)
            if problems:
                report.append({
                    "instance": name,
                    "status": "disagreement",
                    "solver": solver,
                    "detail": "; ".join(problems) + " | " + text.replace("\n", "\\n"),
                })
    ok = not any(r["status"] == "disagreement" for r in report)
    return ok, report


def bench(corpus_dir, policy=DEFAULT_POLICY):
    """CSV rows (instance, params, solver, nodes, seconds) over a corpus."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([
        "instance", "rule", "m", "n", "k", "deltaV", "deltaC",
        "twUpper", "alpha", "solver", "decision", "nodes", "seconds",
    ])
    for name in sorted(os.listdir(corpus_dir)):
        if not name.endswith(".appr"):
            continue
        with open(os.path.join(corpus_dir, name), encoding="utf-8") as fh:
            instance = parse_instance(fh.read())
        params = compute_params(instance)
        start = time.perf_counter()
        res = dispatch(instance, policy)
        elapsed = time.perf_counter() - start
        nodes = res.stats.get("nodes", res.stats.get("max_entries", ""))
        writer.writerow([
            name, instance.rule, params.m, params.n, instance.k,
            params.delta_v, params.delta_c, params.tw_upper, params.alpha,
            res.algorithm, int(res.decision), nodes, f"{elapsed:.6f}",
        ])
    return out.getvalue()
