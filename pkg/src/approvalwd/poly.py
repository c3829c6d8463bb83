"""Polynomial-time special cases.

Covered: every vote approves at most one candidate (all rules); every candidate
approved at most twice (MAV via exact b-edge cover, CCAV via matching); every
candidate approved at most once (PAV); both degrees at most two (PAV via
per-component optima plus a knapsack combination).
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import graphs
from .core import CCAV, MAV, PAV, harmonic, meets_threshold, score, SolveResult


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


def av_optimal(election, k):
    """The k candidates with most approvals, ties by smallest index.

    With every vote approving at most one candidate this committee is
    simultaneously optimal under MAV, CCAV, and PAV.
    """
    _require(election.delta_v <= 1, "av_optimal needs every |v| <= 1")
    counts = election.approver_counts()
    order = sorted(range(election.m), key=lambda c: (-counts[c], c))
    return tuple(sorted(order[:k]))


def mav_deg2(instance):
    """MAV decision with every candidate approved at most twice.

    Votes whose distance can never exceed d are dropped; the rest becomes an
    exact b-edge cover question on the vote multigraph: pick exactly k
    candidate-edges meeting each kept vote v at least ceil((|v|+k-d)/2) times.
    """
    e = instance.election
    _require(instance.rule == MAV, "rule must be mav")
    _require(e.delta_c <= 2, "mav_deg2 needs every |V(c)| <= 2")
    k, d = instance.k, instance.d
    if d < 0:
        return SolveResult(False, None, None, "mav_deg2", {"kept_votes": e.n})
    kept = [j for j, v in enumerate(e.votes) if d < len(v) + k]
    if not kept:
        w = tuple(range(k))
        return SolveResult(True, None, w, "mav_deg2", {"kept_votes": 0})
    pos = {j: i for i, j in enumerate(kept)}
    edges = []
    for c in range(e.m):
        endpoints = tuple(sorted(pos[j] for j in e.approvers(c) if j in pos))
        edges.append(endpoints)
    f = [math.ceil((len(e.votes[j]) + k - d) / 2) for j in kept]
    cover = graphs.simple_b_edge_cover_exact(len(kept), edges, f, k)
    stats = {"kept_votes": len(kept)}
    if cover is None:
        return SolveResult(False, None, None, "mav_deg2", stats)
    w = tuple(sorted(cover))
    assert score(e, MAV, w) <= d
    return SolveResult(True, None, w, "mav_deg2", stats)


def ccav_deg2(instance):
    """CCAV with every candidate approved at most twice, via maximum matching.

    Loops are dropped and parallel candidate-edges collapsed (keeping the
    smallest index); a maximum matching plus a one-candidate-per-leftover-vote
    greedy yields an optimal committee.
    """
    e = instance.election
    _require(instance.rule == CCAV, "rule must be ccav")
    _require(e.delta_c <= 2, "ccav_deg2 needs every |V(c)| <= 2")
    k = instance.k
    by_pair = {}
    for c in range(e.m):
        endpoints = tuple(sorted(e.approvers(c)))
        if len(endpoints) == 2 and endpoints not in by_pair:
            by_pair[endpoints] = c
    g = graphs.Graph(vertices=range(e.n))
    for (u, v), c in by_pair.items():
        g.add_edge(u, v)
    matching = graphs.max_matching(g, mode="general")
    matched_cands = sorted(
        by_pair[tuple(sorted(edge))] for edge in matching
    )
    if len(matched_cands) >= k:
        w = set(matched_cands[:k])
    else:
        w = set(matched_cands)
        touched = set()
        for edge in matching:
            touched.update(edge)
        for j in range(e.n):
            if len(w) == k:
                break
            if j in touched or not e.votes[j]:
                continue
            cand = min(e.votes[j] - w, default=None)
            if cand is not None:
                w.add(cand)
        for c in range(e.m):
            if len(w) == k:
                break
            w.add(c)
    w = tuple(sorted(w))
    opt = score(e, CCAV, w)
    return SolveResult(
        decision=opt >= instance.d,
        opt_score=opt,
        witness=w,
        algorithm="ccav_deg2",
        stats={"matching": len(matching)},
    )


def pav_deg1(instance):
    """PAV with every candidate approved at most once, by cyclic greedy.

    Votes are served round-robin, one fresh approved candidate per turn; by
    concavity of the harmonic gains this reaches the optimal score.
    """
    e = instance.election
    _require(instance.rule == PAV, "rule must be pav")
    _require(e.delta_c <= 1, "pav_deg1 needs every |V(c)| <= 1")
    k = instance.k
    pools = [sorted(v) for v in e.votes]
    w = []
    progress = True
    while len(w) < k and progress:
        progress = False
        for pool in pools:
            if len(w) == k:
                break
            if pool:
                w.append(pool.pop(0))
                progress = True
    for c in range(e.m):
        if len(w) == k:
            break
        if c not in w:
            w.append(c)
    w = tuple(sorted(w))
    opt = score(e, PAV, w)
    return SolveResult(
        decision=opt >= instance.d,
        opt_score=opt,
        witness=w,
        algorithm="pav_deg1",
        stats={},
    )


# ---------------------------------------------------------------------------
# PAV with both degrees at most two
# ---------------------------------------------------------------------------

def _component_pav_score(election, votes, committee):
    w = frozenset(committee)
    return sum(
        (harmonic(len(election.votes[j] & w)) for j in votes), Fraction(0)
    )


def _path_or_cycle_optimal(election, votes, cands, j):
    """Optimal j-committee when the component is a path or a cycle."""
    by_pair = {}
    for c in cands:
        endpoints = tuple(sorted(election.approvers(c)))
        by_pair.setdefault(endpoints, []).append(c)
    g = graphs.Graph(vertices=sorted(votes))
    for u, v in by_pair:
        g.add_edge(u, v)
    matching = graphs.max_matching(g, mode="general")
    matched = sorted(min(by_pair[tuple(sorted(edge))]) for edge in matching)
    if j <= len(matched):
        return tuple(matched[:j])
    w = list(matched)
    touched = set()
    for edge in matching:
        touched.update(edge)
    unsat = sorted(set(votes) - touched)
    if unsat and len(w) < j:
        v = unsat[0]
        incident = [c for c in cands if v in election.approvers(c)]
        if incident:
            w.append(min(incident))
    for c in sorted(cands):
        if len(w) == j:
            break
        if c not in w:
            w.append(c)
    return tuple(sorted(w))


def pav_component_optimal(election, votes, cands, kind, j):
    """Optimal j-committee inside one multigraph component.

    Paths and cycles go matching-first; a hairstick drops its loop candidate
    unless everything is taken; a double-loop component drops one loop first.
    """
    _require(0 <= j <= len(cands), "j out of range")
    if kind in ("path", "cycle"):
        return _path_or_cycle_optimal(election, votes, cands, j)
    loops = sorted(
        c for c in cands if len(election.approvers(c)) == 1
    )
    if kind == "hairstick":
        if j == len(cands):
            return tuple(sorted(cands))
        rest = tuple(c for c in cands if c != loops[0])
        return _path_or_cycle_optimal(election, votes, rest, j)
    if kind == "dh-hairstick":
        if j == len(cands):
            return tuple(sorted(cands))
        rest = tuple(c for c in cands if c != loops[-1])
        if j == len(rest):
            return tuple(sorted(rest))
        rest2 = tuple(c for c in rest if c != loops[0])
        return _path_or_cycle_optimal(election, votes, rest2, j)
    raise ValueError(f"cannot optimize component kind {kind!r}")


def pav_deg22(instance):
    """PAV with both degrees at most two: per-component optima plus a knapsack.

    Every component of the vote multigraph is a path, cycle, hairstick, or
    double-loop hairstick; candidates approved by nobody act as free filler.
    """
    e = instance.election
    _require(instance.rule == PAV, "rule must be pav")
    _require(e.delta_v <= 2 and e.delta_c <= 2, "pav_deg22 needs both degrees <= 2")
    k = instance.k
    mg = graphs.multigraph_rep(e, require_multigraph=True)
    comps, free = graphs.multigraph_components(mg)

    tables = []  # per component: list of (score, committee) indexed by j'
    for votes, cands in comps:
        kind = graphs.classify_component(
            votes, {c: mg.edges[c] for c in cands}
        )
        rows = []
        for jj in range(len(cands) + 1):
            w = pav_component_optimal(e, votes, cands, kind, jj)
            rows.append((_component_pav_score(e, votes, w), w))
        tables.append(rows)
    tables.append(
        [(Fraction(0), tuple(free[:jj])) for jj in range(len(free) + 1)]
    )

    best = {0: (Fraction(0), ())}
    for rows in tables:
        nxt = {}
        for used, (s, w) in best.items():
            for jj, (ds, dw) in enumerate(rows):
                tot = used + jj
                if tot > k:
                    break
                cand = (s + ds, tuple(sorted(w + dw)))
                old = nxt.get(tot)
                if old is None or cand[0] > old[0] or (
                    cand[0] == old[0] and cand[1] < old[1]
                ):
                    nxt[tot] = cand
        best = nxt
    opt, w = best[k]
    assert score(e, PAV, w) == opt
    return SolveResult(
        decision=meets_threshold(PAV, opt, instance.d),
        opt_score=opt,
        witness=w,
        algorithm="pav_deg22",
        stats={"components": len(comps), "free": len(free)},
    )
