"""Parameterized exact solvers.

Class-count search (standing in for the ILP machinery), vote pruning for MAV,
the set-packing route for MAV in the dual parameter, branch and bound for CCAV
and PAV, matching-parameter splitting, and threshold-shortcut dispatchers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import graphs
from .core import (
    CCAV,
    MAV,
    PAV,
    class_partition,
    harmonic,
    score,
    SolveResult,
)
from .oracle import BudgetExceededError


@dataclass(frozen=True)
class AnnotatedPavInstance:
    """PAV winner determination with a forced committee subset."""

    election: object
    forced: frozenset
    k: int
    d: Fraction

    def __post_init__(self):
        if not len(self.forced) <= self.k <= self.election.m:
            raise ValueError("need |forced| <= k <= m")
        object.__setattr__(self, "d", Fraction(self.d))


@dataclass(frozen=True)
class GrspInstance:
    """Generalized set packing: pick kappa sets, element u in at most f(u) of them."""

    universe: tuple
    sets: tuple  # of frozensets, each of size <= r
    f: dict
    r: int
    kappa: int


# ---------------------------------------------------------------------------
# Class-count search for MAV
# ---------------------------------------------------------------------------

def mav_by_classes(instance, forced_votes=None, max_n=16):
    """Exact MAV optimum by search over per-class selection counts.

    With forced_votes given, only those votes enter the distance maximum (the
    class partition is taken with respect to them as well); used by the
    vote-pruning solver.
    """
    if instance.rule != MAV:
        raise ValueError("rule must be mav")
    e = instance.election
    k = instance.k
    if forced_votes is None:
        considered = list(range(e.n))
        part = class_partition(e)
    else:
        considered = sorted(forced_votes)
        part = class_partition(e, restrict_votes=considered)
    if len(considered) > max_n:
        raise BudgetExceededError(f"{len(considered)} votes exceeds budget {max_n}")
    vote_pos = {j: i for i, j in enumerate(considered)}
    sizes = [len(e.votes[j]) for j in considered]
    nv = len(considered)
    classes = part.classes
    nc = len(classes)
    caps = [len(members) for _, members in classes]
    suffix_cap = [0] * (nc + 1)
    for i in range(nc - 1, -1, -1):
        suffix_cap[i] = suffix_cap[i + 1] + caps[i]
    # how much coverage classes i.. can still add to each vote
    suffix_cov = [[0] * nv for _ in range(nc + 1)]
    for i in range(nc - 1, -1, -1):
        support, members = classes[i]
        row = list(suffix_cov[i + 1])
        for j in support:
            row[vote_pos[j]] += caps[i]
        suffix_cov[i] = row

    best = [None, None]  # value, counts
    counts = [0] * nc
    cov = [0] * nv
    stats = {"nodes": 0}

    def dist(j, c):
        return sizes[j] + k - 2 * c

    def dfs(i, rem):
        stats["nodes"] += 1
        if best[0] is not None:
            bound = max(
                (
                    dist(j, cov[j] + min(rem, suffix_cov[i][j]))
                    for j in range(nv)
                ),
                default=0,
            )
            if bound >= best[0]:
                return
        if i == nc:
            if rem:
                return
            value = max((dist(j, cov[j]) for j in range(nv)), default=0)
            if best[0] is None or value < best[0]:
                best[0] = value
                best[1] = list(counts)
            return
        if suffix_cap[i] < rem:
            return
        lo = max(0, rem - suffix_cap[i + 1])
        hi = min(caps[i], rem)
        support = classes[i][0]
        for x in range(hi, lo - 1, -1):
            counts[i] = x
            for j in support:
                cov[vote_pos[j]] += x
            dfs(i + 1, rem - x)
            for j in support:
                cov[vote_pos[j]] -= x
        counts[i] = 0

    dfs(0, k)
    opt = Fraction(best[0])
    witness = []
    for (support, members), x in zip(classes, best[1]):
        witness.extend(members[:x])
    witness = tuple(sorted(witness))
    return SolveResult(
        decision=opt <= instance.d,
        opt_score=opt,
        witness=witness,
        algorithm="mav_by_classes",
        stats=stats,
    )


def mav_k_deltac(instance, max_n=16):
    """MAV after pruning to the k * deltaC + 1 largest votes.

    Any k-committee leaves one of the kept votes completely unserved, and that
    vote's distance dominates every dropped (smaller) vote's distance, so the
    optimum value is preserved exactly.
    """
    if instance.rule != MAV:
        raise ValueError("rule must be mav")
    e = instance.election
    keep = instance.k * e.delta_c + 1
    if e.n <= keep:
        res = mav_by_classes(instance, max_n=max_n)
    else:
        order = sorted(range(e.n), key=lambda j: (-len(e.votes[j]), j))
        res = mav_by_classes(instance, forced_votes=order[:keep], max_n=max_n)
    return SolveResult(
        res.decision, res.opt_score, res.witness, "mav_k_deltac", res.stats
    )


# ---------------------------------------------------------------------------
# Generalized set packing and the dual-parameter MAV route
# ---------------------------------------------------------------------------

def grsp_solve(g):
    """Depth-kappa backtracking with capacity pruning.

    Returns (yes, selected set indices).  Sets containing a zero-capacity
    element can never be picked and are filtered up front.
    """
    usable = [
        i
        for i, s in enumerate(g.sets)
        if all(g.f.get(u, 0) >= 1 for u in s)
    ]
    if g.kappa > len(usable):
        return False, None
    remaining = dict(g.f)
    chosen = []

    def dfs(pos, need):
        if need == 0:
            return True
        if len(usable) - pos < need:
            return False
        for idx in range(pos, len(usable)):
            if len(usable) - idx < need:
                return False
            s = g.sets[usable[idx]]
            if all(remaining[u] >= 1 for u in s):
                for u in s:
                    remaining[u] -= 1
                chosen.append(usable[idx])
                if dfs(idx + 1, need - 1):
                    return True
                chosen.pop()
                for u in s:
                    remaining[u] += 1
        return False

    ok = dfs(0, g.kappa)
    return ok, tuple(chosen) if ok else None


def mav_dual_grsp(instance):
    """MAV decision via set packing over the candidates to exclude.

    Excluding candidate c takes vote v's committee overlap down by [v in V(c)];
    vote v tolerates losing at most floor((d+|v|-k)/2) approved candidates, so
    the k-bar exclusions form a generalized set packing over the votes.
    """
    if instance.rule != MAV:
        raise ValueError("rule must be mav")
    e = instance.election
    k, d = instance.k, instance.d
    if d < 0:
        return SolveResult(False, None, None, "mav_dual_grsp", {})
    for v in e.votes:
        if len(v) < k and d < k - len(v):
            return SolveResult(False, None, None, "mav_dual_grsp", {})
    r = max(e.delta_c, 1)
    f = {j: math.floor((d + len(v) - k) / 2) for j, v in enumerate(e.votes)}
    sets = []
    for c in range(e.m):
        s = set(e.approvers(c))
        for i in range(r - len(s)):
            pad = ("pad", c, i)
            f[pad] = 1
            s.add(pad)
        sets.append(frozenset(s))
    g = GrspInstance(
        universe=tuple(f),
        sets=tuple(sets),
        f=f,
        r=r,
        kappa=e.m - k,
    )
    ok, removed = grsp_solve(g)
    if not ok:
        return SolveResult(False, None, None, "mav_dual_grsp", {})
    w = tuple(sorted(set(range(e.m)) - set(removed)))
    assert score(e, MAV, w) <= d
    return SolveResult(True, None, w, "mav_dual_grsp", {})


# ---------------------------------------------------------------------------
# Branch and bound: CCAV in the dual parameter
# ---------------------------------------------------------------------------

def ccav_bb_dual(instance):
    """CCAV decision branching on candidates excluded from the committee.

    State shrinks to the votes that a committee might still miss; a witness
    found in any shrunken state is a valid committee for the original
    instance because every dropped vote is guaranteed covered.
    """
    if instance.rule != CCAV:
        raise ValueError("rule must be ccav")
    e = instance.election
    k = instance.k
    stats = {"nodes": 0}

    def solve(candset, votes, d):
        stats["nodes"] += 1
        ve = [v & candset for v in votes]
        ve = [v for v in ve if v]
        approved = set().union(*ve) if ve else set()
        kbar = len(candset) - k
        unapproved = sorted(candset - approved, reverse=True)
        drop = unapproved[: min(len(unapproved), kbar)]
        candset = candset - set(drop)
        kbar = len(candset) - k
        if d <= 0:
            return tuple(sorted(candset)[:k])
        if kbar == 0:
            if len(ve) >= d:
                return tuple(sorted(candset))
            return None
        u_votes = [v for v in ve if len(v) <= kbar]
        b = sorted(set().union(*u_votes)) if u_votes else []
        if not u_votes or len(b) <= k:
            if len(ve) >= d:
                w = list(b)
                for c in sorted(candset):
                    if len(w) == k:
                        break
                    if c not in b:
                        w.append(c)
                return tuple(sorted(w))
            return None
        singles = {c: 0 for c in b}
        for v in u_votes:
            if len(v) == 1:
                singles[next(iter(v))] += 1
        cstar = min(b, key=lambda c: (singles[c], c))
        branch_set = sorted(set().union(*[v for v in u_votes if cstar in v]))
        d_next = d - (len(ve) - len(u_votes))
        for x in branch_set:
            res = solve(candset - {x}, u_votes, d_next)
            if res is not None:
                return res
        return None

    w = solve(frozenset(range(e.m)), list(e.votes), instance.d)
    return SolveResult(
        decision=w is not None,
        opt_score=None,
        witness=w,
        algorithm="ccav_bb_dual",
        stats=stats,
    )


# ---------------------------------------------------------------------------
# Annotated PAV via class counts
# ---------------------------------------------------------------------------

def pav_annotated(ann, max_n=16):
    """Exact annotated PAV optimum by search over per-class selection counts."""
    e = ann.election
    k = ann.k
    if e.n > max_n:
        raise BudgetExceededError(f"n={e.n} exceeds budget {max_n}")
    part = class_partition(e)
    classes = part.classes
    nc = len(classes)
    nv = e.n
    caps = [len(members) for _, members in classes]
    mins = [len(ann.forced & set(members)) for _, members in classes]
    suffix_cap = [0] * (nc + 1)
    suffix_min = [0] * (nc + 1)
    for i in range(nc - 1, -1, -1):
        suffix_cap[i] = suffix_cap[i + 1] + caps[i]
        suffix_min[i] = suffix_min[i + 1] + mins[i]
    suffix_cov = [[0] * nv for _ in range(nc + 1)]
    for i in range(nc - 1, -1, -1):
        row = list(suffix_cov[i + 1])
        for j in classes[i][0]:
            row[j] += caps[i]
        suffix_cov[i] = row

    best = [None, None]
    counts = [0] * nc
    cov = [0] * nv
    stats = {"nodes": 0}

    def dfs(i, rem, total):
        stats["nodes"] += 1
        ub = total + sum(
            (
                harmonic(cov[j] + min(rem, suffix_cov[i][j])) - harmonic(cov[j])
                for j in range(nv)
            ),
            Fraction(0),
        )
        if best[0] is not None and ub <= best[0]:
            return
        if i == nc:
            if rem == 0 and (best[0] is None or total > best[0]):
                best[0] = total
                best[1] = list(counts)
            return
        if not suffix_min[i] <= rem <= suffix_cap[i]:
            return
        support = classes[i][0]
        lo = max(mins[i], rem - suffix_cap[i + 1])
        hi = min(caps[i], rem - suffix_min[i + 1])
        for x in range(hi, lo - 1, -1):
            counts[i] = x
            gain = Fraction(0)
            for j in support:
                gain += harmonic(cov[j] + x) - harmonic(cov[j])
            for j in support:
                cov[j] += x
            dfs(i + 1, rem - x, total + gain)
            for j in support:
                cov[j] -= x
        counts[i] = 0

    dfs(0, k, Fraction(0))
    if best[0] is None:
        return SolveResult(False, None, None, "pav_annotated", stats)
    witness = []
    for (support, members), x, lo in zip(classes, best[1], mins):
        inside = [c for c in members if c in ann.forced]
        outside = [c for c in members if c not in ann.forced]
        witness.extend(inside)
        witness.extend(outside[: x - len(inside)])
    witness = tuple(sorted(witness))
    return SolveResult(
        decision=best[0] >= ann.d,
        opt_score=best[0],
        witness=witness,
        algorithm="pav_annotated",
        stats=stats,
    )


# ---------------------------------------------------------------------------
# Branch and bound: PAV in d + deltaV
# ---------------------------------------------------------------------------

def pav_bb_dv(instance):
    """PAV decision branching toward a high-scoring committee.

    At each node the best-marginal candidate c defines the branch set: the
    candidates approved by votes approving c.  Search depth is capped at
    ceil(d * deltaV) since each branch step gains at least 1/deltaV.
    """
    if instance.rule != PAV:
        raise ValueError("rule must be pav")
    e = instance.election
    k, d = instance.k, instance.d
    stats = {"nodes": 0, "max_branch": 0}

    def pad(base):
        w = list(base)
        for c in range(e.m):
            if len(w) == k:
                break
            if c not in w:
                w.append(c)
        return tuple(sorted(w))

    if d <= 0:
        return SolveResult(True, None, pad(()), "pav_bb_dv", stats)
    if k == 0:
        return SolveResult(False, None, None, "pav_bb_dv", stats)
    counts = e.approver_counts()
    for c in range(e.m):
        if counts[c] >= d:
            return SolveResult(True, None, pad((c,)), "pav_bb_dv", stats)
    capp = [c for c in range(e.m) if counts[c] > 0]
    k2 = min(k, len(capp))
    if k2 == len(capp):
        s = score(e, PAV, capp)
        ok = s >= d
        return SolveResult(ok, None, pad(capp) if ok else None, "pav_bb_dv", stats)
    dv = e.delta_v
    depth_cap = min(k2, math.ceil(d * dv))
    approvers = {c: e.approvers(c) for c in capp}

    def dfs(s_set):
        stats["nodes"] += 1
        if score(e, PAV, s_set) >= d:
            return s_set
        if len(s_set) >= depth_cap:
            return None
        base = score(e, PAV, s_set)
        cbest, mbest = None, None
        for c in capp:
            if c in s_set:
                continue
            marg = score(e, PAV, s_set | {c}) - base
            if mbest is None or marg > mbest:
                cbest, mbest = c, marg
        branch = set()
        for j in approvers[cbest]:
            branch.update(e.votes[j])
        branch -= s_set
        stats["max_branch"] = max(stats["max_branch"], len(branch))
        for x in sorted(branch):
            res = dfs(s_set | {x})
            if res is not None:
                return res
        return None

    found = dfs(frozenset())
    if found is None:
        return SolveResult(False, None, None, "pav_bb_dv", stats)
    return SolveResult(True, None, pad(sorted(found)), "pav_bb_dv", stats)


# ---------------------------------------------------------------------------
# Matching-parameter solvers
# ---------------------------------------------------------------------------

def _matching_split(election):
    g = graphs.incidence_graph(election)
    matching = graphs.max_matching(g, mode="bipartite")
    m = election.m
    cands, votes = set(), set()
    for edge in matching:
        a, b = sorted(edge)
        cands.add(a)
        votes.add(b - m)
    return sorted(cands), sorted(votes)


def _subsets(items):
    out = [()]
    for x in items:
        out.extend([s + (x,) for s in out])
    return sorted(out, key=lambda s: (len(s), s))


def mav_by_matching(instance):
    """MAV decision split over intersections with a maximum-matching cover.

    Votes outside the matching only approve matched candidates, so fixing the
    committee's overlap with the matched candidates settles them outright;
    the matched votes reduce to a class-count covering question.
    """
    if instance.rule != MAV:
        raise ValueError("rule must be mav")
    e = instance.election
    k, d = instance.k, instance.d
    if d < 0:
        return SolveResult(False, None, None, "mav_by_matching", {})
    c_m, v_m = _matching_split(e)
    c_m_set = set(c_m)
    v_m_set = set(v_m)
    outside = [v for j, v in enumerate(e.votes) if j not in v_m_set]
    by_support = {}
    for c in range(e.m):
        if c in c_m_set:
            continue
        support = e.approvers(c)
        assert support <= v_m_set
        by_support.setdefault(support, []).append(c)
    classes = sorted(by_support.items(), key=lambda it: it[1])
    caps = [len(members) for _, members in classes]
    nc = len(classes)
    suffix_cap = [0] * (nc + 1)
    for i in range(nc - 1, -1, -1):
        suffix_cap[i] = suffix_cap[i + 1] + caps[i]
    stats = {"subinstances": 0}

    for cprime in _subsets(c_m):
        if len(cprime) > k:
            continue
        stats["subinstances"] += 1
        cp = set(cprime)
        if any(len(v) + k - 2 * len(v & cp) > d for v in outside):
            continue
        need = {}
        for j in v_m:
            v = e.votes[j]
            raw = Fraction(len(v) + k, 1) - d
            need[j] = max(0, math.ceil(raw / 2 - len(v & cp)))
        rem0 = k - len(cprime)
        if rem0 > suffix_cap[0]:
            continue
        suffix_cov = [{j: 0 for j in v_m} for _ in range(nc + 1)]
        for i in range(nc - 1, -1, -1):
            row = dict(suffix_cov[i + 1])
            for j in classes[i][0]:
                row[j] += caps[i]
            suffix_cov[i] = row
        cov = {j: 0 for j in v_m}
        picks = [0] * nc

        def dfs(i, rem):
            if any(
                cov[j] + min(rem, suffix_cov[i][j]) < need[j] for j in v_m
            ):
                return False
            if i == nc:
                return rem == 0
            if suffix_cap[i] < rem:
                return False
            lo = max(0, rem - suffix_cap[i + 1])
            for x in range(min(caps[i], rem), lo - 1, -1):
                picks[i] = x
                for j in classes[i][0]:
                    cov[j] += x
                if dfs(i + 1, rem - x):
                    return True
                for j in classes[i][0]:
                    cov[j] -= x
            picks[i] = 0
            return False

        if dfs(0, rem0):
            w = list(cprime)
            for (support, members), x in zip(classes, picks):
                w.extend(members[:x])
            w = tuple(sorted(w))
            assert score(e, MAV, w) <= d
            return SolveResult(True, None, w, "mav_by_matching", stats)
    return SolveResult(False, None, None, "mav_by_matching", stats)


def pav_by_matching(instance, max_n=16):
    """Exact PAV optimum split over intersections with the matched candidates.

    For each candidate-side intersection the unmatched votes contribute a
    fixed amount and the rest is an annotated PAV question over the matched
    votes only; the best subinstance total is the true optimum.
    """
    from .core import Election

    if instance.rule != PAV:
        raise ValueError("rule must be pav")
    e = instance.election
    k, d = instance.k, instance.d
    c_m, v_m = _matching_split(e)
    outside = [v for j, v in enumerate(e.votes) if j not in set(v_m)]
    sub = Election(m=e.m, votes=tuple(e.votes[j] for j in v_m))
    best = None
    best_w = None
    stats = {"subinstances": 0}
    for cprime in _subsets(c_m):
        if len(cprime) > k:
            continue
        stats["subinstances"] += 1
        cp = frozenset(cprime)
        dprime = sum((harmonic(len(v & cp)) for v in outside), Fraction(0))
        res = pav_annotated(
            AnnotatedPavInstance(sub, cp, k, d - dprime), max_n=max_n
        )
        total = res.opt_score + dprime
        if best is None or total > best:
            best = total
            best_w = res.witness
    opt = score(e, PAV, best_w)
    assert opt >= best
    return SolveResult(
        decision=opt >= d,
        opt_score=opt,
        witness=best_w,
        algorithm="pav_by_matching",
        stats=stats,
    )


# ---------------------------------------------------------------------------
# Threshold-shortcut dispatchers
# ---------------------------------------------------------------------------

def dispatch_corollaries(instance):
    """Score-bound shortcuts, then the default exact solver for the rule."""
    e = instance.election
    k, d = instance.k, instance.d
    if instance.rule == MAV:
        if d >= k + e.delta_v:
            w = tuple(range(k))
            return SolveResult(True, None, w, "dispatch_corollaries", {})
        res = mav_by_classes(instance)
    elif instance.rule == CCAV:
        if d > k * e.delta_c:
            return SolveResult(False, None, None, "dispatch_corollaries", {})
        res = ccav_bb_dual(instance)
    else:
        if d > k * e.delta_c:
            return SolveResult(False, None, None, "dispatch_corollaries", {})
        res = pav_bb_dv(instance)
    return SolveResult(
        res.decision, res.opt_score, res.witness, "dispatch_corollaries", res.stats
    )
