"""Dynamic programming over nice tree decompositions of the incidence graph.

Tables are built bottom-up by forward propagation: every stored entry carries
the best value together with a concrete committee achieving it, so missing
entries play the role of minus infinity and witnesses come for free.

Incidence-graph numbering: candidate c is vertex c, vote j is vertex m + j.
"""

from __future__ import annotations

from fractions import Fraction

from . import graphs
from .core import CCAV, harmonic, MAV, PAV, score, SolveResult


def _prepare(instance, ntd):
    e = instance.election
    g = graphs.incidence_graph(e)
    if ntd is None:
        td = graphs.tree_decomposition(g, mode="heuristic")
        ntd = graphs.to_nice(td)
    ntd.validate(g)
    return e, g, ntd


def _split_bag(bag, m):
    cands = tuple(sorted(v for v in bag if v < m))
    votes = tuple(sorted(v - m for v in bag if v >= m))
    return cands, votes


def _merge(table, key, value, witness):
    old = table.get(key)
    if old is None or value > old[0] or (value == old[0] and witness < old[1]):
        table[key] = (value, witness)


class _Stats(dict):
    def bump_entries(self, table):
        self["max_entries"] = max(self.get("max_entries", 0), len(table))
        self["nodes"] = self.get("nodes", 0) + 1


def ccav_tw_dp(instance, ntd=None):
    """CCAV optimum via the 3-dimensional table (C', V', k') per bag.

    Keys track the committee's bag intersection, the covered bag votes, and
    the committee size inside the subtree; covering counts merge at joins with
    an overlap correction.
    """
    if instance.rule != CCAV:
        raise ValueError("rule must be ccav")
    e, _, ntd = _prepare(instance, ntd)
    m, k = e.m, instance.k
    stats = _Stats()

    def consistent(cset, vset, bag_votes):
        # every bag vote approving a committed candidate must be covered
        for j in bag_votes:
            if j not in vset and e.votes[j] & cset:
                return False
        return True

    def store(table, bag_votes, cset, vset, kp, value, witness):
        if kp > k:
            return
        if not consistent(cset, vset, bag_votes):
            return
        _merge(table, (cset, vset, kp), (value,), witness)

    tables = {}
    for node in ntd.postorder():
        _, bag_v = _split_bag(node.bag, m)
        table = {}
        if node.kind == "leaf":
            table[(frozenset(), frozenset(), 0)] = ((0,), ())
        elif node.kind == "join":
            ty = tables.pop(id(node.children[0]))
            tz = tables.pop(id(node.children[1]))
            for (c1, v1, k1), ((val1,), w1) in ty.items():
                for (c2, v2, k2), ((val2,), w2) in tz.items():
                    if c1 != c2:
                        continue
                    kp = k1 + k2 - len(c1)
                    value = val1 + val2 - len(v1 & v2)
                    witness = tuple(sorted(set(w1) | set(w2)))
                    store(table, bag_v, c1, v1 | v2, kp, value, witness)
        else:
            ty = tables.pop(id(node.children[0]))
            h = node.vertex
            if node.kind == "introduce" and h >= m:
                j = h - m
                for (cset, vset, kp), ((val,), w) in ty.items():
                    if e.votes[j] & cset:
                        store(table, bag_v, cset, vset | {j}, kp, val + 1, w)
                    else:
                        store(table, bag_v, cset, vset, kp, val, w)
            elif node.kind == "introduce":
                for (cset, vset, kp), ((val,), w) in ty.items():
                    store(table, bag_v, cset, vset, kp, val, w)
                    approving = {j for j in bag_v if h in e.votes[j]}
                    new_v = vset | approving
                    gained = len(approving - vset)
                    store(
                        table,
                        bag_v,
                        cset | {h},
                        new_v,
                        kp + 1,
                        val + gained,
                        tuple(sorted(w + (h,))),
                    )
            elif node.kind == "forget" and h >= m:
                j = h - m
                for (cset, vset, kp), ((val,), w) in ty.items():
                    store(table, bag_v, cset, vset - {j}, kp, val, w)
            else:
                for (cset, vset, kp), ((val,), w) in ty.items():
                    store(table, bag_v, cset - {h}, vset, kp, val, w)
        stats.bump_entries(table)
        tables[id(node)] = table

    root = tables[id(ntd.root)]
    entry = root.get((frozenset(), frozenset(), k))
    assert entry is not None
    (opt,), witness = entry
    opt = Fraction(opt)
    assert score(e, CCAV, witness) == opt
    stats["width"] = ntd.width()
    return SolveResult(
        decision=opt >= instance.d,
        opt_score=opt,
        witness=witness,
        algorithm="ccav_tw_dp",
        stats=stats,
    )


# ---------------------------------------------------------------------------
# PAV and MAV: tables keyed by (C', k', mu) with mu over the bag votes
# ---------------------------------------------------------------------------

def _mu_tuple(mu_map, bag_votes):
    return tuple(mu_map[j] for j in bag_votes)


def _run_mu_dp(instance, ntd, rule):
    """Shared engine for the PAV (score-valued) and MAV (binary) tables."""
    e, _, ntd = _prepare(instance, ntd)
    m, k, d = e.m, instance.k, instance.d
    pav = rule == PAV
    stats = _Stats()

    tables = {}
    for node in ntd.postorder():
        _, bag_v = _split_bag(node.bag, m)
        table = {}

        def store(cset, kp, mu, value, witness):
            if kp > k or any(x > k for x in mu):
                return
            _merge(table, (cset, kp, mu), (value,), witness)

        if node.kind == "leaf":
            table[(frozenset(), 0, ())] = ((Fraction(0),), ())
        elif node.kind == "join":
            ty = tables.pop(id(node.children[0]))
            tz = tables.pop(id(node.children[1]))
            for (c1, k1, mu1), ((val1,), w1) in ty.items():
                base1 = sum(
                    (harmonic(x) for x in mu1), Fraction(0)
                ) if pav else None
                for (c2, k2, mu2), ((val2,), w2) in tz.items():
                    if c1 != c2:
                        continue
                    kp = k1 + k2 - len(c1)
                    mu = tuple(
                        a + b - len(e.votes[j] & c1)
                        for a, b, j in zip(mu1, mu2, bag_v)
                    )
                    if any(x < 0 for x in mu):
                        continue
                    if pav:
                        base2 = sum(
                            (harmonic(x) for x in mu2), Fraction(0)
                        )
                        gmu = sum((harmonic(x) for x in mu), Fraction(0))
                        value = val1 + val2 - base1 - base2 + gmu
                    else:
                        value = Fraction(1)
                    witness = tuple(sorted(set(w1) | set(w2)))
                    store(c1, kp, mu, value, witness)
        else:
            ty = tables.pop(id(node.children[0]))
            h = node.vertex
            child_bag_v = _split_bag(node.children[0].bag, m)[1]
            if node.kind == "introduce" and h >= m:
                j = h - m
                pos = bag_v.index(j)
                for (cset, kp, mu), ((val,), w) in ty.items():
                    x = len(e.votes[j] & cset)
                    new_mu = mu[:pos] + (x,) + mu[pos:]
                    value = val + harmonic(x) if pav else Fraction(1)
                    store(cset, kp, new_mu, value, w)
            elif node.kind == "introduce":
                approving = [
                    i for i, j in enumerate(bag_v) if h in e.votes[j]
                ]
                for (cset, kp, mu), ((val,), w) in ty.items():
                    store(cset, kp, mu, val, w)
                    new_mu = tuple(
                        x + 1 if i in approving else x
                        for i, x in enumerate(mu)
                    )
                    if pav:
                        value = val + sum(
                            (Fraction(1, new_mu[i]) for i in approving),
                            Fraction(0),
                        )
                    else:
                        value = Fraction(1)
                    store(
                        cset | {h},
                        kp + 1,
                        new_mu,
                        value,
                        tuple(sorted(w + (h,))),
                    )
            elif node.kind == "forget" and h >= m:
                j = h - m
                pos = child_bag_v.index(j)
                for (cset, kp, mu), ((val,), w) in ty.items():
                    if not pav and 2 * mu[pos] < k + len(e.votes[j]) - d:
                        continue
                    store(cset, kp, mu[:pos] + mu[pos + 1:], val, w)
            else:
                for (cset, kp, mu), ((val,), w) in ty.items():
                    store(cset - {h}, kp, mu, val, w)
        stats.bump_entries(table)
        tables[id(node)] = table

    root = tables[id(ntd.root)]
    entry = root.get((frozenset(), k, ()))
    stats["width"] = ntd.width()
    if pav:
        assert entry is not None
        (opt,), witness = entry
        assert score(e, PAV, witness) == opt
        return SolveResult(
            decision=opt >= d,
            opt_score=opt,
            witness=witness,
            algorithm="pav_tw_dp",
            stats=stats,
        )
    if entry is None:
        return SolveResult(False, None, None, "mav_tw_dp", stats)
    _, witness = entry
    assert score(e, MAV, witness) <= d
    return SolveResult(True, None, witness, "mav_tw_dp", stats)


def pav_tw_dp(instance, ntd=None):
    """Exact PAV optimum; mu tracks each bag vote's committee overlap."""
    if instance.rule != PAV:
        raise ValueError("rule must be pav")
    return _run_mu_dp(instance, ntd, PAV)


def mav_tw_dp(instance, ntd=None):
    """MAV decision; a vote is checked against the distance threshold when
    it is forgotten, using 2 * mu >= k + |v| - d to stay in integers."""
    if instance.rule != MAV:
        raise ValueError("rule must be mav")
    if instance.d < 0:
        return SolveResult(False, None, None, "mav_tw_dp", {})
    return _run_mu_dp(instance, ntd, MAV)
