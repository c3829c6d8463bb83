"""Shared helpers for the test suite: seeded random inputs and tiny oracles."""

from __future__ import annotations

import itertools

from approvalwd import Election, Instance


def random_election(rng, max_m=7, max_n=6, max_dv=None, max_dc=None):
    m = rng.randint(1, max_m)
    n = rng.randint(0, max_n)
    dv = m if max_dv is None else min(max_dv, m)
    dc = n if max_dc is None else max_dc
    capacity = {c: dc for c in range(m)}
    votes = []
    for _ in range(n):
        available = [c for c in range(m) if capacity[c] > 0]
        size = rng.randint(0, min(dv, len(available)))
        vote = rng.sample(available, size)
        for c in vote:
            capacity[c] -= 1
        votes.append(frozenset(vote))
    return Election(m=m, votes=tuple(votes))


def random_graph(rng, max_n=8, p=0.4):
    n = rng.randint(1, max_n)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return n, edges


def random_regular_graph(rng):
    """A small regular graph: a cycle, a complete graph, or a perfect matching."""
    shape = rng.choice(("cycle", "complete", "matching"))
    if shape == "cycle":
        n = rng.randint(3, 8)
        return n, [(i, (i + 1) % n) for i in range(n)]
    if shape == "complete":
        n = rng.randint(2, 5)
        return n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    n = 2 * rng.randint(1, 4)
    return n, [(2 * i, 2 * i + 1) for i in range(n // 2)]


def exhaustive_max_matching_size(edges):
    """Largest vertex-disjoint edge subset, by depth-first search."""
    edges = list(edges)

    def dfs(i, used):
        if i == len(edges):
            return 0
        best = dfs(i + 1, used)
        u, v = edges[i]
        if u not in used and v not in used:
            best = max(best, 1 + dfs(i + 1, used | {u, v}))
        return best

    return dfs(0, frozenset())


def exhaustive_b_edge_cover_exists(num_vertices, edges, f, kappa):
    """Is there an exactly-kappa edge subset covering each v at least f[v] times?"""
    if kappa < 0 or kappa > len(edges):
        return False
    for chosen in itertools.combinations(range(len(edges)), kappa):
        hit = [0] * num_vertices
        for e in chosen:
            for v in set(edges[e]):
                hit[v] += 1
        if all(hit[v] >= f[v] for v in range(num_vertices)):
            return True
    return False


def e1():
    """The running three-candidate example election."""
    return Election(
        m=3, votes=(frozenset({0, 1}), frozenset({1, 2}), frozenset({0}))
    )


def instances_around_opt(election, rule, k, opt):
    """Instances with thresholds one unit below, at, and above the optimum."""
    return [
        Instance(election=election, rule=rule, k=k, d=opt - 1),
        Instance(election=election, rule=rule, k=k, d=opt),
        Instance(election=election, rule=rule, k=k, d=opt + 1),
    ]
