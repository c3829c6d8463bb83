"""Converters between graph/set problems and winner-determination instances.

Used as instance generators for cross-validation.  Graphs travel as
(num_vertices, ordered edge list) pairs; candidate and vote indices follow
the input vertex and edge order.
"""

from __future__ import annotations

from fractions import Fraction

from .core import CCAV, Election, FormatError, Instance, MAV, PAV


def parse_graph(text):
    """Edge-list format: `p <n> <m>` header, `e <u> <v>` lines, 1-indexed."""
    n = None
    declared = None
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if len(fields) != 3:
                raise FormatError(f"bad graph header {line!r}")
            n, declared = int(fields[1]), int(fields[2])
        elif fields[0] == "e":
            if n is None:
                raise FormatError("edge before header")
            u, v = int(fields[1]) - 1, int(fields[2]) - 1
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"vertex out of range in {line!r}")
            edges.append((u, v))
        else:
            raise FormatError(f"bad graph line {line!r}")
    if n is None:
        raise FormatError("missing graph header")
    if declared != len(edges):
        raise FormatError(f"header declares {declared} edges, found {len(edges)}")
    return n, edges


def format_graph(n, edges):
    lines = [f"p {n} {len(edges)}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def _edge_election(n, edges):
    return Election(m=n, votes=tuple(frozenset(e) for e in edges))


def vc_to_mav(n, edges, kappa):
    """Vertex cover of size kappa exists iff the MAV instance is a yes.

    Vertices become candidates, edges become 2-candidate votes; with k = d =
    kappa a committee is within distance d of a vote exactly when it hits it.
    """
    return Instance(
        election=_edge_election(n, edges), rule=MAV, k=kappa, d=Fraction(kappa)
    )


def ids_to_ccav(n, edges, kappa):
    """Independent set of size kappa, phrased via the complement committee."""
    if kappa > n:
        raise ValueError("kappa exceeds vertex count")
    return Instance(
        election=_edge_election(n, edges),
        rule=CCAV,
        k=n - kappa,
        d=Fraction(len(edges)),
    )


def mvs_to_pav(n, edges, kappa, ell):
    """Deleting kappa vertices of an r-regular graph leaves <= ell edges
    iff the PAV instance is a yes; the threshold is (n-kappa)*r - ell/2."""
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    if n == 0:
        raise ValueError("empty graph is not regular")
    r = degree[0]
    if any(dg != r for dg in degree):
        raise ValueError("graph is not regular")
    if not kappa < n:
        raise ValueError("need kappa < vertex count")
    d = Fraction((n - kappa) * r) - Fraction(ell, 2)
    return Instance(election=_edge_election(n, edges), rule=PAV, k=n - kappa, d=d)


def pvc_to_ccav(n, edges, kappa, ell):
    """kappa vertices covering at least ell edges iff the CCAV instance is a yes."""
    return Instance(
        election=_edge_election(n, edges), rule=CCAV, k=kappa, d=Fraction(ell)
    )


def ccav_phs_convert(direction, payload):
    """Lossless relabeling between CCAV instances and partial hitting set.

    direction "to_phs": Instance -> (universe, sets, a, b);
    direction "to_ccav": (universe, sets, a, b) -> Instance.
    The universe is the candidate index range, so round-trips are exact.
    """
    if direction == "to_phs":
        inst = payload
        if inst.rule != CCAV:
            raise ValueError("only ccav instances convert")
        return (
            tuple(range(inst.election.m)),
            tuple(inst.election.votes),
            inst.k,
            inst.d,
        )
    if direction == "to_ccav":
        universe, sets, a, b = payload
        if tuple(universe) != tuple(range(len(universe))):
            raise ValueError("universe must be the index range 0..m-1")
        return Instance(
            election=Election(m=len(universe), votes=tuple(sets)),
            rule=CCAV,
            k=a,
            d=Fraction(b),
        )
    raise ValueError(f"unknown direction {direction!r}")
