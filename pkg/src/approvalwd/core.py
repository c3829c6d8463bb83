"""Election data model, exact rule scoring, parameters, and the .appr text format.

All scores are exact ``fractions.Fraction`` values; nothing here ever touches
floating point.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

MAV = "mav"
CCAV = "ccav"
PAV = "pav"
RULES = (MAV, CCAV, PAV)


class FormatError(ValueError):
    """Raised on malformed .appr input."""


@functools.lru_cache(maxsize=None)
def harmonic(i):
    """Sum of 1/j for j in 1..i (0 for i <= 0), as an exact Fraction."""
    if i <= 0:
        return Fraction(0)
    return harmonic(i - 1) + Fraction(1, i)


@dataclass(frozen=True)
class Election:
    """A set of m candidates (indices 0..m-1) and a multiset of approval votes.

    Votes are stored as frozensets of candidate indices; duplicate votes are
    distinct multiset members and keep their positional index.
    """

    m: int
    votes: tuple

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("negative candidate count")
        votes = tuple(frozenset(v) for v in self.votes)
        for v in votes:
            for c in v:
                if not 0 <= c < self.m:
                    raise ValueError(f"candidate index {c} out of range [0, {self.m})")
        object.__setattr__(self, "votes", votes)

    @property
    def n(self):
        return len(self.votes)

    def approvers(self, c):
        """V(c): indices of the votes approving candidate c."""
        return frozenset(j for j, v in enumerate(self.votes) if c in v)

    def approver_counts(self):
        counts = [0] * self.m
        for v in self.votes:
            for c in v:
                counts[c] += 1
        return counts

    @property
    def delta_v(self):
        return max((len(v) for v in self.votes), default=0)

    @property
    def delta_c(self):
        return max(self.approver_counts(), default=0)


@dataclass(frozen=True)
class Instance:
    """A winner-determination question: election, rule, committee size, threshold.

    The decision asked is MAV(V, w) <= d for MAV and score >= d for CCAV/PAV.
    """

    election: Election
    rule: str
    k: int
    d: Fraction

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if not 0 <= self.k <= self.election.m:
            raise ValueError(f"k={self.k} outside [0, {self.election.m}]")
        object.__setattr__(self, "d", Fraction(self.d))


@dataclass(frozen=True)
class Params:
    """Derived parameters of an instance, including incidence-graph structure."""

    m: int
    n: int
    k: int
    kbar: int
    delta_v: int
    delta_c: int
    tw_upper: int
    alpha: int


@dataclass(frozen=True)
class ClassPartition:
    """Partition of the candidates by their exact approver set.

    Each class is a pair (support, members): the frozenset of vote indices U
    and the sorted tuple of candidates c with V(c) = U.
    """

    classes: tuple  # of (frozenset vote indices, tuple of candidate indices)


@dataclass(frozen=True)
class SolveResult:
    decision: bool
    opt_score: Fraction | None
    witness: tuple | None
    algorithm: str
    stats: dict = field(default_factory=dict, compare=False)


def hamming(v, w):
    """|v \\ w| + |w \\ v| for two sets of candidate indices."""
    v = frozenset(v)
    w = frozenset(w)
    return len(v - w) + len(w - v)


def score(election, rule, committee):
    """Exact score of a committee under the given rule.

    MAV: max Hamming distance to any vote (0 with no votes).
    CCAV: number of votes intersecting the committee.
    PAV: sum over votes of 1 + 1/2 + ... + 1/|v n w|.
    """
    w = frozenset(committee)
    if rule == MAV:
        return Fraction(max((hamming(v, w) for v in election.votes), default=0))
    if rule == CCAV:
        return Fraction(sum(1 for v in election.votes if v & w))
    if rule == PAV:
        return sum((harmonic(len(v & w)) for v in election.votes), Fraction(0))
    raise ValueError(f"unknown rule {rule!r}")


def meets_threshold(rule, value, d):
    """Whether a score satisfies the instance threshold (<= d for MAV, >= d else)."""
    return value <= d if rule == MAV else value >= d


def compute_params(instance):
    """All derived parameters; treewidth bound and matching size via graph-kit."""
    from . import graphs

    e = instance.election
    g = graphs.incidence_graph(e)
    alpha = len(graphs.max_matching(g, mode="bipartite"))
    if e.m + e.n == 0:
        tw_upper = 0
    else:
        tw_upper = graphs.tree_decomposition(g, mode="heuristic").width()
    return Params(
        m=e.m,
        n=e.n,
        k=instance.k,
        kbar=e.m - instance.k,
        delta_v=e.delta_v,
        delta_c=e.delta_c,
        tw_upper=max(tw_upper, 0),
        alpha=alpha,
    )


def class_partition(election, restrict_votes=None):
    """Group candidates by the exact set of (considered) votes approving them.

    With restrict_votes given, supports are computed with respect to that vote
    subset only; candidates approved by no considered vote form the class with
    empty support.
    """
    if restrict_votes is None:
        considered = range(election.n)
    else:
        considered = sorted(restrict_votes)
    by_support = {}
    for c in range(election.m):
        support = frozenset(j for j in considered if c in election.votes[j])
        by_support.setdefault(support, []).append(c)
    classes = tuple(
        (support, tuple(sorted(members)))
        for support, members in sorted(by_support.items(), key=lambda it: it[1])
    )
    return ClassPartition(classes=classes)


def lcm_upto(k):
    """lcm(1..k); PAV scores of k-committees times this value are integers."""
    out = 1
    for i in range(2, k + 1):
        out = out * i // _gcd(out, i)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# .appr text format
# ---------------------------------------------------------------------------

def _content_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def _parse_vote_lines(lines, m, n):
    if len(lines) < n:
        raise FormatError(f"expected {n} vote lines, found {len(lines)}")
    if len(lines) > n:
        extra = [ln for ln in lines[n:] if ln.strip()]
        if extra:
            raise FormatError("trailing non-empty lines after votes")
    votes = []
    for line in lines[:n]:
        fields = line.split()
        try:
            indices = [int(f) for f in fields]
        except ValueError as exc:
            raise FormatError(f"bad vote line {line!r}") from exc
        votes.append(frozenset(indices))
    try:
        return Election(m=m, votes=tuple(votes))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def parse_election(text):
    """Parse the line-based election format: `m n` header then one vote per line."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty election file")
    header = lines[0].split()
    if len(header) != 2:
        raise FormatError(f"bad header {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError as exc:
        raise FormatError(f"bad header {lines[0]!r}") from exc
    if m < 0 or n < 0:
        raise FormatError("negative m or n")
    return _parse_vote_lines(lines[1:], m, n)


def format_election(election):
    lines = [f"{election.m} {election.n}"]
    for v in election.votes:
        lines.append(" ".join(str(c) for c in sorted(v)))
    return "\n".join(lines) + "\n"


def parse_instance(text):
    """Parse an instance file: `rule k d_num d_den` line, then the election."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty instance file")
    fields = lines[0].split()
    if len(fields) != 4:
        raise FormatError(f"bad instance header {lines[0]!r}")
    rule = fields[0]
    if rule not in RULES:
        raise FormatError(f"unknown rule {rule!r}")
    try:
        k = int(fields[1])
        d = Fraction(int(fields[2]), int(fields[3]))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad instance header {lines[0]!r}") from exc
    election = parse_election("\n".join(lines[1:]) + "\n")
    try:
        return Instance(election=election, rule=rule, k=k, d=d)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_instance(instance):
    head = f"{instance.rule} {instance.k} {instance.d.numerator} {instance.d.denominator}\n"
    return head + format_election(instance.election)


def all_committees(m, k):
    """All k-committees of [0, m) in lexicographic order, as sorted tuples."""
    return itertools.combinations(range(m), k)
