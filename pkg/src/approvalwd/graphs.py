"""Graph machinery: incidence graphs, matchings, b-edge covers, tree decompositions.

Vertices are nonnegative integers throughout.  The incidence graph of an
election uses 0..m-1 for candidates and m..m+n-1 for votes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


class DecompositionError(ValueError):
    """Raised when a (nice) tree decomposition fails validation."""


class Graph:
    """Simple undirected graph on integer vertices (no loops, no parallels)."""

    def __init__(self, vertices=(), edges=()):
        self.adj = {}
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    def add_vertex(self, v):
        self.adj.setdefault(v, set())

    def add_edge(self, u, v):
        if u == v:
            raise ValueError("loops not allowed in a simple graph")
        self.add_vertex(u)
        self.add_vertex(v)
        self.adj[u].add(v)
        self.adj[v].add(u)

    def vertices(self):
        return sorted(self.adj)

    def edges(self):
        return sorted(
            (u, v) for u in self.adj for v in self.adj[u] if u < v
        )

    def neighbors(self, v):
        return self.adj[v]

    def has_edge(self, u, v):
        return v in self.adj.get(u, ())

    @property
    def num_vertices(self):
        return len(self.adj)

    def copy(self):
        g = Graph()
        g.adj = {v: set(nb) for v, nb in self.adj.items()}
        return g


def incidence_graph(election):
    """Bipartite graph joining vote-vertex m+j to candidate-vertex c iff c in v_j."""
    m = election.m
    g = Graph(vertices=range(m + election.n))
    for j, v in enumerate(election.votes):
        for c in v:
            g.add_edge(c, m + j)
    return g


# ---------------------------------------------------------------------------
# Maximum matching
# ---------------------------------------------------------------------------

def _bipartition(graph):
    """2-color each component; raises on odd cycles."""
    color = {}
    for s in graph.vertices():
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in graph.neighbors(u):
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    raise ValueError("graph is not bipartite")
    return color


def _bipartite_matching(graph):
    """Kuhn's augmenting-path algorithm on one color class."""
    color = _bipartition(graph)
    left = [v for v in graph.vertices() if color[v] == 0]
    mate = {}

    def try_augment(u, seen):
        for w in sorted(graph.neighbors(u)):
            if w in seen:
                continue
            seen.add(w)
            if w not in mate or try_augment(mate[w], seen):
                mate[w] = u
                return True
        return False

    for u in left:
        try_augment(u, set())
    return {frozenset((u, w)) for w, u in mate.items()}


def _general_matching(graph):
    """Maximum cardinality matching via blossom contraction."""
    verts = graph.vertices()
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj = [sorted(index[w] for w in graph.neighbors(v)) for v in verts]
    match = [-1] * n

    def find_augmenting_path(root):
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])
        blossom = [False] * n

        def lca(a, b):
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark_path(v, b, child):
            while base[v] != b:
                blossom[base[v]] = True
                blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    curbase = lca(v, to)
                    for i in range(n):
                        blossom[i] = False
                    mark_path(v, curbase, to)
                    mark_path(to, curbase, v)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        u = to
                        while u != -1:
                            pv = parent[u]
                            ppv = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = ppv
                        return True
                    used[match[to]] = True
                    queue.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_augmenting_path(v)
    return {
        frozenset((verts[v], verts[match[v]]))
        for v in range(n)
        if match[v] != -1
    }


def max_matching(graph, mode="general"):
    """A maximum-cardinality matching, as a set of frozenset edges."""
    if mode == "bipartite":
        return _bipartite_matching(graph)
    if mode == "general":
        return _general_matching(graph)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Multigraph representation of an election (votes = vertices, candidates = edges)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultigraphRep:
    """Hypergraph of an election: edge per candidate, endpoints = approving votes.

    With every candidate approved by at most two votes this is a multigraph
    with loops; endpoints tuples then have length 0, 1, or 2.
    """

    n: int
    edges: tuple  # edges[c] = sorted tuple of vote indices approving candidate c

    @property
    def m(self):
        return len(self.edges)


def multigraph_rep(election, require_multigraph=False):
    edges = []
    for c in range(election.m):
        endpoints = tuple(sorted(j for j, v in enumerate(election.votes) if c in v))
        if require_multigraph and len(endpoints) > 2:
            raise ValueError(
                f"candidate {c} approved by {len(endpoints)} votes; not a multigraph"
            )
        edges.append(endpoints)
    return MultigraphRep(n=election.n, edges=tuple(edges))


def multigraph_components(mg):
    """Connected components of the vote vertices, plus zero-endpoint candidates.

    Returns (components, free_candidates) where each component is a pair
    (frozenset of vote indices, tuple of candidate indices).
    """
    parent = list(range(mg.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    free = []
    for c, endpoints in enumerate(mg.edges):
        if not endpoints:
            free.append(c)
        else:
            r = find(endpoints[0])
            for v in endpoints[1:]:
                parent[find(v)] = r
    groups = {}
    for v in range(mg.n):
        groups.setdefault(find(v), []).append(v)
    comps = []
    for root in sorted(groups):
        verts = frozenset(groups[root])
        cands = tuple(
            c for c, endpoints in enumerate(mg.edges)
            if endpoints and find(endpoints[0]) == root
        )
        comps.append((verts, cands))
    return comps, tuple(free)


def classify_component(vertices, edges):
    """Classify a connected multigraph component.

    `edges` maps candidate -> endpoints tuple (length 1 = loop, length 2 = edge).
    Returns one of "path", "cycle", "hairstick", "dh-hairstick", "other";
    the first four exhaust the possibilities when every degree is at most two.
    """
    t = len(vertices)
    degree = {v: 0 for v in vertices}
    loops = 0
    for endpoints in edges.values():
        uniq = tuple(sorted(set(endpoints)))
        if len(uniq) == 1:
            loops += 1
            degree[uniq[0]] += 1
        else:
            degree[uniq[0]] += 1
            degree[uniq[1]] += 1
    if any(d > 2 for d in degree.values()):
        return "other"
    e = len(edges)
    if loops == 0 and e == t - 1:
        return "path"
    if loops == 0 and e == t:
        return "cycle"
    if loops == 1 and e == t:
        return "hairstick"
    if loops == 2 and e == t + 1:
        return "dh-hairstick"
    return "other"


# ---------------------------------------------------------------------------
# Simple b-matching and exact simple b-edge cover
# ---------------------------------------------------------------------------

def max_b_matching(num_vertices, edges, caps):
    """Maximum simple b-matching of a loopless multigraph via vertex splitting.

    Each vertex v is split into caps[v] copies; each edge gets two inner nodes
    wired to its endpoints' copies.  A maximum matching of the gadget selects
    the b-matching edges as those whose inner nodes are both matched outward.
    Returns a sorted list of selected edge indices.
    """
    g = Graph()
    copies = []
    next_id = 0
    for v in range(num_vertices):
        ids = list(range(next_id, next_id + caps[v]))
        next_id += caps[v]
        copies.append(ids)
        for i in ids:
            g.add_vertex(i)
    inner = []
    for e, (u, v) in enumerate(edges):
        a, b = next_id, next_id + 1
        next_id += 2
        inner.append((a, b))
        g.add_edge(a, b)
        for i in copies[u]:
            g.add_edge(a, i)
        for i in copies[v]:
            g.add_edge(b, i)
    matching = _general_matching(g)
    mate = {}
    for edge in matching:
        u, v = tuple(edge)
        mate[u] = v
        mate[v] = u
    chosen = []
    for e, (a, b) in enumerate(inner):
        if mate.get(a) not in (None, b) and mate.get(b) not in (None, a):
            chosen.append(e)
    return chosen


def simple_b_edge_cover_exact(num_vertices, edges, f, kappa):
    """Exactly kappa edges covering every vertex v at least f(v) times, or None.

    `edges` is a list of endpoint tuples of length 0, 1 (loop; counts once
    toward incidence), or 2.  Solved through the complement: a kappa-edge cover
    exists iff a simple b-matching of size |edges| - kappa with capacities
    deg(v) - f(v) exists, and b-matchings are downward closed.
    """
    if kappa < 0 or kappa > len(edges):
        return None
    degree = [0] * num_vertices
    for endpoints in edges:
        for v in set(endpoints):
            degree[v] += 1
    if any(f[v] > degree[v] for v in range(num_vertices)):
        return None
    target = len(edges) - kappa
    caps = [degree[v] - f[v] for v in range(num_vertices)]

    empty = [e for e, endpoints in enumerate(edges) if not endpoints]
    proper = [e for e, endpoints in enumerate(edges) if endpoints]
    # loops become edges to fresh capacity-1 dummy vertices
    gadget_edges = []
    gadget_caps = list(caps)
    for e in proper:
        endpoints = sorted(set(edges[e]))
        if len(endpoints) == 1:
            dummy = len(gadget_caps)
            gadget_caps.append(1)
            gadget_edges.append((endpoints[0], dummy))
        else:
            gadget_edges.append((endpoints[0], endpoints[1]))
    best = max_b_matching(len(gadget_caps), gadget_edges, gadget_caps)

    need_proper = max(0, target - len(empty))
    if need_proper > len(best):
        return None
    drop = {proper[i] for i in sorted(best)[:need_proper]}
    drop.update(empty[: target - need_proper])
    cover = sorted(set(range(len(edges))) - drop)

    hit = [0] * num_vertices
    for e in cover:
        for v in set(edges[e]):
            hit[v] += 1
    assert len(cover) == kappa
    assert all(hit[v] >= f[v] for v in range(num_vertices))
    return cover


# ---------------------------------------------------------------------------
# Tree decompositions
# ---------------------------------------------------------------------------

class TreeDecomposition:
    """Rooted tree of bags over graph vertices."""

    def __init__(self, bags, edges, root=0):
        self.bags = [frozenset(b) for b in bags]
        self.edges = [tuple(e) for e in edges]
        self.root = root
        self._children = {i: [] for i in range(len(self.bags))}
        seen = {root}
        adj = {i: [] for i in range(len(self.bags))}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    self._children[x].append(y)
                    queue.append(y)
        if len(seen) != len(self.bags):
            raise DecompositionError("decomposition tree is not connected")

    def children(self, x):
        return self._children[x]

    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, graph):
        """Check the three decomposition conditions against `graph`."""
        union = set().union(*self.bags) if self.bags else set()
        for v in graph.vertices():
            if v not in union:
                raise DecompositionError(f"vertex {v} in no bag")
        for u, v in graph.edges():
            if not any(u in b and v in b for b in self.bags):
                raise DecompositionError(f"edge {(u, v)} covered by no bag")
        for v in union:
            nodes = [i for i, b in enumerate(self.bags) if v in b]
            if not _tree_connected(nodes, self.edges):
                raise DecompositionError(f"occurrences of {v} not connected")


def _tree_connected(nodes, edges):
    if len(nodes) <= 1:
        return True
    nodeset = set(nodes)
    adj = {x: [] for x in nodes}
    for a, b in edges:
        if a in nodeset and b in nodeset:
            adj[a].append(b)
            adj[b].append(a)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(nodes)


def _fill_count(adj, v):
    nb = sorted(adj[v])
    return sum(
        1
        for i in range(len(nb))
        for j in range(i + 1, len(nb))
        if nb[j] not in adj[nb[i]]
    )


def min_fill_order(graph):
    """Elimination ordering by minimum fill-in, ties by degree then index."""
    adj = {v: set(nb) for v, nb in graph.adj.items()}
    order = []
    while adj:
        v = min(adj, key=lambda u: (_fill_count(adj, u), len(adj[u]), u))
        order.append(v)
        nb = sorted(adj[v])
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                adj[nb[i]].add(nb[j])
                adj[nb[j]].add(nb[i])
        for u in nb:
            adj[u].discard(v)
        del adj[v]
    return order


def _reach_through(graph, v, inside):
    """Vertices outside `inside` u {v} reachable from v through `inside`."""
    seen = {v}
    out = set()
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if w in seen:
                continue
            seen.add(w)
            if w in inside:
                queue.append(w)
            else:
                out.add(w)
    return out


def exact_elimination_order(graph):
    """Optimal-width elimination ordering by dynamic programming over subsets.

    Exponential in the vertex count; intended for graphs with at most ~12
    vertices.
    """
    verts = graph.vertices()
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    full = (1 << n) - 1
    width = {0: -1}
    choice = {}
    masks_by_count = [[] for _ in range(n + 1)]
    for mask in range(full + 1):
        masks_by_count[bin(mask).count("1")].append(mask)
    for count in range(1, n + 1):
        for mask in masks_by_count[count]:
            best = None
            best_v = None
            for i in range(n):
                if not mask & (1 << i):
                    continue
                rest = mask ^ (1 << i)
                inside = {verts[j] for j in range(n) if rest & (1 << j)}
                q = len(_reach_through(graph, verts[i], inside))
                cand = max(width[rest], q)
                if best is None or cand < best or (cand == best and i < best_v):
                    best = cand
                    best_v = i
            width[mask] = best
            choice[mask] = best_v
    seq = []
    mask = full
    while mask:
        i = choice[mask]
        seq.append(verts[i])
        mask ^= 1 << i
    seq.reverse()
    return seq


def td_from_elimination_order(graph, order):
    """Standard bag construction along an elimination ordering."""
    if not order:
        return TreeDecomposition(bags=[frozenset()], edges=[], root=0)
    adj = {v: set(nb) for v, nb in graph.adj.items()}
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    parent_vertex = {}
    for v in order[:-1]:
        nb = sorted(adj[v])
        bags.append(frozenset([v]) | frozenset(nb))
        parent_vertex[v] = min(nb, key=lambda u: pos[u]) if nb else order[-1]
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                adj[nb[i]].add(nb[j])
                adj[nb[j]].add(nb[i])
        for u in nb:
            adj[u].discard(v)
        del adj[v]
    bags.append(frozenset([order[-1]]))
    node_of = {v: i for i, v in enumerate(order)}
    edges = [
        (node_of[v], node_of[parent_vertex[v]])
        for v in order[:-1]
    ]
    return TreeDecomposition(bags=bags, edges=edges, root=node_of[order[-1]])


def tree_decomposition(graph, mode="heuristic"):
    """A valid tree decomposition: min-fill heuristic, or optimal for small graphs."""
    if mode == "heuristic":
        order = min_fill_order(graph)
    elif mode == "exactSmall":
        if graph.num_vertices > 12:
            raise ValueError("exactSmall mode supports at most 12 vertices")
        order = exact_elimination_order(graph)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return td_from_elimination_order(graph, order)


# ---------------------------------------------------------------------------
# Nice tree decompositions
# ---------------------------------------------------------------------------

class NiceNode:
    __slots__ = ("kind", "bag", "children", "vertex")

    def __init__(self, kind, bag, children=(), vertex=None):
        self.kind = kind
        self.bag = frozenset(bag)
        self.children = list(children)
        self.vertex = vertex


class NiceTreeDecomposition:
    """Tree decomposition with leaf/introduce/forget/join nodes and empty root bag."""

    def __init__(self, root):
        self.root = root

    def postorder(self):
        out = []
        stack = [(self.root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                out.append(node)
            else:
                stack.append((node, True))
                for child in node.children:
                    stack.append((child, False))
        return out

    def nodes(self):
        return self.postorder()

    def width(self):
        return max((len(x.bag) for x in self.nodes()), default=0) - 1

    def validate(self, graph=None):
        """Check nice-ness; with a graph also check the decomposition conditions."""
        nodes = self.nodes()
        if self.root.bag:
            raise DecompositionError("root bag not empty")
        for x in nodes:
            if x.kind == "leaf":
                if x.children or x.bag:
                    raise DecompositionError("bad leaf node")
            elif x.kind == "introduce":
                if len(x.children) != 1:
                    raise DecompositionError("introduce node needs one child")
                child = x.children[0]
                if not (child.bag < x.bag and len(x.bag - child.bag) == 1):
                    raise DecompositionError("bad introduce bags")
                if x.vertex is None or x.bag - child.bag != {x.vertex}:
                    raise DecompositionError("introduce vertex mismatch")
            elif x.kind == "forget":
                if len(x.children) != 1:
                    raise DecompositionError("forget node needs one child")
                child = x.children[0]
                if not (x.bag < child.bag and len(child.bag - x.bag) == 1):
                    raise DecompositionError("bad forget bags")
                if x.vertex is None or child.bag - x.bag != {x.vertex}:
                    raise DecompositionError("forget vertex mismatch")
            elif x.kind == "join":
                if len(x.children) != 2:
                    raise DecompositionError("join node needs two children")
                if any(c.bag != x.bag for c in x.children):
                    raise DecompositionError("join bags differ")
            else:
                raise DecompositionError(f"unknown node kind {x.kind!r}")
        if graph is not None:
            bags = [x.bag for x in nodes]
            index = {id(x): i for i, x in enumerate(nodes)}
            edges = [
                (index[id(x)], index[id(c)])
                for x in nodes
                for c in x.children
            ]
            td = TreeDecomposition(bags=bags, edges=edges, root=index[id(self.root)])
            td.validate(graph)


def _chain(node, from_bag, to_bag):
    """Forget then introduce one vertex at a time to turn from_bag into to_bag."""
    bag = set(from_bag)
    for v in sorted(from_bag - to_bag):
        bag.discard(v)
        node = NiceNode("forget", bag, [node], v)
    for v in sorted(to_bag - from_bag):
        bag.add(v)
        node = NiceNode("introduce", bag, [node], v)
    return node


def to_nice(td):
    """Convert to a nice tree decomposition of the same width."""

    def build(x):
        bag = td.bags[x]
        kids = td.children(x)
        if not kids:
            return _chain(NiceNode("leaf", frozenset()), frozenset(), bag)
        subtrees = [_chain(build(c), td.bags[c], bag) for c in kids]
        acc = subtrees[0]
        for sub in subtrees[1:]:
            acc = NiceNode("join", bag, [acc, sub])
        return acc

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(td.bags) + 100))
    try:
        root = _chain(build(td.root), td.bags[td.root], frozenset())
    finally:
        sys.setrecursionlimit(old_limit)
    return NiceTreeDecomposition(root=root)


# ---------------------------------------------------------------------------
# PACE-style text format for tree decompositions
# ---------------------------------------------------------------------------

def format_td(td, num_vertices):
    """PACE-style serialization; vertices are written 1-indexed."""
    lines = [
        f"s td {len(td.bags)} {max((len(b) for b in td.bags), default=0)} {num_vertices}"
    ]
    for i, bag in enumerate(td.bags):
        lines.append("b " + " ".join([str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def parse_td(text):
    bags = {}
    edges = []
    num_bags = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "s":
            if fields[1] != "td":
                raise DecompositionError("not a td header")
            num_bags = int(fields[2])
        elif fields[0] == "b":
            bags[int(fields[1]) - 1] = frozenset(int(v) - 1 for v in fields[2:])
        else:
            edges.append((int(fields[0]) - 1, int(fields[1]) - 1))
    if num_bags is None:
        raise DecompositionError("missing td header")
    bag_list = [bags.get(i, frozenset()) for i in range(num_bags)]
    return TreeDecomposition(bags=bag_list, edges=edges, root=0)
