"""Graph filtering and clustering: degree statistics, connected components,
weight-thresholded k-core extraction, deterministic label propagation, and
top-cluster reports. All operations treat the input graph as immutable."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .notion_graph import canonical_pair


class Graph:
    """Undirected weighted graph with per-node attribute maps.

    Edges live under canonical (sorted) pair keys; self-loops and duplicate
    pairs are rejected at insertion.
    """

    def __init__(self):
        self.nodes: dict[str, dict] = {}
        self.edges: dict[tuple[str, str], float] = {}

    def add_node(self, node_id: str, **attrs):
        self.nodes.setdefault(node_id, {}).update(attrs)

    def add_edge(self, a: str, b: str, weight: float = 1.0):
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        pair = canonical_pair(a, b)
        if pair in self.edges:
            raise ValueError(f"duplicate edge {pair}")
        self.add_node(a)
        self.add_node(b)
        self.edges[pair] = weight

    def neighbors(self, node_id: str) -> dict[str, float]:
        out = {}
        for (a, b), w in self.edges.items():
            if a == node_id:
                out[b] = w
            elif b == node_id:
                out[a] = w
        return out

    def adjacency(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {n: {} for n in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = w
            adj[b][a] = w
        return adj

    def copy(self) -> "Graph":
        g = Graph()
        g.nodes = {n: dict(attrs) for n, attrs in self.nodes.items()}
        g.edges = dict(self.edges)
        return g

    def subgraph(self, keep: set[str]) -> "Graph":
        g = Graph()
        for n in self.nodes:
            if n in keep:
                g.add_node(n, **self.nodes[n])
        for (a, b), w in self.edges.items():
            if a in keep and b in keep:
                g.edges[(a, b)] = w
        return g

    def total_weight(self) -> float:
        return sum(self.edges.values())


@dataclass
class DegreeStats:
    degree: dict[str, int]
    weighted_degree: dict[str, float]
    histogram: dict[int, int]  # degree value -> node count


@dataclass
class Partition:
    assignment: dict[str, int]  # node -> dense community id from 0

    def communities(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node in sorted(self.assignment):
            out.setdefault(self.assignment[node], []).append(node)
        return out


@dataclass
class ClusterReport:
    community_id: int
    size: int
    members: list[str]
    internal_edges: int
    internal_weight: float


def degree_stats(g: Graph) -> DegreeStats:
    degree = {n: 0 for n in g.nodes}
    weighted = {n: 0.0 for n in g.nodes}
    for (a, b), w in g.edges.items():
        degree[a] += 1
        degree[b] += 1
        weighted[a] += w
        weighted[b] += w
    histogram: dict[int, int] = {}
    for d in degree.values():
        histogram[d] = histogram.get(d, 0) + 1
    return DegreeStats(degree=degree, weighted_degree=weighted, histogram=histogram)


def connected_components(g: Graph) -> list[set[str]]:
    """Components ordered by size descending, then by smallest member id."""
    adj = g.adjacency()
    seen: set[str] = set()
    components: list[set[str]] = []
    for start in sorted(g.nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            for nbr in adj[stack.pop()]:
                if nbr not in seen:
                    seen.add(nbr)
                    comp.add(nbr)
                    stack.append(nbr)
        components.append(comp)
    components.sort(key=lambda c: (-len(c), min(c)))
    return components


def k_core(g: Graph, k: int, min_weight: float = 0.0) -> Graph:
    """Drop edges lighter than min_weight, then peel nodes of degree < k
    until every remaining node has degree >= k."""
    if k < 1:
        raise ValueError("k must be positive")
    adj: dict[str, set[str]] = {n: set() for n in g.nodes}
    for (a, b), w in g.edges.items():
        if w >= min_weight:
            adj[a].add(b)
            adj[b].add(a)
    alive = set(g.nodes)
    pending = [n for n in alive if len(adj[n]) < k]
    while pending:
        node = pending.pop()
        if node not in alive:
            continue
        alive.discard(node)
        for nbr in adj[node]:
            adj[nbr].discard(node)
            if nbr in alive and len(adj[nbr]) < k:
                pending.append(nbr)
    out = g.subgraph(alive)
    out.edges = {p: w for p, w in out.edges.items() if w >= min_weight}
    return out


def detect_communities(g: Graph, seed: int = 0) -> Partition:
    """Deterministic weighted label propagation.

    Every node starts with its own label; each sweep recomputes all labels
    synchronously, a node adopting the label with the largest summed
    incident edge weight among its neighbors, ties going to the smallest
    label. Stops at a fixpoint or after 100 sweeps, then densifies
    community ids. Seed 0 numbers initial labels in sorted node order
    (the canonical run); any other seed shuffles the numbering, which
    exists only to probe the result's sensitivity to labeling.
    """
    order = sorted(g.nodes)
    initial = list(range(len(order)))
    if seed != 0:
        random.Random(seed).shuffle(initial)
    labels = {node: initial[i] for i, node in enumerate(order)}
    for _ in range(100):
        nxt = propagation_sweep(g, labels)
        if nxt == labels:
            break
        labels = nxt
    # densify: community ids by first appearance over sorted node order
    dense: dict[int, int] = {}
    assignment = {}
    for node in order:
        lbl = labels[node]
        if lbl not in dense:
            dense[lbl] = len(dense)
        assignment[node] = dense[lbl]
    return Partition(assignment=assignment)


def propagation_sweep(g: Graph, labels: dict[str, int]) -> dict[str, int]:
    """One synchronous label-propagation sweep (exposed for fixpoint checks)."""
    adj = g.adjacency()
    nxt = {}
    for node in sorted(g.nodes):
        nbrs = adj[node]
        if not nbrs:
            nxt[node] = labels[node]
            continue
        weight_by_label: dict[int, float] = {}
        for nbr, w in nbrs.items():
            weight_by_label[labels[nbr]] = weight_by_label.get(labels[nbr], 0.0) + w
        nxt[node] = max(weight_by_label.items(), key=lambda kv: (kv[1], -kv[0]))[0]
    return nxt


def top_clusters(g: Graph, p: Partition, n: int) -> list[ClusterReport]:
    """The n largest communities (ties by smallest member id), with internal
    edge counts and weights recomputed from the edge list."""
    if n < 1:
        raise ValueError("n must be positive")
    if set(p.assignment) != set(g.nodes):
        raise ValueError("partition does not cover the graph")
    reports = []
    for cid, members in p.communities().items():
        member_set = set(members)
        internal = [
            (pair, w) for pair, w in g.edges.items()
            if pair[0] in member_set and pair[1] in member_set
        ]
        reports.append(
            ClusterReport(
                community_id=cid,
                size=len(members),
                members=sorted(members),
                internal_edges=len(internal),
                internal_weight=sum(w for _, w in internal),
            )
        )
    reports.sort(key=lambda r: (-r.size, r.members[0]))
    return reports[:n]
