"""Grow a weighted tag co-occurrence network by iteratively sounding the
citation service: fetch the results page for a tag, absorb the neighboring
tags it reveals, then move to the highest-rated unvisited tag that matches
the theme dictionary."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import FixtureMissingError, ParseError, ScholarSounderError, SoundingError
from .fetcher import LABEL_SEARCH, PageRequest
from .parser import LabelPage

log = logging.getLogger(__name__)

EDGE_POLICY_STAR = "star"
EDGE_POLICY_CLIQUE = "clique"


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def theme_matches(tag: str, dictionary: list[str]) -> bool:
    """True iff any dictionary word occurs as a substring of the tag."""
    return any(word in tag for word in dictionary)


@dataclass
class TagStats:
    tag: str
    rate: int = 0          # author entries (across fetched pages) listing the tag
    visited: bool = False  # its label page has been fetched
    depth_discovered: int = 0


@dataclass
class TraceRecord:
    iteration: int
    base_tag: str
    visited_tag: str
    pages_fetched: int
    new_nodes: int
    new_edges: int


class NotionNetwork:
    """Undirected weighted tag graph. Edge weight doubles as the provenance
    count: the number of (page, author entry) pairs co-listing both ends."""

    def __init__(self):
        self.nodes: dict[str, TagStats] = {}
        self.edges: dict[tuple[str, str], int] = {}
        self.trace: list[TraceRecord] = []

    def ensure_node(self, tag: str, depth: int = 0) -> TagStats:
        stats = self.nodes.get(tag)
        if stats is None:
            stats = TagStats(tag=tag, depth_discovered=depth)
            self.nodes[tag] = stats
        return stats

    def add_edge_evidence(self, a: str, b: str, count: int = 1):
        if a == b:
            return
        pair = canonical_pair(a, b)
        self.edges[pair] = self.edges.get(pair, 0) + count

    def weight(self, a: str, b: str) -> int:
        return self.edges.get(canonical_pair(a, b), 0)

    def to_graph(self):
        from .analysis import Graph

        g = Graph()
        for tag, stats in self.nodes.items():
            g.add_node(
                tag,
                rate=stats.rate,
                visited=stats.visited,
                depth_discovered=stats.depth_discovered,
            )
        for (a, b), w in self.edges.items():
            g.add_edge(a, b, w)
        return g

    def to_canonical_dict(self) -> dict:
        return {
            "nodes": {
                t: {
                    "rate": s.rate,
                    "visited": s.visited,
                    "depth_discovered": s.depth_discovered,
                }
                for t, s in sorted(self.nodes.items())
            },
            "edges": {f"{a}|{b}": w for (a, b), w in sorted(self.edges.items())},
        }


def absorb_label_page(
    net: NotionNetwork,
    page: LabelPage,
    current: str,
    depth: int = 0,
    edge_policy: str = EDGE_POLICY_STAR,
) -> NotionNetwork:
    """Fold one results page into the network.

    Per author entry, every label other than the current tag gains +1 rate,
    and edge evidence accrues per the policy: ``star`` links the current tag
    to each co-listed label; ``clique`` links all label pairs of the entry.
    """
    net.ensure_node(current, depth).visited = True
    for author in page.authors:
        others = [t for t in author.labels if t != current]
        for tag in others:
            net.ensure_node(tag, depth + 1).rate += 1
        if edge_policy == EDGE_POLICY_STAR:
            for tag in others:
                net.add_edge_evidence(current, tag)
        elif edge_policy == EDGE_POLICY_CLIQUE:
            labels = author.labels
            for i in range(len(labels)):
                for j in range(i + 1, len(labels)):
                    net.add_edge_evidence(labels[i], labels[j])
        else:
            raise ValueError(f"unknown edge policy: {edge_policy!r}")
    return net


def select_next_tag(net: NotionNetwork, dictionary: list[str]) -> str | None:
    """Highest-rated unvisited theme-matching tag; ties go to the
    lexicographically smallest value. None when the frontier is exhausted."""
    best: str | None = None
    best_rate = -1
    for tag in sorted(net.nodes):
        stats = net.nodes[tag]
        if stats.visited or not theme_matches(tag, dictionary):
            continue
        if stats.rate > best_rate:
            best, best_rate = tag, stats.rate
    return best


def fetch_label_pages(tag: str, config, fetch, parse) -> list[LabelPage]:
    """Fetch up to max_pages_per_label result pages for a tag, chaining the
    continuation token each page embeds. A missing fixture counts as "no
    page": the corpus simply ends there."""
    pages: list[LabelPage] = []
    token: str | None = None
    for index in range(config.fetch.max_pages_per_label):
        request = PageRequest(kind=LABEL_SEARCH, key=tag, page_index=index)
        try:
            raw = fetch(request, token)
        except FixtureMissingError as exc:
            log.info("no fixture for %s page %d (%s); treating as empty", tag, index, exc)
            break
        page = parse(raw, tag)
        pages.append(page)
        token = page.next_page_token
        if not token:
            break
    return pages


def sound_tags(config, fetch, parse) -> NotionNetwork:
    """Run the full sounding loop over every base tag.

    Each base tag gets at most ``config.depth`` expansion iterations; all
    expansions merge into one network, and every visit appends a trace
    record. Fetch/parse failures abort with the offending tag attached,
    except missing fixtures, which degrade to empty pages.
    """
    net = NotionNetwork()
    iteration = 0
    for base in config.base_tags:
        net.ensure_node(base, 0)
        current: str | None = base if not net.nodes[base].visited else None
        for step in range(config.depth):
            if current is None:
                current = select_next_tag(net, config.dictionary)
            if current is None:
                break
            iteration += 1
            nodes_before = len(net.nodes)
            edges_before = len(net.edges)
            try:
                pages = fetch_label_pages(current, config, fetch, parse)
                for page in pages:
                    absorb_label_page(net, page, current, depth=step, edge_policy=config.edge_policy)
            except ParseError as exc:
                raise SoundingError(current, exc) from exc
            except FixtureMissingError:
                raise  # fetch_label_pages already handles these
            except ScholarSounderError as exc:
                raise SoundingError(current, exc) from exc
            net.nodes[current].visited = True
            net.trace.append(
                TraceRecord(
                    iteration=iteration,
                    base_tag=base,
                    visited_tag=current,
                    pages_fetched=len(pages),
                    new_nodes=len(net.nodes) - nodes_before,
                    new_edges=len(net.edges) - edges_before,
                )
            )
            current = None
    return net


def write_trace(trace: list[TraceRecord], path):
    """Write the visit trace as tab-separated lines under a header row."""
    lines = ["iteration\tbase_tag\tvisited_tag\tpages_fetched\tnew_nodes\tnew_edges"]
    lines += [
        f"{r.iteration}\t{r.base_tag}\t{r.visited_tag}\t{r.pages_fetched}"
        f"\t{r.new_nodes}\t{r.new_edges}"
        for r in trace
    ]
    path.write_text("\n".join(lines) + "\n", "utf-8")
