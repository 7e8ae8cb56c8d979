import csv
import io
import json
import random

import pytest

from scholar_sounder.analysis import Graph, detect_communities
from scholar_sounder.errors import FormatError
from scholar_sounder.export import (
    from_gexf,
    make_bundle,
    to_edge_csv,
    to_gexf,
    to_graphml,
    to_json_report,
)


def small_bundle():
    g = Graph()
    g.add_node("a", rate=3, visited=True)
    g.add_node("b", rate=1, visited=False)
    g.add_edge("a", "b", 1)
    return make_bundle(g, config_digest="cfg123", tool_version="scholar-sounder test")


def random_bundle(rng, max_nodes=200):
    g = Graph()
    n = rng.randint(0, max_nodes)
    for i in range(n):
        g.add_node(
            f"n{i:04d}",
            rate=rng.randint(0, 50),
            visited=rng.random() < 0.5,
            score=rng.random(),
            name=f"node {i}",
        )
    names = sorted(g.nodes)
    for _ in range(rng.randint(0, 3 * n)):
        a, b = rng.sample(names, 2) if n >= 2 else (None, None)
        if a is None:
            break
        try:
            g.add_edge(a, b, rng.choice([1, 2, 3, 0.5]))
        except ValueError:
            pass  # duplicate pair
    return make_bundle(g, config_digest=f"digest{rng.randint(0, 9)}", tool_version="t")


class TestGexf:
    def test_counts_read_back(self):
        bundle = small_bundle()
        doc = to_gexf(bundle)
        back = from_gexf(doc)
        assert len(back.graph.nodes) == 2
        assert len(back.graph.edges) == 1

    def test_empty_graph_is_valid(self):
        bundle = make_bundle(Graph())
        back = from_gexf(to_gexf(bundle))
        assert back.graph.nodes == {} and back.graph.edges == {}

    def test_round_trip_identity(self):
        bundle = small_bundle()
        back = from_gexf(to_gexf(bundle))
        assert back.canonical_form() == bundle.canonical_form()

    def test_fixture_notion_network_round_trip(self, optics_config, fixture_fetcher):
        from scholar_sounder.notion_graph import sound_tags
        from scholar_sounder.parser import parse_label_page

        net = sound_tags(optics_config, fixture_fetcher.fetch, parse_label_page)
        bundle = make_bundle(net.to_graph(), "d", "v")
        back = from_gexf(to_gexf(bundle))
        assert back.canonical_form() == bundle.canonical_form()
        assert back.graph.edges[("optics", "physical_optics")] == 2

    @pytest.mark.parametrize("seed", range(25))
    def test_round_trip_random_bundles(self, seed):
        bundle = random_bundle(random.Random(seed), max_nodes=60)
        back = from_gexf(to_gexf(bundle))
        assert back.canonical_form() == bundle.canonical_form()

    def test_byte_stability(self):
        g = Graph()
        g.add_node("x", rate=1)
        bundle = make_bundle(g, "d", "v", created_at="2026-01-01T00:00:00+00:00")
        assert to_gexf(bundle) == to_gexf(bundle)

    def test_directed_graph_rejected(self):
        doc = to_gexf(small_bundle()).replace(
            'defaultedgetype="undirected"', 'defaultedgetype="directed"'
        )
        with pytest.raises(FormatError, match="undirected"):
            from_gexf(doc)

    def test_directed_edge_rejected(self):
        doc = to_gexf(small_bundle()).replace("<edge id=", '<edge type="directed" id=')
        with pytest.raises(FormatError, match="directed"):
            from_gexf(doc)

    def test_unknown_attribute_named_in_error(self):
        doc = to_gexf(small_bundle()).replace('for="0"', 'for="99"')
        with pytest.raises(FormatError, match="99"):
            from_gexf(doc)

    def test_malformed_xml_rejected(self):
        with pytest.raises(FormatError):
            from_gexf("<gexf><graph>")

    def test_schema_declares_every_used_attribute(self):
        bundle = small_bundle()
        schema = bundle.attribute_schema()
        used = set()
        for attrs in bundle.node_attributes.values():
            used |= set(attrs)
        assert used == set(schema)
        assert schema == {"rate": "integer", "visited": "boolean"}


class TestGraphml:
    def test_structure(self):
        doc = to_graphml(small_bundle())
        assert doc.count("<node") == 2
        assert doc.count("<edge") == 1
        assert 'edgedefault="undirected"' in doc
        assert 'attr.name="rate"' in doc

    def test_byte_stability(self):
        bundle = small_bundle()
        assert to_graphml(bundle) == to_graphml(bundle)


class TestEdgeCsv:
    def test_single_edge_two_lines(self):
        g = Graph()
        g.add_edge("a", "b", 2)
        text = to_edge_csv(make_bundle(g))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows == [["source", "target", "weight"], ["a", "b", "2"]]

    def test_empty_graph_header_only(self):
        text = to_edge_csv(make_bundle(Graph()))
        assert text.strip() == "source,target,weight"

    def test_row_count_matches_edges(self, optics_config, fixture_fetcher):
        from scholar_sounder.notion_graph import sound_tags
        from scholar_sounder.parser import parse_label_page

        net = sound_tags(optics_config, fixture_fetcher.fetch, parse_label_page)
        text = to_edge_csv(make_bundle(net.to_graph()))
        rows = list(csv.reader(io.StringIO(text)))
        assert len(rows) - 1 == len(net.edges)


class TestJsonReport:
    def test_empty_graph_zero_counts(self):
        report = json.loads(to_json_report(make_bundle(Graph())))
        assert report["graph"] == {"nodes": 0, "edges": 0, "total_weight": 0}

    def test_two_triangle_communities_reported(self):
        g = Graph()
        for a, b in [("a", "b"), ("b", "c"), ("a", "c"),
                     ("d", "e"), ("e", "f"), ("d", "f"), ("c", "d")]:
            g.add_edge(a, b)
        partition = detect_communities(g, seed=0)
        report = json.loads(
            to_json_report(
                make_bundle(g),
                {"communities": {"count": len(set(partition.assignment.values()))}},
            )
        )
        assert report["communities"]["count"] == 2

    def test_byte_identical_on_rerun(self):
        bundle = small_bundle()
        sections = {"components": [["a", "b"]]}
        assert to_json_report(bundle, sections) == to_json_report(bundle, sections)
