import itertools
import math
import random

import pytest

from scibank.coword import (
    CowordGraph,
    cooccurrence_graph,
    export_graph,
    graph_csv,
    isolation_ratio,
    layout_fr,
)
from scibank.ingest import parse_survey
from scibank.normalize import Facet, Origin, clean_corpus

from fixture_data import random_rows


def make_graph(nodes, edges):
    return CowordGraph(nodes=nodes, edges=edges, facet=Facet.KEYWORD, level=Origin.PHRASE)


def reference_fr(nodes, edges, iterations=100, frame=(100.0, 100.0), seed=1):
    """From-scratch spring layout used as an independent oracle."""
    width, height = frame
    k = math.sqrt(width * height / len(nodes))
    rng = random.Random(seed)
    pos = {v: [rng.uniform(0, width), rng.uniform(0, height)] for v in nodes}
    t0 = width / 10
    for it in range(iterations):
        t = t0 * (iterations - it) / iterations
        disp = {v: [0.0, 0.0] for v in nodes}
        for v in nodes:
            for u in nodes:
                if u == v:
                    continue
                dx, dy = pos[v][0] - pos[u][0], pos[v][1] - pos[u][1]
                d = max(math.hypot(dx, dy), 1e-9)
                f = k * k / d
                disp[v][0] += dx / d * f
                disp[v][1] += dy / d * f
        for a, b in edges:
            dx, dy = pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]
            d = max(math.hypot(dx, dy), 1e-9)
            f = d * d / k
            disp[a][0] -= dx / d * f
            disp[a][1] -= dy / d * f
            disp[b][0] += dx / d * f
            disp[b][1] += dy / d * f
        for v in nodes:
            dx, dy = disp[v]
            dlen = max(math.hypot(dx, dy), 1e-12)
            step = min(dlen, t)
            x = pos[v][0] + dx / dlen * step
            y = pos[v][1] + dy / dlen * step
            pos[v] = [min(width, max(0.0, x)), min(height, max(0.0, y))]
    return pos, k


def pairwise_distances(positions, names):
    out = []
    for a, b in itertools.combinations(names, 2):
        (xa, ya), (xb, yb) = positions[a], positions[b]
        out.append(math.hypot(xa - xb, ya - yb))
    return out


class TestCooccurrenceGraph:
    def test_three_terms_give_triangle(self):
        rows = random_rows(random.Random(0), 1)
        rows[0]["keywords"] = "alfa; beta; gamma"
        researchers, _ = parse_survey(rows)
        g = cooccurrence_graph(researchers, Facet.KEYWORD)
        assert g.nodes == {"alfa": 1, "beta": 1, "gamma": 1}
        assert g.edges == {("alfa", "beta"): 1, ("alfa", "gamma"): 1, ("beta", "gamma"): 1}

    def test_shared_pair_accumulates_weight(self):
        rows = random_rows(random.Random(0), 2)
        rows[0]["keywords"] = rows[1]["keywords"] = "alfa; beta"
        researchers, _ = parse_survey(rows)
        g = cooccurrence_graph(researchers, Facet.KEYWORD)
        assert g.nodes == {"alfa": 2, "beta": 2}
        assert g.edges == {("alfa", "beta"): 2}

    def test_single_term_is_isolated(self):
        rows = random_rows(random.Random(0), 1)
        rows[0]["keywords"] = "solo"
        researchers, _ = parse_survey(rows)
        g = cooccurrence_graph(researchers, Facet.KEYWORD)
        assert g.nodes == {"solo": 1}
        assert g.edges == {}

    def test_structural_invariants_on_random_fixture(self):
        researchers, _ = parse_survey(random_rows(random.Random(41), 35))
        for level in Origin:
            g = cooccurrence_graph(researchers, Facet.KEYWORD, level)
            for (a, b), w in g.edges.items():
                assert a < b  # unordered pair stored once, no self-edges
                assert a in g.nodes and b in g.nodes
                assert 1 <= w <= min(g.nodes[a], g.nodes[b])

    def test_handshake_bound(self):
        researchers, _ = parse_survey(random_rows(random.Random(43), 30))
        g = cooccurrence_graph(researchers, Facet.EXPERTISE)
        budget = 0
        from scibank.normalize import researcher_phrases

        for r in researchers:
            n = len(researcher_phrases(r, Facet.EXPERTISE))
            budget += n * (n - 1) // 2
        assert sum(g.edges.values()) <= budget


class TestIsolationRatio:
    def test_corpus_shaped_ratio(self):
        nodes = {f"t{i}": 1 for i in range(947)}
        nodes.update({f"r{i}": 2 for i in range(41)})
        g = make_graph(nodes, {})
        assert isolation_ratio(g) == pytest.approx(947 / 988)

    def test_all_repeated_is_zero(self):
        g = make_graph({"a": 2, "b": 3}, {("a", "b"): 2})
        assert isolation_ratio(g) == 0.0

    def test_empty_graph_is_zero(self):
        assert isolation_ratio(make_graph({}, {})) == 0.0

    def test_matches_cleaning_multiplicity(self):
        # Phrase-level node counts are researcher presence, the same
        # quantity the cleaning stage tracks per unique phrase.
        researchers, _ = parse_survey(random_rows(random.Random(47), 40))
        corpus = clean_corpus(researchers)
        g = cooccurrence_graph(researchers, Facet.KEYWORD)
        multiplicity = corpus.multiplicity[Facet.KEYWORD]
        assert g.nodes == multiplicity
        expected = sum(1 for c in multiplicity.values() if c == 1) / len(multiplicity)
        assert isolation_ratio(g) == pytest.approx(expected)


class TestLayout:
    def test_single_node_at_frame_center(self):
        layout = layout_fr(make_graph({"only": 1}, {}), frame=(80.0, 60.0))
        assert layout.positions["only"] == (40.0, 30.0)

    def test_empty_graph_empty_layout(self):
        layout = layout_fr(make_graph({}, {}))
        assert layout.positions == {}

    def test_two_connected_nodes_settle_at_ideal_distance(self):
        g = make_graph({"a": 1, "b": 1}, {("a", "b"): 1})
        layout = layout_fr(g, seed=7)
        (xa, ya), (xb, yb) = layout.positions["a"], layout.positions["b"]
        distance = math.hypot(xa - xb, ya - yb)
        assert distance == pytest.approx(layout.k, rel=0.05)

    def test_triangle_is_equilateral_and_agrees_with_reference(self):
        names = ["a", "b", "c"]
        edges = {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1}
        g = make_graph({n: 1 for n in names}, edges)
        layout = layout_fr(g, seed=5)
        ours = pairwise_distances(layout.positions, names)
        assert max(ours) / min(ours) <= 1.05
        ref_pos, ref_k = reference_fr(names, list(edges), seed=99)
        ref = pairwise_distances(ref_pos, names)
        assert max(ref) / min(ref) <= 1.05
        assert ref_k == layout.k
        # both implementations settle near the same side length
        assert sum(ours) / 3 == pytest.approx(sum(ref) / 3, rel=0.1)

    def test_same_seed_reproduces_byte_identical_export(self):
        researchers, _ = parse_survey(random_rows(random.Random(53), 15))
        g = cooccurrence_graph(researchers, Facet.KEYWORD)
        a = export_graph(g, layout_fr(g, seed=42))
        b = export_graph(g, layout_fr(g, seed=42))
        assert a == b
        assert export_graph(g, layout_fr(g, seed=43)) != a

    def test_positions_stay_inside_frame(self):
        researchers, _ = parse_survey(random_rows(random.Random(59), 25))
        g = cooccurrence_graph(researchers, Facet.EXPERTISE, Origin.WORD)
        layout = layout_fr(g, frame=(50.0, 40.0))
        for x, y in layout.positions.values():
            assert 0.0 <= x <= 50.0
            assert 0.0 <= y <= 40.0

    def test_translation_equivariance_without_clamping(self):
        names = ["a", "b", "c", "d"]
        g = make_graph({n: 1 for n in names}, {("a", "b"): 1, ("c", "d"): 1})
        rng = random.Random(61)
        initial = {n: (rng.uniform(20, 80), rng.uniform(20, 80)) for n in names}
        shift = (13.75, -4.25)
        shifted = {n: (x + shift[0], y + shift[1]) for n, (x, y) in initial.items()}
        base = layout_fr(g, iterations=50, initial_positions=initial, clamp=False)
        moved = layout_fr(g, iterations=50, initial_positions=shifted, clamp=False)
        for n in names:
            assert moved.positions[n][0] - base.positions[n][0] == pytest.approx(shift[0], abs=1e-6)
            assert moved.positions[n][1] - base.positions[n][1] == pytest.approx(shift[1], abs=1e-6)

    def test_displacement_history_has_one_entry_per_iteration(self):
        g = make_graph({"a": 1, "b": 1}, {("a", "b"): 1})
        layout = layout_fr(g, iterations=37)
        assert len(layout.mean_displacements) == 37

    def test_bad_parameters_rejected(self):
        g = make_graph({"a": 1}, {})
        with pytest.raises(ValueError):
            layout_fr(g, iterations=0)
        with pytest.raises(ValueError):
            layout_fr(g, frame=(0.0, 10.0))


class TestExport:
    def test_single_edge_line(self):
        g = make_graph({"a": 1, "b": 1}, {("a", "b"): 1})
        assert export_graph(g) == "a\tb\t1\n"

    def test_empty_graph_empty_text(self):
        assert export_graph(make_graph({}, {})) == ""

    def test_expertise_sample_contains_history_pair(self, sample_researchers):
        g = cooccurrence_graph(sample_researchers, Facet.EXPERTISE)
        # hand-enumerated from the middle researcher's expertise column
        assert g.edges[("accounting", "accounting history")] == 1
        assert "accounting\taccounting history\t1" in export_graph(g)

    def test_edges_sorted_by_pair(self):
        g = make_graph({"a": 1, "b": 1, "c": 1}, {("b", "c"): 1, ("a", "c"): 2})
        assert export_graph(g) == "a\tc\t2\nb\tc\t1\n"

    def test_csv_pair_includes_layout_columns(self):
        g = make_graph({"a": 1, "b": 1}, {("a", "b"): 1})
        nodes_csv, edges_csv = graph_csv(g, layout_fr(g, seed=3))
        assert nodes_csv.splitlines()[0] == "term,count,x,y"
        assert len(nodes_csv.splitlines()) == 3
        assert edges_csv == "source,target,weight\na,b,1\n"
