import io
import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netepi.graph import (
    UNREACHABLE,
    EdgeListParseError,
    Network,
    UnreachablePairError,
    all_pairs_shortest_paths,
    generate_ba,
    generate_er,
    generate_fixed_size,
    load_edge_list,
    write_edge_list,
)

from .oracles import floyd_warshall_hops


def rng(seed=0):
    return np.random.default_rng(seed)


class TestGenerateBA:
    def test_paper_size(self):
        net = generate_ba(100, 4, rng(1))
        assert net.node_count == 100

    def test_edge_count_forced_by_construction(self):
        net = generate_ba(100, 4, rng(2))
        assert net.edge_count == 4 * (100 - 4) == 384

    def test_single_new_node_attaches_to_all(self):
        net = generate_ba(5, 4, rng(3))
        assert net.edge_count == 4
        assert net.neighbors(4) == (0, 1, 2, 3)

    def test_connected(self):
        for seed in range(5):
            assert generate_ba(100, 4, rng(seed)).is_connected()

    def test_rejects_n_not_larger_than_m(self):
        with pytest.raises(ValueError):
            generate_ba(4, 4, rng(0))
        with pytest.raises(ValueError):
            generate_ba(3, 4, rng(0))

    @given(n=st.integers(5, 60), m=st.integers(1, 4), seed=st.integers(0, 1000))
    @settings(max_examples=40, deadline=None)
    def test_degree_sum_property(self, n, m, seed):
        if n <= m:
            return
        net = generate_ba(n, m, rng(seed))
        assert int(net.degrees.sum()) == 2 * m * (n - m)


class TestGenerateER:
    def test_p_zero(self):
        assert generate_er(100, 0.0, rng(0)).edge_count == 0

    def test_p_one(self):
        assert generate_er(100, 1.0, rng(0)).edge_count == 4950

    def test_mean_edge_count_matches_binomial(self):
        # oracle: edge count ~ Binomial(n(n-1)/2, p)
        dyads = 100 * 99 // 2
        p = 0.05
        expected = dyads * p
        se = math.sqrt(dyads * p * (1 - p))
        counts = [generate_er(100, p, rng(s)).edge_count for s in range(10_000)]
        mean = np.mean(counts)
        assert abs(mean - expected) <= 3 * se / math.sqrt(len(counts))

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            generate_er(10, -0.1, rng(0))
        with pytest.raises(ValueError):
            generate_er(10, 1.5, rng(0))

    @given(n=st.integers(2, 40), seed=st.integers(0, 500))
    @settings(max_examples=30, deadline=None)
    def test_degree_sum_is_twice_edges(self, n, seed):
        net = generate_er(n, 0.3, rng(seed))
        assert int(net.degrees.sum()) == 2 * net.edge_count


class TestLoadEdgeList:
    def test_dedup_and_self_loop_drop(self, caplog):
        with caplog.at_level(logging.WARNING, logger="netepi.graph"):
            net = load_edge_list(io.StringIO("0 1\n1 0\n1 1\n"))
        assert net.node_count == 2
        assert net.edge_count == 1
        assert "1 self-loop" in caplog.text and "1 duplicate" in caplog.text

    def test_labels_compact_in_first_appearance_order(self):
        net = load_edge_list(io.StringIO("10 7\n7 3\n"))
        assert net.labels == ("10", "7", "3")
        assert net.neighbors(1) == (0, 2)

    def test_comments_and_blanks_skipped(self):
        net = load_edge_list(io.StringIO("# header\n\n0 1\n"))
        assert net.edge_count == 1

    def test_malformed_line_reports_number(self):
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list(io.StringIO("0 1\n0 1 2\n"))
        with pytest.raises(EdgeListParseError, match="line 1"):
            load_edge_list(io.StringIO("a b\n"))

    def test_empty_input_is_error(self):
        with pytest.raises(ValueError, match="empty"):
            load_edge_list(io.StringIO("# nothing\n"))

    def test_round_trip_recovers_original_after_same_compaction(self, tmp_path):
        net = generate_ba(30, 2, rng(11))
        path = tmp_path / "a.txt"
        write_edge_list(net, path)
        reloaded = load_edge_list(path)
        # the loader's compaction map: first appearance in write order
        relabel: dict[int, int] = {}
        for u, v in net.edges():
            for node in (u, v):
                if node not in relabel:
                    relabel[node] = len(relabel)
        expected = tuple(
            tuple(sorted(relabel[v] for v in net.adjacency[old]))
            for old, _ in sorted(relabel.items(), key=lambda kv: kv[1])
        )
        assert reloaded.adjacency == expected
        assert reloaded.edge_count == net.edge_count


class TestPathTable:
    def test_path_graph(self):
        net = Network.from_edges(3, [(0, 1), (1, 2)])
        table = all_pairs_shortest_paths(net)
        assert table.distance(0, 2) == 2
        assert table.rho_max == 2

    def test_complete_graph(self):
        edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
        table = all_pairs_shortest_paths(Network.from_edges(5, edges))
        assert table.rho_max == 1

    def test_matches_floyd_warshall_on_er_instance(self):
        net = generate_er(10, 0.5, rng(7))
        table = all_pairs_shortest_paths(net)
        oracle = floyd_warshall_hops(10, list(net.edges()))
        for i in range(10):
            for j in range(10):
                expect = oracle[i][j]
                got = int(table.hops[i, j])
                if math.isinf(expect):
                    assert got == UNREACHABLE
                else:
                    assert got == expect

    def test_unreachable_pair_raises(self):
        net = Network.from_edges(4, [(0, 1), (2, 3)])
        table = all_pairs_shortest_paths(net)
        assert table.distance(0, 1) == 1
        with pytest.raises(UnreachablePairError):
            table.distance(0, 2)

    def test_symmetry_on_random_pairs(self):
        net = generate_ba(100, 4, rng(5))
        table = all_pairs_shortest_paths(net)
        r = rng(6)
        idx = r.integers(0, 100, size=(1000, 2))
        assert (table.hops[idx[:, 0], idx[:, 1]] == table.hops[idx[:, 1], idx[:, 0]]).all()

    @given(seed=st.integers(0, 2000), n=st.integers(2, 12))
    @settings(max_examples=50, deadline=None)
    def test_matches_oracle_on_small_graphs(self, seed, n):
        net = generate_er(n, 0.4, rng(seed))
        table = all_pairs_shortest_paths(net)
        oracle = floyd_warshall_hops(n, list(net.edges()))
        for i in range(n):
            for j in range(n):
                expect = oracle[i][j]
                got = int(table.hops[i, j])
                assert got == (UNREACHABLE if math.isinf(expect) else expect)


class TestAccessors:
    def test_star_center_degree(self):
        star = Network.from_edges(5, [(0, i) for i in range(1, 5)])
        assert star.degree(0) == 4
        assert star.degree(1) == 1
        for i in range(5):
            assert star.degree(i) == len(star.neighbors(i))

    def test_out_of_range_id(self):
        net = Network.from_edges(2, [(0, 1)])
        with pytest.raises(ValueError):
            net.degree(2)
        with pytest.raises(ValueError):
            net.neighbors(-1)

    def test_from_edges_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Network.from_edges(2, [(1, 1)])


class TestFixedSize:
    def test_exact_counts_and_connected(self):
        net = generate_fixed_size(100, 700, 4, rng(9))
        assert net.node_count == 100
        assert net.edge_count == 700
        assert net.is_connected()

    def test_infeasible_count_rejected(self):
        with pytest.raises(ValueError):
            generate_fixed_size(10, 5, 2, rng(0))
