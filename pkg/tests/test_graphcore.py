import io

import networkx as nx
import numpy as np
import pytest

import rigidity as R

import fixtures as fx


def _nx_graph6(g):
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    data = nx.to_graph6_bytes(nxg, header=False).decode().strip()
    return data


class TestGraph:
    def test_edges_canonical_sorted(self):
        g = R.Graph(4, ((3, 1), (0, 2), (2, 1)))
        assert g.edges == ((0, 2), (1, 2), (1, 3))

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValueError):
            R.Graph(3, ((0, 1), (1, 0), (1, 2)))

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            R.Graph(3, ((0, 0), (1, 2)))

    def test_out_of_range_vertex_rejected(self):
        with pytest.raises(ValueError):
            R.Graph(3, ((0, 3),))

    def test_disconnected_rejected(self):
        with pytest.raises(R.DisconnectedGraph):
            R.Graph(4, ((0, 1), (2, 3)))

    def test_degrees(self):
        g = fx.barbell()
        assert g.degrees == (2, 2, 3, 3, 2, 2)

    def test_regularity(self):
        assert fx.petersen().is_regular()
        assert not fx.barbell().is_regular()

    def test_bipartition(self):
        g = fx.c4()
        sides = g.bipartition()
        assert sides is not None
        s = np.asarray(sides, dtype=float)
        for u, v in g.edges:
            assert s[u] != s[v]
        assert fx.k4().bipartition() is None
        assert fx.petersen().bipartition() is None


class TestGraph6:
    @pytest.mark.parametrize("make", [fx.barbell, fx.f3, fx.petersen,
                                      fx.desargues, fx.cn6b, fx.z21])
    def test_roundtrip_matches_networkx(self, make):
        g = make()
        assert R.to_graph6(g) == _nx_graph6(g)
        back = R.parse_graph6(R.to_graph6(g))
        assert back.n == g.n and back.edges == g.edges

    def test_parse_networkx_output(self):
        g = fx.petersen()
        back = R.parse_graph6(_nx_graph6(g))
        assert back.edges == g.edges

    def test_large_n_header(self, rng):
        # n >= 63 switches graph6 to the long size encoding
        n = 70
        nxg = nx.gnm_random_graph(n, 200, seed=7)
        while not nx.is_connected(nxg):
            nxg = nx.gnm_random_graph(n, 220, seed=11)
        data = nx.to_graph6_bytes(nxg, header=False).decode().strip()
        g = R.parse_graph6(data)
        assert g.n == n
        assert g.edges == tuple(sorted(tuple(sorted(e)) for e in nxg.edges))
        assert R.to_graph6(g) == data

    def test_optional_header_prefix(self):
        g = fx.c5()
        assert R.parse_graph6(">>graph6<<" + R.to_graph6(g)).edges == g.edges

    @pytest.mark.parametrize("bad", ["", "D" + chr(30), "D~~~~~~~", "D" + chr(127)])
    def test_malformed_rejected(self, bad):
        with pytest.raises(R.MalformedGraph6):
            R.parse_graph6(bad)

    def test_disconnected_graph6_rejected(self):
        nxg = nx.Graph()
        nxg.add_edges_from([(0, 1), (2, 3)])
        data = nx.to_graph6_bytes(nxg, header=False).decode().strip()
        with pytest.raises(R.DisconnectedGraph):
            R.parse_graph6(data)


class TestEdgeList:
    def test_parse_with_comments_and_blanks(self):
        text = "# triangle plus pendant\n\n0 1\n1 2\n 2 0 \n2 3\n"
        g = R.parse_edge_list(text)
        assert g.n == 4
        assert g.edges == ((0, 1), (0, 2), (1, 2), (2, 3))

    def test_format_roundtrip(self):
        g = fx.barbell()
        text = R.format_edge_list(g)
        assert R.parse_edge_list(text).edges == g.edges

    def test_format_with_weights(self):
        g = fx.c4()
        w = R.WeightVector((1.0, 2.0, 0.5, 0.5))
        text = R.format_edge_list(g, w)
        rows = [ln.split() for ln in text.splitlines() if not ln.startswith("#")]
        assert len(rows) == g.m
        assert all(len(r) == 3 for r in rows)
        got = {(int(u), int(v)): float(x) for u, v, x in rows}
        for e, x in zip(g.edges, w.values):
            assert got[e] == x

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            R.parse_edge_list("0 1\nfoo bar\n")
        with pytest.raises(ValueError):
            R.parse_edge_list("")


class TestBuilders:
    def test_circulant_k4(self):
        g = fx.k4()
        assert g.n == 4 and g.m == 6

    def test_circulant_shift_validation(self):
        with pytest.raises(ValueError):
            R.circulant(6, (0,))
        with pytest.raises(ValueError):
            R.circulant(6, (7,))
        with pytest.raises(R.DisconnectedGraph):
            R.circulant(6, (2,))

    def test_circulant_name(self):
        assert "12" in fx.z12().name

    def test_cartesian_product_counts(self):
        a, b = fx.c4(), fx.c5()
        p = R.cartesian_product(a, b)
        assert p.n == a.n * b.n
        assert p.m == a.n * b.m + b.n * a.m

    def test_q3_is_cubic_bipartite(self):
        g = fx.q3()
        assert g.n == 8 and g.m == 12
        assert g.is_regular() and g.degrees[0] == 3
        assert g.bipartition() is not None


class TestLaplacian:
    def test_uniform_matches_networkx(self):
        g = fx.petersen()
        nxg = nx.Graph(g.edges)
        expected = nx.laplacian_matrix(nxg, nodelist=range(g.n)).toarray()
        got = R.laplacian(g, R.WeightVector.uniform(g))
        assert np.array_equal(got, expected.astype(float))

    def test_rows_sum_to_zero(self, rng):
        g = fx.cn6b()
        w = fx.random_weights(g, rng)
        L = R.laplacian(g, w)
        assert np.max(np.abs(L @ np.ones(g.n))) <= 1e-12 * g.n
        assert np.array_equal(L, L.T)

    def test_linearity_exact(self, rng):
        g = fx.f3()
        w1 = rng.uniform(0.1, 1.0, g.m)
        w2 = rng.uniform(0.1, 1.0, g.m)
        L1 = R.laplacian(g, R.WeightVector(w1))
        L2 = R.laplacian(g, R.WeightVector(w2))
        L12 = R.laplacian(g, R.WeightVector(w1 + w2))
        assert np.allclose(L12, L1 + L2, rtol=0, atol=1e-14)

    def test_energy_identity(self, rng):
        # <phi, L(w) phi> == <w, l(phi)> for 100 random pairs
        g = fx.barbell()
        for _ in range(100):
            w = fx.random_weights(g, rng)
            phi = rng.standard_normal(g.n)
            lhs = float(phi @ R.laplacian(g, w) @ phi)
            rhs = float(np.dot(w.values, R.edge_energy(g, phi).values))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_edge_energy_values(self):
        g = fx.c4()
        phi = np.array([1.0, -1.0, 1.0, -1.0])
        assert np.array_equal(R.edge_energy(g, phi).values, 4.0 * np.ones(g.m))


class TestWeightVector:
    def test_uniform(self):
        g = fx.c5()
        w = R.WeightVector.uniform(g)
        assert np.array_equal(w.values, np.ones(5))
        assert w.normalized

    def test_normalize_sums_to_edge_count(self):
        w = R.WeightVector((3.0, 1.0, 0.0, 2.0)).normalize()
        assert w.normalized
        assert abs(w.values.sum() - 4.0) <= 1e-12

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            R.WeightVector((1.0, -0.5))

    def test_zero_vector_cannot_normalize(self):
        with pytest.raises(ValueError):
            R.WeightVector((0.0, 0.0)).normalize()

    def test_length_mismatch_rejected(self):
        g = fx.c5()
        with pytest.raises(ValueError):
            R.laplacian(g, R.WeightVector((1.0, 1.0)))
