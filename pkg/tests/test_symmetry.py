import json

import networkx as nx
import numpy as np
import pytest

import rigidity as R

import fixtures as fx


def _vf2_automorphism_count(g):
    """Independent group-order oracle via VF2 self-isomorphism enumeration."""
    nxg = nx.Graph(g.edges)
    nxg.add_nodes_from(range(g.n))
    gm = nx.algorithms.isomorphism.GraphMatcher(nxg, nxg)
    return sum(1 for _ in gm.isomorphisms_iter())


def _closure(g, **kw):
    return R.close_group(R.automorphism_generators(g, **kw))


class TestPermutation:
    def test_identity(self):
        e = R.Permutation.identity(5)
        assert e.is_identity()
        assert [e(i) for i in range(5)] == list(range(5))

    def test_compose_and_inverse(self):
        s = R.Permutation((1, 2, 0))
        t = R.Permutation((0, 2, 1))
        st = s.compose(t)
        # compose(t) applies t first, then s
        assert all(st(i) == s(t(i)) for i in range(3))
        assert s.compose(s.inverse()).is_identity()
        assert s.inverse().compose(s).is_identity()

    def test_non_bijection_rejected(self):
        with pytest.raises(ValueError):
            R.Permutation((0, 0, 1))

    def test_permute_vector_convention(self):
        # (sigma . phi)(sigma(u)) = phi(u)
        s = R.Permutation((1, 2, 0))
        phi = np.array([10.0, 20.0, 30.0])
        out = R.permute_vector(s, phi)
        for u in range(3):
            assert out[s(u)] == phi[u]


class TestVerifyAutomorphism:
    def test_rotation_on_cycle(self):
        g = fx.c5()
        rot = R.Permutation(tuple((i + 1) % 5 for i in range(5)))
        assert R.verify_automorphism(g, rot)

    def test_non_automorphism(self):
        g = fx.c5()
        assert not R.verify_automorphism(g, R.Permutation((1, 0, 2, 3, 4)))

    def test_generators_validated_at_construction(self):
        with pytest.raises(ValueError):
            R.GroupGenerators(fx.c5(), (R.Permutation((1, 0, 2, 3, 4)),))


class TestSearch:
    @pytest.mark.parametrize("make,order", [
        (fx.c5, 10), (fx.k4, 24), (fx.petersen, 120), (fx.barbell, 8),
        (fx.f3, 48), (fx.c4, 8),
    ])
    def test_known_group_orders(self, make, order):
        assert _closure(make()).size == order

    @pytest.mark.parametrize("make", [fx.c5, fx.barbell, fx.f3, fx.z12])
    def test_order_matches_vf2_oracle(self, make):
        g = make()
        assert _closure(g).size == _vf2_automorphism_count(g)

    def test_fixed_vertex_stabilizer(self):
        g = fx.c5()
        st = R.automorphism_generators(g, fixed=(0,))
        clo = R.close_group(st)
        assert clo.size == 2
        assert all(s(0) == 0 for s in clo.elements)

    def test_budget_exceeded(self):
        with pytest.raises(R.SearchBudgetExceeded):
            R.automorphism_generators(fx.petersen(), budget=1)

    def test_cap_exceeded(self):
        gens = R.automorphism_generators(fx.petersen())
        with pytest.raises(R.CapExceeded):
            R.close_group(gens, cap=5)

    def test_closure_group_axioms(self):
        clo = _closure(fx.barbell())
        elems = set(clo.elements)
        assert R.Permutation.identity(6) in elems
        for s in clo.elements:
            assert s.inverse() in elems
            for t in clo.elements:
                assert s.compose(t) in elems


class TestOrbits:
    @pytest.mark.parametrize("make,sizes", [
        (fx.c5, (5,)), (fx.petersen, (15,)), (fx.barbell, (1, 2, 4)),
        (fx.cn6b, (6, 12, 12)), (fx.z12, (12, 12)), (fx.f3, (3, 6)),
    ])
    def test_edge_orbit_sizes(self, make, sizes):
        g = make()
        part = R.edge_orbits(g, R.automorphism_generators(g))
        assert tuple(sorted(part.sizes)) == sizes
        assert sum(part.sizes) == g.m

    def test_orbits_match_brute_force_closure(self):
        # independent oracle: saturate edge orbits by applying every
        # closure element to every edge
        for make in (fx.barbell, fx.f3, fx.c5, fx.z12):
            g = make()
            gens = R.automorphism_generators(g)
            clo = R.close_group(gens)
            part = R.edge_orbits(g, gens)
            index = {e: i for i, e in enumerate(g.edges)}
            for i, (u, v) in enumerate(g.edges):
                orbit = set()
                for s in clo.elements:
                    a, b = s(u), s(v)
                    orbit.add(index[(a, b) if a < b else (b, a)])
                assert orbit == set(part.members(part.orbit_of[i]))

    def test_orbit_closed_under_generators(self):
        g = fx.cn6b()
        gens = R.automorphism_generators(g)
        part = R.edge_orbits(g, gens)
        for s in gens.gens:
            perm = R.edge_permutation(g, s)
            for i in range(g.m):
                assert part.orbit_of[perm[i]] == part.orbit_of[i]

    def test_vertex_orbits(self):
        g = fx.barbell()
        vo = R.vertex_orbits(g, R.automorphism_generators(g))
        assert sorted(len(o) for o in vo.orbits) == [2, 4]
        assert R.is_vertex_transitive(fx.petersen(),
                                      R.automorphism_generators(fx.petersen()))
        assert not R.is_vertex_transitive(g, R.automorphism_generators(g))


class TestEquivariance:
    def test_edge_energy_equivariance(self, rng):
        # l(sigma.phi) = sigma.l(phi) for 50 random phi; edge_permutation
        # maps edge index i to the index of the image edge sigma(e_i)
        g = fx.petersen()
        gens = R.automorphism_generators(g)
        perms = [R.edge_permutation(g, s) for s in gens.gens]
        for _ in range(50):
            phi = rng.standard_normal(g.n)
            base = R.edge_energy(g, phi).values
            scale = max(1.0, float(base.max()))
            for s, perm in zip(gens.gens, perms):
                moved = R.edge_energy(g, R.permute_vector(s, phi)).values
                assert np.max(np.abs(moved[perm] - base)) <= 1e-12 * scale

    def test_orbit_energy_invariance(self, rng):
        g = fx.cn6b()
        gens = R.automorphism_generators(g)
        part = R.edge_orbits(g, gens)
        for _ in range(20):
            phi = rng.standard_normal(g.n)
            base = R.orbit_energy(g, part, phi).values
            for s in gens.gens:
                moved = R.orbit_energy(g, part, R.permute_vector(s, phi)).values
                assert np.max(np.abs(moved - base)) <= 1e-10 * max(1, base.max())

    def test_orbit_energy_partitions_total(self, rng):
        g = fx.z12()
        gens = R.automorphism_generators(g)
        part = R.edge_orbits(g, gens)
        phi = rng.standard_normal(g.n)
        total = float(np.sum(R.edge_energy(g, phi).values))
        assert abs(float(np.sum(R.orbit_energy(g, part, phi).values)) - total) \
            <= 1e-12 * max(1.0, total)


class TestSymmetrization:
    def test_constant_on_orbits(self, rng):
        g = fx.barbell()
        gens = R.automorphism_generators(g)
        clo = R.close_group(gens)
        part = R.edge_orbits(g, gens)
        w = fx.random_weights(g, rng)
        ws = R.symmetrize_weights(w, clo)
        for o in range(len(part.sizes)):
            vals = ws.values[list(part.members(o))]
            assert np.max(vals) - np.min(vals) <= 1e-12

    def test_preserves_total_and_uniform(self, rng):
        g = fx.f3()
        clo = _closure(g)
        w = fx.random_weights(g, rng)
        ws = R.symmetrize_weights(w, clo)
        assert abs(ws.values.sum() - w.values.sum()) <= 1e-10
        u = R.WeightVector.uniform(g)
        assert np.allclose(R.symmetrize_weights(u, clo).values, u.values,
                           rtol=0, atol=1e-14)

    def test_monotonicity(self, rng):
        # symmetrizing can only help both objectives (slack 1e-10)
        for make in (fx.c5, fx.barbell, fx.z12):
            g = make()
            clo = _closure(g)
            for _ in range(100):
                w = fx.random_weights(g, rng)
                ws = R.symmetrize_weights(w, clo)
                assert R.lambda2(g, ws) >= R.lambda2(g, w) - 1e-10
                assert R.lambda_max(g, ws) <= R.lambda_max(g, w) + 1e-10


class TestEmbedding:
    def test_symmetrized_embedding_is_spherical(self):
        g = fx.petersen()
        dec = R.laplacian_spectrum(g, R.WeightVector.uniform(g))
        cl = R.cluster_eigenspace(dec, R.Which.SECOND)
        clo = _closure(g)
        Phi = R.symmetrized_embedding(R.projector(cl), clo, cluster=cl)
        L = R.laplacian(g, R.WeightVector.uniform(g))
        assert np.max(np.abs(L @ Phi - cl.value * Phi)) <= 1e-10
        rows = np.sum([R.edge_energy(g, Phi[:, j]).values
                       for j in range(Phi.shape[1])], axis=0)
        assert rows.max() - rows.min() <= 1e-8 * max(1.0, rows.max())


class TestGeneratorsJson:
    def test_roundtrip(self):
        g = fx.z12()
        gens = R.automorphism_generators(g)
        text = R.generators_to_json(gens)
        back = R.generators_from_json(g, text)
        assert back.gens == gens.gens

    def test_json_is_plain_image_lists(self):
        g = fx.c4()
        gens = fx.rotation_gens(g, 4)
        data = json.loads(R.generators_to_json(gens))
        assert data == [[1, 2, 3, 0]]

    def test_bad_json_rejected(self):
        g = fx.c4()
        with pytest.raises(ValueError):
            R.generators_from_json(g, "not json")
        with pytest.raises(ValueError):
            R.generators_from_json(g, "[[0, 1, 2]]")
        with pytest.raises(ValueError):
            R.generators_from_json(g, "[[1, 0, 2, 3]]")
