import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsnetph.errors import SizeMismatch, TooLarge, TsNetError
from tsnetph.persistence import (
    PersistenceDiagram,
    betti_oracle,
    filtration_edges,
    landscape_stability_check,
    persist,
)

from oracles import random_dissimilarity

CYCLE4_D = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]], dtype=float)


@st.composite
def matrices(draw, max_n=9, allow_inf=True):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    decimals = draw(st.sampled_from([None, 1]))
    inf_prob = draw(st.sampled_from([0.0, 0.0, 0.3])) if allow_inf else 0.0
    return random_dissimilarity(np.random.default_rng(seed), n, inf_prob, decimals)


def thresholds(D):
    vals = np.unique(D[np.isfinite(D)])
    mids = (vals[:-1] + vals[1:]) / 2 if vals.size > 1 else np.array([])
    return np.concatenate([vals, mids, [-0.5, vals.max() + 1 if vals.size else 1.0]])


class TestGoldenExamples:
    def test_four_cycle(self):
        d0, d1 = persist(CYCLE4_D)
        assert d0.sorted_pairs() == [(0.0, 1.0)] * 3 + [(0.0, math.inf)]
        assert d1.sorted_pairs() == [(1.0, 2.0)]

    def test_four_cycle_boundary_route(self):
        d0, d1 = persist(CYCLE4_D, method="boundary")
        assert d1.sorted_pairs() == [(1.0, 2.0)]

    def test_single_vertex(self):
        d0, d1 = persist(np.zeros((1, 1)))
        assert d0.sorted_pairs() == [(0.0, math.inf)] and len(d1) == 0

    def test_oracle_on_four_cycle(self):
        assert betti_oracle(CYCLE4_D, 1) == (1, 1)
        assert betti_oracle(CYCLE4_D, 2) == (1, 0)
        assert betti_oracle(CYCLE4_D, 0.5) == (4, 0)

    def test_oracle_trivial_cases(self):
        K = np.ones((5, 5)) - np.eye(5)
        assert betti_oracle(K, 1) == (1, 0)
        two = np.full((4, 4), np.inf)
        np.fill_diagonal(two, 0)
        two[0, 1] = two[1, 0] = 0.3
        two[2, 3] = two[3, 2] = 0.7
        assert betti_oracle(two, 1.0) == (2, 0)

    def test_oracle_size_cap(self):
        with pytest.raises(TooLarge):
            betti_oracle(np.zeros((13, 13)), 0.0)

    def test_infinite_entries(self):
        D = np.full((3, 3), np.inf)
        np.fill_diagonal(D, 0)
        D[0, 1] = D[1, 0] = 2.0
        d0, _ = persist(D)
        assert d0.sorted_pairs() == [(0.0, 2.0), (0.0, math.inf), (0.0, math.inf)]

    def test_essential_loop(self):
        # 4-cycle whose diagonals never appear: the loop is never filled
        D = CYCLE4_D.copy()
        D[D == 2] = np.inf
        _, d1 = persist(D)
        assert d1.sorted_pairs() == [(1.0, math.inf)]
        _, d1b = persist(D, method="boundary")
        assert d1b.sorted_pairs() == [(1.0, math.inf)]

    def test_unknown_method(self):
        with pytest.raises(TsNetError):
            persist(CYCLE4_D, method="magic")


class TestAgainstOracle:
    @given(matrices())
    def test_betti_curves(self, D):
        d0, d1 = persist(D)
        for eps in thresholds(D):
            assert (d0.betti(eps), d1.betti(eps)) == betti_oracle(D, eps)

    @given(matrices())
    def test_cohomology_equals_boundary_reduction(self, D):
        a = persist(D, method="cohomology")
        b = persist(D, method="boundary")
        assert a[0].sorted_pairs() == b[0].sorted_pairs()
        assert a[1].sorted_pairs() == b[1].sorted_pairs()


class TestStructure:
    @given(matrices())
    def test_pair_invariants(self, D):
        d0, d1 = persist(D)
        assert np.all(d0.births == 0)
        for dgm in (d0, d1):
            assert np.all(dgm.deaths > dgm.births)
        assert np.all(d1.births >= 0)
        off = D[~np.eye(D.shape[0], dtype=bool)]
        if np.all(off > 0):
            # zero-length edges are the only way a loop can exist at scale 0
            assert np.all(d1.births > 0)
        # one essential H0 class per component of the finite entries
        n = D.shape[0]
        parent = list(range(n))

        def root(a):
            while parent[a] != a:
                a = parent[a]
            return a

        for a in range(n):
            for b in range(a + 1, n):
                if np.isfinite(D[a, b]):
                    parent[root(a)] = root(b)
        components = len({root(a) for a in range(n)})
        assert int(np.isinf(d0.deaths).sum()) == components

    @given(matrices(allow_inf=False))
    def test_finite_matrix_loops_die_by_max_entry(self, D):
        _, d1 = persist(D)
        if len(d1):
            assert d1.deaths.max() <= D.max()

    # maps fix 0 so that the vertices (diagonal entries) still enter at 0
    @given(matrices(), st.sampled_from(["square", "exp", "scale"]))
    def test_monotone_reparameterization(self, D, kind):
        g = {"square": lambda v: v**2, "exp": np.expm1, "scale": lambda v: 3 * v}[kind]
        E = np.where(np.isfinite(D), g(D), np.inf)
        np.fill_diagonal(E, 0)
        for a, b in zip(persist(D), persist(E)):
            mapped = sorted((float(g(x)), float(g(y)) if np.isfinite(y) else math.inf) for x, y in a.pairs)
            got = b.sorted_pairs()
            assert len(mapped) == len(got)
            if mapped:
                assert np.allclose(np.array(mapped), np.array(got))

    @given(matrices(), st.integers(0, 2**32 - 1))
    def test_vertex_permutation(self, D, seed):
        p = np.random.default_rng(seed).permutation(D.shape[0])
        P = D[np.ix_(p, p)]
        for a, b in zip(persist(D), persist(P)):
            assert a.sorted_pairs() == b.sorted_pairs()

    def test_tie_order_invariance(self):
        # integer entries create many simultaneous edges; relabelling vertices
        # reorders the ties inside each value class
        rng = np.random.default_rng(7)
        for _ in range(50):
            D = np.triu(rng.integers(1, 4, (8, 8)).astype(float), 1)
            D = D + D.T
            ref = [d.sorted_pairs() for d in persist(D)]
            for _ in range(3):
                p = rng.permutation(8)
                got = [d.sorted_pairs() for d in persist(D[np.ix_(p, p)])]
                assert got == ref

    def test_filtration_edge_order(self):
        D = np.array([[0, 2, 1], [2, 0, 1], [1, 1, 0]], dtype=float)
        u, v, w = filtration_edges(D)
        assert list(zip(u, v, w)) == [(0, 2, 1.0), (1, 2, 1.0), (0, 1, 2.0)]

    def test_rejects_bad_matrix(self):
        with pytest.raises(TsNetError):
            persist(np.array([[0, 1], [2, 0]], dtype=float))


class TestSerialization:
    def test_json_round_trip(self):
        d0, _ = persist(CYCLE4_D)
        doc = json.loads(d0.to_json())
        assert doc["dim"] == 0 and ["0.0", "inf"] not in doc["pairs"]
        assert doc["pairs"][-1] == [0.0, "inf"]
        back = PersistenceDiagram.from_dict(doc)
        assert back.sorted_pairs() == d0.sorted_pairs()


class TestStability:
    def test_identical(self):
        D = random_dissimilarity(np.random.default_rng(0), 8)
        assert landscape_stability_check(D, D) == 0.0

    def test_uniform_shift(self):
        D = random_dissimilarity(np.random.default_rng(1), 8)
        E = D + 0.05 * (1 - np.eye(8))
        assert landscape_stability_check(D, E) <= 0.05 + 1e-12

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            landscape_stability_check(np.zeros((2, 2)), np.zeros((3, 3)))

    @given(st.integers(0, 2**32 - 1), st.sampled_from([0.01, 0.05, 0.1]))
    def test_perturbation_bound(self, seed, delta):
        rng = np.random.default_rng(seed)
        D = random_dissimilarity(rng, 8)
        noise = np.triu(rng.uniform(-delta, delta, (8, 8)), 1)
        E = np.maximum(D + noise + noise.T, 0.0)
        np.fill_diagonal(E, 0)
        bound = np.abs(E - D).max()
        assert landscape_stability_check(D, E) <= bound + 1e-12
