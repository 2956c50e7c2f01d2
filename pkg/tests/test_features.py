import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsnetph.errors import CapNotFinite, TsNetError
from tsnetph.features import (
    FEATURE_LENGTH,
    assemble_features,
    feature_names,
    finitize,
    landscape_l1_norm,
    landscape_layers,
    landscape_value,
    matrix_cap,
    mean_landscape,
    persistent_entropy,
    scalar_summaries,
)
from tsnetph.persistence import PersistenceDiagram, persist

from oracles import landscape_bruteforce, landscape_l1_bruteforce

DATA = Path(__file__).parent / "data"
TOY = PersistenceDiagram(1, [(0, 4), (1, 3)])
CYCLE4_D = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]], dtype=float)


@st.composite
def diagrams(draw, max_size=12):
    m = draw(st.integers(0, max_size))
    births = draw(st.lists(st.integers(0, 20), min_size=m, max_size=m))
    lives = draw(st.lists(st.integers(0, 15), min_size=m, max_size=m))
    scale = draw(st.sampled_from([1.0, 0.5, 0.1]))
    return PersistenceDiagram(1, [(b * scale, (b + l) * scale) for b, l in zip(births, lives)])


class TestLandscapes:
    def test_toy_values(self):
        assert landscape_value(TOY, 1, 2) == 2
        assert landscape_value(TOY, 2, 2) == 1
        for t in (-1, 0, 4, 5):
            assert landscape_value(TOY, 1, t) == 0

    def test_toy_mean_at_two(self):
        lg = mean_landscape(TOY, 3, 5)  # grid 0, 1, 2, 3, 4
        assert lg.grid.tolist() == [0, 1, 2, 3, 4]
        assert lg.values[2] == pytest.approx(1.0)

    def test_single_pair_peak(self):
        lg = mean_landscape(PersistenceDiagram(1, [(0, 2)]), 3, 3)
        assert lg.values[1] == pytest.approx(1 / 3)

    def test_empty(self):
        lg = mean_landscape(PersistenceDiagram(1, np.empty((0, 2))))
        assert lg.values.shape == (200,) and np.all(lg.values == 0)
        assert lg.grid[0] == 0 and lg.grid[-1] == 1

    def test_grid_spans_diagram(self):
        lg = mean_landscape(PersistenceDiagram(0, [(0.5, 1.0), (0.2, 3.0)]))
        assert lg.grid[0] == 0.2 and lg.grid[-1] == 3.0
        assert np.all(np.diff(lg.grid) > 0)

    def test_fixed_grid_option(self):
        lg = mean_landscape(TOY, grid_range=(0.0, 10.0))
        assert lg.grid[-1] == 10.0 and lg.values[-1] == 0

    def test_refuses_infinite(self):
        with pytest.raises(TsNetError):
            mean_landscape(PersistenceDiagram(0, [(0, math.inf)]))

    def test_k_must_be_positive(self):
        with pytest.raises(TsNetError):
            landscape_value(TOY, 0, 1.0)

    @given(diagrams(), st.floats(-2, 40))
    def test_matches_bruteforce(self, dgm, t):
        pairs = dgm.pairs.tolist()
        for k in (1, 2, 3, 5):
            assert landscape_value(dgm, k, t) == pytest.approx(landscape_bruteforce(pairs, k, t))

    @given(diagrams())
    def test_ordered_nonnegative_and_lipschitz(self, dgm):
        grid = np.linspace(-1, 40, 301)
        lay = landscape_layers(dgm, grid, 4)
        assert np.all(lay >= 0)
        assert np.all(lay[:-1] >= lay[1:])
        slopes = np.abs(np.diff(lay, axis=1)) / np.diff(grid)
        assert np.all(slopes <= 1 + 1e-9)


class TestLandscapeNorm:
    def test_overlapping_toy(self):
        assert landscape_l1_norm(TOY) == 4
        assert landscape_l1_bruteforce(TOY.pairs.tolist()) == pytest.approx(4)

    def test_single_tent(self):
        assert landscape_l1_norm(PersistenceDiagram(1, [(0, 4)])) == 4

    def test_partial_overlap(self):
        pairs = [(0, 4), (2, 6)]
        assert landscape_l1_norm(PersistenceDiagram(1, pairs)) == pytest.approx(
            landscape_l1_bruteforce(pairs)
        )

    @given(diagrams())
    def test_matches_bruteforce(self, dgm):
        assert landscape_l1_norm(dgm) == pytest.approx(
            landscape_l1_bruteforce(dgm.pairs.tolist()), abs=1e-9
        )

    @given(st.lists(st.tuples(st.floats(0.1, 3), st.floats(0.1, 3)), max_size=8))
    def test_disjoint_closed_form(self, gaps_lives):
        pairs, cursor = [], 0.0
        for gap, life in gaps_lives:
            cursor += gap
            pairs.append((cursor, cursor + life))
            cursor += life
        expected = sum((d - b) ** 2 for b, d in pairs) / 4
        assert landscape_l1_norm(PersistenceDiagram(1, pairs)) == pytest.approx(expected)


class TestEntropy:
    def test_single_pair(self):
        assert persistent_entropy(PersistenceDiagram(1, [(1, 3)])) == 0.0

    def test_two_equal(self):
        assert persistent_entropy(PersistenceDiagram(1, [(0, 2), (5, 7)])) == pytest.approx(
            math.log(2)
        )

    def test_four_two(self):
        assert persistent_entropy(PersistenceDiagram(1, [(0, 4), (0, 2)])) == pytest.approx(
            0.636514, abs=5e-7
        )

    def test_empty_and_zero_total(self):
        assert persistent_entropy(PersistenceDiagram(1, np.empty((0, 2)))) == 0.0
        assert persistent_entropy(PersistenceDiagram(1, [(1, 1)])) == 0.0

    @given(diagrams(), st.floats(0.01, 100))
    def test_scale_invariance(self, dgm, c):
        scaled = PersistenceDiagram(1, dgm.pairs * c)
        assert persistent_entropy(scaled) == pytest.approx(persistent_entropy(dgm), abs=1e-9)


class TestSummaries:
    def test_toy(self):
        s = scalar_summaries(TOY)
        assert (s.amplitude, s.total_persistence, s.cardinality) == (4, 6, 2)
        assert (s.f1, s.f2, s.f3, s.f4) == (2, 2, 16, 16)
        assert s.landscape_norm == 4

    def test_empty(self):
        assert np.all(scalar_summaries(PersistenceDiagram(1, np.empty((0, 2)))).as_array() == 0)

    @given(diagrams())
    def test_folds(self, dgm):
        s = scalar_summaries(dgm)
        life = [d - b for b, d in dgm.pairs.tolist() if d > b]
        assert s.amplitude == pytest.approx(max(life, default=0.0))
        assert s.total_persistence == pytest.approx(sum(life))
        assert s.cardinality == len(dgm)
        assert s.entropy >= 0


class TestFinitize:
    def test_substitution(self):
        out = finitize(PersistenceDiagram(0, [(0, math.inf)]), 2.0)
        assert out.sorted_pairs() == [(0.0, 2.0)]

    def test_identity_without_infinity(self):
        assert finitize(TOY, 9.0).sorted_pairs() == TOY.sorted_pairs()

    def test_cap_must_be_finite(self):
        with pytest.raises(CapNotFinite):
            finitize(TOY, math.inf)

    def test_cycle_h0(self):
        d0, _ = persist(CYCLE4_D)
        f = finitize(d0, matrix_cap(CYCLE4_D))
        assert sorted((f.deaths - f.births).tolist()) == [1, 1, 1, 2]
        p = np.array([1, 1, 1, 2]) / 5
        assert persistent_entropy(f) == pytest.approx(-np.sum(p * np.log(p)))

    def test_zero_length_counts_in_cardinality_only(self):
        f = finitize(PersistenceDiagram(0, [(0, math.inf), (0, 1)]), 0.0)
        s = scalar_summaries(f)
        assert s.cardinality == 2
        assert s.total_persistence == 1


class TestAssembly:
    def test_names(self):
        names = feature_names()
        assert len(names) == FEATURE_LENGTH == 418
        assert names[0] == "h0_land_000" and names[199] == "h0_land_199"
        assert names[200] == "h1_land_000"
        assert names[400:409] == [
            "h0_entropy", "h0_amplitude", "h0_total", "h0_cardinality",
            "h0_f1", "h0_f2", "h0_f3", "h0_f4", "h0_norm",
        ]
        assert names[-1] == "h1_norm"

    def test_empty_h1_block(self):
        d0, _ = persist(np.zeros((1, 1)))
        v = assemble_features(d0, PersistenceDiagram(1, np.empty((0, 2))), 0.0)
        assert v.shape == (418,)
        assert np.all(v[200:400] == 0) and np.all(v[409:] == 0)

    def test_cycle_hand_computed(self):
        d0, d1 = persist(CYCLE4_D)
        v = assemble_features(d0, d1, matrix_cap(CYCLE4_D))
        h0, h1 = v[400:409], v[409:]
        p = np.array([1, 1, 1, 2]) / 5
        assert h0 == pytest.approx([-np.sum(p * np.log(p)), 2, 5, 4, 0, 3, 0, 3, 1])
        assert h1 == pytest.approx([0, 1, 1, 1, 1, 0, 1, 0, 0.25])

    def test_cycle_golden(self):
        d0, d1 = persist(CYCLE4_D)
        v = assemble_features(d0, d1, matrix_cap(CYCLE4_D))
        golden = np.loadtxt(DATA / "cycle4_features.txt")
        assert np.array_equal(v, golden)
        again = assemble_features(*persist(CYCLE4_D.copy()), 2.0)
        assert np.array_equal(v, again)

    @given(diagrams(), diagrams(), st.floats(0, 50))
    def test_length_and_finite(self, a, b, cap):
        v = assemble_features(PersistenceDiagram(0, a.pairs), b, cap)
        assert v.shape == (418,) and np.all(np.isfinite(v))

    def test_matrix_cap(self):
        D = np.array([[0, 3, np.inf], [3, 0, 1], [np.inf, 1, 0]])
        assert matrix_cap(D) == 3
