import csv

import numpy as np
import pytest

from logcoef import search
from logcoef.caratheodory import HerglotzMeasure, herglotz_coefficients
from logcoef.classes import a234_from_cp
from logcoef.functionals import gamma_closed
from logcoef.search import SearchConfig, milin_max, refine, run_search, seeded_record


class TestSeededRecord:
    def test_value(self):
        rec = seeded_record()
        assert abs(rec.gamma3_abs - 5 / 12) < 1e-12
        assert abs(rec.a2 - 1) < 1e-12
        assert abs(rec.a3 - 1) < 1e-12
        assert abs(rec.a4 - 1.5) < 1e-12

    def test_validates(self):
        seeded_record().validate()


def test_degenerate_single_atom_is_koebe():
    atom = HerglotzMeasure(((0.0, 1.0),), conjugate_symmetric=True)
    p = herglotz_coefficients(atom, 3)
    c = herglotz_coefficients(atom, 3)
    a2, a3, a4 = a234_from_cp(*c, *p)
    assert abs(a2 - 2) < 1e-13 and abs(a3 - 3) < 1e-13 and abs(a4 - 4) < 1e-13
    _, _, g3 = gamma_closed(a2, a3, a4)
    assert abs(abs(g3) - 1 / 3) < 1e-13


class TestRunSearch:
    def test_reproducible(self):
        cfg = SearchConfig(samples=5000, seed=123)
        a = run_search(cfg)
        b = run_search(cfg)
        assert a.best == b.best
        assert np.array_equal(a.histogram, b.histogram)
        assert a.max_gamma3 == b.max_gamma3

    def test_worker_count_invariance(self):
        cfg = SearchConfig(samples=200_000, seed=9)
        r1 = run_search(cfg, workers=1)
        r4 = run_search(cfg, workers=4)
        assert r1.best == r4.best
        assert np.array_equal(r1.histogram, r4.histogram)
        assert (r1.max_gamma1, r1.max_gamma2, r1.max_gamma3) == \
               (r4.max_gamma1, r4.max_gamma2, r4.max_gamma3)

    def test_bounds_hold(self):
        cfg = SearchConfig(samples=50_000, seed=1)
        res = run_search(cfg)
        assert res.max_gamma1 <= 1 + 1e-12
        assert res.max_gamma2 <= 11 / 18 + 1e-12
        assert res.max_gamma3 <= 7 / 12 + 1e-12
        assert sum(res.violations.values()) == 0

    def test_seeded_floor(self):
        cfg = SearchConfig(samples=100, seed=2)
        res = run_search(cfg)
        assert res.best.gamma3_abs >= 5 / 12 - 1e-12

    def test_histogram_mass(self):
        cfg = SearchConfig(samples=30_000, seed=3)
        res = run_search(cfg)
        assert res.histogram.sum() + res.out_of_histogram == cfg.samples
        assert res.out_of_histogram == 0

    def test_best_record_validates(self):
        res = run_search(SearchConfig(samples=20_000, seed=4))
        res.best.validate()

    def test_unrestricted_mode_reports(self):
        cfg = SearchConfig(samples=50_000, seed=5, real_b2=False)
        res = run_search(cfg)
        # evidence on the open conjecture is reported, never asserted
        assert res.exceed_7_12 >= 0
        assert res.violations["gamma3_real_b2"] == 0
        assert res.max_gamma1 <= 1 + 1e-12
        assert res.max_gamma2 <= 11 / 18 + 1e-12

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            SearchConfig(samples=0)
        with pytest.raises(ValueError):
            SearchConfig(samples=10, atoms_g=0)

    def test_csv_dump(self, tmp_path):
        path = tmp_path / "samples.csv"
        cfg = SearchConfig(samples=500, seed=6)
        run_search(cfg, csv_path=path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["seed", "sample_index", "gamma1_abs", "gamma2_abs", "gamma3_abs"]
        assert len(rows) == 501
        assert int(rows[1][0]) == 6
        assert [int(r[1]) for r in rows[1:]] == list(range(500))
        vals = [float(r[4]) for r in rows[1:]]
        assert max(vals) <= 7 / 12 + 1e-12


class TestRefine:
    def test_zero_steps_identity(self):
        rec = seeded_record()
        assert refine(rec, 0, np.random.default_rng(0)) is rec

    def test_monotone_improvement(self):
        rec = seeded_record()
        out = refine(rec, 2000, np.random.default_rng(1))
        assert out.gamma3_abs >= rec.gamma3_abs
        out.validate()

    def test_preserves_symmetry_and_normalization(self):
        rec = seeded_record()
        out = refine(rec, 500, np.random.default_rng(2))
        assert out.p_measure.conjugate_symmetric
        assert abs(sum(out.p_measure.weights) - 1) < 1e-12
        assert abs(sum(out.h_measure.weights) - 1) < 1e-12
        p1 = herglotz_coefficients(out.p_measure, 1)[0]
        assert abs(p1.imag) < 1e-12

    def test_respects_bound(self):
        out = refine(seeded_record(), 4000, np.random.default_rng(3))
        assert out.gamma3_abs <= 7 / 12 + 1e-12


def test_milin_conformance_subsample():
    cfg = SearchConfig(samples=2000, seed=7)
    assert milin_max(cfg, n_samples=2000) <= 1e-12
