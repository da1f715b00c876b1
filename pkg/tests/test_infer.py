"""Subsampling machinery: block statistics, p-values, test drivers."""

import json
import math

import numpy as np
import pytest

from genspec.empirical import Grid
from genspec.estimate import SearchConfig
from genspec.infer import (
    TestReport as Report,
    gof_test,
    invertibility_test,
    parameter_test,
    subsample_pvalue,
    subsample_statistics,
    unit_root_test,
)
from genspec.models import ModelSpec
from genspec.simulate import simulate_path


class TestSubsampleStatistics:
    def test_block_count_b_equals_n_minus_1(self):
        out = subsample_statistics(np.arange(12.0), 11, np.mean)
        assert out.shape == (2,)

    def test_b_equals_n_forbidden(self):
        with pytest.raises(ValueError, match="block length"):
            subsample_statistics(np.arange(12.0), 12, np.mean)
        with pytest.raises(ValueError, match="block length"):
            subsample_statistics(np.arange(12.0), 1, np.mean)

    def test_block_means(self):
        out = subsample_statistics(np.array([1.0, 2.0, 3.0, 4.0]), 2, np.mean)
        np.testing.assert_allclose(out, [1.5, 2.5, 3.5])

    def test_constant_stat(self):
        out = subsample_statistics(np.arange(20.0), 8, lambda blk: 7.0)
        np.testing.assert_allclose(out, np.full(13, 7.0))

    def test_index_aware_stat(self):
        out = subsample_statistics(np.arange(10.0), 4, lambda blk, t: float(t))
        np.testing.assert_allclose(out, np.arange(7.0))

    def test_order_preserved(self):
        z = np.array([5.0, 1.0, 4.0, 2.0, 3.0])
        out = subsample_statistics(z, 2, lambda blk: blk[0])
        np.testing.assert_allclose(out, z[:-1])


class TestSubsamplePvalue:
    def test_strict_exceedance(self):
        p, excl = subsample_pvalue([1.0, 2.0, 3.0], 2.5)
        assert p == pytest.approx(1 / 3)
        assert excl == 0

    def test_tie_does_not_count(self):
        p, _ = subsample_pvalue([0.1, 0.5, 0.9], 0.5)
        assert p == pytest.approx(1 / 3)

    def test_two_sided_uses_absolute_values(self):
        p, _ = subsample_pvalue([-3.0, 1.0, 2.0], -2.0, "two_sided")
        assert p == pytest.approx(1 / 3)

    def test_less_mode(self):
        p, _ = subsample_pvalue([0.1, 0.5, 0.9], 0.5, "less")
        assert p == pytest.approx(1 / 3)

    def test_nan_blocks_renormalize(self):
        p, excl = subsample_pvalue([1.0, np.nan, 3.0], 2.0)
        assert p == pytest.approx(1 / 2)
        assert excl == 1

    def test_all_nan_raises(self):
        with pytest.raises(ValueError, match="every block"):
            subsample_pvalue([np.nan, np.nan], 1.0)

    def test_unknown_comparison(self):
        with pytest.raises(ValueError, match="comparison"):
            subsample_pvalue([1.0], 0.0, "between")

    def test_rationality(self):
        rng = np.random.default_rng(3)
        vals = rng.normal(size=17)
        p, _ = subsample_pvalue(vals, 0.3)
        assert (p * 17) == pytest.approx(round(p * 17))

    def test_one_sided_monotone_in_kappa(self):
        # p3(kappa) = mean 1{sqrt(b)(x_t - k) > sqrt(n)(x_hat - k)} is
        # nondecreasing: the indicator threshold falls as kappa grows
        rng = np.random.default_rng(8)
        xt, xh = rng.normal(size=40), 0.2
        rb, rn = math.sqrt(25), math.sqrt(400)
        kappas = np.linspace(-2, 2, 41)
        ps = [subsample_pvalue(rb * (xt - k), rn * (xh - k))[0] for k in kappas]
        assert np.all(np.diff(ps) >= 0)


class TestReportContract:
    def _report(self, **over):
        base = dict(
            kind="gof",
            statistic_full=1.0,
            b=25,
            block_statistics=(0.5, np.nan, 2.0),
            p_value=0.5,
            phi=0.05,
            reject=False,
            n_excluded=1,
            theta_full=(2.0, 0.7, 0.3),
        )
        base.update(over)
        return Report(**base)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            self._report(kind="anova")

    def test_p_value_range_enforced(self):
        with pytest.raises(ValueError, match="p_value"):
            self._report(p_value=1.5)

    def test_report_is_json_safe(self):
        rep = self._report().report()
        text = json.dumps(rep)
        back = json.loads(text)
        assert back["block_statistics"][1] is None
        assert back["p_value"] == 0.5


def _gauss_series(n, seed):
    return simulate_path(ModelSpec("gauss_ar1", (0.5, 1.0)), n, seed=seed)


class TestGofTest:
    GRID = Grid(L=3.14, M=8, n=120)

    def _run(self, threads=None, seed=0):
        z = _gauss_series(120, seed=21)
        return gof_test(
            z,
            "gauss_ar1",
            grid=self.GRID,
            b=16,
            seed=seed,
            search_config=SearchConfig(restarts=2),
            threads=threads,
        )

    def test_report_well_formed(self):
        rep = self._run()
        assert rep.kind == "gof"
        assert rep.b == 16
        assert len(rep.block_statistics) == 120 - 16 + 1
        assert 0.0 <= rep.p_value <= 1.0
        assert rep.reject == (rep.p_value <= rep.phi)
        kept = len(rep.block_statistics) - rep.n_excluded
        assert (rep.p_value * kept) == pytest.approx(round(rep.p_value * kept))

    def test_deterministic(self):
        a, b = self._run(), self._run()
        assert a.p_value == b.p_value
        assert a.statistic_full == b.statistic_full
        assert a.block_statistics == b.block_statistics

    def test_thread_schedule_invariance(self):
        a, b = self._run(threads=1), self._run(threads=3)
        assert a.block_statistics == b.block_statistics
        assert a.p_value == b.p_value

    def test_block_length_validation(self):
        z = _gauss_series(120, seed=21)
        with pytest.raises(ValueError, match="block length"):
            gof_test(z, "gauss_ar1", grid=self.GRID, b=7)
        with pytest.raises(ValueError, match="block length"):
            gof_test(z, "gauss_ar1", grid=self.GRID, b=120)

    def test_grid_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            gof_test(_gauss_series(100, seed=2), "gauss_ar1", grid=self.GRID, b=16)

    def test_count_family_branch_chaining(self):
        z = simulate_path(ModelSpec("inar1", (2.0, 0.7, 0.3)), 100, seed=5)
        rep = gof_test(
            z,
            "inar1",
            grid=Grid(L=3.14, M=8, n=100),
            b=25,
            seed=1,
            search_config=SearchConfig(restarts=1),
        )
        assert rep.theta_full[1] in (0.3, 0.7, 0.9)
        assert 0.0 <= rep.p_value <= 1.0


class TestParameterTest:
    @staticmethod
    def _ma_series(n=150, xi=1.4, seed=9):
        return simulate_path(
            ModelSpec("cauchy_ma_gen", (xi, 2.0), d1=1, d2=0), n, seed=seed
        )

    def _run(self, mode="two_sided", transform="identity", kappa=1.0, **kw):
        z = self._ma_series()
        return parameter_test(
            z,
            "cauchy_ma_gen",
            coord=0,
            kappa=kappa,
            mode=mode,
            transform=transform,
            grid=Grid(L=3.14, M=8, n=150),
            b=32,
            seed=0,
            search_config=SearchConfig(restarts=2),
            d1=1,
            d2=0,
            **kw,
        )

    def test_two_sided_report(self):
        rep = self._run()
        assert rep.kind == "two_sided"
        assert len(rep.block_statistics) == 150 - 32 + 1
        assert rep.reject == (rep.p_value <= 0.05)

    def test_modes_disagree_consistently(self):
        greater = self._run(mode="greater")
        less = self._run(mode="less")
        kept = len(greater.block_statistics) - greater.n_excluded
        # strict inequalities both ways never double-count a block
        assert greater.p_value + less.p_value <= 1.0 + 1e-12
        assert kept == len(less.block_statistics) - less.n_excluded

    def test_invalid_arguments(self):
        z = self._ma_series()
        with pytest.raises(ValueError, match="mode"):
            parameter_test(z, "cauchy_ma_gen", 0, 1.0, mode="sideways", d1=1)
        with pytest.raises(ValueError, match="transform"):
            parameter_test(z, "cauchy_ma_gen", 0, 1.0, transform="square", d1=1)
        with pytest.raises(ValueError, match="out of range"):
            parameter_test(z, "cauchy_ma_gen", 5, 1.0, d1=1)

    def test_unit_root_wrapper(self):
        z = self._ma_series()
        rep = unit_root_test(
            z,
            b=32,
            grid=Grid(L=3.14, M=8, n=150),
            seed=0,
            search_config=SearchConfig(restarts=2),
        )
        assert rep.kind == "unit_root"
        assert 0.0 <= rep.p_value <= 1.0

    def test_invertibility_wrapper(self):
        z = self._ma_series()
        rep = invertibility_test(
            z,
            b=32,
            grid=Grid(L=3.14, M=8, n=150),
            seed=0,
            search_config=SearchConfig(restarts=2),
        )
        assert rep.kind == "non_invertibility"
        # xi = 1.4 data: most block |xi| estimates sit near the full one,
        # so the p-value must not collapse to 0 or 1 degenerately
        assert 0.0 <= rep.p_value <= 1.0
