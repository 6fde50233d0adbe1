import math

import numpy as np
import pytest
import scipy.stats

from smalldev.ensembles import (
    Bernoulli,
    BernoulliDiagonal,
    BoundedRankOne,
    Exponential,
    Gamma,
    MgfModel,
    ScaledFixed,
    SumModel,
    SumSource,
    Uniform,
    Wishart,
    analytic_mgf,
    empirical_mgf,
    sample,
    sample_batch,
    sample_sum,
    sample_sum_batch,
)
from smalldev.errors import MgfUnavailableError
from smalldev.linalg import HermitianMatrix, expm, lambda_max, lambda_min
from smalldev.rng import RngStream


def iid_model(source_factory, k):
    return SumModel(sources=tuple(source_factory() for _ in range(k)))


ALL_SOURCES = [
    lambda: ScaledFixed(
        matrix=HermitianMatrix.diagonal([1.0, 0.5]), law=Exponential(rate=1.5)
    ),
    lambda: ScaledFixed(
        matrix=HermitianMatrix.identity(2), law=Gamma(shape=2.0, rate=1.0)
    ),
    lambda: ScaledFixed(
        matrix=HermitianMatrix.diagonal([2.0, 1.0]), law=Uniform(high=0.7)
    ),
    lambda: ScaledFixed(matrix=HermitianMatrix.identity(3), law=Bernoulli(p=0.3)),
    lambda: BernoulliDiagonal(dim=2, p=0.5, scale=1.0),
    lambda: BoundedRankOne(dim=4, bound=1.0),
    lambda: Wishart(dim=3, dof=4),
]


class TestScalarLaws:
    @pytest.mark.parametrize(
        "law",
        [Exponential(rate=1.3), Gamma(shape=2.0, rate=1.5), Uniform(high=0.7)],
        ids=["exponential", "gamma", "uniform"],
    )
    def test_power_envelope_holds_on_log_grid(self, law):
        c, alpha = law.envelope
        thetas = np.geomspace(1e-3, 1e3, 50)
        assert (law.mgf(thetas) <= c * thetas**-alpha * (1 + 1e-12)).all()

    def test_bernoulli_has_no_envelope(self):
        assert Bernoulli(p=0.5).envelope is None

    @pytest.mark.parametrize(
        "law",
        [
            Exponential(rate=2.0),
            Gamma(shape=1.5, rate=2.0),
            Bernoulli(p=0.4),
            Uniform(high=2.0),
        ],
        ids=["exponential", "gamma", "bernoulli", "uniform"],
    )
    def test_mgf_near_zero_is_one(self, law):
        assert law.mgf(1e-12) == pytest.approx(1.0, abs=1e-9)

    def test_law_parameter_validation(self):
        with pytest.raises(ValueError):
            Exponential(rate=0.0)
        with pytest.raises(ValueError):
            Gamma(shape=-1.0, rate=1.0)
        with pytest.raises(ValueError):
            Bernoulli(p=1.5)
        with pytest.raises(ValueError):
            Uniform(high=0.0)


class TestSourceSampling:
    @pytest.mark.parametrize("factory", ALL_SOURCES)
    def test_samples_are_psd(self, factory):
        src = factory()
        batch = sample_batch(src, RngStream(5), 1000)
        lam_min = np.linalg.eigvalsh(batch)[:, 0]
        assert lam_min.min() >= -1e-10

    @pytest.mark.parametrize("factory", ALL_SOURCES)
    def test_uniform_bound_respected(self, factory):
        src = factory()
        bound = src.uniform_bound()
        if bound is None:
            pytest.skip("source is unbounded")
        batch = sample_batch(src, RngStream(6), 1000)
        lam_max = np.linalg.eigvalsh(batch)[:, -1]
        assert lam_max.max() <= bound + 1e-10

    @pytest.mark.parametrize("factory", ALL_SOURCES)
    def test_mean_within_three_standard_errors(self, factory):
        src = factory()
        n = 100_000
        batch = sample_batch(src, RngStream(7), n)
        mean = src.mean().entries
        emp = batch.mean(axis=0)
        se = np.maximum(
            np.sqrt(batch.real.var(axis=0) / n) + np.sqrt(batch.imag.var(axis=0) / n),
            1e-12,
        )
        assert (np.abs(emp - mean) <= 3.0 * se + 1e-9).all()

    def test_degenerate_bernoulli_always_scale_identity(self):
        src = BernoulliDiagonal(dim=1, p=1.0, scale=2.0)
        for _ in range(5):
            assert np.allclose(sample(src, RngStream(8)).entries, [[2.0]])

    def test_zero_matrix_source_samples_zero(self):
        src = ScaledFixed(matrix=HermitianMatrix.zeros(2), law=Exponential(rate=1.0))
        batch = sample_batch(src, RngStream(9), 100)
        assert np.abs(batch).max() == 0.0

    def test_bounded_rank_one_trace_identity(self):
        # trace(bound * u * w w*) = bound * u since w has unit norm, so the
        # trace equals the single nonzero eigenvalue and lies in [0, bound].
        src = BoundedRankOne(dim=4, bound=1.0)
        batch = sample_batch(src, RngStream(10), 1000)
        traces = np.trace(batch, axis1=1, axis2=2).real
        lam = np.linalg.eigvalsh(batch)[:, -1]
        assert traces.min() >= -1e-12
        assert traces.max() <= 1.0 + 1e-12
        assert np.abs(traces - lam).max() <= 1e-10

    def test_sample_is_batch_of_one(self):
        src = Wishart(dim=2, dof=3)
        one = sample(src, RngStream(11))
        batch1 = sample_batch(src, RngStream(11), 1)[0]
        assert np.array_equal(one.entries, batch1)


class TestSumModel:
    def test_requires_equal_dims(self):
        with pytest.raises(ValueError):
            SumModel(sources=(Wishart(dim=2, dof=2), Wishart(dim=3, dof=2)))

    def test_requires_nonempty(self):
        with pytest.raises(ValueError):
            SumModel(sources=())

    def test_sum_of_zero_sources_is_zero(self):
        model = iid_model(
            lambda: ScaledFixed(
                matrix=HermitianMatrix.zeros(2), law=Exponential(rate=1.0)
            ),
            3,
        )
        assert np.abs(sample_sum(model, RngStream(1)).entries).max() == 0.0

    def test_binomial_law_of_bernoulli_sum(self):
        # lambda_max of ten summed Bernoulli(1/2) identities counts the
        # successes, so it follows Binomial(10, 1/2) exactly.
        model = iid_model(lambda: BernoulliDiagonal(dim=1, p=0.5, scale=1.0), 10)
        n = 100_000
        lam = np.linalg.eigvalsh(sample_sum_batch(model, RngStream(13), n))[:, -1]
        counts = np.bincount(np.rint(lam).astype(int), minlength=11)
        expected = np.array([math.comb(10, k) * 0.5**10 * n for k in range(11)])
        chi2 = ((counts - expected) ** 2 / expected).sum()
        assert chi2 < 29.59  # 0.999 quantile of chi-square with 10 dof

    def test_gamma_law_of_exponential_sum(self):
        # Two exp(1) multiples of I: lambda_max is the sum of the two scalars,
        # a Gamma(2, 1) variable; Kolmogorov-Smirnov against its exact CDF.
        model = iid_model(
            lambda: ScaledFixed(
                matrix=HermitianMatrix.identity(2), law=Exponential(rate=1.0)
            ),
            2,
        )
        n = 100_000
        lam = np.sort(np.linalg.eigvalsh(sample_sum_batch(model, RngStream(14), n))[:, -1])
        cdf = 1.0 - np.exp(-lam) * (1.0 + lam)
        grid = np.arange(1, n + 1) / n
        ks = max(np.abs(cdf - grid).max(), np.abs(cdf - (grid - 1.0 / n)).max())
        assert ks <= 1.95 / math.sqrt(n)  # ~0.001-level KS critical value


class TestAnalyticMgf:
    def test_exponential_identity(self):
        src = ScaledFixed(matrix=HermitianMatrix.identity(2), law=Exponential(rate=1.0))
        out = analytic_mgf(src, 1.0)
        assert np.allclose(out.entries, 0.5 * np.eye(2), atol=1e-14)

    def test_gamma_diagonal(self):
        src = ScaledFixed(
            matrix=HermitianMatrix.diagonal([1.0, 2.0]), law=Gamma(shape=2.0, rate=1.0)
        )
        out = analytic_mgf(src, 1.0)
        assert np.allclose(out.entries, np.diag([0.25, 1.0 / 9.0]), atol=1e-14)

    def test_bernoulli_diagonal_small_theta(self):
        src = BernoulliDiagonal(dim=3, p=0.5, scale=1.0)
        out = analytic_mgf(src, 1e-12)
        assert np.allclose(out.entries, np.eye(3), atol=1e-9)

    def test_unavailable_sources(self):
        assert analytic_mgf(BoundedRankOne(dim=2, bound=1.0), 1.0) is None
        assert analytic_mgf(Wishart(dim=2, dof=2), 1.0) is None

    def test_rejects_nonpositive_theta(self):
        src = BernoulliDiagonal(dim=1, p=0.5, scale=1.0)
        with pytest.raises(ValueError):
            analytic_mgf(src, 0.0)

    @pytest.mark.parametrize("factory", ALL_SOURCES[:5])
    def test_monotone_decreasing_in_theta(self, factory):
        src = factory()
        thetas = np.geomspace(1e-3, 1e2, 12)
        mats = [analytic_mgf(src, t).entries for t in thetas]
        for earlier, later in zip(mats, mats[1:]):
            diff = HermitianMatrix(later - earlier)
            assert lambda_max(diff) <= 1e-10

    @pytest.mark.parametrize("factory", ALL_SOURCES[:5])
    def test_output_pd_and_below_identity(self, factory):
        src = factory()
        for theta in (0.1, 1.0, 10.0):
            out = analytic_mgf(src, theta)
            assert lambda_min(out) > 0.0
            assert lambda_max(out) <= 1.0 + 1e-12


class TestEmpiricalMgf:
    def test_deterministic_source_exact(self):
        src = BernoulliDiagonal(dim=2, p=1.0, scale=1.5)
        for n in (1, 7):
            out = empirical_mgf(src, 0.8, n, RngStream(15))
            exact = expm(HermitianMatrix.identity(2).scaled(-0.8 * 1.5))
            assert np.abs(out.entries - exact.entries).max() <= 1e-12

    def test_single_sample_equals_expm_of_draw(self):
        src = Wishart(dim=2, dof=2)
        x1 = sample(src, RngStream(16))
        out = empirical_mgf(src, 0.7, 1, RngStream(16))
        assert np.abs(out.entries - expm(x1.scaled(-0.7)).entries).max() <= 1e-10

    def test_converges_to_analytic(self):
        src = ScaledFixed(matrix=HermitianMatrix.identity(2), law=Exponential(rate=1.0))
        n = 100_000
        out = empirical_mgf(src, 1.0, n, RngStream(17))
        # entries are means of exp(-x) draws: var = 1/3 - 1/4 = 1/12
        se = math.sqrt((1.0 / 12.0) / n)
        assert np.abs(out.entries - 0.5 * np.eye(2)).max() <= 3.0 * se

    def test_output_pd_and_below_identity(self):
        for factory in (lambda: BoundedRankOne(dim=3, bound=1.0), lambda: Wishart(dim=3, dof=3)):
            out = empirical_mgf(factory(), 2.0, 500, RngStream(18))
            assert lambda_min(out) > 0.0
            assert lambda_max(out) <= 1.0 + 1e-10


class TestMgfModel:
    def test_analytic_mode_raises_for_unavailable(self):
        model = MgfModel(mode="analytic")
        with pytest.raises(MgfUnavailableError, match="wishart"):
            model.evaluate(Wishart(dim=2, dof=2), 1.0)

    def test_empirical_snapshot_is_fixed_and_seeded(self):
        src = Wishart(dim=2, dof=3)
        model = MgfModel(mode="empirical", n_samples=64, seed=3)
        first = model.evaluate(src, 1.0)
        again = model.evaluate(src, 1.0)
        assert np.array_equal(first.entries, again.entries)
        # first-seen source uses substream (seed, mgf purpose, 0)
        manual = empirical_mgf(src, 1.0, 64, RngStream(3).child(1).child(0))
        assert np.abs(first.entries - manual.entries).max() <= 1e-12

    def test_empirical_snapshots_distinct_per_source(self):
        a, b = Wishart(dim=2, dof=3), Wishart(dim=2, dof=3)
        model = MgfModel(mode="empirical", n_samples=64, seed=3)
        assert not np.array_equal(
            model.evaluate(a, 1.0).entries, model.evaluate(b, 1.0).entries
        )

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            MgfModel(mode="symbolic")
        with pytest.raises(ValueError):
            MgfModel(mode="empirical", n_samples=0)


class TestSumSource:
    def test_mean_and_bound_aggregate(self):
        model = iid_model(lambda: BernoulliDiagonal(dim=2, p=0.5, scale=1.0), 4)
        view = SumSource(model)
        assert np.allclose(view.mean().entries, 2.0 * np.eye(2))
        assert view.uniform_bound() == pytest.approx(4.0)

    def test_analytic_mgf_only_for_single_source(self):
        one = SumModel(sources=(BernoulliDiagonal(dim=1, p=0.5, scale=1.0),))
        two = iid_model(lambda: BernoulliDiagonal(dim=1, p=0.5, scale=1.0), 2)
        assert SumSource(one).analytic_mgf(1.0) is not None
        assert SumSource(two).analytic_mgf(1.0) is None


class TestReproducibility:
    def test_identical_streams_bit_identical(self):
        src = BoundedRankOne(dim=3, bound=1.0)
        a = sample_batch(src, RngStream(42).child(5), 100)
        b = sample_batch(src, RngStream(42).child(5), 100)
        assert np.array_equal(a, b)

    def test_child_streams_are_memoized(self):
        root = RngStream(1)
        assert root.child(2) is root.child(2)
        first = root.child(2).generator.random(3)
        second = root.child(2).generator.random(3)
        assert not np.array_equal(first, second)

    def test_substream_rank_correlation_negligible(self):
        root = RngStream(2024)
        a = root.child(0).generator.random(10_000)
        b = root.child(1).generator.random(10_000)
        rho = scipy.stats.spearmanr(a, b).statistic
        assert abs(rho) < 0.02
