#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freent/gue.hpp"
#include "freent/matrix_io.hpp"
#include "freent/microstates.hpp"
#include "freent/ncpoly.hpp"
#include "freent/rmt.hpp"
#include "freent/rng.hpp"
#include "freent/spectral_law.hpp"

using namespace freent;

namespace {
const double kHalfLog2PiE = 0.5 * std::log(2.0 * M_PI * std::exp(1.0));
}

TEST_CASE("keyed variates: deterministic, uniform in range, normal moments") {
  const NormalPair p1 = normal_pair(derive_key({42, 7}));
  const NormalPair p2 = normal_pair(derive_key({42, 7}));
  CHECK(p1.a == p2.a);
  CHECK(p1.b == p2.b);
  CHECK(normal_pair(derive_key({42, 8})).a != p1.a);
  CHECK(derive_key({1, 2}) != derive_key({2, 1}));

  const int count = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double u = uniform01(derive_key({99, std::uint64_t(i)}));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    const NormalPair z = normal_pair(derive_key({7, std::uint64_t(i)}));
    sum += z.a + z.b;
    sumsq += z.a * z.a + z.b * z.b;
  }
  const double mean = sum / (2 * count);
  const double var = sumsq / (2 * count) - mean * mean;
  CHECK(std::abs(mean) < 0.01);     // 3 sigma band for 2e5 draws is ~0.007
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("GUE samples: shape, Hermitian symmetry, reproducibility") {
  const GueSpec spec{6, 2, 123};
  const auto tup = sample_gue(spec, 5);
  REQUIRE(tup.size() == 2);
  for (const auto& s : tup) {
    REQUIRE(s.rows() == 6);
    CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  const auto again = sample_gue(spec, 5);
  CHECK((tup[0] - again[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((tup[1] - again[1]).cwiseAbs().maxCoeff() == 0.0);
  const auto other = sample_gue(spec, 6);
  CHECK((tup[0] - other[0]).cwiseAbs().maxCoeff() > 0.0);
  const GueSpec reseeded{6, 2, 124};
  CHECK((tup[0] - sample_gue(reseeded, 5)[0]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("GUE trace moments match the normalization") {
  const GueSpec spec{10, 1, 7};
  const int samples = 10000;
  std::vector<double> m1(samples), m2(samples);
  for (int s = 0; s < samples; ++s) {
    const auto tup = sample_gue(spec, s);
    m1[s] = tup[0].trace().real() / 10.0;
    m2[s] = (tup[0] * tup[0]).trace().real() / 10.0;
  }
  const MeanStderr a = mean_stderr(m1);
  const MeanStderr b = mean_stderr(m2);
  CHECK(std::abs(a.mean) <= 3.0 * a.stderr_);
  CHECK(std::abs(b.mean - 1.0) <= 3.0 * b.stderr_);
}

TEST_CASE("operator norm statistics across dimensions") {
  // scalar case: E|N(0,1)| = sqrt(2/pi)
  const MeanStderr one = opnorm_stat({1, 1, 11}, 4000);
  CHECK(std::abs(one.mean - std::sqrt(2.0 / M_PI)) <= 3.0 * one.stderr_);

  const MeanStderr big = opnorm_stat({200, 1, 11}, 50);
  CHECK(big.mean >= 1.9);
  CHECK(big.mean <= 2.2);

  const MeanStderr mid = opnorm_stat({20, 1, 11}, 200);
  CHECK(std::abs(big.mean - 2.0) < std::abs(mid.mean - 2.0));
}

TEST_CASE("exact Gaussian entropy: n cancels against the log n correction") {
  CHECK(gaussian_entropy_exact(zero_ensemble(3, 1, 1.0, 0)) ==
        doctest::Approx(kHalfLog2PiE).epsilon(1e-12));
  CHECK(gaussian_entropy_exact(zero_ensemble(50, 1, 1.0, 0)) ==
        doctest::Approx(kHalfLog2PiE).epsilon(1e-12));
  CHECK(gaussian_entropy_exact(zero_ensemble(3, 2, 1.0, 0)) ==
        doctest::Approx(2.0 * kHalfLog2PiE).epsilon(1e-12));
  CHECK(gaussian_entropy_exact(zero_ensemble(4, 1, std::exp(1.0) / (2.0 * M_PI), 0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gaussian_entropy_exact(zero_ensemble(4, 1, 1.0 / (2.0 * M_PI), 0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(zero_ensemble(3, 1, 0.0, 0), std::invalid_argument);
}

TEST_CASE("score: zero at the center, Fisher mean m/t") {
  auto ens = zero_ensemble(10, 1, 2.0, 31);
  const auto at_center = gaussian_score(ens, ens.center);
  CHECK(at_center[0].cwiseAbs().maxCoeff() == 0.0);

  const FisherEstimate est = fisher_mc(ens, 10000);
  CHECK(std::abs(est.value - 0.5) <= 3.0 * est.stderr_);
  CHECK(est.normalization == "I^(n) = n^-4 I");

  // same seed means common draws, so the 1/t scaling is exact termwise and
  // the t-ordering of the Fisher values is strict
  const FisherEstimate t1 = fisher_mc(zero_ensemble(10, 1, 1.0, 31), 2000);
  const FisherEstimate t2 = fisher_mc(zero_ensemble(10, 1, 2.0, 31), 2000);
  const FisherEstimate t4 = fisher_mc(zero_ensemble(10, 1, 4.0, 31), 2000);
  CHECK(t2.value == doctest::Approx(0.5 * t1.value).epsilon(1e-12));
  CHECK(t1.value > t2.value);
  CHECK(t2.value > t4.value);
}

TEST_CASE("pure GUE reproduces the semicircular entropy and Fisher at any n") {
  for (int n : {4, 16}) {
    auto ens = zero_ensemble(n, 2, 1.0, 5);
    CHECK(gaussian_entropy_exact(ens) ==
          doctest::Approx(2.0 * kHalfLog2PiE).epsilon(1e-12));
    const FisherEstimate fi = fisher_mc(ens, 3000);
    CHECK(std::abs(fi.value - 2.0) <= 3.0 * fi.stderr_);
  }
}

TEST_CASE("Monte Carlo entropy agrees with the closed form") {
  auto ens = zero_ensemble(8, 1, 1.0, 77);
  const EntropyEstimate est = entropy_mc(ens, 10000);
  CHECK(std::abs(est.value - kHalfLog2PiE) <= 3.0 * est.stderr_);
  CHECK(est.stderr_ < 0.01);
  CHECK(est.normalization == "h^(n) = n^-2 h + m log n");
  CHECK(est.n == 8);
  CHECK(est.samples == 10000);
}

TEST_CASE("mixture with identical components collapses to the pure Gaussian") {
  const int n = 6;
  auto ens = zero_ensemble(n, 1, 0.7, 13);
  GaussianMixture twin = make_mixture(
      {{0.3, ens.center, 0.7}, {0.7, ens.center, 0.7}}, 13);
  const EntropyEstimate a = entropy_mc(ens, 500);
  const EntropyEstimate b = entropy_mc(twin, 500);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("mixture entropy obeys the variance bound") {
  const int n = 8;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  GaussianMixture mix = make_mixture(
      {{0.5, {eye}, 0.5}, {0.5, {-eye}, 0.5}}, 99);
  const double var = mixture_trace_variance(mix);
  CHECK(var == doctest::Approx(1.5).epsilon(1e-12));  // 0.5 + spread 1
  const EntropyEstimate est = entropy_mc(mix, 4000);
  const double bound = 0.5 * std::log(2.0 * M_PI * std::exp(1.0) * var);
  CHECK(est.value <= bound + 3.0 * est.stderr_);
  // and it is a genuine two-bump estimate, above either single component
  CHECK(est.value > 0.5 * std::log(2.0 * M_PI * std::exp(1.0) * 0.5));
}

TEST_CASE("mixture validation") {
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(make_mixture({{0.5, {eye}, 1.0}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_mixture({{1.0, {eye}, -1.0}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_mixture({}, 0), std::invalid_argument);
}

TEST_CASE("score integration by parts: closed-form cases at n=20") {
  const int n = 20;
  const int samples = 2000;
  auto ens = zero_ensemble(n, 1, 1.0, 2718);
  const NCPoly x = NCPoly::variable(xvar(1));

  SUBCASE("f = x: both sides are the second moment") {
    const auto rows = ibp_check(ens, {x}, {}, samples);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rhs_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[0].rhs_stderr == doctest::Approx(0.0));
    CHECK(std::abs(rows[0].lhs_mean - 1.0) <= 3.0 * rows[0].lhs_stderr);
    CHECK(std::abs(rows[0].residual_mean) <= 3.0 * rows[0].residual_stderr);
  }

  SUBCASE("f = 1: both sides vanish in expectation") {
    const auto rows = ibp_check(ens, {NCPoly::one()}, {}, samples);
    CHECK(rows[0].rhs_mean == doctest::Approx(0.0));
    CHECK(std::abs(rows[0].lhs_mean) <= 3.0 * rows[0].lhs_stderr);
  }

  SUBCASE("f = x^2: odd moments put both sides at zero") {
    const auto rows = ibp_check(ens, {x * x}, {}, samples);
    CHECK(std::abs(rows[0].lhs_mean) <= 3.0 * rows[0].lhs_stderr);
    CHECK(std::abs(rows[0].rhs_mean) <= 3.0 * rows[0].rhs_stderr);
    CHECK(std::abs(rows[0].residual_mean) <= 3.0 * rows[0].residual_stderr);
  }

  SUBCASE("f = x^3: both sides at the finite-n fourth moment 2 + 1/n^2") {
    const auto rows = ibp_check(ens, {x * x * x}, {}, samples);
    const double want = 2.0 + 1.0 / double(n * n);
    CHECK(std::abs(rows[0].lhs_mean - want) <= 3.0 * rows[0].lhs_stderr);
    CHECK(std::abs(rows[0].rhs_mean - want) <= 3.0 * rows[0].rhs_stderr);
    CHECK(std::abs(rows[0].residual_mean) <= 3.0 * rows[0].residual_stderr);
  }
}

TEST_CASE("integration by parts resolves the 1/n^2 crossing term") {
  // second coordinate of f = x1 x2 x1: the tensor trace is tr_n(S1)^2, whose
  // mean 1/n^2 is small but statistically distinguishable from zero
  const int n = 20;
  auto ens = zero_ensemble(n, 2, 1.0, 314);
  const NCPoly w = NCPoly::monomial(
      Word{{xvar(1), xvar(2), xvar(1)}});
  const auto rows = ibp_check(ens, {w, w}, {}, 4000);
  REQUIRE(rows.size() == 2);
  const double want = 1.0 / double(n * n);
  CHECK(std::abs(rows[1].rhs_mean - want) <= 3.0 * rows[1].rhs_stderr);
  CHECK(rows[1].rhs_mean > 3.0 * rows[1].rhs_stderr);
  CHECK(std::abs(rows[1].residual_mean) <= 3.0 * rows[1].residual_stderr);
}

TEST_CASE("heat flow identity: entropy difference equals the Fisher integral") {
  CHECK(heat_flow_identity_residual(1, 1.0, std::exp(2.0)) <= 1e-8);
  CHECK(heat_flow_identity_residual(1, 1.0, 1.0) <= 1e-12);
  CHECK(heat_flow_identity_residual(3, 1.0, 2.0) <= 1e-8);
  // the closed-form sides themselves
  CHECK(0.5 * 1 * std::log(std::exp(2.0) / 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(heat_flow_identity_residual(1, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("freeness deviation table against the exact oracle") {
  const int n = 60;
  const int samples = 100;
  MatrixAssignment fixed;
  fixed[yvar(1)] = quantile_microstate(
      SpectralLaw::atoms({-1.0, 1.0}, {0.5, 0.5}), n);

  const std::vector<Word> words = {
      Word{{svar(1), svar(1)}},
      Word{{svar(1), svar(2), svar(1), svar(2)}},
      Word{{svar(1), svar(1), svar(2), svar(2)}},
      Word{{svar(1), yvar(1)}},
      Word{{svar(1)}},
  };
  const auto rows = freeness_deviation_table(n, 2, fixed, words, samples, 2025);
  REQUIRE(rows.size() == words.size());

  CHECK(rows[0].oracle == doctest::Approx(1.0));
  CHECK(rows[1].oracle == doctest::Approx(0.0));
  CHECK(rows[2].oracle == doctest::Approx(1.0));
  CHECK(rows[3].oracle == doctest::Approx(0.0));
  CHECK(rows[4].oracle == doctest::Approx(0.0));

  const double band_floor = 5.0 / double(n * n);
  for (const auto& r : rows)
    CHECK(r.deviation <= std::max(3.0 * r.stderr_, band_floor));

  // identical call reproduces the table bit for bit
  const auto again = freeness_deviation_table(n, 2, fixed, words, samples, 2025);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].mc_mean == again[i].mc_mean);
    CHECK(rows[i].stderr_ == again[i].stderr_);
  }

  CHECK_THROWS_AS(freeness_deviation_table(n, 1, {}, {Word{{svar(2)}}}, 10, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(freeness_deviation_table(n, 1, {}, {Word{{yvar(3)}}}, 10, 0),
                  std::invalid_argument);
}

TEST_CASE("matrix JSON round trip") {
  Eigen::MatrixXcd m(2, 3);
  m << cplx{1, 2}, cplx{0, -1}, cplx{3, 0}, cplx{-2, 0.5}, cplx{0, 0}, cplx{7, -7};
  const nlohmann::json j = matrix_to_json(m);
  const Eigen::MatrixXcd back = matrix_from_json(j);
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,2]]")),
                  std::invalid_argument);
}

TEST_CASE("ensemble and sampling validation") {
  CHECK_THROWS_AS(make_ensemble({}, 1.0, 0), std::invalid_argument);
  Eigen::MatrixXcd bad(2, 2);
  bad << cplx{0, 0}, cplx{1, 0}, cplx{0, 0}, cplx{0, 0};
  CHECK_THROWS_AS(make_ensemble({bad}, 1.0, 0), std::invalid_argument);
  auto ens = zero_ensemble(4, 2, 1.0, 0);
  CHECK_THROWS_AS(gaussian_score(ens, {ens.center[0]}), std::invalid_argument);
  CHECK_THROWS_AS(ibp_check(ens, {NCPoly::one()}, {}, 10), std::invalid_argument);
}
