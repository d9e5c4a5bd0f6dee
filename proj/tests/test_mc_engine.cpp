#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "pfbell/fp_quadrature.hpp"
#include "pfbell/mc_engine.hpp"
#include "oracles.hpp"

using namespace pfbell;
using lhv::Moment;
using lhv::UnitVector3;
using mc::EpsilonGrid;
using mc::FactorKind;
using mc::McConfig;
using mc::SweepFit;
using mc::SweepMode;

namespace {

const lhv::ModelConstants kC = lhv::ModelConstants::canonical();
const UnitVector3 kZhat{0.0, 0.0, 1.0};

bool fits_identical(const SweepFit& x, const SweepFit& y) {
  if (x.degree != y.degree) return false;
  if (std::memcmp(&x.finite_part, &y.finite_part, sizeof(double)) != 0) return false;
  if (std::memcmp(&x.finite_part_err, &y.finite_part_err, sizeof(double)) != 0)
    return false;
  if (x.coefficients != y.coefficients) return false;
  if (x.estimates.size() != y.estimates.size()) return false;
  for (std::size_t i = 0; i < x.estimates.size(); ++i) {
    if (std::memcmp(&x.estimates[i].mean, &y.estimates[i].mean, sizeof(double)) != 0)
      return false;
    if (std::memcmp(&x.estimates[i].std_err, &y.estimates[i].std_err,
                    sizeof(double)) != 0)
      return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("mc_engine");

TEST_CASE("epsilon grid") {
  EpsilonGrid g = EpsilonGrid::log_spaced(1e-2, 1e-6, 8);
  REQUIRE(g.values.size() == 8);
  CHECK(g.values.front() == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(g.values.back() == doctest::Approx(1e-6).epsilon(1e-12));
  for (std::size_t i = 1; i < g.values.size(); ++i)
    CHECK(g.values[i] < g.values[i - 1]);
  CHECK_NOTHROW(g.validate(kC));

  EpsilonGrid bad;
  bad.values = {1e-2, 1e-2};
  CHECK_THROWS_AS(bad.validate(kC), std::domain_error);
  EpsilonGrid beyond;
  beyond.values = {0.9};
  CHECK_THROWS_AS(beyond.validate(kC), std::domain_error);
}

TEST_CASE("sample_lambda draws and weight") {
  rng::CountingRng r(rng::Stream{5, 4, 0});
  double lnratio = std::log(kC.beta / 1e-3);
  for (int i = 0; i < 10000; ++i) {
    auto [lambda, weight] = mc::sample_lambda(1e-3, r, kC);
    CHECK(lambda >= 1e-3);
    CHECK(lambda <= kC.beta * (1.0 + 1e-12));
    CHECK(weight == lnratio);
  }
  rng::CountingRng r2(rng::Stream{5, 4, 1});
  CHECK_THROWS_AS(mc::sample_lambda(2.0, r2, kC), std::domain_error);
  CHECK_THROWS_AS(mc::sample_lambda(0.0, r2, kC), std::domain_error);
}

TEST_CASE("sample_lambda signed-step mean over many draws") {
  // E[weight * sign(f - lambda)] = -1 - ln(eps)
  rng::CountingRng r(rng::Stream{17, 4, 2});
  const double eps = 1e-2;
  const std::uint64_t n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto [lambda, weight] = mc::sample_lambda(eps, r, kC);
    double v = weight * lhv::sign_conv(kC.f - lambda);
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n;
  double se = std::sqrt((sumsq / n - mean * mean) / (n - 1));
  double want = -1.0 - std::log(eps);  // 3.605170185988091, frozen
  CHECK(std::abs(mean - want) <= 4.0 * se);
  CHECK(want == doctest::Approx(3.605170185988091368).epsilon(1e-15));
}

TEST_CASE("estimate_factor plain is exact with zero variance") {
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    mc::FactorEstimate e = mc::estimate_factor(FactorKind::plain, eps, 1000, 3);
    CHECK(e.std_err == 0.0);
    CHECK(e.mean == doctest::Approx(kC.c - std::log(eps)).epsilon(1e-13));
  }
}

TEST_CASE("estimate_factor signed is unbiased within monte-carlo error") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    double eps = 1e-4;
    mc::FactorEstimate e =
        mc::estimate_factor(FactorKind::signed_step, eps, 100000, seed);
    double want = -1.0 - std::log(eps);
    CHECK(e.std_err > 0.0);
    CHECK(std::abs(e.mean - want) <= 4.0 * e.std_err);
  }
}

TEST_CASE("estimate_factor rejects bad input") {
  CHECK_THROWS_AS(mc::estimate_factor(FactorKind::plain, kC.f, 100, 0),
                  std::domain_error);
  CHECK_THROWS_AS(mc::estimate_factor(FactorKind::plain, 0.9, 100, 0),
                  std::domain_error);
  CHECK_THROWS_AS(mc::estimate_factor(FactorKind::signed_step, 1e-3, 0, 0),
                  std::domain_error);
  CHECK_THROWS_AS(mc::estimate_factor(FactorKind::signed_step, 1e-3, 1, 0),
                  std::domain_error);
}

TEST_CASE("joint estimator matches the frozen factor closed forms") {
  const double eps = 1e-2;
  // norm observable: every sample carries the full constant weight
  mc::FactorEstimate norm =
      mc::estimate_moment_joint(kZhat, kZhat, Moment::norm, eps, 3000, 11);
  CHECK(norm.std_err == 0.0);
  // 27 (C - ln eps)^4, frozen from the 40-digit factor oracle
  CHECK(norm.mean == doctest::Approx(17474.967760161814955).epsilon(1e-12));

  // AB at aligned settings: expectation -(1 + |ln eps|)^4
  mc::FactorEstimate ab =
      mc::estimate_moment_joint(kZhat, kZhat, Moment::AB, eps, 400000, 12);
  CHECK(std::abs(ab.mean - (-168.92856136949227085)) <= 4.0 * ab.std_err);

  // A has zero mean at every eps
  mc::FactorEstimate ma =
      mc::estimate_moment_joint(kZhat, kZhat, Moment::A, eps, 200000, 13);
  CHECK(std::abs(ma.mean) <= 4.0 * ma.std_err);
}

TEST_CASE("joint estimator agrees with the brute-force oracle") {
  std::mt19937 rng_(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  UnitVector3 a = UnitVector3::normalized(gauss(rng_), gauss(rng_), gauss(rng_));
  UnitVector3 b = UnitVector3::normalized(gauss(rng_), gauss(rng_), gauss(rng_));
  const double eps = 1e-2;
  double oracle =
      test_oracles::regularized_moment_oracle(Moment::AB, a, b, eps, kC);
  mc::FactorEstimate est =
      mc::estimate_moment_joint(a, b, Moment::AB, eps, 400000, 9);
  CHECK(std::abs(est.mean - oracle) <= 4.0 * est.std_err);
}

TEST_CASE("extract_finite_part recovers exact polynomials") {
  // synthetic exact data: p(x) = 2.5 - x + 0.25 x^2 sampled on a grid
  std::vector<mc::FactorEstimate> est;
  for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5}) {
    double x = std::log(eps);
    est.push_back({eps, 2.5 - x + 0.25 * x * x, 0.0, 100, 0});
  }
  SweepFit fit = mc::extract_finite_part(est, 2);
  CHECK(fit.finite_part == doctest::Approx(2.5).epsilon(1e-10));
  REQUIRE(fit.coefficients.size() == 3);
  CHECK(fit.coefficients[0] == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(fit.coefficients[1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fit.coefficients[2] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(fit.finite_part_err == 0.0);

  CHECK_THROWS_AS(mc::extract_finite_part(est, 10), std::domain_error);
  std::vector<mc::FactorEstimate> beyond = est;
  beyond[0].epsilon = 0.9;
  CHECK_THROWS_AS(mc::extract_finite_part(beyond, 2), std::domain_error);
}

TEST_CASE("factor sweeps recover the two crucial finite parts") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-6, 8);
  McConfig cfg{20000, 7, 0};

  SweepFit plain = mc::run_factor_sweep(FactorKind::plain, grid, cfg, kC);
  CHECK(plain.finite_part == doctest::Approx(kC.c).epsilon(1e-9));
  REQUIRE(plain.coefficients.size() == 2);
  // counterterm: slope = -g(0+) = -1
  CHECK(plain.coefficients[1] == doctest::Approx(-1.0).epsilon(1e-9));

  SweepFit sgn = mc::run_factor_sweep(FactorKind::signed_step, grid, cfg, kC);
  CHECK(std::abs(sgn.finite_part - (-1.0)) <=
        std::max(0.05, 4.0 * sgn.finite_part_err));
  REQUIRE(sgn.coefficients.size() == 2);
  CHECK(std::abs(sgn.coefficients[1] - (-1.0)) <= 4.0 * sgn.coefficient_errs[1]);
}

TEST_CASE("factorized sweep recovers moments") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-6, 8);
  McConfig cfg{20000, 11, 0};

  SweepFit ab = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, cfg,
                              SweepMode::factorized, kC);
  CHECK(std::abs(ab.finite_part - (-1.0)) <=
        std::max(0.05, 4.0 * ab.finite_part_err));

  SweepFit norm = mc::run_sweep(kZhat, kZhat, Moment::norm, grid, cfg,
                                SweepMode::factorized, kC);
  CHECK(norm.finite_part == doctest::Approx(1.0).epsilon(1e-8));

  SweepFit zero = mc::run_sweep(kZhat, kZhat, Moment::A, grid, cfg,
                                SweepMode::factorized, kC);
  CHECK(std::abs(zero.finite_part) <= 1e-10);
}

TEST_CASE("joint sweep covers the nine-variable scheme") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-6, 8);
  McConfig cfg{20000, 5, 0};
  SweepFit ab =
      mc::run_sweep(kZhat, kZhat, Moment::AB, grid, cfg, SweepMode::joint, kC);
  CHECK(ab.finite_part_err > 0.0);
  CHECK(std::abs(ab.finite_part - (-1.0)) <= 4.0 * ab.finite_part_err);
}

TEST_CASE("orthogonal settings give zero correlation in joint mode") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-4, 5);
  McConfig cfg{20000, 19, 0};
  SweepFit fit = mc::run_sweep({1, 0, 0}, {0, 1, 0}, Moment::AB, grid, cfg,
                               SweepMode::joint, kC);
  CHECK(std::abs(fit.finite_part) <= 4.0 * fit.finite_part_err);
}

TEST_CASE("reproducibility: identical config gives identical bits") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-5, 5);
  McConfig one_thread{15000, 99, 1};
  McConfig four_threads{15000, 99, 4};
  SweepFit x = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, one_thread,
                             SweepMode::factorized, kC);
  SweepFit y = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, four_threads,
                             SweepMode::factorized, kC);
  CHECK(fits_identical(x, y));
  SweepFit z = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, four_threads,
                             SweepMode::factorized, kC);
  CHECK(fits_identical(y, z));

  SweepFit j1 = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, one_thread,
                              SweepMode::joint, kC);
  SweepFit j2 = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, four_threads,
                              SweepMode::joint, kC);
  CHECK(fits_identical(j1, j2));
}

TEST_CASE("propagated errors are calibrated") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-6, 8);
  for (SweepMode mode : {SweepMode::factorized, SweepMode::joint}) {
    int within2 = 0;
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      McConfig cfg{20000, seed, 0};
      SweepFit fit = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, cfg, mode, kC);
      double pull = std::abs(fit.finite_part - (-1.0)) / fit.finite_part_err;
      CHECK(pull <= 4.0);
      within2 += pull <= 2.0 ? 1 : 0;
    }
    // roughly 95% of pulls should land within two sigma
    CHECK(within2 >= 7);
  }
}

TEST_CASE("factorized mode has smaller propagated error than joint mode") {
  EpsilonGrid grid = EpsilonGrid::log_spaced(1e-2, 1e-5, 5);
  int factorized_wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    McConfig cfg{5000, seed, 0};
    SweepFit fct = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, cfg,
                                 SweepMode::factorized, kC);
    SweepFit jnt = mc::run_sweep(kZhat, kZhat, Moment::AB, grid, cfg,
                                 SweepMode::joint, kC);
    if (fct.finite_part_err < jnt.finite_part_err) ++factorized_wins;
  }
  CHECK(factorized_wins == 10);
}

TEST_SUITE_END();
