#include <doctest.h>

#include <cmath>
#include <random>

#include "pfbell/bell_audit.hpp"

using namespace pfbell;
using bell::ChshSettings;
using bell::CorrelationSource;
using lhv::UnitVector3;

namespace {

const double kTsirelson = 2.8284271247461900976;  // 2 sqrt(2), frozen
const lhv::ModelConstants kC = lhv::ModelConstants::canonical();

UnitVector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-3) return {x / n, y / n, z / n};
  }
}

}  // namespace

TEST_SUITE_BEGIN("bell_audit");

TEST_CASE("correlation sources") {
  CorrelationSource q = CorrelationSource::quantum();
  CorrelationSource m = CorrelationSource::model_analytic();
  UnitVector3 zhat{0, 0, 1};
  CHECK(q.correlation(zhat, zhat) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(m.correlation({1, 0, 0}, {0, 1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(q.correlation({0, 0, 2}, zhat), std::domain_error);

  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    UnitVector3 a = random_unit(rng), b = random_unit(rng);
    CHECK(m.correlation(a, b) == doctest::Approx(q.correlation(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("chsh value at the standard settings") {
  ChshSettings s = ChshSettings::tsirelson();
  double sq = bell::chsh_value(s, CorrelationSource::quantum());
  double sm = bell::chsh_value(s, CorrelationSource::model_analytic());
  CHECK(std::abs(sq - kTsirelson) <= 1e-12);
  CHECK(std::abs(sm - kTsirelson) <= 1e-12);
  CHECK(sq > 2.0);  // the violation
  CHECK(sm > 2.0);
}

TEST_CASE("degenerate settings saturate the classical bound") {
  UnitVector3 zhat{0, 0, 1};
  ChshSettings s{zhat, zhat, zhat, zhat};
  CHECK(bell::chsh_value(s, CorrelationSource::quantum()) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("tsirelson bound holds over random settings") {
  CorrelationSource q = CorrelationSource::quantum();
  std::mt19937_64 rng(1414);
  for (int trial = 0; trial < 1000000; ++trial) {
    ChshSettings s{random_unit(rng), random_unit(rng), random_unit(rng),
                   random_unit(rng)};
    double val = bell::chsh_value(s, q);
    CHECK(val <= kTsirelson + 1e-9);
  }
}

TEST_CASE("coarse 45-degree grid finds the standard settings exactly") {
  bell::SearchResult r =
      bell::max_violation_search(CorrelationSource::quantum(), 45.0, {false, 0});
  CHECK(r.s_max == doctest::Approx(kTsirelson).epsilon(1e-12));
  REQUIRE(r.angles_deg.has_value());
  // the returned settings reproduce the reported maximum
  CHECK(bell::chsh_value(r.settings, CorrelationSource::quantum()) ==
        doctest::Approx(r.s_max).epsilon(1e-12));
}

TEST_CASE("search with refinement approaches the bound") {
  bell::SearchResult q =
      bell::max_violation_search(CorrelationSource::quantum(), 5.0, {true, 0});
  CHECK(std::abs(q.s_max - kTsirelson) <= 1e-6);
  CHECK(q.s_max <= kTsirelson + 1e-9);

  bell::SearchResult m = bell::max_violation_search(
      CorrelationSource::model_analytic(), 5.0, {true, 0});
  CHECK(m.s_max == doctest::Approx(q.s_max).epsilon(1e-12));
}

TEST_CASE("search input validation") {
  CHECK_THROWS_AS(bell::max_violation_search(CorrelationSource::quantum(), 0.0),
                  std::domain_error);
  bell::McSourceConfig mc_cfg;
  mc_cfg.grid = mc::EpsilonGrid::log_spaced(1e-2, 1e-4, 4);
  mc_cfg.cfg = {1000, 1, 1};
  CHECK_THROWS_AS(bell::max_violation_search(
                      CorrelationSource::model_mc(std::move(mc_cfg)), 45.0),
                  std::domain_error);
}

TEST_CASE("full sphere search stays below the bound and near it") {
  bell::SearchResult r =
      bell::full_sphere_search(CorrelationSource::quantum(), 20000, 4, true);
  CHECK(r.s_max <= kTsirelson + 1e-9);
  CHECK(r.s_max >= 2.8);
}

TEST_CASE("paradox report") {
  bell::ParadoxReport r = bell::paradox_report();
  CHECK(r.lhs_abs_finite_part == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rhs_bound == doctest::Approx(0.43869133765083082).epsilon(1e-12));
  CHECK(r.contradiction);
  CHECK(!r.interpretation.empty());

  // degenerate: no sign flip inside the support
  lhv::ModelConstants no_flip = kC;
  no_flip.f = no_flip.beta;
  bell::ParadoxReport r1 = bell::paradox_report(no_flip);
  CHECK(r1.lhs_abs_finite_part == doctest::Approx(r1.rhs_bound).epsilon(1e-12));
  CHECK_FALSE(r1.contradiction);

  // degenerate: 2 ln f = ln beta, the signed finite part vanishes
  lhv::ModelConstants balanced = kC;
  balanced.f = std::sqrt(balanced.beta);
  bell::ParadoxReport r2 = bell::paradox_report(balanced);
  CHECK(std::abs(r2.lhs_abs_finite_part) <= 1e-12);
  CHECK_FALSE(r2.contradiction);
}

TEST_CASE("mc-backed correlation source smoke test") {
  bell::McSourceConfig cfg;
  cfg.grid = mc::EpsilonGrid::log_spaced(1e-2, 1e-5, 5);
  cfg.cfg = {20000, 21, 0};
  cfg.mode = mc::SweepMode::factorized;
  CorrelationSource src = CorrelationSource::model_mc(std::move(cfg));
  UnitVector3 zhat{0, 0, 1};
  double c = src.correlation(zhat, zhat);
  CHECK(std::abs(c - (-1.0)) <= 0.1);
}

TEST_SUITE_END();
