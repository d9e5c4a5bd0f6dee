#include <doctest.h>

#include <cmath>
#include <random>

#include "pfbell/json_io.hpp"
#include "pfbell/prob_space.hpp"

using namespace pfbell;
using prob::DomainSpec;
using prob::Event;

namespace {

const lhv::ModelConstants kC = lhv::ModelConstants::canonical();

}

TEST_SUITE_BEGIN("prob_space");

TEST_CASE("set_delta compares descriptors structurally") {
  DomainSpec canonical = DomainSpec::canonical(kC);
  CHECK(prob::set_delta(canonical, DomainSpec::canonical(kC)) == 1);

  DomainSpec wrong_lambda = canonical;
  wrong_lambda.lambda_range = prob::RealRange::interval(-1.0, 1.0);
  CHECK(prob::set_delta(canonical, wrong_lambda) == 0);

  DomainSpec wrong_n = canonical;
  wrong_n.n_range = {1, 2};
  CHECK(prob::set_delta(canonical, wrong_n) == 0);

  DomainSpec bounded_chi = canonical;
  bounded_chi.chi_range = prob::RealRange::interval(-1e308, 1e308);
  CHECK(prob::set_delta(canonical, bounded_chi) == 0);
}

TEST_CASE("gamma gate") {
  DomainSpec canonical = DomainSpec::canonical(kC);
  lhv::HiddenSample s;
  s.n = {1, 2, 3};
  s.lambda = {0.1, -0.2, kC.beta, -kC.beta};
  s.chi = -4.5;
  s.eta = {0.3, -0.9};
  CHECK(prob::gamma(s, canonical, kC));

  lhv::HiddenSample out_of_range = s;
  out_of_range.lambda[0] = 2.0 * kC.beta;
  CHECK_FALSE(prob::gamma(s, DomainSpec{}, kC));
  CHECK_FALSE(prob::gamma(out_of_range, canonical, kC));

  DomainSpec narrowed_eta = canonical;
  narrowed_eta.eta_range = prob::RealRange::interval(0.0, 1.0);
  CHECK_FALSE(prob::gamma(s, narrowed_eta, kC));
}

TEST_CASE("gamma equals the hidden-sample invariants over random samples") {
  DomainSpec canonical = DomainSpec::canonical(kC);
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> n_dist(-1, 5);
  std::uniform_real_distribution<double> lam(-2.0 * kC.beta, 2.0 * kC.beta);
  std::uniform_real_distribution<double> eta(-1.5, 1.5);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (int trial = 0; trial < 10000; ++trial) {
    lhv::HiddenSample s;
    s.n = {n_dist(rng), n_dist(rng), n_dist(rng)};
    s.lambda = {lam(rng), lam(rng), lam(rng), lam(rng)};
    s.chi = gauss(rng);
    s.eta = {eta(rng), eta(rng)};
    CHECK(prob::gamma(s, canonical, kC) == s.valid(kC));
    // purity: same inputs, same answer
    CHECK(prob::gamma(s, canonical, kC) == prob::gamma(s, canonical, kC));
  }
}

TEST_CASE("binary algebra closure") {
  CHECK(prob::EventAlgebra::complement(Event::universal) == Event::empty);
  CHECK(prob::EventAlgebra::complement(Event::empty) == Event::universal);
  CHECK(prob::EventAlgebra::union_of(Event::universal, Event::empty) == Event::universal);
  CHECK(prob::EventAlgebra::union_of(Event::empty, Event::empty) == Event::empty);
  CHECK(prob::EventAlgebra::intersect(Event::universal, Event::empty) == Event::empty);
  CHECK(prob::EventAlgebra::intersect(Event::universal, Event::universal) ==
        Event::universal);
}

TEST_CASE("domain spec serializes for audit logs") {
  nlohmann::json j = DomainSpec::canonical(kC);
  CHECK(j.at("n_range") == nlohmann::json({1, 2, 3}));
  CHECK(j.at("chi_range").at("kind") == "real_line");
  CHECK(j.at("lambda_range").at("hi").get<double>() ==
        doctest::Approx(kC.beta).epsilon(1e-15));
  CHECK(j.at("eta_range").at("lo").get<double>() == -1.0);
}

TEST_CASE("probability measure on the binary algebra") {
  double p_xi = prob::probability(Event::universal, kC);
  double p_empty = prob::probability(Event::empty, kC);
  CHECK(p_xi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(p_empty) <= 1e-12);
  // Kolmogorov on the two-event algebra
  CHECK(p_xi >= 0.0);
  CHECK(p_empty >= 0.0);
  CHECK(p_xi + p_empty == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
