#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pfbell/kernels/kernels.hpp"
#include "pfbell/lhv_model.hpp"

namespace pfbell::mc {

// Regularization grid: strictly decreasing epsilons inside (0, f), the range
// on which every regularized factor is exactly affine in ln(eps).
struct EpsilonGrid {
  std::vector<double> values;

  static EpsilonGrid log_spaced(double first, double last, int count);
  void validate(const lhv::ModelConstants& k) const;
};

enum class FactorKind { plain, signed_step };
enum class SweepMode { joint, factorized };

struct FactorEstimate {
  double epsilon = 0.0;
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct McConfig {
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
};

// One log-uniform draw on [epsilon, beta]: lambda = eps (beta/eps)^u with
// importance weight ln(beta/eps) against the 1/lambda target.
std::pair<double, double> sample_lambda(
    double epsilon, rng::CountingRng& rng,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

// Monte-Carlo mean of weight * g(lambda) with g = 1 (plain) or
// g = sign(f - lambda) (signed_step). Deterministic in (seed, substream,
// n_samples); independent of thread count.
FactorEstimate estimate_factor(
    FactorKind kind, double epsilon, std::uint64_t n_samples, std::uint64_t seed,
    std::uint64_t substream = 0, int threads = 0,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

// Full nine-variable estimator: per-sample value is the constant total
// weight 27 ln(beta/eps)^4 times the +-1 observable.
FactorEstimate estimate_moment_joint(
    const lhv::UnitVector3& a, const lhv::UnitVector3& b, lhv::Moment which,
    double epsilon, std::uint64_t n_samples, std::uint64_t seed,
    std::uint64_t substream = 0, int threads = 0,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

struct SweepFit {
  EpsilonGrid grid;
  std::vector<FactorEstimate> estimates;
  int degree = 0;
  double finite_part = 0.0;
  double finite_part_err = 0.0;
  std::vector<double> coefficients;      // power basis in x = ln(eps)
  std::vector<double> coefficient_errs;
};

// Weighted least-squares fit of the estimates against a degree-d polynomial
// in x = ln(eps) (centered abscissae for conditioning, then re-expanded);
// the finite part is the fitted value at x = 0.
SweepFit extract_finite_part(
    std::vector<FactorEstimate> estimates, int degree,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

SweepFit run_factor_sweep(
    FactorKind kind, const EpsilonGrid& grid, const McConfig& cfg,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

// factorized: the four lambda factors are estimated independently and
// combined with the analytic n/eta/chi factors. joint: the full nine-variable
// sampler.
SweepFit run_sweep(
    const lhv::UnitVector3& a, const lhv::UnitVector3& b, lhv::Moment which,
    const EpsilonGrid& grid, const McConfig& cfg, SweepMode mode,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

// Closed-form value a sweep should recover (per-moment analytic reference).
double analytic_reference(
    const lhv::UnitVector3& a, const lhv::UnitVector3& b, lhv::Moment which,
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

}  // namespace pfbell::mc
