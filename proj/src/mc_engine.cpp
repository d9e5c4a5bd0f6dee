#include "pfbell/mc_engine.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pfbell/kernels/vmath.hpp"

namespace pfbell::mc {

namespace {

// stream domains; substreams are caller-chosen (epsilon index etc.)
constexpr std::uint64_t kDomainFactorSigned = 2;
constexpr std::uint64_t kDomainJoint = 3;

constexpr std::uint64_t kCountBlock = 1 << 16;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

int effective_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Fixed block decomposition + exact integer reduction: the total is
// independent of worker count and completion order.
template <typename CountFn>
std::uint64_t parallel_count(std::uint64_t n, int threads, CountFn&& count_block) {
  int workers = effective_threads(threads);
  std::uint64_t blocks = (n + kCountBlock - 1) / kCountBlock;
  if (workers <= 1 || blocks <= 1) return count_block(0, n);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    std::uint64_t local = 0;
    for (;;) {
      std::uint64_t blk = next.fetch_add(1);
      if (blk >= blocks) break;
      std::uint64_t first = blk * kCountBlock;
      std::uint64_t cnt = std::min<std::uint64_t>(kCountBlock, n - first);
      local += count_block(first, cnt);
    }
    return local;
  };
  std::vector<std::future<std::uint64_t>> futs;
  for (int w = 1; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, worker));
  std::uint64_t total = worker();
  for (auto& f : futs) total += f.get();
  return total;
}

// mean and standard error of n values +-scale with n_plus positives
std::pair<double, double> signed_mean_err(double scale, std::uint64_t n_plus,
                                          std::uint64_t n) {
  double m_hat = (2.0 * static_cast<double>(n_plus) - static_cast<double>(n)) /
                 static_cast<double>(n);
  double var_unit = std::max(0.0, 1.0 - m_hat * m_hat);
  double se = std::abs(scale) * std::sqrt(var_unit / static_cast<double>(n - 1));
  return {scale * m_hat, se};
}

// weighted least squares against a polynomial in x = ln(eps); centered
// abscissae for conditioning, coefficients and covariance re-expanded to the
// power basis
struct PolyFit {
  Eigen::VectorXd coeff;
  Eigen::MatrixXd cov;
  bool weighted = false;
};

PolyFit wls_polyfit(const std::vector<FactorEstimate>& estimates, int degree) {
  const std::size_t n = estimates.size();
  const int m = degree + 1;
  Eigen::VectorXd x(n), y(n), sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i) = std::log(estimates[i].epsilon);
    y(i) = estimates[i].mean;
    sigma(i) = estimates[i].std_err;
  }
  double xbar = x.mean();
  double sigma_max = sigma.maxCoeff();
  bool weighted = sigma_max > 0.0;
  Eigen::VectorXd w(n);
  for (std::size_t i = 0; i < n; ++i)
    w(i) = weighted ? 1.0 / std::pow(std::max(sigma(i), 1e-12 * sigma_max), 2) : 1.0;

  Eigen::MatrixXd design(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double z = x(i) - xbar, p = 1.0;
    for (int j = 0; j < m; ++j) {
      design(i, j) = p;
      p *= z;
    }
  }
  Eigen::MatrixXd ws = w.cwiseSqrt().asDiagonal();
  Eigen::VectorXd c = (ws * design).colPivHouseholderQr().solve(ws * y);
  Eigen::MatrixXd cov_centered = Eigen::MatrixXd::Zero(m, m);
  if (weighted)
    cov_centered = (design.transpose() * w.asDiagonal() * design).inverse();

  // re-expand around zero: T(row, j) = C(j, row) (-xbar)^{j-row}
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    double binom = 1.0, pw = 1.0;
    for (int row = j; row >= 0; --row) {
      t(row, j) = binom * pw;
      binom = binom * row / (j - row + 1);
      pw *= -xbar;
    }
  }
  PolyFit fit;
  fit.coeff = t * c;
  fit.cov = weighted ? Eigen::MatrixXd(t * cov_centered * t.transpose())
                     : Eigen::MatrixXd::Zero(m, m);
  fit.weighted = weighted;
  return fit;
}

std::array<FactorKind, 4> factor_kinds(lhv::Moment which) {
  using M = lhv::Moment;
  switch (which) {
    case M::norm:
    case M::A2:
    case M::B2: return {FactorKind::plain, FactorKind::plain, FactorKind::plain, FactorKind::plain};
    case M::A: return {FactorKind::signed_step, FactorKind::signed_step, FactorKind::plain, FactorKind::plain};
    case M::B: return {FactorKind::plain, FactorKind::plain, FactorKind::signed_step, FactorKind::signed_step};
    case M::AB: return {FactorKind::signed_step, FactorKind::signed_step, FactorKind::signed_step, FactorKind::signed_step};
  }
  throw std::domain_error("factor_kinds: unknown moment");
}

void set_factor(lhv::LambdaFactors& lam, FactorKind kind, int tau, double v) {
  if (kind == FactorKind::plain)
    lam.plain[static_cast<std::size_t>(tau)] = v;
  else
    lam.signed_step[static_cast<std::size_t>(tau)] = v;
}

}  // namespace

EpsilonGrid EpsilonGrid::log_spaced(double first, double last, int count) {
  require(count >= 2, "EpsilonGrid: need at least two points");
  require(first > last && last > 0.0, "EpsilonGrid: need first > last > 0");
  EpsilonGrid g;
  double lf = std::log(first), ll = std::log(last);
  for (int i = 0; i < count; ++i)
    g.values.push_back(std::exp(lf + (ll - lf) * i / (count - 1)));
  return g;
}

void EpsilonGrid::validate(const lhv::ModelConstants& k) const {
  require(!values.empty(), "EpsilonGrid: empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(values[i] > 0.0 && values[i] < k.f,
            "EpsilonGrid: values must lie in (0, f)");
    if (i > 0)
      require(values[i] < values[i - 1],
              "EpsilonGrid: values must be strictly decreasing");
  }
}

std::pair<double, double> sample_lambda(double epsilon, rng::CountingRng& rng,
                                        const lhv::ModelConstants& k) {
  require(epsilon > 0.0 && epsilon < k.beta,
          "sample_lambda: epsilon must lie in (0, beta)");
  double lnratio = std::log(k.beta / epsilon);
  double u = rng.next_u01();
  // same transform the kernels apply
  double lambda = epsilon * vm::exp(u * lnratio);
  return {lambda, lnratio};
}

FactorEstimate estimate_factor(FactorKind kind, double epsilon,
                               std::uint64_t n_samples, std::uint64_t seed,
                               std::uint64_t substream, int threads,
                               const lhv::ModelConstants& k) {
  require(n_samples >= 2, "estimate_factor: need at least two samples");
  require(epsilon > 0.0 && epsilon < k.f,
          "estimate_factor: epsilon must lie in (0, f)");
  double lnratio = std::log(k.beta / epsilon);
  if (kind == FactorKind::plain) {
    // the log-uniform proposal matches the plain integrand exactly: every
    // sample contributes the constant weight, a zero-variance estimator
    return {epsilon, lnratio, 0.0, n_samples, seed};
  }
  kernels::FactorJob job;
  job.stream = rng::Stream{seed, kDomainFactorSigned, substream};
  job.eps = epsilon;
  job.lnratio = lnratio;
  job.f = k.f;
  const auto& ks = kernels::active_kernels();
  std::uint64_t n_plus = parallel_count(
      n_samples, threads,
      [&](std::uint64_t first, std::uint64_t cnt) {
        return ks.factor_count_plus(job, first, cnt);
      });
  auto [mean, se] = signed_mean_err(lnratio, n_plus, n_samples);
  return {epsilon, mean, se, n_samples, seed};
}

FactorEstimate estimate_moment_joint(const lhv::UnitVector3& a,
                                     const lhv::UnitVector3& b, lhv::Moment which,
                                     double epsilon, std::uint64_t n_samples,
                                     std::uint64_t seed, std::uint64_t substream,
                                     int threads, const lhv::ModelConstants& k) {
  require(n_samples >= 2, "estimate_moment_joint: need at least two samples");
  require(epsilon > 0.0 && epsilon < k.f,
          "estimate_moment_joint: epsilon must lie in (0, f)");
  if (!a.is_unit() || !b.is_unit())
    throw std::domain_error("estimate_moment_joint: settings must be unit vectors");
  double lnratio = std::log(k.beta / epsilon);
  kernels::JointJob job;
  job.stream = rng::Stream{seed, kDomainJoint, substream};
  job.eps = epsilon;
  job.lnratio = lnratio;
  job.f = k.f;
  job.a = {a.x, a.y, a.z};
  job.b = {b.x, b.y, b.z};
  job.which = which;
  const auto& ks = kernels::active_kernels();
  std::uint64_t n_plus = parallel_count(
      n_samples, threads,
      [&](std::uint64_t first, std::uint64_t cnt) {
        return ks.joint_count_plus(job, first, cnt);
      });
  // total weight: 1/4 (density prefactor) * 3^3 (n sums) * lnratio^4
  // (lambda factors) * 1 (chi) * 2^2 (eta volumes)
  double l2 = lnratio * lnratio;
  double weight = 0.25 * 27.0 * (l2 * l2) * 1.0 * 4.0;
  auto [mean, se] = signed_mean_err(weight, n_plus, n_samples);
  return {epsilon, mean, se, n_samples, seed};
}

SweepFit extract_finite_part(std::vector<FactorEstimate> estimates, int degree,
                             const lhv::ModelConstants& k) {
  require(degree >= 0, "extract_finite_part: negative degree");
  std::size_t n = estimates.size();
  require(n >= static_cast<std::size_t>(degree) + 1,
          "extract_finite_part: need at least degree+1 estimates");
  for (const auto& e : estimates)
    require(e.epsilon > 0.0 && e.epsilon < k.f,
            "extract_finite_part: epsilon outside (0, f)");
  for (std::size_t i = 1; i < n; ++i)
    require(estimates[i].epsilon != estimates[i - 1].epsilon,
            "extract_finite_part: duplicate epsilon");

  PolyFit fit = wls_polyfit(estimates, degree);
  const int m = degree + 1;
  SweepFit out;
  for (const auto& e : estimates) out.grid.values.push_back(e.epsilon);
  out.estimates = std::move(estimates);
  out.degree = degree;
  out.finite_part = fit.coeff(0);
  out.finite_part_err = std::sqrt(std::max(0.0, fit.cov(0, 0)));
  out.coefficients.assign(fit.coeff.data(), fit.coeff.data() + m);
  out.coefficient_errs.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    out.coefficient_errs[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, fit.cov(i, i)));
  return out;
}

SweepFit run_factor_sweep(FactorKind kind, const EpsilonGrid& grid,
                          const McConfig& cfg, const lhv::ModelConstants& k) {
  grid.validate(k);
  std::vector<FactorEstimate> est;
  for (std::size_t i = 0; i < grid.values.size(); ++i)
    est.push_back(estimate_factor(kind, grid.values[i], cfg.n_samples, cfg.seed,
                                  /*substream=*/i, cfg.threads, k));
  return extract_finite_part(std::move(est), /*degree=*/1, k);
}

SweepFit run_sweep(const lhv::UnitVector3& a, const lhv::UnitVector3& b,
                   lhv::Moment which, const EpsilonGrid& grid, const McConfig& cfg,
                   SweepMode mode, const lhv::ModelConstants& k) {
  grid.validate(k);
  if (!a.is_unit() || !b.is_unit())
    throw std::domain_error("run_sweep: settings must be unit vectors");

  if (mode == SweepMode::joint) {
    std::vector<FactorEstimate> est;
    for (std::size_t i = 0; i < grid.values.size(); ++i)
      est.push_back(estimate_moment_joint(a, b, which, grid.values[i],
                                          cfg.n_samples, cfg.seed,
                                          /*substream=*/i, cfg.threads, k));
    return extract_finite_part(std::move(est), /*degree=*/4, k);
  }

  // Factorized: each of the four lambda factors gets its own per-epsilon
  // estimates and its own degree-1 extraction (the regularized factor is
  // exactly affine in ln eps); the extracted finite parts then combine with
  // the analytic n/eta/chi factors.
  const auto kinds = factor_kinds(which);
  const std::size_t npts = grid.values.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::array<std::vector<FactorEstimate>, 4> factor_est;
  for (std::size_t i = 0; i < npts; ++i) {
    double eps = grid.values[i];
    for (int tau = 0; tau < 4; ++tau) {
      auto t = static_cast<std::size_t>(tau);
      factor_est[t].push_back(estimate_factor(kinds[t], eps, cfg.n_samples,
                                              cfg.seed, /*substream=*/i * 4 + t,
                                              cfg.threads, k));
    }
  }

  auto assemble_with = [&](const std::array<double, 4>& vals) {
    lhv::LambdaFactors lam;
    lam.plain.fill(nan);
    lam.signed_step.fill(nan);
    for (int tau = 0; tau < 4; ++tau)
      set_factor(lam, kinds[static_cast<std::size_t>(tau)], tau,
                 vals[static_cast<std::size_t>(tau)]);
    return lhv::assemble_moment(which, a, b, lam);
  };

  // per-epsilon combined values (reporting only; multilinear delta errors)
  std::vector<FactorEstimate> combined;
  for (std::size_t i = 0; i < npts; ++i) {
    std::array<double, 4> vals{};
    for (std::size_t t = 0; t < 4; ++t) vals[t] = factor_est[t][i].mean;
    double value = assemble_with(vals);
    double var = 0.0;
    for (std::size_t t = 0; t < 4; ++t) {
      std::array<double, 4> hi = vals, lo = vals;
      hi[t] = 1.0;
      lo[t] = 0.0;
      double d = assemble_with(hi) - assemble_with(lo);
      var += d * d * factor_est[t][i].std_err * factor_est[t][i].std_err;
    }
    combined.push_back(
        {grid.values[i], value, std::sqrt(var), cfg.n_samples, cfg.seed});
  }

  std::array<PolyFit, 4> fits;
  for (std::size_t t = 0; t < 4; ++t) fits[t] = wls_polyfit(factor_est[t], 1);
  std::array<double, 4> c0{}, c1{};
  for (std::size_t t = 0; t < 4; ++t) {
    c0[t] = fits[t].coeff(0);
    c1[t] = fits[t].coeff(1);
  }

  // The combined curve is exactly pref * prod_tau (c0 + c1 x): expand its
  // power-basis coefficients by subset enumeration (multilinearity).
  auto expand = [&](const std::array<double, 4>& a0, const std::array<double, 4>& a1) {
    std::array<double, 5> coeff{};
    for (int mask = 0; mask < 16; ++mask) {
      std::array<double, 4> vals{};
      int order = 0;
      for (int tau = 0; tau < 4; ++tau) {
        bool slope = (mask >> tau) & 1;
        order += slope ? 1 : 0;
        vals[static_cast<std::size_t>(tau)] =
            slope ? a1[static_cast<std::size_t>(tau)] : a0[static_cast<std::size_t>(tau)];
      }
      coeff[static_cast<std::size_t>(order)] += assemble_with(vals);
    }
    return coeff;
  };
  std::array<double, 5> coeff = expand(c0, c1);

  // exact partials with respect to the eight fitted parameters (the
  // coefficients are linear in each), then gaussian error propagation with
  // the per-factor 2x2 covariances
  std::array<double, 5> var{};
  for (std::size_t t = 0; t < 4; ++t) {
    std::array<double, 4> b0 = c0, b1 = c1;
    b0[t] += 1.0;
    std::array<double, 5> d0 = expand(b0, c1);
    b1[t] += 1.0;
    std::array<double, 5> d1 = expand(c0, b1);
    for (std::size_t m = 0; m < 5; ++m) {
      double g0 = d0[m] - coeff[m];
      double g1 = d1[m] - coeff[m];
      var[m] += g0 * g0 * fits[t].cov(0, 0) + 2.0 * g0 * g1 * fits[t].cov(0, 1) +
                g1 * g1 * fits[t].cov(1, 1);
    }
  }

  SweepFit out;
  out.grid = grid;
  out.estimates = std::move(combined);
  out.degree = 4;
  out.finite_part = coeff[0];
  out.finite_part_err = std::sqrt(std::max(0.0, var[0]));
  out.coefficients.assign(coeff.begin(), coeff.end());
  out.coefficient_errs.resize(5);
  for (std::size_t m = 0; m < 5; ++m)
    out.coefficient_errs[m] = std::sqrt(std::max(0.0, var[m]));
  return out;
}

double analytic_reference(const lhv::UnitVector3& a, const lhv::UnitVector3& b,
                          lhv::Moment which, const lhv::ModelConstants& k) {
  lhv::MomentReport r = lhv::analytic_moments(a, b, k);
  switch (which) {
    case lhv::Moment::norm: return r.norm;
    case lhv::Moment::A: return r.mean_A;
    case lhv::Moment::B: return r.mean_B;
    case lhv::Moment::A2: return r.mean_A2;
    case lhv::Moment::B2: return r.mean_B2;
    case lhv::Moment::AB: return r.corr_AB;
  }
  throw std::domain_error("analytic_reference: unknown moment");
}

}  // namespace pfbell::mc
