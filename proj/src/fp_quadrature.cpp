#include "pfbell/fp_quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <utility>

namespace pfbell::fp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

PiecewiseWeight::PiecewiseWeight(double upper, std::vector<double> breakpoints,
                                 std::vector<double> values)
    : upper_(upper), edges_(std::move(breakpoints)), values_(std::move(values)) {
  require(std::isfinite(upper_) && upper_ > 0.0, "PiecewiseWeight: upper must be positive");
  require(!values_.empty(), "PiecewiseWeight: at least one cell value required");
  if (values_.size() == edges_.size() + 1) {
    edges_.push_back(upper_);
  } else {
    require(values_.size() == edges_.size() && !edges_.empty() && edges_.back() == upper_,
            "PiecewiseWeight: values/breakpoints arity mismatch");
  }
  double prev = 0.0;
  for (double t : edges_) {
    require(std::isfinite(t) && t > prev, "PiecewiseWeight: breakpoints must be strictly increasing in (0, upper]");
    require(t <= upper_, "PiecewiseWeight: breakpoint beyond upper");
    prev = t;
  }
  for (double v : values_) require(std::isfinite(v), "PiecewiseWeight: non-finite value");
}

PiecewiseWeight PiecewiseWeight::constant(double value, double upper) {
  return PiecewiseWeight(upper, {}, {value});
}

PiecewiseWeight PiecewiseWeight::sign_step(double split, double upper) {
  require(split > 0.0 && split <= upper, "sign_step: split must lie in (0, upper]");
  if (split == upper) return constant(1.0, upper);
  return PiecewiseWeight(upper, {split}, {1.0, -1.0});
}

double PiecewiseWeight::operator()(double lambda) const {
  require(lambda > 0.0 && lambda <= upper_, "PiecewiseWeight: argument outside (0, upper]");
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (lambda <= edges_[i]) return values_[i];
  return values_.back();
}

FinitePartValue fp_reciprocal(double upper) {
  require(std::isfinite(upper) && upper > 0.0, "fp_reciprocal: upper must be positive");
  return {std::log(upper), FpMethod::closed_form, 0.0};
}

FinitePartValue fp_piecewise(const PiecewiseWeight& g) {
  const auto& t = g.edges();
  const auto& v = g.values();
  double acc = v[0] * std::log(t[0]);
  for (std::size_t i = 1; i < v.size(); ++i) acc += v[i] * std::log(t[i] / t[i - 1]);
  return {acc, FpMethod::closed_form, 0.0};
}

FinitePartValue fp_smooth(const std::function<double(double)>& g,
                          double g_at_zero, double upper, double tol) {
  require(std::isfinite(upper) && upper > 0.0, "fp_smooth: upper must be positive");
  require(std::isfinite(tol) && tol > 0.0, "fp_smooth: tol must be positive");
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto subtracted = [&](double l) { return (g(l) - g_at_zero) / l; };
  const double counterterm = g_at_zero * std::log(upper);
  double err = 0.0;
  double integral = gk::integrate(subtracted, 0.0, upper, /*max_depth=*/26,
                                  /*rel_tol=*/tol, &err);
  double value = integral + counterterm;
  if (err <= tol && std::isfinite(value)) return {value, FpMethod::subtraction, err};
  // The Gauss-Kronrod estimator is far too pessimistic near a jump even when
  // the refined value has long converged; certify with a two-depth
  // difference instead.
  double err_lo = 0.0;
  double integral_lo =
      gk::integrate(subtracted, 0.0, upper, /*max_depth=*/20, /*rel_tol=*/tol, &err_lo);
  double diff = std::abs(integral - integral_lo);
  if (diff <= 0.5 * tol && std::isfinite(value))
    return {value, FpMethod::subtraction, diff};
  throw QuadratureError("fp_smooth: quadrature did not converge to tolerance",
                        value, std::min(err, diff));
}

double regularize_fp(const PiecewiseWeight& g, double epsilon) {
  require(std::isfinite(epsilon) && epsilon > 0.0, "regularize_fp: epsilon must be positive");
  const auto& t = g.edges();
  const auto& v = g.values();
  if (g.cells() == 1) {
    // single-cell weights admit the whole (0, upper] range, including the
    // empty-interval boundary eps == upper
    require(epsilon <= g.upper(), "regularize_fp: epsilon beyond upper");
    return v[0] * std::log(t[0] / epsilon);
  }
  require(epsilon < g.first_breakpoint(),
          "regularize_fp: epsilon must lie below the first breakpoint");
  double acc = v[0] * std::log(t[0] / epsilon);
  for (std::size_t i = 1; i < v.size(); ++i) acc += v[i] * std::log(t[i] / t[i - 1]);
  return acc;
}

}  // namespace pfbell::fp
