#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace pfbell::fp {

// Piecewise-constant weight g(lambda) on (0, upper]. Internally stored as
// edges 0 < t_1 < ... < t_K = upper with value v_i on the open cell
// (t_{i-1}, t_i); v_1 is the boundary value g(0+).
class PiecewiseWeight {
public:
  // breakpoints are the interior cell edges. Two accepted forms:
  //   values.size() == breakpoints.size() + 1  (implicit final cell up to upper)
  //   values.size() == breakpoints.size() and breakpoints.back() == upper
  PiecewiseWeight(double upper, std::vector<double> breakpoints,
                  std::vector<double> values);

  static PiecewiseWeight constant(double value, double upper);
  // +1 below split, -1 above, on (0, upper]. split == upper degenerates to
  // the constant weight +1.
  static PiecewiseWeight sign_step(double split, double upper);

  double upper() const { return upper_; }
  const std::vector<double>& edges() const { return edges_; }  // t_1..t_K
  const std::vector<double>& values() const { return values_; }
  double at_zero() const { return values_.front(); }
  // Smallest edge strictly below upper; returns upper when the weight is a
  // single cell.
  double first_breakpoint() const { return edges_.front(); }
  std::size_t cells() const { return values_.size(); }

  double operator()(double lambda) const;

private:
  double upper_;
  std::vector<double> edges_;
  std::vector<double> values_;
};

enum class FpMethod { closed_form, subtraction, regularized_extrapolation };

struct FinitePartValue {
  double value = 0.0;
  FpMethod method = FpMethod::closed_form;
  double error_estimate = 0.0;  // exactly 0 for closed_form
};

// Thrown when adaptive quadrature cannot reach the requested tolerance; the
// best estimate found so far is carried along.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double best, double err)
      : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

// Fp
//    int_0^b dl / l  =  ln b
FinitePartValue fp_reciprocal(double upper);

// Fp
//    int_0^b g(l)/l dl  =  g(0+) ln t_1 + sum_i v_i ln(t_i / t_{i-1})
FinitePartValue fp_piecewise(const PiecewiseWeight& g);

// Subtraction route for smooth bounded g:
//    Fp int_0^b g/l = int_0^b (g(l) - g(0+))/l dl + g(0+) ln b
FinitePartValue fp_smooth(const std::function<double(double)>& g,
                          double g_at_zero, double upper, double tol);

// I(eps) = int_eps^upper g(l)/l dl in closed form. Valid for
// 0 < eps < first interior breakpoint (or eps <= upper when g is a single
// cell); on that range I(eps) + g(0+) ln eps == fp_piecewise(g).value.
double regularize_fp(const PiecewiseWeight& g, double epsilon);

}  // namespace pfbell::fp
