#pragma once

#include <array>

#include "pfbell/fp_quadrature.hpp"

namespace pfbell::lhv {

// The model constants and the logarithmic identities tying them together:
//   27 c^4 = 1,  ln beta = c,  2 ln f - ln beta = -1.
struct ModelConstants {
  double c;     // 3^{-3/4}
  double beta;  // exp(c)
  double f;     // exp((c - 1) / 2)

  static ModelConstants canonical();
  // Derive beta and f from an explicit c (used for negative testing).
  static ModelConstants from_c(double c);

  double residual_norm() const;  // 27 c^4 - 1
  double residual_beta() const;  // ln beta - c
  double residual_f() const;     // 2 ln f - ln beta + 1
  bool well_formed(double tol = 1e-12) const;
};

struct UnitVector3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double dot(const UnitVector3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  bool is_unit(double tol = 1e-9) const;
  double component(int k) const;  // k in {1,2,3}

  static UnitVector3 normalized(double x, double y, double z);
  // Direction at angle theta from +z in the x-z plane.
  static UnitVector3 from_plane_angle_deg(double theta_deg);
};

// One assignment of the nine hidden variables.
struct HiddenSample {
  std::array<int, 3> n{1, 1, 1};           // each in {1,2,3}
  std::array<double, 4> lambda{};          // each in [-beta, beta]
  double chi = 0.0;                        // unbounded
  std::array<double, 2> eta{};             // each in [-1, 1]

  bool valid(const ModelConstants& k) const;
};

struct MomentReport {
  double norm;
  double mean_A;
  double mean_B;
  double mean_A2;
  double mean_B2;
  double corr_AB;
};

// sign(x) = +1 for x >= 0, -1 for x < 0
int sign_conv(double x);
// theta(x) = 1 for x > 0, 1/2 for x = 0, 0 for x < 0
double theta(double x);

int detector_a(const UnitVector3& a, const HiddenSample& s, const ModelConstants& k);
int detector_b(const UnitVector3& b, const HiddenSample& s, const ModelConstants& k);

// int_{-1}^{1} sign(u - eta) d eta = 2u for |u| <= 1
double eta_mean(double u);
// (2pi)^{-1/2} int exp(-chi^2/2) sign(chi)^p d chi: 0 for p=1, 1 for p=2
double gaussian_sign_moment(int p);

enum class Moment { norm, A, B, A2, B2, AB };

// Values of the four lambda factors entering the factorized moments.
// plain[tau]       stands for   Fp int  1 / lambda_tau
// signed_step[tau] stands for   Fp int  sign(f - lambda_tau) / lambda_tau
// (or their epsilon-regularized / Monte-Carlo counterparts).
struct LambdaFactors {
  std::array<double, 4> plain{};
  std::array<double, 4> signed_step{};
};

// Assembles one moment from its factors: n-sums outermost, then eta means,
// then the given lambda factors, then the chi moments, times the global 1/4.
double assemble_moment(Moment which, const UnitVector3& a, const UnitVector3& b,
                       const LambdaFactors& lam);

// All six moments with the lambda factors taken from the closed-form finite
// parts of fp_quadrature.
MomentReport analytic_moments(const UnitVector3& a, const UnitVector3& b,
                              const ModelConstants& k = ModelConstants::canonical());

// g = 1 on (0, beta)
fp::PiecewiseWeight unit_weight(const ModelConstants& k);
// g = sign(f - lambda) on (0, beta)
fp::PiecewiseWeight sign_step_weight(const ModelConstants& k);

}  // namespace pfbell::lhv
