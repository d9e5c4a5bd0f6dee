#include "pfbell/lhv_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfbell::lhv {

namespace {

constexpr double kEtaVolume = 2.0;  // length of the eta interval [-1, 1]

int kron(int p, int q) { return p == q ? 1 : 0; }

}  // namespace

ModelConstants ModelConstants::canonical() {
  return from_c(std::pow(3.0, -0.75));
}

ModelConstants ModelConstants::from_c(double c) {
  ModelConstants k;
  k.c = c;
  k.beta = std::exp(c);
  k.f = std::exp((c - 1.0) / 2.0);
  return k;
}

double ModelConstants::residual_norm() const { return 27.0 * c * c * c * c - 1.0; }
double ModelConstants::residual_beta() const { return std::log(beta) - c; }
double ModelConstants::residual_f() const { return 2.0 * std::log(f) - std::log(beta) + 1.0; }

bool ModelConstants::well_formed(double tol) const {
  return std::abs(residual_norm()) <= tol && std::abs(residual_beta()) <= tol &&
         std::abs(residual_f()) <= tol && 0.0 < f && f < 1.0 && 1.0 < beta;
}

double UnitVector3::norm() const { return std::sqrt(x * x + y * y + z * z); }

bool UnitVector3::is_unit(double tol) const { return std::abs(dot(*this) - 1.0) <= tol; }

double UnitVector3::component(int k) const {
  switch (k) {
    case 1: return x;
    case 2: return y;
    case 3: return z;
  }
  throw std::domain_error("UnitVector3: component index must be 1, 2 or 3");
}

UnitVector3 UnitVector3::normalized(double x, double y, double z) {
  double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::domain_error("UnitVector3: cannot normalize a zero or non-finite vector");
  return {x / n, y / n, z / n};
}

UnitVector3 UnitVector3::from_plane_angle_deg(double theta_deg) {
  double t = theta_deg * std::numbers::pi / 180.0;
  return {std::sin(t), 0.0, std::cos(t)};
}

bool HiddenSample::valid(const ModelConstants& k) const {
  for (int q : n)
    if (q < 1 || q > 3) return false;
  for (double l : lambda)
    if (!(std::abs(l) <= k.beta)) return false;
  if (!std::isfinite(chi)) return false;
  for (double e : eta)
    if (!(std::abs(e) <= 1.0)) return false;
  return true;
}

int sign_conv(double x) { return x >= 0.0 ? 1 : -1; }

double theta(double x) {
  if (x > 0.0) return 1.0;
  if (x == 0.0) return 0.5;
  return 0.0;
}

int detector_a(const UnitVector3& a, const HiddenSample& s, const ModelConstants& k) {
  int s1 = sign_conv(k.f - s.lambda[0]);
  int s2 = sign_conv(k.f - s.lambda[1]);
  double arg = kron(s.n[0], s.n[1]) * a.component(s.n[1]) * s1 * s2 - s.eta[0];
  return sign_conv(s.chi) * sign_conv(arg);
}

int detector_b(const UnitVector3& b, const HiddenSample& s, const ModelConstants& k) {
  int s3 = sign_conv(k.f - s.lambda[2]);
  int s4 = sign_conv(k.f - s.lambda[3]);
  double arg = kron(s.n[0], s.n[2]) * b.component(s.n[2]) * s3 * s4 - s.eta[1];
  return -sign_conv(s.chi) * sign_conv(arg);
}

double eta_mean(double u) {
  if (!(std::abs(u) <= 1.0)) throw std::domain_error("eta_mean: |u| must be <= 1");
  return 2.0 * u;
}

double gaussian_sign_moment(int p) {
  if (p == 1) return 0.0;
  if (p == 2) return 1.0;
  throw std::domain_error("gaussian_sign_moment: p must be 1 or 2");
}

double assemble_moment(Moment which, const UnitVector3& a, const UnitVector3& b,
                       const LambdaFactors& lam) {
  const auto& lp = lam.plain;
  const auto& ls = lam.signed_step;
  double sum = 0.0;
  for (int n1 = 1; n1 <= 3; ++n1)
    for (int n2 = 1; n2 <= 3; ++n2)
      for (int n3 = 1; n3 <= 3; ++n3) {
        // eta means are linear, so the lambda step signs factor out of them
        // and land on the per-tau lambda factors.
        double term;
        switch (which) {
          case Moment::norm:
            term = kEtaVolume * kEtaVolume * gaussian_sign_moment(2) *
                   lp[0] * lp[1] * lp[2] * lp[3];
            break;
          case Moment::A:
            term = eta_mean(kron(n1, n2) * a.component(n2)) * kEtaVolume *
                   gaussian_sign_moment(1) * ls[0] * ls[1] * lp[2] * lp[3];
            break;
          case Moment::B:
            term = -eta_mean(kron(n1, n3) * b.component(n3)) * kEtaVolume *
                   gaussian_sign_moment(1) * lp[0] * lp[1] * ls[2] * ls[3];
            break;
          case Moment::A2:
          case Moment::B2:
            // the squared sign factors are 1, leaving plain lambda factors
            // and plain eta volumes
            term = kEtaVolume * kEtaVolume * gaussian_sign_moment(2) *
                   lp[0] * lp[1] * lp[2] * lp[3];
            break;
          case Moment::AB:
            term = -eta_mean(kron(n1, n2) * a.component(n2)) *
                   eta_mean(kron(n1, n3) * b.component(n3)) *
                   gaussian_sign_moment(2) * ls[0] * ls[1] * ls[2] * ls[3];
            break;
          default:
            throw std::domain_error("assemble_moment: unknown moment");
        }
        sum += term;
      }
  return 0.25 * sum;
}

MomentReport analytic_moments(const UnitVector3& a, const UnitVector3& b,
                              const ModelConstants& k) {
  if (!a.is_unit() || !b.is_unit())
    throw std::domain_error("analytic_moments: settings must be unit vectors");
  double plain = fp_piecewise(unit_weight(k)).value;
  double step = fp_piecewise(sign_step_weight(k)).value;
  LambdaFactors lam;
  lam.plain.fill(plain);
  lam.signed_step.fill(step);
  return {assemble_moment(Moment::norm, a, b, lam),
          assemble_moment(Moment::A, a, b, lam),
          assemble_moment(Moment::B, a, b, lam),
          assemble_moment(Moment::A2, a, b, lam),
          assemble_moment(Moment::B2, a, b, lam),
          assemble_moment(Moment::AB, a, b, lam)};
}

fp::PiecewiseWeight unit_weight(const ModelConstants& k) {
  return fp::PiecewiseWeight::constant(1.0, k.beta);
}

fp::PiecewiseWeight sign_step_weight(const ModelConstants& k) {
  return fp::PiecewiseWeight::sign_step(k.f, k.beta);
}

}  // namespace pfbell::lhv
