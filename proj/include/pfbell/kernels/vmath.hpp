#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>

// Shared transcendental kernels. The scalar versions below are the reference
// implementations; the AVX2 translation unit evaluates the same constants in
// the same operation order (explicit fma, round-to-nearest, identical
// selects), so lanes reproduce the scalar results bit for bit.

namespace pfbell::vm {

namespace detail {

inline constexpr double kLog2E = 1.4426950408889634;
// ln 2 split with the low 32 mantissa bits of the high part zeroed
inline constexpr double kLn2Hi = 0.6931467056274414;
inline constexpr double kLn2Lo = 4.7493250390316726e-07;

// exp(r) Taylor coefficients 1/k!, |r| <= ln2/2
inline constexpr std::array<double, 14> kExpCoeff = {
    1.0,
    1.0,
    1.0 / 2,
    1.0 / 6,
    1.0 / 24,
    1.0 / 120,
    1.0 / 720,
    1.0 / 5040,
    1.0 / 40320,
    1.0 / 362880,
    1.0 / 3628800,
    1.0 / 39916800,
    1.0 / 479001600,
    1.0 / 6227020800,
};

inline constexpr double kSqrt2 = 1.4142135623730951;
// atanh series: ln m = 2s + 2 s z P(z), z = s^2, P coefficients 1/(2k+3)
inline constexpr std::array<double, 10> kAtanhCoeff = {
    1.0 / 3,  1.0 / 5,  1.0 / 7,  1.0 / 9,  1.0 / 11,
    1.0 / 13, 1.0 / 15, 1.0 / 17, 1.0 / 19, 1.0 / 21,
};

inline constexpr double kTwoPi = 6.283185307179586;
inline constexpr double kTwoOverPi = 0.6366197723675814;
// pi/2 three-part split for Cody-Waite reduction, |x| <= 16
inline constexpr double kPio2_1 = 1.5707963267948966;
inline constexpr double kPio2_2 = 6.123233995736766e-17;
inline constexpr double kPio2_3 = -1.4973849048591698e-33;

// sin(r) = r + r z S(z): S coefficients (-1)^{k+1} / (2k+3)!
inline constexpr std::array<double, 7> kSinCoeff = {
    -1.0 / 6,         1.0 / 120,         -1.0 / 5040,        1.0 / 362880,
    -1.0 / 39916800,  1.0 / 6227020800,  -1.0 / 1307674368000,
};
// cos(r) = 1 + z C(z): C coefficients (-1)^k / (2k+2)!
inline constexpr std::array<double, 8> kCosCoeff = {
    -1.0 / 2,          1.0 / 24,          -1.0 / 720,          1.0 / 40320,
    -1.0 / 3628800,    1.0 / 479001600,   -1.0 / 87178291200,  1.0 / 20922789888000,
};

}  // namespace detail

// exp(x) for |x| <= 700 (no subnormal or overflow handling)
inline double exp(double x) {
  using namespace detail;
  double kd = std::nearbyint(x * kLog2E);
  double r = std::fma(kd, -kLn2Hi, x);
  r = std::fma(kd, -kLn2Lo, r);
  double p = kExpCoeff[13];
  for (int i = 12; i >= 0; --i) p = std::fma(p, r, kExpCoeff[i]);
  auto ki = static_cast<std::int64_t>(kd);
  double scale = std::bit_cast<double>(static_cast<std::uint64_t>(ki + 1023) << 52);
  return p * scale;
}

// log(x) for normal positive x
inline double log(double x) {
  using namespace detail;
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  auto e = static_cast<double>(
      static_cast<std::int64_t>((bits >> 52) & 0x7FF) - 1023);
  double m = std::bit_cast<double>((bits & 0xFFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
  // fold m from [1,2) into [sqrt2/2, sqrt2); halving is exact
  bool fold = m > kSqrt2;
  m = fold ? 0.5 * m : m;
  e = fold ? e + 1.0 : e;
  double s = (m - 1.0) / (m + 1.0);
  double z = s * s;
  double p = kAtanhCoeff[9];
  for (int i = 8; i >= 0; --i) p = std::fma(p, z, kAtanhCoeff[i]);
  double tail = (2.0 * s) * z * p;
  double hi = std::fma(e, kLn2Hi, 2.0 * s);
  return std::fma(e, kLn2Lo, hi + tail);
}

// cos(x) for |x| <= 16
inline double cos(double x) {
  using namespace detail;
  double qd = std::nearbyint(x * kTwoOverPi);
  double r = std::fma(qd, -kPio2_1, x);
  r = std::fma(qd, -kPio2_2, r);
  r = std::fma(qd, -kPio2_3, r);
  double z = r * r;
  double sp = kSinCoeff[6];
  for (int i = 5; i >= 0; --i) sp = std::fma(sp, z, kSinCoeff[i]);
  double cp = kCosCoeff[7];
  for (int i = 6; i >= 0; --i) cp = std::fma(cp, z, kCosCoeff[i]);
  double sinr = std::fma((r * z), sp, r);
  double cosr = std::fma(z, cp, 1.0);
  int q = static_cast<int>(qd) & 3;
  switch (q) {
    case 0: return cosr;
    case 1: return -sinr;
    case 2: return -cosr;
    default: return sinr;
  }
}

// w mod 3 for 32-bit w via the division-free multiply-shift identity
inline std::uint32_t mod3(std::uint32_t w) {
  std::uint64_t q = (static_cast<std::uint64_t>(w) * 0xAAAAAAABull) >> 33;
  return w - static_cast<std::uint32_t>(3 * q);
}

}  // namespace pfbell::vm
