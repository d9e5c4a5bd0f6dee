// AVX2+FMA variants of the sampling kernels. Every lane performs the exact
// operation sequence of the scalar reference in kernels_scalar.cpp, so counts
// agree bit for bit; the equivalence suite asserts this.

#include <immintrin.h>

#include <bit>
#include <cstdint>

#include "pfbell/kernels/kernels.hpp"
#include "pfbell/kernels/vmath.hpp"

namespace pfbell::kernels {

namespace {

namespace vd = pfbell::vm::detail;

inline __m256d set1(double x) { return _mm256_set1_pd(x); }

inline __m256d u01_v(__m256i w) {
  __m256i top = _mm256_srli_epi64(w, 12);
  __m256d d = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(top, _mm256_set1_epi64x(0x4330000000000000ll))),
      set1(0x1p52));
  return _mm256_mul_pd(_mm256_add_pd(d, set1(0.5)), set1(0x1p-52));
}

inline __m256d exp_v(__m256d x) {
  __m256d kd = _mm256_round_pd(_mm256_mul_pd(x, set1(vd::kLog2E)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fmadd_pd(kd, set1(-vd::kLn2Hi), x);
  r = _mm256_fmadd_pd(kd, set1(-vd::kLn2Lo), r);
  __m256d p = set1(vd::kExpCoeff[13]);
  for (int i = 12; i >= 0; --i) p = _mm256_fmadd_pd(p, r, set1(vd::kExpCoeff[i]));
  __m128i ki32 = _mm256_cvtpd_epi32(kd);
  __m256i ki = _mm256_cvtepi32_epi64(ki32);
  __m256d scale = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52));
  return _mm256_mul_pd(p, scale);
}

inline __m256d log_v(__m256d x) {
  __m256i bits = _mm256_castpd_si256(x);
  __m256i e64 = _mm256_sub_epi64(
      _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7FF)),
      _mm256_set1_epi64x(1023));
  // exponents are tiny ints; take the low dword of each lane and convert
  __m256i packed = _mm256_permutevar8x32_epi32(e64, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
  __m256d e = _mm256_cvtepi32_pd(_mm256_castsi256_si128(packed));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0xFFFFFFFFFFFFFll)),
      _mm256_set1_epi64x(0x3FF0000000000000ll)));
  __m256d fold = _mm256_cmp_pd(m, set1(vd::kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), fold);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, set1(1.0)), fold);
  __m256d s = _mm256_div_pd(_mm256_sub_pd(m, set1(1.0)), _mm256_add_pd(m, set1(1.0)));
  __m256d z = _mm256_mul_pd(s, s);
  __m256d p = set1(vd::kAtanhCoeff[9]);
  for (int i = 8; i >= 0; --i) p = _mm256_fmadd_pd(p, z, set1(vd::kAtanhCoeff[i]));
  __m256d two_s = _mm256_mul_pd(set1(2.0), s);
  __m256d tail = _mm256_mul_pd(_mm256_mul_pd(two_s, z), p);
  __m256d hi = _mm256_fmadd_pd(e, set1(vd::kLn2Hi), two_s);
  return _mm256_fmadd_pd(e, set1(vd::kLn2Lo), _mm256_add_pd(hi, tail));
}

inline __m256d neg_v(__m256d x) {
  return _mm256_xor_pd(x, set1(-0.0));
}

inline __m256d cos_v(__m256d x) {
  __m256d qd = _mm256_round_pd(_mm256_mul_pd(x, set1(vd::kTwoOverPi)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fmadd_pd(qd, set1(-vd::kPio2_1), x);
  r = _mm256_fmadd_pd(qd, set1(-vd::kPio2_2), r);
  r = _mm256_fmadd_pd(qd, set1(-vd::kPio2_3), r);
  __m256d z = _mm256_mul_pd(r, r);
  __m256d sp = set1(vd::kSinCoeff[6]);
  for (int i = 5; i >= 0; --i) sp = _mm256_fmadd_pd(sp, z, set1(vd::kSinCoeff[i]));
  __m256d cp = set1(vd::kCosCoeff[7]);
  for (int i = 6; i >= 0; --i) cp = _mm256_fmadd_pd(cp, z, set1(vd::kCosCoeff[i]));
  __m256d sinr = _mm256_fmadd_pd(_mm256_mul_pd(r, z), sp, r);
  __m256d cosr = _mm256_fmadd_pd(z, cp, set1(1.0));
  __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(qd));
  q = _mm256_and_si256(q, _mm256_set1_epi64x(3));
  __m256d res = cosr;
  res = _mm256_blendv_pd(res, neg_v(sinr),
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(1))));
  res = _mm256_blendv_pd(res, neg_v(cosr),
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(2))));
  res = _mm256_blendv_pd(res, sinr,
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(3))));
  return res;
}

// w mod 3 on u64 lanes holding 32-bit values
inline __m256i mod3_v(__m256i w32) {
  __m256i prod = _mm256_mul_epu32(w32, _mm256_set1_epi64x(0xAAAAAAABll));
  __m256i q = _mm256_srli_epi64(prod, 33);
  __m256i three_q = _mm256_add_epi64(_mm256_add_epi64(q, q), q);
  return _mm256_sub_epi64(w32, three_q);
}

inline __m256d select3(__m256i idx /*0..2*/, const std::array<double, 3>& comp) {
  __m256d r = set1(comp[2]);
  r = _mm256_blendv_pd(r, set1(comp[1]),
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(idx, _mm256_set1_epi64x(1))));
  r = _mm256_blendv_pd(r, set1(comp[0]),
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(idx, _mm256_set1_epi64x(0))));
  return r;
}

std::uint64_t factor_count_plus_avx2(const FactorJob& j, std::uint64_t first,
                                     std::uint64_t count) {
  const KernelSet& ref = scalar_kernels();
  std::uint64_t n_plus = 0;
  std::uint64_t i = first;
  const std::uint64_t end = first + count;
  // align to a block boundary, then run whole blocks vectorized
  while (i < end && (i % 4) != 0) n_plus += ref.factor_count_plus(j, i++, 1);
  const __m256d eps = set1(j.eps);
  const __m256d lnr = set1(j.lnratio);
  const __m256d f = set1(j.f);
  alignas(32) std::uint64_t words[4];
  for (; i + 4 <= end; i += 4) {
    rng::Block b = j.stream.block(i / 4);
    for (int k = 0; k < 4; ++k) words[k] = b.w[k];
    __m256i w = _mm256_load_si256(reinterpret_cast<const __m256i*>(words));
    __m256d lambda = _mm256_mul_pd(eps, exp_v(_mm256_mul_pd(u01_v(w), lnr)));
    __m256d le = _mm256_cmp_pd(lambda, f, _CMP_LE_OQ);
    n_plus += static_cast<unsigned>(std::popcount(
        static_cast<unsigned>(_mm256_movemask_pd(le))));
  }
  while (i < end) n_plus += ref.factor_count_plus(j, i++, 1);
  return n_plus;
}

std::uint64_t joint_count_plus_avx2(const JointJob& j, std::uint64_t first,
                                    std::uint64_t count) {
  const KernelSet& ref = scalar_kernels();
  std::uint64_t n_plus = 0;
  std::uint64_t s = first;
  const std::uint64_t end = first + count;
  const __m256d eps = set1(j.eps);
  const __m256d lnr = set1(j.lnratio);
  const __m256d f = set1(j.f);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ones = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
  const __m256i lo32 = _mm256_set1_epi64x(0xFFFFFFFFll);
  alignas(32) std::uint64_t roles[12][4];
  for (; s + 4 <= end; s += 4) {
    for (int lane = 0; lane < 4; ++lane)
      for (int blk = 0; blk < 3; ++blk) {
        rng::Block b = j.stream.block(3 * (s + lane) + blk);
        for (int k = 0; k < 4; ++k) roles[4 * blk + k][lane] = b.w[k];
      }
    auto role = [&](int r) {
      return _mm256_load_si256(reinterpret_cast<const __m256i*>(roles[r]));
    };

    __m256i m1 = mod3_v(_mm256_and_si256(role(0), lo32));
    __m256i m2 = mod3_v(_mm256_and_si256(role(1), lo32));
    __m256i m3 = mod3_v(_mm256_and_si256(role(2), lo32));
    __m256d d12 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(m1, m2));
    __m256d d13 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(m1, m3));

    __m256d le[4];
    for (int tau = 0; tau < 4; ++tau) {
      __m256d lambda =
          _mm256_mul_pd(eps, exp_v(_mm256_mul_pd(u01_v(role(3 + tau)), lnr)));
      le[tau] = _mm256_cmp_pd(lambda, f, _CMP_LE_OQ);
    }

    __m256d u1 = u01_v(role(7));
    __m256d u2 = u01_v(role(8));
    __m256d radius = _mm256_sqrt_pd(_mm256_mul_pd(set1(-2.0), log_v(u1)));
    __m256d chi = _mm256_mul_pd(radius, cos_v(_mm256_mul_pd(set1(vd::kTwoPi), u2)));

    __m256d eta1 = _mm256_sub_pd(_mm256_mul_pd(set1(2.0), u01_v(role(9))), set1(1.0));
    __m256d eta2 = _mm256_sub_pd(_mm256_mul_pd(set1(2.0), u01_v(role(10))), set1(1.0));

    __m256d base_a = _mm256_and_pd(d12, select3(m2, j.a));
    base_a = _mm256_xor_pd(base_a, _mm256_and_pd(_mm256_xor_pd(le[0], le[1]), set1(-0.0)));
    __m256d base_b = _mm256_and_pd(d13, select3(m3, j.b));
    base_b = _mm256_xor_pd(base_b, _mm256_and_pd(_mm256_xor_pd(le[2], le[3]), set1(-0.0)));

    __m256d chi_plus = _mm256_cmp_pd(chi, zero, _CMP_GE_OQ);
    __m256d arg_a_plus = _mm256_cmp_pd(_mm256_sub_pd(base_a, eta1), zero, _CMP_GE_OQ);
    __m256d arg_b_plus = _mm256_cmp_pd(_mm256_sub_pd(base_b, eta2), zero, _CMP_GE_OQ);

    __m256d a_plus = _mm256_xor_pd(_mm256_xor_pd(chi_plus, arg_a_plus), ones);
    __m256d b_plus = _mm256_xor_pd(chi_plus, arg_b_plus);

    __m256d obs;
    switch (j.which) {
      case lhv::Moment::norm:
      case lhv::Moment::A2:
      case lhv::Moment::B2: obs = ones; break;
      case lhv::Moment::A: obs = a_plus; break;
      case lhv::Moment::B: obs = b_plus; break;
      case lhv::Moment::AB:
        obs = _mm256_xor_pd(_mm256_xor_pd(a_plus, b_plus), ones);
        break;
      default: obs = zero; break;
    }
    n_plus += static_cast<unsigned>(std::popcount(
        static_cast<unsigned>(_mm256_movemask_pd(obs))));
  }
  while (s < end) n_plus += ref.joint_count_plus(j, s++, 1);
  return n_plus;
}

bool cpu_ok() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const KernelSet* avx2_kernels() {
  static const KernelSet set{"avx2", &factor_count_plus_avx2, &joint_count_plus_avx2};
  static const bool ok = cpu_ok();
  return ok ? &set : nullptr;
}

}  // namespace pfbell::kernels
