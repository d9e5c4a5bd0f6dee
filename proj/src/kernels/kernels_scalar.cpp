#include <cmath>
#include <cstdint>

#include "pfbell/kernels/kernels.hpp"
#include "pfbell/kernels/vmath.hpp"

namespace pfbell::kernels {

namespace {

struct JointWords {
  std::uint64_t w[12];
};

JointWords fetch_joint_words(const rng::Stream& stream, std::uint64_t sample) {
  JointWords out;
  for (int blk = 0; blk < 3; ++blk) {
    rng::Block b = stream.block(3 * sample + blk);
    for (int i = 0; i < 4; ++i) out.w[4 * blk + i] = b.w[i];
  }
  return out;
}

struct JointEval {
  int n[3];
  double lambda[4];
  double chi;
  double eta[2];
  bool a_plus;   // A == +1
  bool b_plus;   // B == +1
};

// Reference per-sample evaluation. The AVX2 kernel performs these exact
// operations lane-wise; keep the two in sync.
JointEval eval_joint(const JointJob& j, const JointWords& ws) {
  JointEval e;
  for (int q = 0; q < 3; ++q)
    e.n[q] = 1 + static_cast<int>(vm::mod3(static_cast<std::uint32_t>(ws.w[q])));

  bool lam_le_f[4];
  for (int tau = 0; tau < 4; ++tau) {
    double u = rng::u01(ws.w[3 + tau]);
    e.lambda[tau] = j.eps * vm::exp(u * j.lnratio);
    lam_le_f[tau] = e.lambda[tau] <= j.f;
  }

  double u1 = rng::u01(ws.w[7]);
  double u2 = rng::u01(ws.w[8]);
  e.chi = std::sqrt(-2.0 * vm::log(u1)) * vm::cos(vm::detail::kTwoPi * u2);

  for (int s = 0; s < 2; ++s) e.eta[s] = 2.0 * rng::u01(ws.w[9 + s]) - 1.0;

  double base_a = (e.n[0] == e.n[1]) ? j.a[e.n[1] - 1] : 0.0;
  if (lam_le_f[0] != lam_le_f[1]) base_a = -base_a;
  double base_b = (e.n[0] == e.n[2]) ? j.b[e.n[2] - 1] : 0.0;
  if (lam_le_f[2] != lam_le_f[3]) base_b = -base_b;

  bool chi_plus = e.chi >= 0.0;
  bool arg_a_plus = (base_a - e.eta[0]) >= 0.0;
  bool arg_b_plus = (base_b - e.eta[1]) >= 0.0;

  e.a_plus = (chi_plus == arg_a_plus);   // A = sign(chi) sign(arg)
  e.b_plus = (chi_plus != arg_b_plus);   // B carries the extra minus sign
  return e;
}

bool obs_plus(const JointJob& j, const JointEval& e) {
  switch (j.which) {
    case lhv::Moment::norm: return true;
    case lhv::Moment::A: return e.a_plus;
    case lhv::Moment::B: return e.b_plus;
    case lhv::Moment::A2: return true;  // A*A
    case lhv::Moment::B2: return true;
    case lhv::Moment::AB: return e.a_plus == e.b_plus;
  }
  return false;
}

std::uint64_t factor_count_plus_scalar(const FactorJob& j, std::uint64_t first,
                                       std::uint64_t count) {
  std::uint64_t n_plus = 0;
  rng::Block blk{};
  std::uint64_t cached = ~0ull;
  for (std::uint64_t i = first; i < first + count; ++i) {
    if (i / 4 != cached) {
      cached = i / 4;
      blk = j.stream.block(cached);
    }
    double u = rng::u01(blk.w[i % 4]);
    double lambda = j.eps * vm::exp(u * j.lnratio);
    n_plus += lambda <= j.f ? 1 : 0;
  }
  return n_plus;
}

std::uint64_t joint_count_plus_scalar(const JointJob& j, std::uint64_t first,
                                      std::uint64_t count) {
  std::uint64_t n_plus = 0;
  for (std::uint64_t s = first; s < first + count; ++s) {
    JointEval e = eval_joint(j, fetch_joint_words(j.stream, s));
    n_plus += obs_plus(j, e) ? 1 : 0;
  }
  return n_plus;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", &factor_count_plus_scalar,
                             &joint_count_plus_scalar};
  return set;
}

JointTrace joint_trace(const JointJob& job, std::uint64_t index) {
  JointEval e = eval_joint(job, fetch_joint_words(job.stream, index));
  JointTrace t;
  t.sample.n = {e.n[0], e.n[1], e.n[2]};
  t.sample.lambda = {e.lambda[0], e.lambda[1], e.lambda[2], e.lambda[3]};
  t.sample.chi = e.chi;
  t.sample.eta = {e.eta[0], e.eta[1]};
  t.a_outcome = e.a_plus ? 1 : -1;
  t.b_outcome = e.b_plus ? 1 : -1;
  t.obs_plus = obs_plus(job, e);
  return t;
}

}  // namespace pfbell::kernels
