#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "pfbell/kernels/philox.hpp"
#include "pfbell/lhv_model.hpp"

namespace pfbell::kernels {

// One epsilon-regularized lambda factor: lambda = eps * exp(u * lnratio) is
// log-uniform on [eps, beta]; the kernel counts samples with
// sign(f - lambda) = +1.
struct FactorJob {
  rng::Stream stream;
  double eps = 0.0;
  double lnratio = 0.0;  // ln(beta / eps)
  double f = 0.0;
};

// Full nine-variable sample: n1,n2,n3 uniform on {1,2,3}, four log-uniform
// lambdas, one Box-Muller normal chi, two uniform etas. The kernel counts
// samples whose requested observable is +1 (every observable is +-1-valued).
struct JointJob {
  rng::Stream stream;
  double eps = 0.0;
  double lnratio = 0.0;
  double f = 0.0;
  std::array<double, 3> a{};  // components a_1..a_3
  std::array<double, 3> b{};
  lhv::Moment which = lhv::Moment::AB;
};

using FactorFn = std::uint64_t (*)(const FactorJob&, std::uint64_t first,
                                   std::uint64_t count);
using JointFn = std::uint64_t (*)(const JointJob&, std::uint64_t first,
                                  std::uint64_t count);

struct KernelSet {
  const char* name;
  FactorFn factor_count_plus;
  JointFn joint_count_plus;
};

const KernelSet& scalar_kernels();
// nullptr when the CPU (or the build) lacks AVX2+FMA
const KernelSet* avx2_kernels();

// Runtime selection. force accepts "auto", "scalar", "avx2".
const KernelSet& active_kernels();
void force_kernels(std::string_view which);
std::string active_kernel_name();

// Test hook: reconstructs the hidden-variable assignment and detector
// outcomes the scalar kernel derives at stream position `index`.
struct JointTrace {
  lhv::HiddenSample sample;
  int a_outcome = 0;
  int b_outcome = 0;
  bool obs_plus = false;
};
JointTrace joint_trace(const JointJob& job, std::uint64_t index);

}  // namespace pfbell::kernels
