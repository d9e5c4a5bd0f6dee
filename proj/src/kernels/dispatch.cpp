#include <atomic>
#include <stdexcept>

#include "pfbell/kernels/kernels.hpp"

namespace pfbell::kernels {

#if !defined(PFBELL_HAVE_AVX2_TU)
const KernelSet* avx2_kernels() { return nullptr; }
#endif

namespace {

std::atomic<const KernelSet*> g_active{nullptr};

const KernelSet* resolve_auto() {
  if (const KernelSet* a = avx2_kernels()) return a;
  return &scalar_kernels();
}

}  // namespace

const KernelSet& active_kernels() {
  const KernelSet* k = g_active.load(std::memory_order_acquire);
  if (k == nullptr) {
    k = resolve_auto();
    g_active.store(k, std::memory_order_release);
  }
  return *k;
}

void force_kernels(std::string_view which) {
  if (which == "auto") {
    g_active.store(resolve_auto(), std::memory_order_release);
  } else if (which == "scalar") {
    g_active.store(&scalar_kernels(), std::memory_order_release);
  } else if (which == "avx2") {
    const KernelSet* a = avx2_kernels();
    if (a == nullptr)
      throw std::runtime_error("avx2 kernels are not available on this host");
    g_active.store(a, std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel selector: " + std::string(which));
  }
}

std::string active_kernel_name() { return active_kernels().name; }

}  // namespace pfbell::kernels
