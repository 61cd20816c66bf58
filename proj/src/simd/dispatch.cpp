#include <atomic>
#include <cstdlib>
#include <string_view>

#include "forge/simd/kernels.hpp"

namespace forge::simd {

#ifdef FORGE_HAVE_AVX2_TU
namespace avx2 {
const Kernels& table();
}
#endif

const Kernels* avx2_kernels() {
#ifdef FORGE_HAVE_AVX2_TU
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  }();
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Kernels* pick() {
  const char* env = std::getenv("FORGE_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> s{pick()};
  return s;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_relaxed); }

void set_active(const Kernels& k) { slot().store(&k, std::memory_order_relaxed); }

}  // namespace forge::simd
