#include <atomic>
#include <cstdlib>
#include <string>

#include "foodpref/simd.hpp"
#include "kernels_impl.hpp"

namespace foodpref::simd {
namespace {

constexpr Kernels kScalar{Backend::kScalar, scalar::dot_f64, scalar::dot_f32, scalar::axpy_f32,
                          scalar::accumulate_f32};

#if defined(FOODPREF_HAVE_AVX2)
constexpr Kernels kAvx2{Backend::kAvx2, avx2::dot_f64, avx2::dot_f32, avx2::axpy_f32, avx2::accumulate_f32};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Kernels* initial() {
  const char* env = std::getenv("FOODPREF_SIMD");
  if (env && std::string(env) == "scalar") return &kScalar;
  if (const Kernels* k = avx2_kernels()) return k;
  return &kScalar;
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> k{initial()};
  return k;
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

const Kernels* avx2_kernels() {
#if defined(FOODPREF_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() { return *current().load(std::memory_order_acquire); }

bool backend_available(Backend backend) {
  return backend == Backend::kScalar || avx2_kernels() != nullptr;
}

bool set_backend(Backend backend) {
  if (!backend_available(backend)) return false;
  current().store(backend == Backend::kScalar ? &kScalar : avx2_kernels(), std::memory_order_release);
  return true;
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

}  // namespace foodpref::simd
