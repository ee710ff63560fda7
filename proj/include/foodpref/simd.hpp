#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Inner-loop kernels used by labeling and fine-tuning. Every kernel has a
// scalar reference version; an AVX2+FMA version is selected at runtime when
// the CPU supports it. Set FOODPREF_SIMD=scalar to force the reference path.
namespace foodpref::simd {

enum class Backend { kScalar, kAvx2 };

struct Kernels {
  Backend backend;
  // Double-precision dot product.
  double (*dot_f64)(const double* x, const double* y, std::size_t n);
  // Single-precision inputs, double-precision accumulation.
  double (*dot_f32)(const float* x, const float* y, std::size_t n);
  // y += a * x
  void (*axpy_f32)(float a, const float* x, float* y, std::size_t n);
  // acc += x, widening to double
  void (*accumulate_f32)(const float* x, double* acc, std::size_t n);
};

const Kernels& scalar_kernels();
// nullptr when the build or the CPU lacks AVX2/FMA.
const Kernels* avx2_kernels();

const Kernels& active();
// Returns false (and changes nothing) when the backend is unavailable.
bool set_backend(Backend backend);
bool backend_available(Backend backend);
std::string_view backend_name(Backend backend);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot_f64(x.data(), y.data(), x.size());
}
inline double dot(std::span<const float> x, std::span<const float> y) {
  return active().dot_f32(x.data(), y.data(), x.size());
}

}  // namespace foodpref::simd
