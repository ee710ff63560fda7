#pragma once

#include <cstddef>

// Raw kernel entry points. The AVX2 translation unit is compiled with
// -mavx2 -mfma and must not instantiate any inline library code.
namespace foodpref::simd::scalar {
double dot_f64(const double* x, const double* y, std::size_t n);
double dot_f32(const float* x, const float* y, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
void accumulate_f32(const float* x, double* acc, std::size_t n);
}  // namespace foodpref::simd::scalar

namespace foodpref::simd::avx2 {
double dot_f64(const double* x, const double* y, std::size_t n);
double dot_f32(const float* x, const float* y, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
void accumulate_f32(const float* x, double* acc, std::size_t n);
}  // namespace foodpref::simd::avx2
