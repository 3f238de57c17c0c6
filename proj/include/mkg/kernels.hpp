#pragma once

#include "mkg/fft.hpp"

#include <cstddef>

// Pointwise and reduction kernels over flat arrays. The top-level versions
// are OpenMP-parallel; `reference` holds plain serial loops with identical
// semantics, used by the tests and the benchmark as the baseline.
//
// Reductions sum fixed-size blocks and then add block partials in order, so
// results do not depend on the thread count.

namespace mkg::kernels
{

constexpr std::size_t reduction_block = 4096;

void scale(Complex* x, std::size_t n, Complex a);
void axpy(Complex a, const Complex* x, Complex* y, std::size_t n);         // y += a x
void multiply(const Complex* x, const Complex* y, Complex* out, std::size_t n);
void multiply_real(const double* w, Complex* x, std::size_t n);            // x *= w
void take_real(Complex* x, std::size_t n);

double sum_abs2(const Complex* x, std::size_t n);
double dot_re(const Complex* x, const Complex* y, std::size_t n);           // Re sum x conj(y)
double max_abs(const Complex* x, std::size_t n);
double max_abs_imag(const Complex* x, std::size_t n);

// Copy coefficients of the n^3 band |k| <= kb (index units) into a zeroed
// m^3 array, and the reverse truncation.
void pad_band(const Complex* src, int n, int kb, Complex* dst, int m);
void truncate_band(const Complex* src, int m, int kb, Complex* dst, int n);

namespace reference
{
void scale(Complex* x, std::size_t n, Complex a);
void axpy(Complex a, const Complex* x, Complex* y, std::size_t n);
void multiply(const Complex* x, const Complex* y, Complex* out, std::size_t n);
void multiply_real(const double* w, Complex* x, std::size_t n);
void take_real(Complex* x, std::size_t n);

double sum_abs2(const Complex* x, std::size_t n);
double dot_re(const Complex* x, const Complex* y, std::size_t n);
double max_abs(const Complex* x, std::size_t n);
double max_abs_imag(const Complex* x, std::size_t n);

void pad_band(const Complex* src, int n, int kb, Complex* dst, int m);
void truncate_band(const Complex* src, int m, int kb, Complex* dst, int n);
} // namespace reference

} // namespace mkg::kernels
