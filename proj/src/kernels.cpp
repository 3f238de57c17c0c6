#include "mkg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mkg::kernels
{

namespace
{

inline int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }
inline int wrap(int a, int n) { return a < 0 ? a + n : a; }

template <class Term>
double blocked_sum(std::size_t n, Term term)
{
    const std::size_t blocks = (n + reduction_block - 1) / reduction_block;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b)
    {
        const std::size_t lo = b * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            acc += term(i);
        partial[b] = acc;
    }
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total;
}

template <class Term>
double blocked_max(std::size_t n, Term term)
{
    const std::size_t blocks = (n + reduction_block - 1) / reduction_block;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b)
    {
        const std::size_t lo = b * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            acc = std::max(acc, term(i));
        partial[b] = acc;
    }
    double m = 0.0;
    for (double p : partial)
        m = std::max(m, p);
    return m;
}

} // namespace

void scale(Complex* x, std::size_t n, Complex a)
{
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= a;
}

void axpy(Complex a, const Complex* x, Complex* y, std::size_t n)
{
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void multiply(const Complex* x, const Complex* y, Complex* out, std::size_t n)
{
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] * y[i];
}

void multiply_real(const double* w, Complex* x, std::size_t n)
{
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= w[i];
}

void take_real(Complex* x, std::size_t n)
{
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        x[i] = Complex(x[i].real(), 0.0);
}

double sum_abs2(const Complex* x, std::size_t n)
{
    return blocked_sum(n, [x](std::size_t i) { return std::norm(x[i]); });
}

double dot_re(const Complex* x, const Complex* y, std::size_t n)
{
    return blocked_sum(n, [x, y](std::size_t i) {
        return x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    });
}

double max_abs(const Complex* x, std::size_t n)
{
    return blocked_max(n, [x](std::size_t i) { return std::abs(x[i]); });
}

double max_abs_imag(const Complex* x, std::size_t n)
{
    return blocked_max(n, [x](std::size_t i) { return std::abs(x[i].imag()); });
}

void pad_band(const Complex* src, int n, int kb, Complex* dst, int m)
{
    const std::size_t total = static_cast<std::size_t>(m) * m * m;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < total; ++i)
        dst[i] = 0.0;
    const int r2 = kb * kb;
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
    {
        const int c = signed_index(l, n);
        for (int j = 0; j < n; ++j)
        {
            const int b = signed_index(j, n);
            for (int i = 0; i < n; ++i)
            {
                const int a = signed_index(i, n);
                if (a * a + b * b + c * c > r2)
                    continue;
                const std::size_t to = static_cast<std::size_t>(wrap(a, m)) +
                                       static_cast<std::size_t>(m) *
                                           (wrap(b, m) + static_cast<std::size_t>(m) * wrap(c, m));
                dst[to] = src[static_cast<std::size_t>(i) +
                              static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * l)];
            }
        }
    }
}

void truncate_band(const Complex* src, int m, int kb, Complex* dst, int n)
{
    const int r2 = kb * kb;
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
    {
        const int c = signed_index(l, n);
        for (int j = 0; j < n; ++j)
        {
            const int b = signed_index(j, n);
            for (int i = 0; i < n; ++i)
            {
                const int a = signed_index(i, n);
                const std::size_t to = static_cast<std::size_t>(i) +
                                       static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * l);
                if (a * a + b * b + c * c > r2)
                {
                    dst[to] = 0.0;
                    continue;
                }
                dst[to] = src[static_cast<std::size_t>(wrap(a, m)) +
                              static_cast<std::size_t>(m) *
                                  (wrap(b, m) + static_cast<std::size_t>(m) * wrap(c, m))];
            }
        }
    }
}

namespace reference
{

void scale(Complex* x, std::size_t n, Complex a)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= a;
}

void axpy(Complex a, const Complex* x, Complex* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void multiply(const Complex* x, const Complex* y, Complex* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] * y[i];
}

void multiply_real(const double* w, Complex* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= w[i];
}

void take_real(Complex* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] = Complex(x[i].real(), 0.0);
}

double sum_abs2(const Complex* x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += std::norm(x[i]);
    return acc;
}

double dot_re(const Complex* x, const Complex* y, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    return acc;
}

double max_abs(const Complex* x, std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, std::abs(x[i]));
    return m;
}

double max_abs_imag(const Complex* x, std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, std::abs(x[i].imag()));
    return m;
}

void pad_band(const Complex* src, int n, int kb, Complex* dst, int m)
{
    std::fill(dst, dst + static_cast<std::size_t>(m) * m * m, Complex(0.0));
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const int a = signed_index(i, n), b = signed_index(j, n), c = signed_index(l, n);
                if (a * a + b * b + c * c > kb * kb)
                    continue;
                dst[wrap(a, m) + static_cast<std::size_t>(m) * (wrap(b, m) + static_cast<std::size_t>(m) * wrap(c, m))] =
                    src[i + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * l)];
            }
}

void truncate_band(const Complex* src, int m, int kb, Complex* dst, int n)
{
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const int a = signed_index(i, n), b = signed_index(j, n), c = signed_index(l, n);
                Complex v = 0.0;
                if (a * a + b * b + c * c <= kb * kb)
                    v = src[wrap(a, m) + static_cast<std::size_t>(m) * (wrap(b, m) + static_cast<std::size_t>(m) * wrap(c, m))];
                dst[i + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * l)] = v;
            }
}

} // namespace reference

} // namespace mkg::kernels
