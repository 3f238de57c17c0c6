#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace mkg
{

using Complex = std::complex<double>;

void* fft_aligned_alloc(std::size_t bytes);
void fft_aligned_free(void* p) noexcept;

// Allocator routing through fftw_malloc so every buffer has the alignment
// the cached plans were created with.
template <class T>
struct FftAllocator
{
    using value_type = T;
    FftAllocator() = default;
    template <class U>
    FftAllocator(const FftAllocator<U>&) noexcept
    {
    }
    T* allocate(std::size_t n) { return static_cast<T*>(fft_aligned_alloc(n * sizeof(T))); }
    void deallocate(T* p, std::size_t) noexcept { fft_aligned_free(p); }
    template <class U>
    bool operator==(const FftAllocator<U>&) const noexcept
    {
        return true;
    }
};

using CVector = std::vector<Complex, FftAllocator<Complex>>;
using RVector = std::vector<double, FftAllocator<double>>;

enum class Direction
{
    forward, // samples -> coefficients, divided by n^3
    inverse  // coefficients -> samples
};

// ESTIMATE plans are deterministic, so roundoff is reproducible run to run.
// MEASURE plans are about twice as fast on non-power-of-two padded sizes.
// The choice applies to plans created after the call.
enum class Planner
{
    estimate,
    measure
};

void set_fft_planner(Planner p);
Planner fft_planner();

// In-place 3-D transform of an n^3 array. Plans are cached per (n, direction)
// behind a mutex; execution itself is reentrant.
void fft3(int n, Complex* data, Direction dir);

inline void fft3(int n, CVector& data, Direction dir) { fft3(n, data.data(), dir); }

} // namespace mkg
