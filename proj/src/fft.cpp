#include "mkg/fft.hpp"

#include <fftw3.h>

#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mkg
{

void* fft_aligned_alloc(std::size_t bytes)
{
    void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
    if (!p)
        throw std::bad_alloc();
    return p;
}

void fft_aligned_free(void* p) noexcept { fftw_free(p); }

namespace
{

std::atomic<Planner> planner_choice{Planner::estimate};

class PlanCache
{
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, Direction dir)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_pair(n, dir == Direction::forward ? 0 : 1);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
#ifdef _OPENMP
        if (!threads_ready_)
        {
            fftw_init_threads();
            threads_ready_ = true;
        }
        fftw_plan_with_nthreads(omp_get_max_threads());
#endif
        const std::size_t count = static_cast<std::size_t>(n) * n * n;
        auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
        if (!scratch)
            throw std::bad_alloc();
        const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        const unsigned flags = planner_choice.load() == Planner::measure ? FFTW_MEASURE : FFTW_ESTIMATE;
        fftw_plan plan = fftw_plan_dft_3d(n, n, n, scratch, scratch, sign, flags);
        fftw_free(scratch);
        if (!plan)
            throw std::runtime_error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
#ifdef _OPENMP
    bool threads_ready_ = false;
#endif
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

} // namespace

void set_fft_planner(Planner p) { planner_choice.store(p); }

Planner fft_planner() { return planner_choice.load(); }

void fft3(int n, Complex* data, Direction dir)
{
    fftw_plan plan = cache().get(n, dir);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    // FFTW lays out arrays row-major (last index fastest); our x-fastest
    // layout is the same memory with the axes relabelled, which a cube
    // transform does not care about.
    fftw_execute_dft(plan, d, d);
    if (dir == Direction::forward)
    {
        const std::size_t count = static_cast<std::size_t>(n) * n * n;
        const double inv = 1.0 / static_cast<double>(count);
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < count; ++i)
            data[i] *= inv;
    }
}

} // namespace mkg
