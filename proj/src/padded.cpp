#include "mkg/padded.hpp"

#include "mkg/kernels.hpp"

#include <stdexcept>

namespace mkg
{

namespace
{

bool five_smooth(int m)
{
    for (int p : {2, 3, 5})
        while (m % p == 0)
            m /= p;
    return m == 1;
}

} // namespace

int padded_size(const Grid& g, int degree)
{
    int m = std::max(g.n(), degree * g.band_index_radius() + 1);
    while (m % 2 != 0 || !five_smooth(m))
        ++m;
    return m;
}

PaddedSpace::PaddedSpace(const Grid& g, int M) : grid_(g), M_(M)
{
    if (M < g.n() || M <= 2 * g.band_index_radius())
        throw std::invalid_argument("PaddedSpace: padded size too small");
}

CVector PaddedSpace::to_physical(const ScalarField& u) const
{
    CVector out(size());
    to_physical(u, out);
    return out;
}

void PaddedSpace::to_physical(const ScalarField& u, CVector& out) const
{
    require_same_grid(u.grid(), grid_, "PaddedSpace::to_physical");
    out.resize(size());
    kernels::pad_band(u.data(), grid_.n(), grid_.band_index_radius(), out.data(), M_);
    fft3(M_, out, Direction::inverse);
}

ScalarField PaddedSpace::to_band(CVector samples) const
{
    ScalarField out(grid_);
    to_band(samples, out);
    return out;
}

void PaddedSpace::to_band(CVector& samples, ScalarField& out) const
{
    if (samples.size() != size())
        throw std::invalid_argument("PaddedSpace::to_band: size mismatch");
    if (out.grid() != grid_)
        out = ScalarField(grid_);
    fft3(M_, samples, Direction::forward);
    kernels::truncate_band(samples.data(), M_, grid_.band_index_radius(), out.data(), grid_.n());
}

double PaddedSpace::integrate_re(const CVector& f) const
{
    const std::size_t n = f.size();
    const std::size_t blocks = (n + kernels::reduction_block - 1) / kernels::reduction_block;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b)
    {
        double acc = 0.0;
        const std::size_t hi = std::min(n, (b + 1) * kernels::reduction_block);
        for (std::size_t i = b * kernels::reduction_block; i < hi; ++i)
            acc += f[i].real();
        partial[b] = acc;
    }
    double total = 0.0;
    for (double p : partial)
        total += p;
    return grid_.volume() / static_cast<double>(size()) * total;
}

double PaddedSpace::integrate_abs2(const CVector& f) const
{
    return grid_.volume() / static_cast<double>(size()) * kernels::sum_abs2(f.data(), f.size());
}

double PaddedSpace::integrate_dot(const CVector& f, const CVector& g) const
{
    return grid_.volume() / static_cast<double>(size()) * kernels::dot_re(f.data(), g.data(), f.size());
}

} // namespace mkg
