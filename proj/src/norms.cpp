#include "mkg/norms.hpp"

#include "mkg/kernels.hpp"

#include <cmath>
#include <vector>

namespace mkg
{

namespace
{

double weighted_sum(const ScalarField& u, double s, bool homogeneous)
{
    const Grid& g = u.grid();
    const int n = g.n();
    std::vector<double> plane(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
    {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const Vec3 k = g.k(i, j, l);
                const double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                const double a2 = std::norm(u[g.index(i, j, l)]);
                if (homogeneous)
                {
                    if (r2 > 0.0)
                        acc += std::pow(r2, s) * a2;
                }
                else
                {
                    acc += std::pow(1.0 + r2, s) * a2;
                }
            }
        plane[l] = acc;
    }
    double total = 0.0;
    for (double p : plane)
        total += p;
    return g.volume() * total;
}

} // namespace

double sobolev_norm(const ScalarField& u, double s, bool homogeneous)
{
    if (homogeneous && s < 0.0)
    {
        const double scale = max_coeff(u);
        if (std::abs(u[0]) > 1e-13 * scale)
            throw std::domain_error("sobolev_norm: homogeneous negative-order norm of a field with nonzero mean");
    }
    return std::sqrt(weighted_sum(u, s, homogeneous));
}

double sobolev_norm(const VectorField& v, double s, bool homogeneous)
{
    double acc = 0.0;
    for (int j = 0; j < 3; ++j)
    {
        const double c = sobolev_norm(v[j], s, homogeneous);
        acc += c * c;
    }
    return std::sqrt(acc);
}

namespace
{

// Sum of squared H^{s-1} norms of d_t and spatial gradients of one scalar.
double gradient_part_sq(const ScalarField& u, const ScalarField& u_t, double s, bool hom)
{
    const double a = sobolev_norm(u_t, s - 1.0, hom);
    // ||grad u||_{H^{s-1}}^2 = L^3 sum |k|^2 w^(2s-2) |c|^2, computed as one
    // weighted sum of |k|^2|c|^2 instead of three derivative fields.
    const Grid& g = u.grid();
    const int n = g.n();
    double acc = 0.0;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const Vec3 k = g.k(i, j, l);
                const double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if (r2 == 0.0)
                    continue;
                const double w = hom ? std::pow(r2, s - 1.0) : std::pow(1.0 + r2, s - 1.0);
                acc += r2 * w * std::norm(u[g.index(i, j, l)]);
            }
    return a * a + g.volume() * acc;
}

double gradient_total_sq(const GaugeState& st, double s, bool hom)
{
    double acc = gradient_part_sq(st.A0, st.A0_t, s, hom);
    for (int j = 0; j < 3; ++j)
        acc += gradient_part_sq(st.A[j], st.A_t[j], s, hom);
    acc += gradient_part_sq(st.phi, st.phi_t, s, hom);
    return acc;
}

} // namespace

double bracket_norm(const GaugeState& st, double s)
{
    const double grad = std::sqrt(gradient_total_sq(st, s, false));
    const double a = sobolev_norm(st.A, s, false);
    const double p = sobolev_norm(st.phi, s, false);
    return grad + std::sqrt(a * a + p * p);
}

double gradient_norm_hom(const GaugeState& st, double s) { return std::sqrt(gradient_total_sq(st, s, true)); }

double l2_quadrature(const ScalarField& u)
{
    const CVector x = u.samples();
    const Grid& g = u.grid();
    return std::sqrt(g.volume() / static_cast<double>(g.size()) * kernels::sum_abs2(x.data(), x.size()));
}

} // namespace mkg
