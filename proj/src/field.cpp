#include "mkg/field.hpp"

#include "mkg/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace mkg
{

ScalarField::ScalarField(const Grid& g) : grid_(g), c_(g.size(), Complex(0.0)) {}

ScalarField ScalarField::from_samples(const Grid& g, CVector samples)
{
    if (samples.size() != g.size())
        throw std::invalid_argument("from_samples: size does not match grid");
    ScalarField u;
    u.grid_ = g;
    u.c_ = transform(g, std::move(samples), Direction::forward);
    return u;
}

CVector ScalarField::samples() const { return transform(grid_, c_, Direction::inverse); }

ScalarField& ScalarField::operator+=(const ScalarField& o)
{
    require_same_grid(grid_, o.grid_, "field +=");
    kernels::axpy(1.0, o.data(), data(), size());
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o)
{
    require_same_grid(grid_, o.grid_, "field -=");
    kernels::axpy(-1.0, o.data(), data(), size());
    return *this;
}

ScalarField& ScalarField::operator*=(Complex a)
{
    kernels::scale(data(), size(), a);
    return *this;
}

void ScalarField::add_scaled(Complex a, const ScalarField& o)
{
    require_same_grid(grid_, o.grid_, "field add_scaled");
    kernels::axpy(a, o.data(), data(), size());
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(Complex a, ScalarField b) { return b *= a; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

VectorField& VectorField::operator+=(const VectorField& o)
{
    for (int j = 0; j < 3; ++j)
        c[j] += o.c[j];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o)
{
    for (int j = 0; j < 3; ++j)
        c[j] -= o.c[j];
    return *this;
}

VectorField& VectorField::operator*=(Complex a)
{
    for (auto& x : c)
        x *= a;
    return *this;
}

void VectorField::add_scaled(Complex a, const VectorField& o)
{
    for (int j = 0; j < 3; ++j)
        c[j].add_scaled(a, o.c[j]);
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(Complex a, VectorField b) { return b *= a; }

CVector transform(const Grid& g, CVector data, Direction dir)
{
    if (data.size() != g.size())
        throw std::invalid_argument("transform: size does not match grid");
    fft3(g.n(), data, dir);
    return data;
}

namespace
{

// Run f(idx, kx, ky, kz) over the lattice, parallel over z-planes.
template <class F>
void for_each_mode(const Grid& g, F f)
{
    const int n = g.n();
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
    {
        const double kz = g.wavenumber(l);
        for (int j = 0; j < n; ++j)
        {
            const double ky = g.wavenumber(j);
            for (int i = 0; i < n; ++i)
                f(g.index(i, j, l), g.wavenumber(i), ky, kz);
        }
    }
}

} // namespace

ScalarField derivative(const ScalarField& u, int j)
{
    ScalarField out(u.grid());
    const Complex* in = u.data();
    Complex* o = out.data();
    for_each_mode(u.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
        const double k = j == 0 ? kx : (j == 1 ? ky : kz);
        o[idx] = Complex(0.0, k) * in[idx];
    });
    return out;
}

VectorField gradient(const ScalarField& u)
{
    return VectorField(derivative(u, 0), derivative(u, 1), derivative(u, 2));
}

ScalarField divergence(const VectorField& v)
{
    ScalarField out(v.grid());
    Complex* o = out.data();
    const Complex *x = v[0].data(), *y = v[1].data(), *z = v[2].data();
    for_each_mode(v.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
        o[idx] = Complex(0.0, 1.0) * (kx * x[idx] + ky * y[idx] + kz * z[idx]);
    });
    return out;
}

VectorField curl(const VectorField& v)
{
    VectorField out(v.grid());
    const Complex *x = v[0].data(), *y = v[1].data(), *z = v[2].data();
    Complex *ox = out[0].data(), *oy = out[1].data(), *oz = out[2].data();
    const Complex I(0.0, 1.0);
    for_each_mode(v.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
        ox[idx] = I * (ky * z[idx] - kz * y[idx]);
        oy[idx] = I * (kz * x[idx] - kx * z[idx]);
        oz[idx] = I * (kx * y[idx] - ky * x[idx]);
    });
    return out;
}

ScalarField laplacian(const ScalarField& u)
{
    ScalarField out(u.grid());
    const Complex* in = u.data();
    Complex* o = out.data();
    for_each_mode(u.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
        o[idx] = -(kx * kx + ky * ky + kz * kz) * in[idx];
    });
    return out;
}

VectorField laplacian(const VectorField& v)
{
    return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

ScalarField conjugate(const ScalarField& u)
{
    const Grid& g = u.grid();
    const int n = g.n();
    ScalarField out(g);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const std::size_t mirror = g.index((n - i) % n, (n - j) % n, (n - l) % n);
                out[g.index(i, j, l)] = std::conj(u[mirror]);
            }
    return out;
}

ScalarField real_part(const ScalarField& u)
{
    ScalarField out = conjugate(u);
    out += u;
    out *= 0.5;
    return out;
}

ScalarField truncate_to_band(const ScalarField& u)
{
    const Grid& g = u.grid();
    ScalarField out = u;
    const int n = g.n();
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (!g.in_band(i, j, l))
                    out[g.index(i, j, l)] = 0.0;
    return out;
}

VectorField truncate_to_band(const VectorField& v)
{
    return VectorField(truncate_to_band(v[0]), truncate_to_band(v[1]), truncate_to_band(v[2]));
}

double out_of_band(const ScalarField& u)
{
    const Grid& g = u.grid();
    const int n = g.n();
    double m = 0.0;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (!g.in_band(i, j, l))
                    m = std::max(m, std::abs(u[g.index(i, j, l)]));
    return m;
}

double l2_norm(const ScalarField& u)
{
    return std::sqrt(u.grid().volume() * kernels::sum_abs2(u.data(), u.size()));
}

double l2_norm(const VectorField& v)
{
    double acc = 0.0;
    for (int j = 0; j < 3; ++j)
        acc += kernels::sum_abs2(v[j].data(), v[j].size());
    return std::sqrt(v.grid().volume() * acc);
}

double inner(const ScalarField& u, const ScalarField& v)
{
    require_same_grid(u.grid(), v.grid(), "inner");
    return u.grid().volume() * kernels::dot_re(u.data(), v.data(), u.size());
}

double inner(const VectorField& u, const VectorField& v)
{
    return inner(u[0], v[0]) + inner(u[1], v[1]) + inner(u[2], v[2]);
}

double max_coeff(const ScalarField& u) { return kernels::max_abs(u.data(), u.size()); }

double max_coeff(const VectorField& v)
{
    return std::max({max_coeff(v[0]), max_coeff(v[1]), max_coeff(v[2])});
}

Complex mean(const ScalarField& u) { return u[0]; }

} // namespace mkg
