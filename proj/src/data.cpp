#include "mkg/data.hpp"

#include "mkg/symbol.hpp"

#include <cmath>

namespace mkg
{

namespace
{

ScalarField gaussian_shell(const Grid& g, double k_lo, double k_hi, double rms, double slope, Rng& rng)
{
    if (!(k_hi >= k_lo) || k_lo < 0.0)
        throw ConfigError("random field: need 0 <= k_lo <= k_hi");
    std::normal_distribution<double> normal(0.0, 1.0);
    ScalarField u(g);
    const int n = g.n();
    double sum = 0.0;
    // Serial fill in a fixed order keeps the draw sequence reproducible.
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                if (!g.in_band(i, j, l))
                    continue;
                const Vec3 k = g.k(i, j, l);
                const double r = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
                if (r < k_lo * (1 - 1e-12) || r > k_hi * (1 + 1e-12))
                    continue;
                const double w = (slope == 0.0 || r == 0.0) ? 1.0 : std::pow(r, -slope);
                const Complex z = w * Complex(normal(rng), normal(rng));
                u[g.index(i, j, l)] = z;
                sum += std::norm(z);
            }
    if (sum > 0.0)
        u *= rms / std::sqrt(sum);
    return u;
}

// RMS wavenumber of the spectrum |c_k| ~ |k|^-slope on the shell, so that
// time derivatives get the amplitude of a wave with that spectrum.
double rms_wavenumber(const Grid& g, double k_lo, double k_hi, double slope)
{
    const int n = g.n();
    double num = 0.0, den = 0.0;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                if (!g.in_band(i, j, l))
                    continue;
                const Vec3 k = g.k(i, j, l);
                const double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                const double r = std::sqrt(r2);
                if (r == 0.0 || r < k_lo * (1 - 1e-12) || r > k_hi * (1 + 1e-12))
                    continue;
                const double w = std::pow(r, -2.0 * slope);
                num += w * r2;
                den += w;
            }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace

ScalarField random_complex_field(const Grid& g, double k_lo, double k_hi, double rms, Rng& rng, double slope)
{
    return gaussian_shell(g, k_lo, k_hi, rms, slope, rng);
}

ScalarField random_real_field(const Grid& g, double k_lo, double k_hi, double rms, Rng& rng, double slope)
{
    ScalarField u = real_part(gaussian_shell(g, k_lo, k_hi, 1.0, slope, rng));
    const double norm = l2_norm(u) / std::sqrt(g.volume());
    if (norm > 0.0)
        u *= rms / norm;
    return u;
}

VectorField random_vector_field(const Grid& g, double k_lo, double k_hi, double rms, Rng& rng, double slope)
{
    VectorField v(g);
    for (int j = 0; j < 3; ++j)
        v[j] = random_real_field(g, k_lo, k_hi, rms, rng, slope);
    return v;
}

ScalarField plane_wave(const Grid& g, int a, int b, int c, Complex amplitude)
{
    ScalarField u(g);
    u.set_mode(a, b, c, amplitude);
    return u;
}

Preset parse_preset(const std::string& name)
{
    if (name == "zero")
        return Preset::zero;
    if (name == "plane-wave")
        return Preset::plane_wave;
    if (name == "random-band")
        return Preset::random_band;
    if (name == "appendix")
        return Preset::appendix;
    throw ConfigError("data: unknown preset '" + name + "'");
}

std::string preset_name(Preset p)
{
    switch (p)
    {
    case Preset::zero:
        return "zero";
    case Preset::plane_wave:
        return "plane-wave";
    case Preset::random_band:
        return "random-band";
    case Preset::appendix:
        return "appendix";
    }
    return "?";
}

GaugeState make_initial_state(const Grid& g, const DataSpec& spec, const elliptic::EllipticConfig& cfg)
{
    ScalarField phi(g), phi_t(g);
    VectorField A(g), A_t(g);
    switch (spec.preset)
    {
    case Preset::zero:
        break;
    case Preset::plane_wave:
    {
        // phi = amp e^{i x1} moving in +x1, A = amp e2 cos x1 standing.
        const double amp = spec.amplitude;
        phi = plane_wave(g, 1, 0, 0, amp);
        phi_t = plane_wave(g, 1, 0, 0, Complex(0.0, -amp * g.dk()));
        A[1] = plane_wave(g, 1, 0, 0, 0.5 * amp) + plane_wave(g, -1, 0, 0, 0.5 * amp);
        break;
    }
    case Preset::random_band:
    {
        Rng rng(spec.seed);
        const double a = spec.amplitude;
        const double p = spec.spectral_slope;
        const double at = a * rms_wavenumber(g, spec.k_lo, spec.k_hi, p);
        phi = random_complex_field(g, spec.k_lo, spec.k_hi, a, rng, p);
        phi_t = random_complex_field(g, spec.k_lo, spec.k_hi, at, rng, p - 1.0);
        A = random_vector_field(g, spec.k_lo, spec.k_hi, a, rng, p);
        A_t = random_vector_field(g, spec.k_lo, spec.k_hi, at, rng, p - 1.0);
        break;
    }
    case Preset::appendix:
    {
        // Lattice version of the lack-of-smoothing data: phi carried at N e1
        // with size eps N^-s, A a low-frequency divergence-free shear
        // (A1 along e1, varying in x2).
        const int carrier = static_cast<int>(std::lround(spec.N / g.dk()));
        if (carrier < 1 || carrier > g.band_index_radius())
            throw ConfigError("appendix preset: carrier N outside the resolved band");
        const double a = spec.eps * std::pow(spec.N, -spec.s);
        phi = plane_wave(g, carrier, 0, 0, a);
        phi_t = plane_wave(g, carrier, 0, 0, Complex(0.0, -a * carrier * g.dk()));
        A[0] = plane_wave(g, 0, 1, 0, 0.5 * spec.eps) + plane_wave(g, 0, -1, 0, 0.5 * spec.eps);
        break;
    }
    }
    return elliptic::init_compatible(phi, phi_t, A, A_t, cfg);
}

} // namespace mkg
