#pragma once

#include "mkg/elliptic.hpp"
#include "mkg/state.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace mkg
{

using Rng = std::mt19937_64;

// Gaussian coefficients on the shell k_lo <= |k| <= k_hi (physical wavenumber
// units) with |c_k| ~ |k|^-slope, scaled so the field's RMS value is `rms`.
ScalarField random_complex_field(const Grid& g, double k_lo, double k_hi, double rms, Rng& rng,
                                 double slope = 0.0);
ScalarField random_real_field(const Grid& g, double k_lo, double k_hi, double rms, Rng& rng,
                                 double slope = 0.0);
VectorField random_vector_field(const Grid& g, double k_lo, double k_hi, double rms, Rng& rng,
                                 double slope = 0.0);

ScalarField plane_wave(const Grid& g, int a, int b, int c, Complex amplitude);

enum class Preset
{
    zero,
    plane_wave,
    random_band,
    appendix
};

Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

struct DataSpec
{
    Preset preset = Preset::random_band;
    double k_lo = 1.0;
    double k_hi = 4.0;
    double amplitude = 0.02; // RMS of each random component
    double spectral_slope = 0.0; // |c_k| ~ |k|^-slope for phi and A, one less for time derivatives
    double eps = 0.01;       // appendix amplitude
    double N = 8.0;          // appendix carrier frequency
    double s = 0.9;
    std::uint64_t seed = 0;
};

// Raw (phi, phi_t, A, A_t) for a preset, made compatible by init_compatible.
GaugeState make_initial_state(const Grid& g, const DataSpec& spec, const elliptic::EllipticConfig& cfg = {});

} // namespace mkg
