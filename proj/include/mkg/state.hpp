#pragma once

#include "mkg/field.hpp"

namespace mkg
{

// Full field tuple (A0, d_t A0, A, d_t A, phi, d_t phi) at one instant.
struct GaugeState
{
    ScalarField A0;
    ScalarField A0_t;
    VectorField A;
    VectorField A_t;
    ScalarField phi;
    ScalarField phi_t;
    double time = 0.0;

    GaugeState() = default;
    explicit GaugeState(const Grid& g)
        : A0(g), A0_t(g), A(g), A_t(g), phi(g), phi_t(g)
    {
    }

    const Grid& grid() const { return phi.grid(); }
};

// Time derivative of every stored field.
struct StateDot
{
    ScalarField A0;
    ScalarField A0_t;
    VectorField A;
    VectorField A_t;
    ScalarField phi;
    ScalarField phi_t;

    StateDot() = default;
    explicit StateDot(const Grid& g)
        : A0(g), A0_t(g), A(g), A_t(g), phi(g), phi_t(g)
    {
    }
};

GaugeState operator+(GaugeState a, const GaugeState& b);
GaugeState operator-(GaugeState a, const GaugeState& b);
GaugeState scaled(GaugeState a, double c);
void add_scaled(GaugeState& a, double c, const StateDot& d);
GaugeState truncate_to_band(const GaugeState& s);

} // namespace mkg
