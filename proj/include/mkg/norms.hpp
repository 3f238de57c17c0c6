#pragma once

#include "mkg/field.hpp"
#include "mkg/state.hpp"

namespace mkg
{

// ||u||^2 = L^3 sum_k w(k)^(2s) |c_k|^2 with w = <k> or |k|; the homogeneous
// form drops k = 0 and rejects a nonzero mean when s < 0.
double sobolev_norm(const ScalarField& u, double s, bool homogeneous);
double sobolev_norm(const VectorField& v, double s, bool homogeneous);

// ||grad_{x,t} Phi||_{H^{s-1}} + ||(A, phi)||_{H^s}.
double bracket_norm(const GaugeState& st, double s);

// Homogeneous variant of the gradient part alone, used by the scaling checks.
double gradient_norm_hom(const GaugeState& st, double s);

// (L^3/n^3) sum_x |u(x)|^2 evaluated from physical samples.
double l2_quadrature(const ScalarField& u);

} // namespace mkg
