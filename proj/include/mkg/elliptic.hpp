#pragma once

#include "mkg/padded.hpp"
#include "mkg/state.hpp"

#include <vector>

namespace mkg::elliptic
{

struct EllipticConfig
{
    double cg_tol = 1e-10;
    int cg_max_iter = 500;

    void validate() const;
};

struct SolveInfo
{
    int iterations = 0;
    double residual = 0.0;       // final relative residual
    std::vector<double> energy;  // quadratic-form value per iteration
};

class EllipticError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

// (-Laplacian + P_B w) acting on band-limited real fields, where w >= 0 is
// given by samples on a padded lattice and P_B truncates to the band.
class ScreenedOperator
{
public:
    ScreenedOperator(const PaddedSpace& space, CVector weight);
    // Weight |phi|^2 sampled on the degree-4 padded lattice.
    static ScreenedOperator from_phi(const ScalarField& phi);

    ScalarField apply(const ScalarField& x) const;
    ScalarField solve(const ScalarField& rhs, const EllipticConfig& cfg, SolveInfo* info = nullptr,
                      const ScalarField* guess = nullptr) const;
    double mean_weight() const { return mean_w_; }
    bool degenerate() const { return max_w_ == 0.0; }

private:
    PaddedSpace space_;
    CVector w_;
    double mean_w_ = 0.0;
    double max_w_ = 0.0;
};

// Im(phi conj(phi_t)) truncated to the band.
ScalarField charge_density(const ScalarField& phi, const ScalarField& phi_t);

// Solves (-Laplacian + |phi|^2) A0 = Im(phi conj(phi_t)) by preconditioned CG.
ScalarField solve_a0(const ScalarField& phi, const ScalarField& phi_t, const EllipticConfig& cfg = {},
                     SolveInfo* info = nullptr);

// L(A0) - L(0) for L = 1/2 int |grad A0|^2 + |phi_t + i A0 phi|^2, i.e.
// int 1/2|grad A0|^2 - A0 Im(phi conj(phi_t)) + 1/2 A0^2 |phi|^2.
double a0_functional(const ScalarField& A0, const ScalarField& phi, const ScalarField& phi_t);

// The current J = Im(phi conj(grad phi)) - A|phi|^2, truncated to the band.
VectorField current(const ScalarField& phi, const VectorField& A);

// d_t A0 from grad d_t A0 = -(1-P) J.
ScalarField solve_a0_t(const ScalarField& phi, const VectorField& A);
ScalarField a0_t_from_current(const VectorField& J);

struct CompatResiduals
{
    double div_A = 0.0;
    double div_A_t = 0.0;
    double gauss = 0.0; // relative residual of the A0 equation
    double a0_t = 0.0;  // relative residual of grad d_t A0 = -(1-P) J
};

CompatResiduals compatibility_residuals(const GaugeState& st);

GaugeState init_compatible(const ScalarField& phi0, const ScalarField& phi_t0, const VectorField& A_raw,
                           const VectorField& A_t_raw, const EllipticConfig& cfg = {});

} // namespace mkg::elliptic
