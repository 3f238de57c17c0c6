#pragma once

#include "mkg/dynamics.hpp"
#include "mkg/symbol.hpp"

#include <string>
#include <vector>

namespace mkg::imethod
{

struct IContext
{
    double s = 0.9;
    double N = 1.0; // wavenumber units
    Symbol symbol;

    // Validates 1/2 < s < 1 and 1 <= N <= resolved band radius.
    static IContext make(const Grid& g, double s, double N);
    // True when N <= k_resolved / 4, so the grid carries frequencies well above 2N.
    bool resolves_high_band() const;
};

GaugeState apply_i_state(const GaugeState& st, const IContext& ctx);
double modified_hamiltonian(const GaugeState& st, const IContext& ctx);

struct MollifiedD0
{
    VectorField a;   // I d_t A
    ScalarField phi; // I phi_t + i (I A0)(I phi), truncated to the band
};

MollifiedD0 mollified_d0(const GaugeState& st, const IContext& ctx);

// I(v d_j w) - (I v) d_j (I w): the bilinear core of [I, N2].
ScalarField bilinear_commutator(const ScalarField& v, const ScalarField& w, int j, const IContext& ctx);

struct Commutators
{
    VectorField c0_a;
    ScalarField c0_phi;
    std::array<ScalarField, 5> c1_a;
    std::array<ScalarField, 5> c1_b;
    std::vector<ScalarField> c2; // layout of Nonlinearities::n2
    std::vector<ScalarField> c3; // layout of Nonlinearities::n3

    double max_coeff() const;
};

Commutators commutators(const GaugeState& st, const IContext& ctx);

struct DriftTerms
{
    double one = 0.0;
    double two = 0.0;
    double three = 0.0;
    // Band-truncation remainder -<D0~ I phi, (1 - P_B) D~^a D~_a I phi>; zero
    // on the continuum, small on resolved data.
    double remainder = 0.0;

    // d/dt H[I Phi] = -(one) - (two) + (three) + remainder
    double rate() const { return -one - two + three + remainder; }
};

// Pre: st is a solution snapshot with freshly solved A0, A0_t.
DriftTerms drift_terms(const GaugeState& st, const IContext& ctx);

struct DriftRow
{
    double N = 0.0;
    double H0 = 0.0;
    double sup_drift = 0.0;
    double T = 0.0;
};

struct DriftReport
{
    std::vector<DriftRow> rows; // sorted by N
    double slope = 0.0;         // least-squares slope of log sup_drift vs log N
    double lambda = 1.0;        // rescaling applied to the data
    double integrator_error = 0.0; // sup |H(t) - H(0)| of the unmodified Hamiltonian
    std::vector<std::string> warnings;
};

struct DriftOptions
{
    double s = 0.9;
    double target_H = 1.0;  // rescale until max_N H[I Phi(0)] <= target_H
    int sample_every = 1;     // steps between Hamiltonian samples
};

DriftReport drift_experiment(const GaugeState& initial, double T, std::vector<double> N_list,
                             const DriftOptions& opt, const dynamics::StepConfig& step_cfg);

struct ScheduleResult
{
    double lambda = 0.0; // may be +inf when it overflows a double
    double N = 0.0;
    double log10_lambda = 0.0;
    double log10_N = 0.0;
    double margin_scaling = 0.0; // lambda^(1/2-s) N^(1-s)
    double margin_time = 0.0;    // lambda T / N^(s-1/2)
    bool feasible = false;
};

constexpr long schedule_log2_cap = 1L << 20;

// Doubling search in N from 1 up to 2^schedule_log2_cap.
ScheduleResult choose_parameters(double T, double s, double margin = 0.1);

// Smallest s (to `tol`) for which choose_parameters(T, s) is feasible.
double feasibility_threshold(double T, double margin = 0.1, double tol = 1e-6);

} // namespace mkg::imethod
