#pragma once

#include "mkg/elliptic.hpp"
#include "mkg/padded.hpp"
#include "mkg/state.hpp"

#include <array>
#include <functional>
#include <vector>

namespace mkg::dynamics
{

struct StepConfig
{
    double dt = 0.005;
    double t_end = 1.0;
    int reproject_every = 1;
    int record_every = 1; // steps between trajectory rows
    double bracket_s = 0.9;
    elliptic::EllipticConfig elliptic;

    // Throws ConfigError; enforces dt <= 0.5 * grid spacing.
    void validate(const Grid& g) const;
};

// Antisymmetric Q_jk = d_j phi d_k psi - d_k phi d_j psi, truncated to the band.
struct NullForm
{
    std::array<ScalarField, 9> q;
    const ScalarField& operator()(int j, int k) const { return q[3 * j + k]; }
};

NullForm null_form_q(const ScalarField& phi, const ScalarField& psi);

// Real component lists used by the caricature products.
//   under = (A1, A2, A3, Re phi, Im phi), full = (A0, under...)
std::array<ScalarField, 5> under_components(const VectorField& A, const ScalarField& phi);

struct Nonlinearities
{
    VectorField n0_a;                   // P Im(phi conj(grad phi))
    ScalarField n0_phi;                 // P(A) . grad phi
    std::array<ScalarField, 5> n1_a;    // (d_t A0) * under_b
    std::array<ScalarField, 5> n1_b;    // A0 * d_t under_b
    std::vector<ScalarField> n2;        // under_a d_j under_b, index (a*3 + j)*5 + b
    std::vector<ScalarField> n3;        // full_a full_b full_c for a <= b <= c, lexicographic

    static int n2_index(int a, int j, int b) { return (a * 3 + j) * 5 + b; }
};

Nonlinearities nonlinearities(const GaugeState& st);

struct Accelerations
{
    VectorField A_tt;
    ScalarField phi_tt;
};

// Pseudospectral evaluator with reusable padded buffers. Not thread-safe;
// one per trajectory.
class Evaluator
{
public:
    Evaluator(const Grid& g, const elliptic::EllipticConfig& cfg);

    // Refresh A0 (CG, warm-started from st.A0) and A0_t from (A, phi, phi_t),
    // then return the second time derivatives.
    Accelerations stage(GaugeState& st);
    // Second time derivatives using the stored A0, A0_t.
    Accelerations accelerations(const GaugeState& st);
    void solve_constraints(GaugeState& st);

    int last_cg_iterations() const { return cg_iterations_; }

private:
    Accelerations assemble(GaugeState& st, bool solve, bool want_accelerations);

    Grid grid_;
    elliptic::EllipticConfig cfg_;
    PaddedSpace space_;
    CVector P_, Pt_, w_, tmp_;
    std::array<CVector, 3> G_, a_;
    int cg_iterations_ = 0;
};

GaugeState solve_constraints(GaugeState st, const elliptic::EllipticConfig& cfg = {});
Accelerations rhs(const GaugeState& st);

// One classical RK4 step of (A, A_t, phi, phi_t); A0, A0_t are re-solved at
// every stage and for the returned state.
GaugeState step(const GaugeState& st, const StepConfig& cfg);
GaugeState step(const GaugeState& st, double dt, Evaluator& ev);

struct TrajectoryRow
{
    double t = 0.0;
    double H = 0.0;
    double divA_rel = 0.0;
    double bracket_norm_s = 0.0;
    double mass_L2_phi = 0.0;
};

struct Trajectory
{
    std::vector<TrajectoryRow> rows;
    GaugeState final_state;
    int steps = 0;
    double dt = 0.0;
};

// Called after every step (and once with step 0 for the initial state).
using Observer = std::function<void(const GaugeState&, int step)>;

Trajectory evolve(const GaugeState& initial, const StepConfig& cfg, const Observer& observer = {});

TrajectoryRow diagnostics(const GaugeState& st, double bracket_s);

double hamiltonian(const GaugeState& st);

// Exact time derivative of H along a path with the given derivatives.
double first_variation(const GaugeState& st, const StateDot& dot);

// first_variation = electric - scalar, with
//   electric = <E, grad dA0 - dA_t + Lap A - grad div A + Im(phi conj(D phi))>
//   scalar   = <D0 phi, D_j D_j phi - D0 D0 phi>
struct FirstVariation
{
    double electric = 0.0;
    double scalar = 0.0;
    double total() const { return electric - scalar; }
};
FirstVariation first_variation_parts(const GaugeState& st, const StateDot& dot);

// Time derivative of a solution state: (A0_t, d_t^2 A0 unknown -> 0, A_t, A_tt, phi_t, phi_tt).
StateDot solution_dot(const GaugeState& st);

GaugeState rescale(const GaugeState& st, double lambda);

double divergence_relative(const VectorField& A);

} // namespace mkg::dynamics
