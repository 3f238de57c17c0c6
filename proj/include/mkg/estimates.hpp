#pragma once

#include "mkg/field.hpp"
#include "mkg/imethod.hpp"
#include "mkg/state.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mkg::estimates
{

struct FrequencyTriple
{
    Vec3 xi[3];
    double tau[3] = {0.0, 0.0, 0.0};

    // xi[0] is set to -(xi1 + xi2).
    static FrequencyTriple make(const Vec3& xi1, double tau1, const Vec3& xi2, double tau2, double tau0);

    double N(int j) const;      // |xi_j|
    double lambda(int j) const; // <|xi_j| - |tau_j|>
};

// Empirical constant of a sampled inequality A <= C B.
struct EstimateReport
{
    std::string name;
    long samples = 0;
    double max_ratio = 0.0;
    double p50 = 0.0;
    double p99 = 0.0;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = 0;
};

EstimateReport summarize(std::string name, std::vector<double> ratios, std::uint64_t seed,
                         std::vector<std::pair<std::string, double>> params = {});

// Samplers draw batches of `batch_size` from streams seeded by (seed, batch),
// so results do not depend on the thread count.
constexpr long batch_size = 1024;

// |xi1 ^ xi2| / (N0 N1 N2)^(1/2) (<tau0 + tau1 + tau2> + lambda0 + lambda1 + lambda2)^(1/2)
double symbol_bound_ratio(const FrequencyTriple& t);
EstimateReport sample_symbol_bound(long samples, std::uint64_t seed = 0);

// ||I(vw) - v Iw|| / (M^-1 m(M) ||v||_inf ||w||), v on |k| <= R, w on M/2 <= |k| <= 2M.
double commutator_l2_ratio(const ScalarField& v, const ScalarField& w, double M, const imethod::IContext& ctx,
                           double R = 1.0);
// Sparse sampler on the unit lattice: v on the seven modes |k| <= 1, w Gaussian
// on the shell [M/2, 2M].
EstimateReport sample_commutator(double N, double M, double s, long samples, std::uint64_t seed = 0);

struct ProductExponents
{
    double s = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    bool homogeneous_target = false; // measure fg in the homogeneous norm

    void validate() const;
};

// ||fg||_{H^s} / (||f||_{H^s1} ||g||_{H^s2}); the product is formed alias-free.
double product_norm_ratio(const ScalarField& f, const ScalarField& g, const ProductExponents& e);
// f Gaussian on [1, 3], g Gaussian on [3.5, 5] (disjoint shells, so fg has zero mean).
EstimateReport sample_product_norm(const Grid& g, const ProductExponents& e, long samples, std::uint64_t seed = 0);

// ||Iu||_{H^1} / ||u||_{H^s}
double i_loss_ratio(const ScalarField& u, const imethod::IContext& ctx);
// Shell-energy sampler on the unit lattice up to |k| <= 4N: a Gaussian field on
// a random shell has independent Gamma-distributed energies per |k|^2 value.
// Ratios are reported divided by N^(1-s).
EstimateReport sample_i_loss(double N, double s, long samples, std::uint64_t seed = 0);

// min over grid points and j of |D_j phi| - |d_j |phi||, skipping |phi| < floor.
double diamagnetic_gap(const ScalarField& phi, const VectorField& A, double floor = 1e-6);

// max |u| / (||u||_{L2} / L^(3/2)) for fields band-limited to R.
EstimateReport sample_bernstein(const Grid& g, double R, long samples, std::uint64_t seed = 0);
// ||A0||_{H1 hom} / ||Im(phi conj(phi_t))||_{H-1 hom} for the solved A0.
EstimateReport sample_cz(const Grid& g, long samples, std::uint64_t seed = 0);
// H / ((||grad A0||^2 + ||grad_{x,t} Phi||^2)(1 + ||phi||_{L3}^2))
EstimateReport sample_h_bound(const Grid& g, long samples, std::uint64_t seed = 0);

struct NoSmoothingOptions
{
    double N = 100.0;
    double eps = 0.01;
    double s = 0.9;
    long samples = 1000000;
    std::uint64_t seed = 0;
    int time_points = 64;           // Gauss-Legendre points per time panel
    Vec3 f_shift = {0.0, 0.0, 0.0}; // displaces the support of f
    bool closed_form_time = false;  // exact time integral instead of quadrature, for cross-checks

    void validate() const;
};

struct NoSmoothingResult
{
    double value = 0.0;
    double std_error = 0.0;
    double eps_cubed = 0.0;
    int time_panels = 0;
    long samples = 0;
};

// Monte Carlo estimate of the trilinear integral over xi in B(N e1, 1) and
// eta in B(e2/10, 1/100) with the time integral by composite Gauss-Legendre.
NoSmoothingResult nosmoothing_integral(const NoSmoothingOptions& opt);

// Closed form of int_0^1 cos(a t) cos(b t) cos(c t) dt.
double cosine_triple_integral(double a, double b, double c);

} // namespace mkg::estimates
