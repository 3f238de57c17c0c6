#include "doctest.h"

#include "mkg/data.hpp"
#include "mkg/elliptic.hpp"
#include "mkg/norms.hpp"
#include "mkg/symbol.hpp"

#include <cmath>
#include <numbers>

using namespace mkg;
using namespace mkg::elliptic;

namespace
{
const double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("zero data gives zero potential")
{
    const Grid g(16, two_pi);
    const ScalarField A0 = solve_a0(ScalarField(g), ScalarField(g));
    CHECK(max_coeff(A0) == 0.0);
    CHECK(max_coeff(solve_a0_t(ScalarField(g), VectorField(g))) == 0.0);
}

TEST_CASE("constant phi gives a diagonal inversion")
{
    const Grid g(16, two_pi);
    const double c = 0.7;
    const ScalarField phi = plane_wave(g, 0, 0, 0, c);
    // Im(c conj(phi_t)) = cos x1 for phi_t = -i cos x1 / c
    const ScalarField phi_t = plane_wave(g, 1, 0, 0, Complex(0, -0.5 / c)) + plane_wave(g, -1, 0, 0, Complex(0, -0.5 / c));
    SolveInfo info;
    const ScalarField A0 = solve_a0(phi, phi_t, {}, &info);
    const ScalarField expect = (1.0 / (1.0 + c * c)) * (plane_wave(g, 1, 0, 0, 0.5) + plane_wave(g, -1, 0, 0, 0.5));
    CHECK(l2_norm(A0 - expect) < 1e-12 * l2_norm(expect));
    CHECK(info.iterations <= 2);
}

TEST_CASE("manufactured solution is recovered")
{
    const Grid g(32, two_pi);
    Rng rng(7);
    const ScalarField phi = random_complex_field(g, 0, 6, 1.0, rng);
    const ScalarField target = random_real_field(g, 0, 10, 1.0, rng);
    const ScreenedOperator op = ScreenedOperator::from_phi(phi);
    const ScalarField f = op.apply(target);
    SolveInfo info;
    const ScalarField A0 = op.solve(f, {}, &info);
    CHECK(l2_norm(A0 - target) < 1e-8 * l2_norm(target));
    CHECK(info.iterations <= 500);
    CHECK(info.residual <= 1e-10);
    for (std::size_t i = 1; i < info.energy.size(); ++i)
        CHECK(info.energy[i] <= info.energy[i - 1] + 1e-12 * std::abs(info.energy[i - 1]));
}

TEST_CASE("non-convergence and Poisson solvability are reported")
{
    const Grid g(16, two_pi);
    Rng rng(8);
    const ScalarField phi = random_complex_field(g, 0, 4, 2.0, rng);
    const ScalarField phi_t = random_complex_field(g, 0, 4, 2.0, rng);
    CHECK_THROWS_AS(solve_a0(phi, phi_t, EllipticConfig{.cg_tol = 1e-14, .cg_max_iter = 1}), EllipticError);
    const ScreenedOperator poisson = ScreenedOperator::from_phi(ScalarField(g));
    CHECK_THROWS_AS(poisson.solve(plane_wave(g, 0, 0, 0, 1.0), {}), EllipticError);
    CHECK_THROWS_AS(EllipticConfig{.cg_tol = 2.0}.validate(), ConfigError);
}

TEST_CASE("renormalized functional")
{
    const Grid g(32, two_pi);
    Rng rng(21);
    const ScalarField phi = random_complex_field(g, 1, 5, 0.5, rng);
    const ScalarField phi_t = random_complex_field(g, 1, 5, 0.5, rng);
    CHECK(a0_functional(ScalarField(g), phi, phi_t) == 0.0);

    const ScalarField A0 = solve_a0(phi, phi_t);
    const double Lmin = a0_functional(A0, phi, phi_t);
    CHECK(Lmin <= 0.0);
    for (int i = 0; i < 10; ++i)
    {
        const ScalarField d = random_real_field(g, 0, 10, 1e-3 * (i + 1), rng);
        CHECK(Lmin <= a0_functional(A0 + d, phi, phi_t));
    }
    // Against the unexpanded form L(A0) - L(0) on the padded lattice.
    {
        const PaddedSpace sp(g, 64);
        const CVector a = sp.to_physical(A0), p = sp.to_physical(phi), pt = sp.to_physical(phi_t);
        CVector d1(sp.size()), d0(sp.size());
        for (std::size_t i = 0; i < d1.size(); ++i)
        {
            d1[i] = pt[i] + Complex(0, 1) * a[i].real() * p[i];
            d0[i] = pt[i];
        }
        const double grad = l2_norm(gradient(A0));
        const double direct = 0.5 * grad * grad + 0.5 * (sp.integrate_abs2(d1) - sp.integrate_abs2(d0));
        CHECK(Lmin == doctest::Approx(direct).epsilon(1e-10));
    }
    const ScalarField u = random_real_field(g, 0, 8, 1.0, rng);
    const double grad = l2_norm(gradient(u));
    CHECK(a0_functional(u, ScalarField(g), ScalarField(g)) == doctest::Approx(0.5 * grad * grad).epsilon(1e-12));
}

TEST_CASE("time derivative of A0")
{
    const Grid g(16, two_pi);
    Rng rng(3);
    const ScalarField real_phi = random_real_field(g, 0, 5, 1.0, rng);
    CHECK(l2_norm(solve_a0_t(real_phi, VectorField(g))) < 1e-14);
    // phi = e^{i x1}: the current is a constant, annihilated by 1 - P.
    CHECK(l2_norm(solve_a0_t(plane_wave(g, 1, 0, 0, 1.0), VectorField(g))) < 1e-14);

    const ScalarField phi = random_complex_field(g, 0, 5, 1.0, rng);
    const VectorField A = leray_project(random_vector_field(g, 0, 5, 1.0, rng));
    const ScalarField A0_t = solve_a0_t(phi, A);
    const VectorField J = current(phi, A);
    const VectorField F = -1.0 * (J - leray_project(J));
    CHECK(l2_norm(gradient(A0_t) - F) <= 1e-10 * l2_norm(F));
}

TEST_CASE("compatible initial data")
{
    const Grid g(32, two_pi);
    const GaugeState zero = init_compatible(ScalarField(g), ScalarField(g), VectorField(g), VectorField(g));
    CHECK(max_coeff(zero.A0) == 0.0);
    CHECK(max_coeff(zero.A) == 0.0);
    CHECK(max_coeff(zero.A0_t) == 0.0);

    Rng rng(12);
    const ScalarField chi = random_real_field(g, 1, 8, 1.0, rng);
    const VectorField sol = leray_project(random_vector_field(g, 1, 8, 1.0, rng));
    const GaugeState st = init_compatible(ScalarField(g), ScalarField(g), sol + gradient(chi), VectorField(g));
    CHECK(l2_norm(st.A - sol) < 1e-12 * l2_norm(sol));
    CHECK(compatibility_residuals(st).div_A < 1e-10);

    const GaugeState r = make_initial_state(g, DataSpec{.preset = Preset::random_band, .seed = 2});
    const CompatResiduals res = compatibility_residuals(r);
    CHECK(res.div_A < 1e-10);
    CHECK(res.div_A_t < 1e-10);
    CHECK(res.gauss < 1e-8);
    CHECK(res.a0_t < 1e-8);
}
