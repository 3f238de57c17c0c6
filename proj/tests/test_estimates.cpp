#include "doctest.h"

#include "mkg/data.hpp"
#include "mkg/estimates.hpp"
#include "mkg/norms.hpp"
#include "mkg/symbol.hpp"

#include <cmath>
#include <numbers>

using namespace mkg;
using namespace mkg::estimates;

namespace
{

const double two_pi = 2.0 * std::numbers::pi;

double bracket(double x) { return std::sqrt(1.0 + x * x); }

} // namespace

TEST_CASE("symbol bound ratio")
{
    const FrequencyTriple par = FrequencyTriple::make({1, 2, 0}, 0.3, {-2, -4, 0}, 1.0, 0.5);
    CHECK(symbol_bound_ratio(par) == 0.0);

    const double r2 = std::sqrt(2.0);
    const FrequencyTriple perp = FrequencyTriple::make({1, 0, 0}, 1.0, {0, 1, 0}, 1.0, -r2);
    CHECK(perp.lambda(0) == doctest::Approx(1.0));
    const double expect = 1.0 / (std::pow(2.0, 0.25) * std::sqrt(bracket(2.0 - r2) + 3.0));
    CHECK(symbol_bound_ratio(perp) == doctest::Approx(expect).epsilon(1e-14));

    const FrequencyTriple swapped = FrequencyTriple::make({0, 1, 0}, 1.0, {1, 0, 0}, 1.0, -r2);
    CHECK(symbol_bound_ratio(swapped) == doctest::Approx(symbol_bound_ratio(perp)).epsilon(1e-15));

    const EstimateReport a = sample_symbol_bound(20000, 1), b = sample_symbol_bound(20000, 1);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(std::isfinite(a.max_ratio));
    CHECK(a.p50 <= a.p99);
    CHECK(a.p99 <= a.max_ratio);
    CHECK(a.samples == 20000);
}

TEST_CASE("commutator ratio on modes")
{
    const Grid g(32, two_pi);
    const double s = 0.8, N = 2, M = 4;
    const imethod::IContext ctx = imethod::IContext::make(g, s, N);
    const ScalarField v = plane_wave(g, 1, 0, 0, 1.0);
    const ScalarField w = plane_wave(g, 0, 4, 0, 1.0);
    const double amp = std::abs(i_symbol_value(std::sqrt(17.0), s, N) - i_symbol_value(4.0, s, N));
    REQUIRE(amp > 1e-3);
    const double expect = amp / (i_symbol_value(M, s, N) / M);
    CHECK(commutator_l2_ratio(v, w, M, ctx) == doctest::Approx(expect).epsilon(1e-12));

    // Everything below N: I is the identity on all supports.
    Rng rng(3);
    const imethod::IContext high = imethod::IContext::make(g, s, 8);
    const ScalarField vl = random_complex_field(g, 0, 1, 1.0, rng);
    const ScalarField wl = random_complex_field(g, 1, 4, 1.0, rng);
    CHECK(commutator_l2_ratio(vl, wl, 2, high) < 1e-15);

    CHECK_THROWS_AS(commutator_l2_ratio(plane_wave(g, 2, 0, 0, 1.0), w, M, ctx), ConfigError);
    CHECK_THROWS_AS(commutator_l2_ratio(v, plane_wave(g, 1, 0, 0, 1.0), M, ctx), ConfigError);
}

TEST_CASE("commutator sampler")
{
    const EstimateReport r = sample_commutator(2, 4, 0.8, 200, 5);
    CHECK(r.samples == 200);
    CHECK(r.max_ratio > 0.0);
    CHECK(std::isfinite(r.max_ratio));
    // Below the threshold the commutator vanishes identically.
    CHECK(sample_commutator(8, 2, 0.8, 50, 5).max_ratio == 0.0);
}

TEST_CASE("product norm ratio")
{
    const Grid g(16, two_pi);
    CHECK_THROWS_AS((ProductExponents{.s = 0.5, .s1 = -1.0, .s2 = 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((ProductExponents{.s = 0.8, .s1 = 0.5, .s2 = 2.0}.validate()), ConfigError);
    CHECK_THROWS_AS((ProductExponents{.s = 0.0, .s1 = 0.5, .s2 = 1.0}.validate()), ConfigError);

    const ProductExponents e{.s = 0.5, .s1 = 1.0, .s2 = 2.0};
    Rng rng(2);
    const ScalarField f = random_complex_field(g, 0, 5, 1.0, rng);
    const ScalarField one = plane_wave(g, 0, 0, 0, 1.0);
    const double L32 = std::pow(two_pi, 1.5);
    const double expect = sobolev_norm(f, 0.5, false) / (L32 * sobolev_norm(f, 1.0, false));
    CHECK(product_norm_ratio(f, one, e) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect <= 1.0 / L32);

    const ScalarField u = plane_wave(g, 2, 1, 0, 1.0);
    const double k = std::sqrt(5.0);
    CHECK(product_norm_ratio(u, u, e) ==
          doctest::Approx(std::pow(bracket(2 * k), 0.5) / (L32 * std::pow(bracket(k), 3.0))).epsilon(1e-12));

    const ProductExponents mult{.s = -1.0, .s1 = 0.9, .s2 = -0.1, .homogeneous_target = true};
    CHECK_THROWS_AS(product_norm_ratio(u, conjugate(u), mult), std::domain_error);
    const EstimateReport a = sample_product_norm(Grid(16, two_pi), mult, 40, 1);
    const EstimateReport b = sample_product_norm(Grid(32, two_pi), mult, 40, 1);
    CHECK(a.max_ratio > 0.0);
    CHECK(std::abs(a.max_ratio / b.max_ratio - 1.0) < 0.2);
}

TEST_CASE("I loss ratio")
{
    const Grid g(64, two_pi);
    const double s = 0.9, N = 4;
    const imethod::IContext ctx = imethod::IContext::make(g, s, N);
    CHECK(i_loss_ratio(plane_wave(g, 1, 0, 0, 1.0), ctx) == doctest::Approx(std::pow(std::sqrt(2.0), 1 - s)).epsilon(1e-13));
    const double r16 = i_loss_ratio(plane_wave(g, 16, 0, 0, 1.0), ctx);
    CHECK(r16 == doctest::Approx(std::pow(4.0, s - 1) * std::pow(bracket(16), 1 - s)).epsilon(1e-13));
    CHECK(r16 / std::pow(N, 1 - s) == doctest::Approx(1.0).epsilon(0.01));
    CHECK_THROWS_AS(i_loss_ratio(ScalarField(g), ctx), ConfigError);

    // A ratio of shell sums never exceeds the largest single-shell ratio.
    double single = 0.0;
    for (int q = 0; q <= 256; ++q)
    {
        const double m = i_symbol_value(std::sqrt(q), s, N);
        single = std::max(single, std::sqrt(m * m * (1.0 + q) / std::pow(1.0 + q, s)) / std::pow(N, 1 - s));
    }
    const EstimateReport r = sample_i_loss(4, s, 2000, 0);
    CHECK(r.max_ratio <= single + 1e-12);
    CHECK(r.max_ratio > 0.9);
}

TEST_CASE("diamagnetic gap")
{
    const Grid g(16, two_pi);
    ScalarField pos = plane_wave(g, 0, 0, 0, 2.0);
    pos.set_mode(1, 0, 0, 0.5);
    pos.set_mode(-1, 0, 0, 0.5);
    pos.set_mode(0, 2, 1, 0.2);
    pos.set_mode(0, -2, -1, 0.2);
    CHECK(std::abs(diamagnetic_gap(pos, VectorField(g))) < 1e-12);

    const ScalarField phase = plane_wave(g, 1, 1, 1, 1.0);
    VectorField A(g);
    A[0] = plane_wave(g, 0, 0, 0, 0.3);
    CHECK(diamagnetic_gap(phase, A) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(4);
    for (int t = 0; t < 5; ++t)
    {
        const ScalarField phi = random_complex_field(g, 0, 5, 1.0, rng);
        const VectorField a = random_vector_field(g, 0, 5, 1.0, rng);
        CHECK(diamagnetic_gap(phi, a) >= -1e-8);
    }
}

TEST_CASE("reported constants")
{
    const Grid g(16, two_pi);
    const EstimateReport b = sample_bernstein(g, 3, 50, 0);
    CHECK(b.max_ratio >= 1.0);
    CHECK(std::isfinite(b.max_ratio));
    const EstimateReport cz = sample_cz(g, 10, 0);
    CHECK(cz.max_ratio > 0.0);
    CHECK(cz.max_ratio <= 1.0 + 1e-8);
    const EstimateReport h = sample_h_bound(g, 5, 0);
    CHECK(h.max_ratio > 0.0);
    CHECK(std::isfinite(h.max_ratio));
}

TEST_CASE("lack-of-smoothing integral")
{
    CHECK(cosine_triple_integral(0, 0, 0) == doctest::Approx(1.0));
    CHECK(cosine_triple_integral(1.0, 2.0, 3.0) ==
          doctest::Approx(0.25 * (std::sin(6.0) / 6 + 1.0 + std::sin(2.0) / 2 + std::sin(4.0) / 4)));

    NoSmoothingOptions opt{.N = 50, .eps = 0.01, .samples = 100000, .seed = 3};
    const NoSmoothingResult q = nosmoothing_integral(opt);
    opt.closed_form_time = true;
    const NoSmoothingResult c = nosmoothing_integral(opt);
    CHECK(q.value == doctest::Approx(c.value).epsilon(1e-10));
    CHECK(q.value > 0.0);
    CHECK(q.std_error < 0.05 * q.value);

    opt.eps = 0.1;
    CHECK(nosmoothing_integral(opt).value == doctest::Approx(100.0 * c.value).epsilon(1e-12));

    opt.f_shift = {0.0, 0.0, 10.0};
    CHECK(nosmoothing_integral(opt).value == 0.0);

    opt.samples = 1000;
    CHECK_THROWS_AS(nosmoothing_integral(opt), ConfigError);
    opt.samples = 100000;
    opt.N = 10;
    CHECK_THROWS_AS(nosmoothing_integral(opt), ConfigError);
}
