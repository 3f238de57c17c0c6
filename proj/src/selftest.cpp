#include "mkg/selftest.hpp"

#include "mkg/data.hpp"
#include "mkg/dynamics.hpp"
#include "mkg/imethod.hpp"
#include "mkg/symbol.hpp"

#include <cmath>
#include <numbers>

namespace mkg
{

namespace
{

double rel(double err, double scale) { return scale > 0.0 ? err / scale : err; }

double state_scale(const GaugeState& st)
{
    return std::max({max_coeff(st.A0), max_coeff(st.A0_t), max_coeff(st.A), max_coeff(st.A_t), max_coeff(st.phi),
                     max_coeff(st.phi_t)});
}

GaugeState low_state(const Grid& g, double k_hi, Rng& rng)
{
    GaugeState st(g);
    st.A0 = random_real_field(g, 1, k_hi, 0.3, rng);
    st.A0_t = random_real_field(g, 1, k_hi, 0.3, rng);
    st.A = leray_project(random_vector_field(g, 1, k_hi, 0.3, rng));
    st.A_t = leray_project(random_vector_field(g, 1, k_hi, 0.3, rng));
    st.phi = random_complex_field(g, 0, k_hi, 0.3, rng);
    st.phi_t = random_complex_field(g, 0, k_hi, 0.3, rng);
    return st;
}

} // namespace

std::vector<CheckResult> run_selftest(int n, double tol)
{
    const Grid g(n, 2.0 * std::numbers::pi);
    Rng rng(2024);
    std::vector<CheckResult> out;
    const auto record = [&](std::string name, double err) { out.push_back({std::move(name), err, tol, err < tol}); };

    {
        CVector x(g.size());
        std::normal_distribution<double> normal;
        for (auto& z : x)
            z = Complex(normal(rng), normal(rng));
        const CVector y = ScalarField::from_samples(g, x).samples();
        double e = 0.0, s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            e = std::max(e, std::abs(x[i] - y[i]));
            s = std::max(s, std::abs(x[i]));
        }
        record("transform round trip", rel(e, s));
    }

    const VectorField v = random_vector_field(g, 0, g.k_resolved(), 1.0, rng);
    const VectorField Pv = leray_project(v);
    record("leray idempotent", rel(max_coeff(leray_project(Pv) - Pv), max_coeff(v)));
    record("leray divergence-free", rel(max_coeff(divergence(Pv)), max_coeff(gradient(v[0])) + max_coeff(v)));
    {
        const ScalarField chi = random_real_field(g, 1, g.k_resolved(), 1.0, rng);
        const VectorField grad = gradient(chi);
        record("leray annihilates gradients", rel(max_coeff(leray_project(grad)), max_coeff(grad)));
    }
    {
        const ScalarField u = random_complex_field(g, 0, g.k_resolved(), 1.0, rng);
        const ScalarField ab = apply_symbol(apply_symbol(u, Symbol::band(g, 4)), Symbol::band(g, 7));
        const ScalarField ba = apply_symbol(apply_symbol(u, Symbol::band(g, 7)), Symbol::band(g, 4));
        const ScalarField m = apply_symbol(u, Symbol::band(g, 4));
        record("band projection algebra", rel(std::max(max_coeff(ab - m), max_coeff(ba - m)), max_coeff(u)));
    }
    {
        const double N = g.k_resolved() / 2;
        const imethod::IContext ctx = imethod::IContext::make(g, 0.9, N);
        const GaugeState st = low_state(g, N / 3, rng);
        record("commutators vanish below N/3", rel(imethod::commutators(st, ctx).max_coeff(), state_scale(st)));
        const imethod::IContext full = imethod::IContext::make(g, 0.9, g.k_resolved());
        const GaugeState wide = low_state(g, g.k_resolved(), rng);
        record("commutators vanish at the band edge", rel(imethod::commutators(wide, full).max_coeff(), state_scale(wide)));
    }
    {
        const double s = 0.7, N = 3;
        const imethod::IContext ctx = imethod::IContext::make(g, s, N);
        const int k1[3] = {4, 0, 0}, k2[3] = {0, 5, 1};
        const ScalarField a = plane_wave(g, k1[0], k1[1], k1[2], 1.0);
        const ScalarField b = plane_wave(g, k2[0], k2[1], k2[2], Complex(0.5, -0.25));
        const double m_sum = i_symbol_value(std::sqrt(16.0 + 25.0 + 1.0), s, N);
        const double m_prod = i_symbol_value(4.0, s, N) * i_symbol_value(std::sqrt(26.0), s, N);
        double e = 0.0;
        for (int j = 0; j < 3; ++j)
        {
            ScalarField c = imethod::bilinear_commutator(a, b, j, ctx);
            const Complex expect = (m_sum - m_prod) * Complex(0.0, k2[j]) * Complex(0.5, -0.25);
            e = std::max(e, std::abs(c.mode(4, 5, 1) - expect));
            c.set_mode(4, 5, 1, 0.0);
            e = std::max(e, max_coeff(c));
        }
        record("two-mode commutator", e);
    }
    {
        const ScalarField f = real_part(random_complex_field(g, 0, g.k_resolved() / 2, 1.0, rng));
        const ScalarField h = random_complex_field(g, 0, g.k_resolved() / 2, 1.0, rng);
        const dynamics::NullForm fh = dynamics::null_form_q(f, h), hf = dynamics::null_form_q(h, f);
        const dynamics::NullForm ff = dynamics::null_form_q(h, h);
        double e = 0.0, s = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
            {
                e = std::max({e, max_coeff(fh(j, k) + hf(j, k)), max_coeff(fh(j, k) + fh(k, j)), max_coeff(ff(j, k))});
                s = std::max(s, max_coeff(fh(j, k)));
            }
        record("null form antisymmetry", rel(e, s));
    }
    {
        const double s = 0.9, N = 4;
        const Symbol m = Symbol::i_op(g, s, N);
        double e = 0.0;
        const int r = g.band_index_radius();
        for (int a = -r; a <= r; ++a)
            for (int b = 0; b <= r; ++b)
            {
                const double k = std::hypot(a, b);
                if (k > r)
                    continue;
                ScalarField u(g);
                u.set_mode(a, b, 0, 1.0);
                const double got = std::abs(apply_symbol(u, m).mode(a, b, 0));
                if (k <= N)
                    e = std::max(e, std::abs(got - 1.0));
                else if (k >= 2 * N)
                    e = std::max(e, std::abs(got - std::pow(k / N, s - 1.0)));
            }
        record("I symbol closed forms", e);
    }
    return out;
}

} // namespace mkg
