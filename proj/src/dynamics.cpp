#include "mkg/dynamics.hpp"

#include "mkg/kernels.hpp"
#include "mkg/norms.hpp"
#include "mkg/symbol.hpp"

#include <cmath>
#include <sstream>

namespace mkg::dynamics
{

using elliptic::EllipticConfig;

void StepConfig::validate(const Grid& g) const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw ConfigError("t_end must be nonnegative");
    if (dt > 0.5 * g.spacing())
        throw ConfigError("dt violates the CFL guard dt <= 0.5 * spacing (" + std::to_string(0.5 * g.spacing()) + ")");
    if (reproject_every < 1)
        throw ConfigError("reproject_every must be at least 1");
    if (record_every < 1)
        throw ConfigError("record_every must be at least 1");
    elliptic.validate();
}

namespace
{

constexpr Complex I1(0.0, 1.0);

ScalarField imag_part(const ScalarField& u)
{
    // (u - conj u) / 2i
    ScalarField out = u - conjugate(u);
    out *= Complex(0.0, -0.5);
    return out;
}

// Truncated product of real band-limited fields evaluated on a padded lattice.
class ProductBuilder
{
public:
    explicit ProductBuilder(const Grid& g) : space_(PaddedSpace::for_degree(g, 4)) {}

    template <class F>
    ScalarField build(F f)
    {
        CVector out(space_.size());
        const std::size_t m = out.size();
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
            out[i] = f(i);
        return space_.to_band(std::move(out));
    }
    const PaddedSpace& space() const { return space_; }

private:
    PaddedSpace space_;
};

} // namespace

NullForm null_form_q(const ScalarField& phi, const ScalarField& psi)
{
    require_same_grid(phi.grid(), psi.grid(), "null_form_q");
    const PaddedSpace space = PaddedSpace::for_degree(phi.grid(), 3);
    std::array<CVector, 3> dphi, dpsi;
    for (int j = 0; j < 3; ++j)
    {
        dphi[j] = space.to_physical(derivative(phi, j));
        dpsi[j] = space.to_physical(derivative(psi, j));
    }
    NullForm out;
    for (int j = 0; j < 3; ++j)
        out.q[3 * j + j] = ScalarField(phi.grid());
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k)
        {
            CVector f(space.size());
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] = dphi[j][i] * dpsi[k][i] - dphi[k][i] * dpsi[j][i];
            out.q[3 * j + k] = space.to_band(std::move(f));
            out.q[3 * k + j] = -out.q[3 * j + k];
        }
    return out;
}

std::array<ScalarField, 5> under_components(const VectorField& A, const ScalarField& phi)
{
    return {A[0], A[1], A[2], real_part(phi), imag_part(phi)};
}

Nonlinearities nonlinearities(const GaugeState& st)
{
    const Grid& g = st.grid();
    ProductBuilder pb(g);
    const PaddedSpace& sp = pb.space();
    Nonlinearities out;

    // N0
    const CVector P = sp.to_physical(st.phi);
    std::array<CVector, 3> G;
    for (int j = 0; j < 3; ++j)
        G[j] = sp.to_physical(derivative(st.phi, j));
    VectorField im(g);
    for (int j = 0; j < 3; ++j)
        im[j] = pb.build([&](std::size_t i) { return Complex(std::imag(P[i] * std::conj(G[j][i])), 0.0); });
    out.n0_a = leray_project(im);
    const VectorField PA = leray_project(st.A);
    std::array<CVector, 3> pa;
    for (int j = 0; j < 3; ++j)
        pa[j] = sp.to_physical(PA[j]);
    out.n0_phi = pb.build([&](std::size_t i) {
        return pa[0][i].real() * G[0][i] + pa[1][i].real() * G[1][i] + pa[2][i].real() * G[2][i];
    });

    // N1
    const auto under = under_components(st.A, st.phi);
    const auto under_t = under_components(st.A_t, st.phi_t);
    std::array<CVector, 5> U, Ut;
    for (int b = 0; b < 5; ++b)
    {
        U[b] = sp.to_physical(under[b]);
        Ut[b] = sp.to_physical(under_t[b]);
    }
    const CVector a0 = sp.to_physical(st.A0);
    const CVector a0t = sp.to_physical(st.A0_t);
    for (int b = 0; b < 5; ++b)
    {
        out.n1_a[b] = pb.build([&](std::size_t i) { return Complex(a0t[i].real() * U[b][i].real(), 0.0); });
        out.n1_b[b] = pb.build([&](std::size_t i) { return Complex(a0[i].real() * Ut[b][i].real(), 0.0); });
    }

    // N2
    std::array<std::array<CVector, 3>, 5> dU;
    for (int b = 0; b < 5; ++b)
        for (int j = 0; j < 3; ++j)
            dU[b][j] = sp.to_physical(derivative(under[b], j));
    out.n2.resize(75);
    for (int a = 0; a < 5; ++a)
        for (int j = 0; j < 3; ++j)
            for (int b = 0; b < 5; ++b)
                out.n2[Nonlinearities::n2_index(a, j, b)] =
                    pb.build([&](std::size_t i) { return Complex(U[a][i].real() * dU[b][j][i].real(), 0.0); });

    // N3
    std::array<const CVector*, 6> F = {&a0, &U[0], &U[1], &U[2], &U[3], &U[4]};
    for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b)
            for (int c = b; c < 6; ++c)
                out.n3.push_back(pb.build([&](std::size_t i) {
                    return Complex((*F[a])[i].real() * (*F[b])[i].real() * (*F[c])[i].real(), 0.0);
                }));
    return out;
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(const Grid& g, const EllipticConfig& cfg)
    : grid_(g), cfg_(cfg), space_(PaddedSpace::for_degree(g, 4))
{
    cfg_.validate();
    const std::size_t m = space_.size();
    P_.resize(m);
    Pt_.resize(m);
    w_.resize(m);
    tmp_.resize(m);
    for (int j = 0; j < 3; ++j)
    {
        G_[j].resize(m);
        a_[j].resize(m);
    }
}

void Evaluator::solve_constraints(GaugeState& st) { assemble(st, true, false); }

Accelerations Evaluator::stage(GaugeState& st) { return assemble(st, true, true); }

Accelerations Evaluator::accelerations(const GaugeState& st)
{
    GaugeState& s = const_cast<GaugeState&>(st); // assemble only writes A0, A0_t when solving
    return assemble(s, false, true);
}

Accelerations Evaluator::assemble(GaugeState& st, bool solve, bool want_accelerations)
{
    require_same_grid(st.grid(), grid_, "Evaluator");
    const std::size_t m = space_.size();
    space_.to_physical(st.phi, P_);
    space_.to_physical(st.phi_t, Pt_);
    cg_iterations_ = 0;

    if (solve)
    {
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
        {
            w_[i] = std::norm(P_[i]);
            tmp_[i] = std::imag(P_[i] * std::conj(Pt_[i]));
        }
        ScalarField rho(grid_);
        space_.to_band(tmp_, rho);
        const elliptic::ScreenedOperator op(space_, w_);
        elliptic::SolveInfo info;
        st.A0 = op.solve(rho, cfg_, &info, &st.A0);
        cg_iterations_ = info.iterations;
    }

    for (int j = 0; j < 3; ++j)
    {
        space_.to_physical(derivative(st.phi, j), G_[j]);
        space_.to_physical(st.A[j], a_[j]);
    }
    VectorField J(grid_);
    for (int j = 0; j < 3; ++j)
    {
        const CVector& G = G_[j];
        const CVector& a = a_[j];
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
            tmp_[i] = std::imag(P_[i] * std::conj(G[i])) - a[i].real() * std::norm(P_[i]);
        space_.to_band(tmp_, J[j]);
    }
    if (solve)
        st.A0_t = elliptic::a0_t_from_current(J);
    if (!want_accelerations)
        return {};

    Accelerations out;
    out.A_tt = laplacian(st.A);
    out.A_tt += leray_project(J);

    space_.to_physical(st.A0, w_);
    space_.to_physical(st.A0_t, tmp_);
    CVector& R = G_[0];
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
    {
        const double ax = a_[0][i].real(), ay = a_[1][i].real(), az = a_[2][i].real();
        const double a0 = w_[i].real(), a0t = tmp_[i].real();
        const Complex adv = ax * G_[0][i] + ay * G_[1][i] + az * G_[2][i];
        R[i] = -2.0 * I1 * adv + 2.0 * I1 * a0 * Pt_[i] + I1 * a0t * P_[i] +
               (ax * ax + ay * ay + az * az - a0 * a0) * P_[i];
    }
    ScalarField Rb(grid_);
    space_.to_band(R, Rb);
    out.phi_tt = laplacian(st.phi);
    out.phi_tt -= Rb;
    return out;
}

GaugeState solve_constraints(GaugeState st, const EllipticConfig& cfg)
{
    Evaluator ev(st.grid(), cfg);
    ev.solve_constraints(st);
    return st;
}

Accelerations rhs(const GaugeState& st)
{
    Evaluator ev(st.grid(), EllipticConfig{});
    return ev.accelerations(st);
}

namespace
{

struct Increment
{
    VectorField A, A_t;
    ScalarField phi, phi_t;
};

Increment increment(const GaugeState& s, const Accelerations& acc)
{
    return {s.A_t, acc.A_tt, s.phi_t, acc.phi_tt};
}

GaugeState advance(const GaugeState& base, double h, const Increment& k)
{
    GaugeState s = base;
    s.A.add_scaled(h, k.A);
    s.A_t.add_scaled(h, k.A_t);
    s.phi.add_scaled(h, k.phi);
    s.phi_t.add_scaled(h, k.phi_t);
    return s;
}

void check_finite(const GaugeState& st, const char* where)
{
    const double m = std::max({max_coeff(st.A), max_coeff(st.A_t), max_coeff(st.phi), max_coeff(st.phi_t),
                               max_coeff(st.A0), max_coeff(st.A0_t)});
    if (!std::isfinite(m))
    {
        std::ostringstream os;
        os << where << ": non-finite field values at t = " << st.time;
        throw NumericalError(os.str());
    }
}

} // namespace

GaugeState step(const GaugeState& st, double dt, Evaluator& ev)
{
    // Stage increments are (A_t, A_tt, phi_t, phi_tt) of the stage states.
    // The input state's A0, A0_t are taken as already solved.
    const Increment K1 = increment(st, ev.accelerations(st));

    GaugeState s2 = advance(st, 0.5 * dt, K1);
    const Increment K2 = increment(s2, ev.stage(s2));

    GaugeState s3 = advance(st, 0.5 * dt, K2);
    s3.A0 = s2.A0;
    const Increment K3 = increment(s3, ev.stage(s3));

    GaugeState s4 = advance(st, dt, K3);
    s4.A0 = s3.A0;
    const Increment K4 = increment(s4, ev.stage(s4));

    GaugeState out = st;
    const double c1 = dt / 6.0, c2 = dt / 3.0;
    const std::array<std::pair<double, const Increment*>, 4> terms = {{{c1, &K1}, {c2, &K2}, {c2, &K3}, {c1, &K4}}};
    for (const auto& [c, K] : terms)
    {
        out.A.add_scaled(c, K->A);
        out.A_t.add_scaled(c, K->A_t);
        out.phi.add_scaled(c, K->phi);
        out.phi_t.add_scaled(c, K->phi_t);
    }
    out.A0 = s4.A0; // warm start for the closing solve
    out.time = st.time + dt;
    return out;
}

namespace
{

void reproject(GaugeState& st)
{
    st.A = leray_project(st.A);
    st.A_t = leray_project(st.A_t);
}

} // namespace

GaugeState step(const GaugeState& st, const StepConfig& cfg)
{
    cfg.validate(st.grid());
    Evaluator ev(st.grid(), cfg.elliptic);
    GaugeState out = step(st, cfg.dt, ev);
    reproject(out);
    ev.solve_constraints(out);
    check_finite(out, "step");
    return out;
}

double divergence_relative(const VectorField& A)
{
    double g2 = 0.0;
    for (int j = 0; j < 3; ++j)
    {
        const double g = l2_norm(gradient(A[j]));
        g2 += g * g;
    }
    const double d = l2_norm(divergence(A));
    return g2 > 0.0 ? d / std::sqrt(g2) : d;
}

TrajectoryRow diagnostics(const GaugeState& st, double bracket_s)
{
    TrajectoryRow r;
    r.t = st.time;
    r.H = hamiltonian(st);
    r.divA_rel = divergence_relative(st.A);
    r.bracket_norm_s = bracket_norm(st, bracket_s);
    r.mass_L2_phi = l2_norm(st.phi);
    return r;
}

Trajectory evolve(const GaugeState& initial, const StepConfig& cfg, const Observer& observer)
{
    cfg.validate(initial.grid());
    Trajectory tr;
    const long steps = cfg.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    tr.steps = static_cast<int>(steps);
    tr.dt = steps > 0 ? cfg.t_end / static_cast<double>(steps) : cfg.dt;
    Evaluator ev(initial.grid(), cfg.elliptic);
    GaugeState st = initial;
    const double t0 = initial.time;
    tr.rows.push_back(diagnostics(st, cfg.bracket_s));
    if (observer)
        observer(st, 0);
    for (long k = 1; k <= steps; ++k)
    {
        st = step(st, tr.dt, ev);
        st.time = t0 + tr.dt * static_cast<double>(k);
        if (k % cfg.reproject_every == 0)
            reproject(st);
        ev.solve_constraints(st);
        check_finite(st, "evolve");
        if (k % cfg.record_every == 0 || k == steps)
        {
            tr.rows.push_back(diagnostics(st, cfg.bracket_s));
            if (!std::isfinite(tr.rows.back().H))
                throw NumericalError("evolve: Hamiltonian became non-finite at t = " + std::to_string(st.time));
        }
        if (observer)
            observer(st, static_cast<int>(k));
    }
    tr.final_state = std::move(st);
    return tr;
}

// ---------------------------------------------------------------------------

double hamiltonian(const GaugeState& st)
{
    const Grid& g = st.grid();
    const VectorField E = gradient(st.A0) - st.A_t;
    const VectorField B = curl(st.A);
    const double e = l2_norm(E), b = l2_norm(B);
    double h = 0.5 * (e * e + b * b);

    const PaddedSpace sp = PaddedSpace::for_degree(g, 4);
    const CVector P = sp.to_physical(st.phi);
    CVector D = sp.to_physical(st.phi_t);
    const CVector a0 = sp.to_physical(st.A0);
    const std::size_t m = D.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
        D[i] += I1 * a0[i].real() * P[i];
    h += 0.5 * sp.integrate_abs2(D);
    for (int j = 0; j < 3; ++j)
    {
        CVector Dj = sp.to_physical(derivative(st.phi, j));
        const CVector a = sp.to_physical(st.A[j]);
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
            Dj[i] += I1 * a[i].real() * P[i];
        h += 0.5 * sp.integrate_abs2(Dj);
    }
    return h;
}

FirstVariation first_variation_parts(const GaugeState& st, const StateDot& dot)
{
    const Grid& g = st.grid();
    const VectorField E = gradient(st.A0) - st.A_t;
    VectorField Y = gradient(dot.A0) - dot.A_t;
    Y += laplacian(st.A);
    Y -= gradient(divergence(st.A));
    FirstVariation fv;
    fv.electric = inner(E, Y);

    const PaddedSpace sp = PaddedSpace::for_degree(g, 5);
    const std::size_t m = sp.size();
    const CVector P = sp.to_physical(st.phi);
    const CVector Pt = sp.to_physical(st.phi_t);
    const CVector Ptt = sp.to_physical(dot.phi_t);
    const CVector a0 = sp.to_physical(st.A0);
    const CVector a0d = sp.to_physical(dot.A0);
    const CVector lap = sp.to_physical(laplacian(st.phi));
    const CVector divA = sp.to_physical(divergence(st.A));

    CVector D0(m), DjDj(m);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
    {
        D0[i] = Pt[i] + I1 * a0[i].real() * P[i];
        DjDj[i] = lap[i] + I1 * divA[i].real() * P[i];
    }
    for (int j = 0; j < 3; ++j)
    {
        const CVector G = sp.to_physical(derivative(st.phi, j));
        const CVector a = sp.to_physical(st.A[j]);
        const CVector e = sp.to_physical(E[j]);
        CVector f(m);
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
        {
            const double aj = a[i].real();
            const Complex Dj = G[i] + I1 * aj * P[i];
            DjDj[i] += 2.0 * I1 * aj * G[i] - aj * aj * P[i];
            f[i] = e[i].real() * std::imag(P[i] * std::conj(Dj));
        }
        fv.electric += sp.integrate_re(f);
    }
    CVector rest(m);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
    {
        const double A0 = a0[i].real(), A0d = a0d[i].real();
        const Complex D0D0 = Ptt[i] + I1 * A0d * P[i] + 2.0 * I1 * A0 * Pt[i] - A0 * A0 * P[i];
        rest[i] = DjDj[i] - D0D0;
    }
    fv.scalar = sp.integrate_dot(D0, rest);
    return fv;
}

double first_variation(const GaugeState& st, const StateDot& dot) { return first_variation_parts(st, dot).total(); }

StateDot solution_dot(const GaugeState& st)
{
    const Accelerations acc = rhs(st);
    StateDot d(st.grid());
    d.A0 = st.A0_t;
    d.A = st.A_t;
    d.A_t = acc.A_tt;
    d.phi = st.phi_t;
    d.phi_t = acc.phi_tt;
    return d;
}

GaugeState rescale(const GaugeState& st, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ConfigError("rescale: lambda must be positive");
    const Grid g(st.grid().n(), st.grid().box() * lambda);
    auto move = [&](const ScalarField& u, double c) {
        ScalarField out(g);
        for (std::size_t i = 0; i < u.size(); ++i)
            out[i] = c * u[i];
        return out;
    };
    const double v = 1.0 / lambda, d = 1.0 / (lambda * lambda);
    GaugeState out(g);
    out.A0 = move(st.A0, v);
    out.A0_t = move(st.A0_t, d);
    out.phi = move(st.phi, v);
    out.phi_t = move(st.phi_t, d);
    for (int j = 0; j < 3; ++j)
    {
        out.A[j] = move(st.A[j], v);
        out.A_t[j] = move(st.A_t[j], d);
    }
    out.time = st.time * lambda;
    return out;
}

} // namespace mkg::dynamics
