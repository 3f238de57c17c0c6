// Acceptance checks, one per criterion. Each prints PASS/FAIL lines with the
// measured values against the pinned tolerances.

#include "mkg/data.hpp"
#include "mkg/dynamics.hpp"
#include "mkg/elliptic.hpp"
#include "mkg/estimates.hpp"
#include "mkg/fft.hpp"
#include "mkg/imethod.hpp"
#include "mkg/norms.hpp"
#include "mkg/selftest.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

using namespace mkg;

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

class Criterion
{
public:
    explicit Criterion(int id) : id_(id), start_(std::chrono::steady_clock::now()) {}

    __attribute__((format(printf, 3, 4))) void check(bool ok, const char* fmt, ...)
    {
        pass_ = pass_ && ok;
        va_list ap;
        va_start(ap, fmt);
        line(ok ? "ok" : "FAIL", fmt, ap);
        va_end(ap);
    }
    __attribute__((format(printf, 2, 3))) void note(const char* fmt, ...)
    {
        va_list ap;
        va_start(ap, fmt);
        line("info", fmt, ap);
        va_end(ap);
    }
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    bool finish()
    {
        std::printf("criterion %d: %s (%.1f s)\n", id_, pass_ ? "PASS" : "FAIL", seconds());
        return pass_;
    }

private:
    static void line(const char* tag, const char* fmt, va_list ap)
    {
        std::printf("  [%s] ", tag);
        std::vprintf(fmt, ap);
        std::printf("\n");
        std::fflush(stdout);
    }

    int id_;
    bool pass_ = true;
    std::chrono::steady_clock::time_point start_;
};

double max_over(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double min_over(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}
double max_rel_dev(const std::vector<double>& v)
{
    const double m = mean_of(v);
    double d = 0.0;
    for (double x : v)
        d = std::max(d, std::abs(x - m) / m);
    return d;
}

// ---------------------------------------------------------------------------

bool criterion_1()
{
    Criterion c(1);
    const std::vector<CheckResult> checks = run_selftest(32, 1e-10);
    for (const CheckResult& r : checks)
        c.check(r.pass, "%-36s error %.2e < %.0e", r.name.c_str(), r.error, r.tol);
    c.check(c.seconds() < 30.0, "runtime %.1f s < 30 s", c.seconds());
    return c.finish();
}

bool criterion_2()
{
    Criterion c(2);
    const Grid g(32, two_pi);
    Rng rng(7);
    const ScalarField phi = random_complex_field(g, 0, 6, 1.0, rng);
    const ScalarField target = random_real_field(g, 0, 10, 1.0, rng);
    const elliptic::ScreenedOperator op = elliptic::ScreenedOperator::from_phi(phi);
    elliptic::SolveInfo info;
    const ScalarField rec = op.solve(op.apply(target), {}, &info);
    const double err = l2_norm(rec - target) / l2_norm(target);
    c.check(err <= 1e-8, "manufactured solution error %.2e <= 1e-8", err);
    c.check(info.iterations <= 500, "CG iterations %d <= 500", info.iterations);

    const ScalarField phi_t = random_complex_field(g, 0, 6, 1.0, rng);
    const ScalarField A0 = elliptic::solve_a0(phi, phi_t);
    const double L = elliptic::a0_functional(A0, phi, phi_t);
    c.check(L <= 0.0, "L(minimizer) = %.6e <= 0", L);
    const double size = l2_norm(A0) / std::sqrt(g.volume());
    double lowest = INFINITY;
    for (int i = 0; i < 10; ++i)
    {
        const double amp = size * std::pow(10.0, -3.0 + 0.3 * i);
        ScalarField p = A0;
        p += random_real_field(g, 0, g.k_resolved(), amp, rng);
        lowest = std::min(lowest, elliptic::a0_functional(p, phi, phi_t) - L);
    }
    c.check(lowest >= 0.0, "min over 10 perturbations of L(p) - L(minimizer) = %.3e >= 0", lowest);
    return c.finish();
}

// Shared by criteria 3 and 4: small random band-limited data with bracket
// norm near 0.1 on 32^3, L = 2 pi.
GaugeState conservation_data()
{
    const Grid g(32, two_pi);
    DataSpec ds;
    ds.k_lo = 1.0;
    ds.k_hi = 8.0;
    ds.amplitude = 3.7e-4;
    ds.spectral_slope = 1.0;
    ds.seed = 1;
    return make_initial_state(g, ds);
}

struct ConservationRun
{
    double sup_rel = 0.0; // sup |H(t) - H(0)| / H(0)
    double H0 = 0.0;
    dynamics::Trajectory traj;
};

ConservationRun conservation_run(const GaugeState& st, double dt)
{
    dynamics::StepConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.record_every = 10;
    ConservationRun r;
    r.traj = dynamics::evolve(st, cfg);
    r.H0 = r.traj.rows.front().H;
    for (const auto& row : r.traj.rows)
        r.sup_rel = std::max(r.sup_rel, std::abs(row.H - r.H0) / r.H0);
    return r;
}

bool criterion_3()
{
    Criterion c(3);
    const GaugeState st = conservation_data();
    const double bracket = dynamics::diagnostics(st, 0.9).bracket_norm_s;
    c.check(std::abs(bracket - 0.1) <= 0.01, "bracket norm %.4f within 10%% of 0.1", bracket);
    const ConservationRun a = conservation_run(st, 2.5e-3);
    const ConservationRun b = conservation_run(st, 1.25e-3);
    c.check(a.sup_rel <= 1e-6, "relative drift %.3e <= 1e-6 at dt = 2.5e-3", a.sup_rel);
    const double order = std::log2(a.sup_rel / b.sup_rel);
    c.note("relative drift %.3e at dt = 1.25e-3", b.sup_rel);
    c.check(order >= 3.7 && order <= 4.3, "measured order %.3f in [3.7, 4.3]", order);
    return c.finish();
}

// Cubic-in-time path (b, a, p Taylor coefficients) that solves nothing.
struct OffShellPath
{
    std::array<ScalarField, 3> b;
    std::array<VectorField, 4> a;
    std::array<ScalarField, 4> p;

    template <class F, std::size_t K> static F poly(const std::array<F, K>& c, double t, int skip, F zero)
    {
        double f = 1.0;
        for (std::size_t k = static_cast<std::size_t>(skip); k < K; ++k)
        {
            zero.add_scaled(f, c[k]);
            f *= t / static_cast<double>(k + 1 - skip);
        }
        return zero;
    }
    GaugeState at(double t) const
    {
        const Grid& g = p[0].grid();
        GaugeState s(g);
        s.A0 = poly(b, t, 0, ScalarField(g));
        s.A0_t = poly(b, t, 1, ScalarField(g));
        s.A = poly(a, t, 0, VectorField(g));
        s.A_t = poly(a, t, 1, VectorField(g));
        s.phi = poly(p, t, 0, ScalarField(g));
        s.phi_t = poly(p, t, 1, ScalarField(g));
        return s;
    }
    StateDot dot(double t) const
    {
        const Grid& g = p[0].grid();
        StateDot d(g);
        d.A0 = poly(b, t, 1, ScalarField(g));
        d.A0_t = poly(b, t, 2, ScalarField(g));
        d.A = poly(a, t, 1, VectorField(g));
        d.A_t = poly(a, t, 2, VectorField(g));
        d.phi = poly(p, t, 1, ScalarField(g));
        d.phi_t = poly(p, t, 2, ScalarField(g));
        return d;
    }
};

bool criterion_4()
{
    Criterion c(4);
    const Grid g(32, two_pi);
    Rng rng(31);
    OffShellPath path;
    const double amps[4] = {0.3, 0.3, 0.2, 0.2};
    for (int k = 0; k < 3; ++k)
        path.b[k] = random_real_field(g, 0, 6, amps[k], rng);
    for (int k = 0; k < 4; ++k)
        path.a[k] = random_vector_field(g, 0, 6, amps[k], rng);
    for (int k = 0; k < 4; ++k)
        path.p[k] = random_complex_field(g, 0, 6, 0.5 * amps[k] + 0.2, rng);

    const double h = 1e-4;
    for (double t : {0.0, 0.3})
    {
        const double fd = (dynamics::hamiltonian(path.at(t + h)) - dynamics::hamiltonian(path.at(t - h))) / (2 * h);
        const dynamics::FirstVariation fv = dynamics::first_variation_parts(path.at(t), path.dot(t));
        const double scale = dynamics::hamiltonian(path.at(t));
        const double err = std::abs(fv.total() - fd);
        c.check(err <= 1e-6 * scale, "off shell t = %.1f: |FV - FD| = %.2e <= 1e-6 H = %.2e (FD %.4e)", t, err,
                1e-6 * scale, fd);
        const double flipped = -fv.electric - fv.scalar;
        c.note("opposite electric sign: |FV' - FD| = %.2e (%s)", std::abs(flipped - fd),
               std::abs(flipped - fd) <= 1e-6 * scale ? "also matches" : "rejected");
    }

    const GaugeState st = conservation_data();
    const ConservationRun run = conservation_run(st, 2.5e-3);
    const double rate = run.sup_rel * run.H0 / 1.0;
    c.note("criterion-3 drift rate %.3e per unit time", rate);
    // Re-solve the constraints tightly so the CG tolerance does not mask the identity.
    const elliptic::EllipticConfig tight{.cg_tol = 1e-13, .cg_max_iter = 2000};
    for (const GaugeState* s : {&st, &run.traj.final_state})
    {
        const GaugeState q = elliptic::init_compatible(s->phi, s->phi_t, s->A, s->A_t, tight);
        const double fv = dynamics::first_variation(q, dynamics::solution_dot(q));
        c.check(std::abs(fv) <= 10.0 * rate, "solution t = %.2f: |FV| = %.2e <= 10 x rate = %.2e", s->time,
                std::abs(fv), 10.0 * rate);
    }
    return c.finish();
}

bool criterion_5()
{
    Criterion c(5);
    const Grid g(32, two_pi);
    DataSpec ds;
    ds.k_lo = 1.0;
    ds.k_hi = g.k_resolved();
    ds.amplitude = 0.05;
    ds.spectral_slope = 1.5;
    ds.seed = 3;
    GaugeState st = make_initial_state(g, ds);
    const double N = g.k_resolved() / 2;
    const imethod::IContext ctx = imethod::IContext::make(g, 0.9, N);
    dynamics::Evaluator ev(g, {});
    for (int i = 0; i < 4; ++i)
    {
        st = dynamics::step(st, 2.5e-3, ev);
        ev.solve_constraints(st);
    }
    const double h = 1e-3;
    GaugeState p = dynamics::step(st, h, ev), m = dynamics::step(st, -h, ev);
    ev.solve_constraints(p);
    ev.solve_constraints(m);
    const double fd = (imethod::modified_hamiltonian(p, ctx) - imethod::modified_hamiltonian(m, ctx)) / (2 * h);
    // The exact flow conserves H, so its difference quotient is integrator error.
    const double integ = std::abs((dynamics::hamiltonian(p) - dynamics::hamiltonian(m)) / (2 * h));
    const imethod::DriftTerms d = imethod::drift_terms(st, ctx);
    const double HI = imethod::modified_hamiltonian(st, ctx);
    const double tol = std::max(1e-5 * std::abs(HI), 10.0 * integ);

    c.note("N = %.2f, s = 0.9, H[I Phi] = %.6e, integrator error %.2e", N, HI, integ);
    c.note("terms: one %.4e two %.4e three %.4e remainder %.4e", d.one, d.two, d.three, d.remainder);
    c.check(std::abs(d.rate() - fd) <= tol, "|(-one - two + three + rem) - FD| = %.3e <= %.3e (FD %.6e)",
            std::abs(d.rate() - fd), tol, fd);
    c.note("as displayed, |(one - two + three) - FD| = %.3e (%.0f%% of |FD|)", std::abs(d.one - d.two + d.three - fd),
           100 * std::abs(d.one - d.two + d.three - fd) / std::abs(fd));
    return c.finish();
}

// Nonlinear 64^3 data: a strong low-shell connection and a broad scalar
// spectrum, so high-frequency transfer is driven mainly by A.
GaugeState drift_data()
{
    const Grid g(64, 2.0);
    Rng rng(1);
    const double aA = 0.05, aphi = 0.008, klo = 3.0, khi = 32.0;
    const VectorField A = random_vector_field(g, g.dk(), 2 * g.dk(), aA, rng);
    const VectorField A_t = random_vector_field(g, g.dk(), 2 * g.dk(), aA * 1.5 * g.dk(), rng);
    const ScalarField phi = random_complex_field(g, klo, khi, aphi, rng, 1.0);
    const ScalarField phi_t = random_complex_field(g, klo, khi, aphi * 0.5 * (klo + khi), rng, 1.0);
    return elliptic::init_compatible(phi, phi_t, A, A_t, {});
}

bool criterion_6()
{
    Criterion c(6);
    set_fft_planner(Planner::measure);
    const GaugeState st = drift_data();
    dynamics::StepConfig cfg;
    cfg.dt = 2e-3;
    imethod::DriftOptions opt;
    opt.s = 0.9;
    opt.target_H = 1.0;
    opt.sample_every = 5;
    const imethod::DriftReport r = imethod::drift_experiment(st, 1.0, {4.0, 8.0, 16.0}, opt, cfg);

    c.note("lambda %.4f, integrator error %.3e, fitted slope %.3f (s - 1/2 = 0.4)", r.lambda, r.integrator_error,
           r.slope);
    for (const auto& row : r.rows)
    {
        c.check(row.H0 <= 1.0, "N = %2.0f: H[I Phi(0)] = %.4f <= 1", row.N, row.H0);
        c.check(row.sup_drift > 10.0 * r.integrator_error, "N = %2.0f: sup drift %.3e > 10 x noise = %.3e", row.N,
                row.sup_drift, 10.0 * r.integrator_error);
    }
    for (std::size_t i = 1; i < r.rows.size(); ++i)
    {
        const double f = r.rows[i - 1].sup_drift / r.rows[i].sup_drift;
        c.check(f >= 1.3, "N %2.0f -> %2.0f: reduction factor %.2f >= 1.3", r.rows[i - 1].N, r.rows[i].N, f);
    }
    return c.finish();
}

bool criterion_7()
{
    Criterion c(7);
    const imethod::ScheduleResult ok = imethod::choose_parameters(1e6, 0.87);
    c.check(ok.feasible, "s = 0.87, T = 1e6: feasible (log10 N = %.2f, log10 lambda = %.2f)", ok.log10_N,
            ok.log10_lambda);
    const imethod::ScheduleResult no = imethod::choose_parameters(1e6, 0.86);
    c.check(!no.feasible, "s = 0.86, T = 1e6: infeasible");
    const double th = imethod::feasibility_threshold(1e6);
    c.check(th > std::sqrt(3.0) / 2 && th <= 0.87, "threshold %.7f in (sqrt(3)/2 = %.7f, 0.87]", th,
            std::sqrt(3.0) / 2);
    c.check(c.seconds() < 1.0, "runtime %.3f s < 1 s", c.seconds());
    return c.finish();
}

bool criterion_8()
{
    Criterion c(8);
    namespace est = mkg::estimates;
    const est::EstimateReport s0 = est::sample_symbol_bound(100000, 0), s1 = est::sample_symbol_bound(100000, 1);
    c.check(std::isfinite(s0.max_ratio) && std::isfinite(s1.max_ratio), "symbol bound max finite (%.4f, %.4f)",
            s0.max_ratio, s1.max_ratio);
    const double reseed = std::abs(s0.max_ratio - s1.max_ratio) / s0.max_ratio;
    c.check(reseed <= 0.1, "symbol bound reseed change %.1f%% <= 10%%", 100 * reseed);

    const double N = 2.0, s = 0.9;
    std::vector<double> comm;
    for (double M : {N, 2 * N, 4 * N})
    {
        comm.push_back(est::sample_commutator(N, M, s, 2000, 0).max_ratio);
        c.note("commutator N = %.0f, M = %.0f: constant %.5f", N, M, comm.back());
    }
    c.check(max_rel_dev(comm) <= 0.2, "commutator constant within %.1f%% of its mean (<= 20%%)",
            100 * max_rel_dev(comm));

    std::vector<double> loss;
    for (double n : {4.0, 8.0, 16.0})
    {
        loss.push_back(est::sample_i_loss(n, s, 100000, 0).max_ratio);
        c.note("i_loss N = %2.0f: max ratio / N^(1-s) = %.5f", n, loss.back());
    }
    c.check(max_rel_dev(loss) <= 0.2, "i_loss constant within %.1f%% of its mean (<= 20%%)", 100 * max_rel_dev(loss));
    return c.finish();
}

bool criterion_9()
{
    Criterion c(9);
    std::vector<double> vals;
    double eps3 = 0.0;
    for (double N : {50.0, 100.0, 200.0})
    {
        const auto t0 = std::chrono::steady_clock::now();
        estimates::NoSmoothingOptions o;
        o.N = N;
        o.eps = 0.01;
        o.samples = 1000000;
        const estimates::NoSmoothingResult r = estimates::nosmoothing_integral(o);
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        vals.push_back(std::abs(r.value));
        eps3 = r.eps_cubed;
        c.note("N = %3.0f: integral %.6e +- %.1e", N, r.value, r.std_error);
        c.check(sec < 60.0, "N = %3.0f: runtime %.1f s < 60 s", N, sec);
    }
    const double spread = max_over(vals) / min_over(vals) - 1.0;
    c.check(spread <= 0.2, "agreement across N: max/min - 1 = %.2f%% <= 20%%", 100 * spread);
    const double smallest = min_over(vals);
    c.check(50.0 * eps3 <= smallest, "eps^3 = %.2e at least 50x below the integral (ratio integral/eps^3 = %.2e)",
            eps3, smallest / eps3);
    return c.finish();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::function<bool()>> criteria = {
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
        {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};
    bool all = true;
    for (const auto& [id, fn] : criteria)
        if (only == 0 || only == id)
            all = fn() && all;
    return all ? 0 : 1;
}
