#include "mkg/imethod.hpp"

#include "mkg/padded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mkg::imethod
{

using dynamics::Nonlinearities;

IContext IContext::make(const Grid& g, double s, double N)
{
    if (!(s > 0.5 && s < 1.0))
        throw ConfigError("s must lie in (1/2, 1), got " + std::to_string(s));
    if (!(N >= 1.0))
        throw ConfigError("N must be at least 1, got " + std::to_string(N));
    if (N > g.k_resolved() * (1 + 1e-12))
        throw ConfigError("N = " + std::to_string(N) + " exceeds the resolved band radius " +
                          std::to_string(g.k_resolved()));
    return IContext{s, N, Symbol::i_op(g, s, N)};
}

bool IContext::resolves_high_band() const { return N <= symbol.grid().k_resolved() / 4.0; }

GaugeState apply_i_state(const GaugeState& st, const IContext& ctx)
{
    const Symbol& m = ctx.symbol;
    GaugeState out;
    out.A0 = apply_symbol(st.A0, m);
    out.A0_t = apply_symbol(st.A0_t, m);
    out.A = apply_symbol(st.A, m);
    out.A_t = apply_symbol(st.A_t, m);
    out.phi = apply_symbol(st.phi, m);
    out.phi_t = apply_symbol(st.phi_t, m);
    out.time = st.time;
    return out;
}

double modified_hamiltonian(const GaugeState& st, const IContext& ctx)
{
    return dynamics::hamiltonian(apply_i_state(st, ctx));
}

namespace
{

constexpr Complex I1(0.0, 1.0);

// Physical samples of band-limited fields and truncation of pointwise
// expressions back to the band, on the degree-4 padded lattice.
class Pointwise
{
public:
    explicit Pointwise(const Grid& g, int degree = 4) : sp_(PaddedSpace::for_degree(g, degree)) {}

    CVector operator()(const ScalarField& u) const { return sp_.to_physical(u); }
    std::array<CVector, 3> operator()(const VectorField& v) const { return {sp_.to_physical(v[0]), sp_.to_physical(v[1]), sp_.to_physical(v[2])}; }

    template <class F>
    CVector eval(F f) const
    {
        CVector out(sp_.size());
        const std::size_t m = out.size();
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
            out[i] = f(i);
        return out;
    }
    template <class F>
    ScalarField band(F f) const
    {
        return sp_.to_band(eval(f));
    }
    const PaddedSpace& space() const { return sp_; }

private:
    PaddedSpace sp_;
};

// Physical ingredients of the covariant expressions for one state.
struct Covariant
{
    CVector phi, phi_t, phi_tt, a0, a0t, lap, divA;
    std::array<CVector, 3> grad, a;
};

Covariant covariant_parts(const Pointwise& pw, const GaugeState& st, const ScalarField& phi_tt)
{
    Covariant c;
    c.phi = pw(st.phi);
    c.phi_t = pw(st.phi_t);
    c.phi_tt = pw(phi_tt);
    c.a0 = pw(st.A0);
    c.a0t = pw(st.A0_t);
    c.lap = pw(laplacian(st.phi));
    c.divA = pw(divergence(st.A));
    c.grad = pw(gradient(st.phi));
    c.a = pw(st.A);
    return c;
}

Complex d0(const Covariant& c, std::size_t i) { return c.phi_t[i] + I1 * c.a0[i].real() * c.phi[i]; }

Complex d0d0(const Covariant& c, std::size_t i)
{
    const double a0 = c.a0[i].real();
    return c.phi_tt[i] + I1 * c.a0t[i].real() * c.phi[i] + 2.0 * I1 * a0 * c.phi_t[i] - a0 * a0 * c.phi[i];
}

Complex djdj(const Covariant& c, std::size_t i)
{
    Complex out = c.lap[i] + I1 * c.divA[i].real() * c.phi[i];
    for (int j = 0; j < 3; ++j)
    {
        const double aj = c.a[j][i].real();
        out += 2.0 * I1 * aj * c.grad[j][i] - aj * aj * c.phi[i];
    }
    return out;
}

double im_current(const Covariant& c, int j, std::size_t i)
{
    const Complex Dj = c.grad[j][i] + I1 * c.a[j][i].real() * c.phi[i];
    return std::imag(c.phi[i] * std::conj(Dj));
}

} // namespace

MollifiedD0 mollified_d0(const GaugeState& st, const IContext& ctx)
{
    const GaugeState Ist = apply_i_state(st, ctx);
    const Pointwise pw(st.grid());
    const CVector p = pw(Ist.phi), pt = pw(Ist.phi_t), a0 = pw(Ist.A0);
    MollifiedD0 out;
    out.a = Ist.A_t;
    out.phi = pw.band([&](std::size_t i) { return pt[i] + I1 * a0[i].real() * p[i]; });
    return out;
}

ScalarField bilinear_commutator(const ScalarField& v, const ScalarField& w, int j, const IContext& ctx)
{
    const Pointwise pw(v.grid());
    const CVector x = pw(v), dy = pw(derivative(w, j));
    const CVector Ix = pw(apply_symbol(v, ctx.symbol)), dIy = pw(derivative(apply_symbol(w, ctx.symbol), j));
    const ScalarField full = pw.band([&](std::size_t i) { return x[i] * dy[i]; });
    const ScalarField moll = pw.band([&](std::size_t i) { return Ix[i] * dIy[i]; });
    return apply_symbol(full, ctx.symbol) - moll;
}

double Commutators::max_coeff() const
{
    double m = std::max(mkg::max_coeff(c0_a), mkg::max_coeff(c0_phi));
    for (const auto& f : c1_a)
        m = std::max(m, mkg::max_coeff(f));
    for (const auto& f : c1_b)
        m = std::max(m, mkg::max_coeff(f));
    for (const auto& f : c2)
        m = std::max(m, mkg::max_coeff(f));
    for (const auto& f : c3)
        m = std::max(m, mkg::max_coeff(f));
    return m;
}

Commutators commutators(const GaugeState& st, const IContext& ctx)
{
    const Nonlinearities full = dynamics::nonlinearities(st);
    const Nonlinearities moll = dynamics::nonlinearities(apply_i_state(st, ctx));
    const Symbol& m = ctx.symbol;
    Commutators c;
    c.c0_a = apply_symbol(full.n0_a, m) - moll.n0_a;
    c.c0_phi = apply_symbol(full.n0_phi, m) - moll.n0_phi;
    for (int b = 0; b < 5; ++b)
    {
        c.c1_a[b] = apply_symbol(full.n1_a[b], m) - moll.n1_a[b];
        c.c1_b[b] = apply_symbol(full.n1_b[b], m) - moll.n1_b[b];
    }
    for (std::size_t k = 0; k < full.n2.size(); ++k)
        c.c2.push_back(apply_symbol(full.n2[k], m) - moll.n2[k]);
    for (std::size_t k = 0; k < full.n3.size(); ++k)
        c.c3.push_back(apply_symbol(full.n3[k], m) - moll.n3[k]);
    return c;
}

DriftTerms drift_terms(const GaugeState& st, const IContext& ctx)
{
    const Grid& g = st.grid();
    const Symbol& m = ctx.symbol;
    const ScalarField phi_tt = dynamics::rhs(st).phi_tt;
    const GaugeState Ist = apply_i_state(st, ctx);
    const ScalarField Iphi_tt = apply_symbol(phi_tt, m);

    const Pointwise pw(g);
    const Covariant c = covariant_parts(pw, st, phi_tt);
    const Covariant ci = covariant_parts(pw, Ist, Iphi_tt);

    // (one) = <E~, I Im(phi conj(D phi)) - Im(I phi conj(D~ I phi))>
    const VectorField E = gradient(Ist.A0) - Ist.A_t;
    DriftTerms out;
    for (int j = 0; j < 3; ++j)
    {
        const ScalarField full = pw.band([&](std::size_t i) { return Complex(im_current(c, j, i), 0.0); });
        const ScalarField moll = pw.band([&](std::size_t i) { return Complex(im_current(ci, j, i), 0.0); });
        out.one += inner(E[j], apply_symbol(full, m) - moll);
    }

    // Everything D0~ I phi is paired with below is band-limited, so it
    // suffices to pair with its band part.
    const ScalarField D0 = pw.band([&](std::size_t i) { return d0(ci, i); });
    const ScalarField two_full = pw.band([&](std::size_t i) { return d0d0(c, i); });
    const ScalarField two_moll = pw.band([&](std::size_t i) { return d0d0(ci, i); });
    out.two = inner(D0, apply_symbol(two_full, m) - two_moll);
    const ScalarField three_full = pw.band([&](std::size_t i) { return djdj(c, i); });
    const ScalarField three_moll = pw.band([&](std::size_t i) { return djdj(ci, i); });
    out.three = inner(D0, apply_symbol(three_full, m) - three_moll);

    // Remainder needs the full quintic integral.
    const Pointwise pq(g, 5);
    const Covariant cq = covariant_parts(pq, Ist, Iphi_tt);
    const CVector D0q = pq.eval([&](std::size_t i) { return d0(cq, i); });
    const CVector box = pq.eval([&](std::size_t i) { return djdj(cq, i) - d0d0(cq, i); });
    const double whole = pq.space().integrate_dot(D0q, box);
    const double banded = inner(D0, three_moll - two_moll);
    out.remainder = -(whole - banded);
    return out;
}

// ---------------------------------------------------------------------------

DriftReport drift_experiment(const GaugeState& initial, double T, std::vector<double> N_list,
                             const DriftOptions& opt, const dynamics::StepConfig& step_cfg)
{
    if (N_list.empty())
        throw ConfigError("drift_experiment: N_list is empty");
    if (!(T > 0.0))
        throw ConfigError("drift_experiment: T must be positive");
    if (opt.sample_every < 1)
        throw ConfigError("drift_experiment: sample_every must be at least 1");
    std::sort(N_list.begin(), N_list.end());

    DriftReport rep;
    // Small-Hamiltonian rescaling: H[I Phi^lambda] = H of the I-applied
    // rescaled data; it is decreasing in lambda for fixed N.
    GaugeState st = initial;
    auto max_modified = [&](const GaugeState& s) {
        double h = 0.0;
        for (double N : N_list)
            h = std::max(h, modified_hamiltonian(s, IContext::make(s.grid(), opt.s, N)));
        return h;
    };
    double lambda = 1.0;
    while (max_modified(st) > opt.target_H)
    {
        lambda *= 1.25;
        if (lambda > 1e6)
            throw NumericalError("drift_experiment: rescaling did not bring H[I Phi(0)] below the target");
        st = dynamics::rescale(initial, lambda);
    }
    rep.lambda = lambda;

    std::vector<IContext> ctx;
    for (double N : N_list)
        ctx.push_back(IContext::make(st.grid(), opt.s, N));
    for (const auto& c : ctx)
        if (!c.resolves_high_band())
        {
            std::ostringstream os;
            os << "N = " << c.N << " is above k_resolved/4 = " << st.grid().k_resolved() / 4
               << "; few modes lie above 2N";
            rep.warnings.push_back(os.str());
        }

    std::vector<double> H0(ctx.size()), sup(ctx.size(), 0.0);
    double H_plain0 = 0.0;
    dynamics::StepConfig cfg = step_cfg;
    cfg.t_end = T;
    cfg.record_every = std::max(cfg.record_every, 1 << 30); // rows are not needed here
    const auto observe = [&](const GaugeState& s, int k) {
        if (k % opt.sample_every != 0 && std::abs(s.time - st.time - T) > 1e-12)
            return;
        for (std::size_t i = 0; i < ctx.size(); ++i)
        {
            const double h = modified_hamiltonian(s, ctx[i]);
            if (k == 0)
                H0[i] = h;
            else
                sup[i] = std::max(sup[i], std::abs(h - H0[i]));
        }
        const double h = dynamics::hamiltonian(s);
        if (k == 0)
            H_plain0 = h;
        else
            rep.integrator_error = std::max(rep.integrator_error, std::abs(h - H_plain0));
    };
    dynamics::evolve(st, cfg, observe);

    for (std::size_t i = 0; i < ctx.size(); ++i)
        rep.rows.push_back({ctx[i].N, H0[i], sup[i], T});

    if (rep.rows.size() >= 2)
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (const auto& r : rep.rows)
        {
            if (!(r.sup_drift > 0.0))
                continue;
            const double x = std::log(r.N), y = std::log(r.sup_drift);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2)
            rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    for (const auto& r : rep.rows)
        if (r.sup_drift < 10.0 * rep.integrator_error)
        {
            std::ostringstream os;
            os << "N = " << r.N << ": drift " << r.sup_drift << " is below 10x the integrator error "
               << rep.integrator_error;
            rep.warnings.push_back(os.str());
        }
    return rep;
}

// ---------------------------------------------------------------------------

namespace
{

ScheduleResult evaluate_schedule(double lnT, double s, double lnm, double lnN)
{
    ScheduleResult r;
    const double lnl = ((1.0 - s) * lnN - lnm) / (s - 0.5);
    r.log10_lambda = lnl / std::numbers::ln10;
    r.log10_N = lnN / std::numbers::ln10;
    r.lambda = std::exp(lnl);
    r.N = std::exp(lnN);
    r.margin_scaling = std::exp((0.5 - s) * lnl + (1.0 - s) * lnN);
    const double ln_time = lnl + lnT - (s - 0.5) * lnN;
    r.margin_time = std::exp(ln_time);
    // Relative slack absorbs rounding in the log identities.
    r.feasible = ln_time <= lnm + 1e-12 * std::max(1.0, std::abs(lnm));
    return r;
}

} // namespace

ScheduleResult choose_parameters(double T, double s, double margin)
{
    if (!(T > 0.0))
        throw ConfigError("choose_parameters: T must be positive");
    if (!(s > 0.5 && s < 1.0))
        throw ConfigError("choose_parameters: s must lie in (1/2, 1)");
    if (!(margin > 0.0))
        throw ConfigError("choose_parameters: margin must be positive");
    const double lnT = std::log(T), lnm = std::log(margin);
    ScheduleResult last;
    for (long j = 0; j <= schedule_log2_cap; ++j)
    {
        last = evaluate_schedule(lnT, s, lnm, static_cast<double>(j) * std::numbers::ln2);
        if (last.feasible)
            return last;
    }
    last.feasible = false;
    return last;
}

double feasibility_threshold(double T, double margin, double tol)
{
    double lo = 0.5 + 1e-9, hi = 1.0 - 1e-9;
    if (!choose_parameters(T, hi, margin).feasible)
        return std::numeric_limits<double>::quiet_NaN();
    while (hi - lo > tol)
    {
        const double mid = 0.5 * (lo + hi);
        if (choose_parameters(T, mid, margin).feasible)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace mkg::imethod
