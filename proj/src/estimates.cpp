#include "mkg/estimates.hpp"

#include "mkg/data.hpp"
#include "mkg/dynamics.hpp"
#include "mkg/elliptic.hpp"
#include "mkg/norms.hpp"
#include "mkg/padded.hpp"
#include "mkg/symbol.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

namespace mkg::estimates
{

namespace
{

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double bracket(double x) { return std::sqrt(1.0 + x * x); }

Rng batch_rng(std::uint64_t seed, long batch)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    return Rng(seq);
}

// Runs f(rng, i) for i in [0, samples), batch by batch.
template <class F>
void for_each_sample(long samples, std::uint64_t seed, F f)
{
    const long batches = (samples + batch_size - 1) / batch_size;
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < batches; ++b)
    {
        Rng rng = batch_rng(seed, b);
        const long end = std::min(samples, (b + 1) * batch_size);
        for (long i = b * batch_size; i < end; ++i)
            f(rng, i);
    }
}

Vec3 random_direction(Rng& rng)
{
    std::normal_distribution<double> normal;
    for (;;)
    {
        Vec3 v{normal(rng), normal(rng), normal(rng)};
        const double r = norm3(v);
        if (r > 1e-12)
            return {v[0] / r, v[1] / r, v[2] / r};
    }
}

Vec3 uniform_in_ball(Rng& rng, const Vec3& centre, double radius)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;)
    {
        const double x = u(rng), y = u(rng), z = u(rng);
        if (x * x + y * y + z * z <= 1.0)
            return {centre[0] + radius * x, centre[1] + radius * y, centre[2] + radius * z};
    }
}

void require_samples(long samples, long minimum, const char* who)
{
    if (samples < minimum)
        throw ConfigError(std::string(who) + ": need at least " + std::to_string(minimum) + " samples");
}

} // namespace

FrequencyTriple FrequencyTriple::make(const Vec3& xi1, double tau1, const Vec3& xi2, double tau2, double tau0)
{
    FrequencyTriple t;
    t.xi[1] = xi1;
    t.xi[2] = xi2;
    t.xi[0] = {-(xi1[0] + xi2[0]), -(xi1[1] + xi2[1]), -(xi1[2] + xi2[2])};
    t.tau[0] = tau0;
    t.tau[1] = tau1;
    t.tau[2] = tau2;
    return t;
}

double FrequencyTriple::N(int j) const { return norm3(xi[j]); }

double FrequencyTriple::lambda(int j) const { return bracket(N(j) - std::abs(tau[j])); }

EstimateReport summarize(std::string name, std::vector<double> ratios, std::uint64_t seed,
                         std::vector<std::pair<std::string, double>> params)
{
    EstimateReport r;
    r.name = std::move(name);
    r.samples = static_cast<long>(ratios.size());
    r.seed = seed;
    r.params = std::move(params);
    if (ratios.empty())
        return r;
    for (double x : ratios)
        if (!std::isfinite(x))
            throw NumericalError(r.name + ": non-finite ratio");
    std::sort(ratios.begin(), ratios.end());
    const auto rank = [&](double q) {
        const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(ratios.size()))) - 1;
        return ratios[std::min(i, ratios.size() - 1)];
    };
    r.max_ratio = ratios.back();
    r.p50 = rank(0.5);
    r.p99 = rank(0.99);
    return r;
}

// ---------------------------------------------------------------------------

double symbol_bound_ratio(const FrequencyTriple& t)
{
    const Vec3& a = t.xi[1];
    const Vec3& b = t.xi[2];
    const Vec3 w{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const double wedge = norm3(w);
    if (wedge == 0.0)
        return 0.0;
    const double modulation = bracket(t.tau[0] + t.tau[1] + t.tau[2]) + t.lambda(0) + t.lambda(1) + t.lambda(2);
    return wedge / (std::sqrt(t.N(0) * t.N(1) * t.N(2)) * std::sqrt(modulation));
}

EstimateReport sample_symbol_bound(long samples, std::uint64_t seed)
{
    require_samples(samples, 1, "symbol_bound");
    std::vector<double> ratios(static_cast<std::size_t>(samples));
    for_each_sample(samples, seed, [&](Rng& rng, long i) {
        std::uniform_real_distribution<double> log_r(0.0, 3.0 * std::numbers::ln10);
        std::cauchy_distribution<double> cauchy(0.0, 1.0);
        std::bernoulli_distribution sign;
        const auto xi = [&] {
            const Vec3 d = random_direction(rng);
            const double r = std::exp(log_r(rng));
            return Vec3{r * d[0], r * d[1], r * d[2]};
        };
        const auto tau = [&](double n) { return (sign(rng) ? n : -n) + cauchy(rng); };
        const Vec3 x1 = xi(), x2 = xi();
        const double t1 = tau(norm3(x1)), t2 = tau(norm3(x2));
        const Vec3 x0{-(x1[0] + x2[0]), -(x1[1] + x2[1]), -(x1[2] + x2[2])};
        const double t0 = tau(norm3(x0));
        ratios[static_cast<std::size_t>(i)] = symbol_bound_ratio(FrequencyTriple::make(x1, t1, x2, t2, t0));
    });
    return summarize("symbol_bound", std::move(ratios), seed, {{"log10_xi_min", 0.0}, {"log10_xi_max", 3.0}});
}

// ---------------------------------------------------------------------------

namespace
{

void require_shell(const ScalarField& u, double lo, double hi, const char* what)
{
    const Grid& g = u.grid();
    const int n = g.n();
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const Complex c = u[g.index(i, j, l)];
                if (c == Complex(0.0, 0.0))
                    continue;
                const double r = norm3(g.k(i, j, l));
                if (r < lo * (1 - 1e-12) || r > hi * (1 + 1e-12))
                    throw ConfigError(std::string("commutator_l2_ratio: ") + what + " has modes outside its band");
            }
}

double commutator_scale(double M, double s, double N) { return i_symbol_value(M, s, N) / M; }

} // namespace

double commutator_l2_ratio(const ScalarField& v, const ScalarField& w, double M, const imethod::IContext& ctx,
                           double R)
{
    require_same_grid(v.grid(), w.grid(), "commutator_l2_ratio");
    const Grid& g = v.grid();
    if (!(M > 0.0) || !(R >= 0.0))
        throw ConfigError("commutator_l2_ratio: need M > 0 and R >= 0");
    if (R + 2.0 * M > g.k_resolved() * (1 + 1e-12))
        throw ConfigError("commutator_l2_ratio: R + 2M exceeds the resolved band");
    require_shell(v, 0.0, R, "v");
    require_shell(w, 0.5 * M, 2.0 * M, "w");

    const PaddedSpace sp = PaddedSpace::for_degree(g, 2);
    const CVector V = sp.to_physical(v), W = sp.to_physical(w), IW = sp.to_physical(apply_symbol(w, ctx.symbol));
    CVector prod(sp.size()), prod_i(sp.size());
    double vinf = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i)
    {
        prod[i] = V[i] * W[i];
        prod_i[i] = V[i] * IW[i];
        vinf = std::max(vinf, std::abs(V[i]));
    }
    const ScalarField comm = apply_symbol(sp.to_band(std::move(prod)), ctx.symbol) - sp.to_band(std::move(prod_i));
    const double denom = commutator_scale(M, ctx.s, ctx.N) * vinf * l2_norm(w);
    return denom == 0.0 ? 0.0 : l2_norm(comm) / denom;
}

EstimateReport sample_commutator(double N, double M, double s, long samples, std::uint64_t seed)
{
    require_samples(samples, 1, "commutator");
    if (!(M > 0.0) || !(N >= 1.0) || !(s > 0.5 && s < 1.0))
        throw ConfigError("commutator sampler: need M > 0, N >= 1, s in (1/2, 1)");
    // Shell modes of w on the unit lattice.
    struct Mode
    {
        int a, b, c;
        double m;
    };
    std::vector<Mode> shell;
    const int r = static_cast<int>(std::ceil(2.0 * M));
    for (int c = -r; c <= r; ++c)
        for (int b = -r; b <= r; ++b)
            for (int a = -r; a <= r; ++a)
            {
                const double k = std::sqrt(static_cast<double>(a * a + b * b + c * c));
                if (k >= 0.5 * M * (1 - 1e-12) && k <= 2.0 * M * (1 + 1e-12))
                    shell.push_back({a, b, c, i_symbol_value(k, s, N)});
            }
    const int low[7][3] = {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    const int R = r + 1, side = 2 * R + 1;
    const auto slot = [&](int a, int b, int c) { return static_cast<std::size_t>((a + R) + side * ((b + R) + side * (c + R))); };
    constexpr int probe = 32; // sample points per axis for ||v||_inf
    const double scale = commutator_scale(M, s, N);

    std::vector<double> ratios(static_cast<std::size_t>(samples));
    for_each_sample(samples, seed, [&](Rng& rng, long idx) {
        std::normal_distribution<double> normal;
        Complex v[7];
        for (auto& z : v)
            z = Complex(normal(rng), normal(rng));
        std::vector<Complex> wc(shell.size());
        double w2 = 0.0;
        for (auto& z : wc)
        {
            z = Complex(normal(rng), normal(rng));
            w2 += std::norm(z);
        }
        // c_q = sum_a v_a w_b (m(a + b) - m(b)), q = a + b
        std::vector<Complex> acc(static_cast<std::size_t>(side) * side * side);
        std::vector<Complex> full(acc.size());
        for (std::size_t t = 0; t < shell.size(); ++t)
            for (int a = 0; a < 7; ++a)
            {
                const Mode& md = shell[t];
                const std::size_t q = slot(md.a + low[a][0], md.b + low[a][1], md.c + low[a][2]);
                full[q] += v[a] * wc[t];
                acc[q] += v[a] * wc[t] * md.m;
            }
        double c2 = 0.0;
        for (int c = -R; c <= R; ++c)
            for (int b = -R; b <= R; ++b)
                for (int a = -R; a <= R; ++a)
                {
                    const std::size_t q = slot(a, b, c);
                    if (full[q] == Complex(0.0, 0.0) && acc[q] == Complex(0.0, 0.0))
                        continue;
                    const double mq = i_symbol_value(std::sqrt(static_cast<double>(a * a + b * b + c * c)), s, N);
                    c2 += std::norm(mq * full[q] - acc[q]);
                }
        // v(x) = v0 + sum_j (v_{+j} e^{i x_j} + v_{-j} e^{-i x_j})
        Complex axis[3][probe];
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < probe; ++p)
            {
                const double x = 2.0 * std::numbers::pi * p / probe;
                axis[j][p] = v[1 + 2 * j] * std::polar(1.0, x) + v[2 + 2 * j] * std::polar(1.0, -x);
            }
        double vinf = 0.0;
        for (int p3 = 0; p3 < probe; ++p3)
            for (int p2 = 0; p2 < probe; ++p2)
                for (int p1 = 0; p1 < probe; ++p1)
                    vinf = std::max(vinf, std::abs(v[0] + axis[0][p1] + axis[1][p2] + axis[2][p3]));
        ratios[static_cast<std::size_t>(idx)] = std::sqrt(c2) / (scale * vinf * std::sqrt(w2));
    });
    return summarize("commutator", std::move(ratios), seed, {{"N", N}, {"M", M}, {"s", s}});
}

// ---------------------------------------------------------------------------

void ProductExponents::validate() const
{
    if (!(s1 + s2 >= 0.0))
        throw ConfigError("product_norm_ratio: need s1 + s2 >= 0");
    if (!(s <= std::min(s1, s2)))
        throw ConfigError("product_norm_ratio: need s <= min(s1, s2)");
    if (!(s < s1 + s2 - 1.5))
        throw ConfigError("product_norm_ratio: need s < s1 + s2 - 3/2");
}

double product_norm_ratio(const ScalarField& f, const ScalarField& g, const ProductExponents& e)
{
    e.validate();
    require_same_grid(f.grid(), g.grid(), "product_norm_ratio");
    const Grid& grid = f.grid();
    const PaddedSpace sp = PaddedSpace::for_degree(grid, 2);
    const CVector F = sp.to_physical(f), G = sp.to_physical(g);
    CVector P(sp.size());
    for (std::size_t i = 0; i < P.size(); ++i)
        P[i] = F[i] * G[i];
    const int M = sp.M();
    fft3(M, P, Direction::forward);

    // Norm of the full product spectrum on the padded lattice.
    const auto wave = [M](int i) { return i < M / 2 ? i : i - M; };
    double sum = 0.0;
    for (int l = 0; l < M; ++l)
        for (int j = 0; j < M; ++j)
            for (int i = 0; i < M; ++i)
            {
                const Complex c = P[static_cast<std::size_t>(i) + M * (j + static_cast<std::size_t>(M) * l)];
                if (c == Complex(0.0, 0.0))
                    continue;
                const double a = grid.dk() * wave(i), b = grid.dk() * wave(j), d = grid.dk() * wave(l);
                const double k2 = a * a + b * b + d * d;
                double w;
                if (e.homogeneous_target)
                {
                    if (k2 == 0.0)
                    {
                        if (e.s < 0.0 && std::abs(c) > 1e-14)
                            throw std::domain_error("product_norm_ratio: homogeneous negative norm of a product with nonzero mean");
                        w = e.s == 0.0 ? 1.0 : 0.0;
                    }
                    else
                        w = std::pow(k2, e.s);
                }
                else
                    w = std::pow(1.0 + k2, e.s);
                sum += w * std::norm(c);
            }
    const double num = std::sqrt(grid.volume() * sum);
    const double den = sobolev_norm(f, e.s1, false) * sobolev_norm(g, e.s2, false);
    if (den == 0.0)
        throw ConfigError("product_norm_ratio: zero factor");
    return num / den;
}

EstimateReport sample_product_norm(const Grid& g, const ProductExponents& e, long samples, std::uint64_t seed)
{
    e.validate();
    require_samples(samples, 1, "product_norm");
    if (g.k_resolved() < 5.0)
        throw ConfigError("product_norm sampler: grid must resolve |k| <= 5");
    std::vector<double> ratios(static_cast<std::size_t>(samples));
    // Field construction is serial per sample; parallelism comes from the transforms.
    for (long b = 0; b * batch_size < samples; ++b)
    {
        Rng rng = batch_rng(seed, b);
        for (long i = b * batch_size; i < std::min(samples, (b + 1) * batch_size); ++i)
        {
            const ScalarField f = random_complex_field(g, 1.0, 3.0, 1.0, rng);
            const ScalarField h = random_complex_field(g, 3.5, 5.0, 1.0, rng);
            ratios[static_cast<std::size_t>(i)] = product_norm_ratio(f, h, e);
        }
    }
    return summarize("product_norm", std::move(ratios), seed,
                     {{"s", e.s}, {"s1", e.s1}, {"s2", e.s2}, {"homogeneous", e.homogeneous_target ? 1.0 : 0.0},
                      {"n", static_cast<double>(g.n())}});
}

// ---------------------------------------------------------------------------

double i_loss_ratio(const ScalarField& u, const imethod::IContext& ctx)
{
    const double den = sobolev_norm(u, ctx.s, false);
    if (den == 0.0)
        throw ConfigError("i_loss_ratio: zero field");
    return sobolev_norm(apply_symbol(u, ctx.symbol), 1.0, false) / den;
}

EstimateReport sample_i_loss(double N, double s, long samples, std::uint64_t seed)
{
    require_samples(samples, 1, "i_loss");
    if (!(N >= 1.0) || !(s > 0.5 && s < 1.0))
        throw ConfigError("i_loss sampler: need N >= 1 and s in (1/2, 1)");
    const int r = static_cast<int>(std::ceil(4.0 * N));
    std::map<int, int> count; // |k|^2 -> lattice points
    for (int c = -r; c <= r; ++c)
        for (int b = -r; b <= r; ++b)
            for (int a = -r; a <= r; ++a)
            {
                const int q = a * a + b * b + c * c;
                if (q <= r * r)
                    ++count[q];
            }
    struct Shell
    {
        double k, num_w, den_w;
        int mult;
    };
    std::vector<Shell> shells;
    for (const auto& [q, m] : count)
    {
        const double k = std::sqrt(static_cast<double>(q));
        const double mk = i_symbol_value(k, s, N);
        shells.push_back({k, mk * mk * (1.0 + q), std::pow(1.0 + q, s), m});
    }
    const double kmax = shells.back().k;
    const double norm = std::pow(N, 1.0 - s);

    std::vector<double> ratios(static_cast<std::size_t>(samples));
    for_each_sample(samples, seed, [&](Rng& rng, long i) {
        std::uniform_real_distribution<double> u01;
        const double hi = std::exp(u01(rng) * std::log(kmax + 1.0)) - 1.0 + 1e-9;
        const double lo = u01(rng) * hi;
        double num = 0.0, den = 0.0;
        for (const Shell& sh : shells)
        {
            if (sh.k < lo || sh.k > hi)
                continue;
            std::gamma_distribution<double> energy(sh.mult, 1.0);
            const double e = energy(rng);
            num += e * sh.num_w;
            den += e * sh.den_w;
        }
        ratios[static_cast<std::size_t>(i)] = den > 0.0 ? std::sqrt(num / den) / norm : 0.0;
    });
    return summarize("i_loss", std::move(ratios), seed, {{"N", N}, {"s", s}, {"k_max", kmax}});
}

// ---------------------------------------------------------------------------

double diamagnetic_gap(const ScalarField& phi, const VectorField& A, double floor)
{
    require_same_grid(phi.grid(), A.grid(), "diamagnetic_gap");
    const CVector p = phi.samples();
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j)
    {
        const CVector d = derivative(phi, j).samples();
        const CVector a = A[j].samples();
        for (std::size_t i = 0; i < p.size(); ++i)
        {
            const double mod = std::abs(p[i]);
            if (mod < floor)
                continue;
            // d_j |phi| = Re(conj(phi) d_j phi) / |phi| away from the zero set
            const double dmod = std::real(std::conj(p[i]) * d[i]) / mod;
            const Complex D = d[i] + Complex(0.0, a[i].real()) * p[i];
            gap = std::min(gap, std::abs(D) - std::abs(dmod));
        }
    }
    return gap;
}

EstimateReport sample_bernstein(const Grid& g, double R, long samples, std::uint64_t seed)
{
    require_samples(samples, 1, "bernstein");
    if (!(R > 0.0) || R > g.k_resolved() * (1 + 1e-12))
        throw ConfigError("bernstein sampler: R must lie in (0, k_resolved]");
    const PaddedSpace sp = PaddedSpace::for_degree(g, 2);
    std::vector<double> ratios(static_cast<std::size_t>(samples));
    for (long b = 0; b * batch_size < samples; ++b)
    {
        Rng rng = batch_rng(seed, b);
        for (long i = b * batch_size; i < std::min(samples, (b + 1) * batch_size); ++i)
        {
            const ScalarField u = random_complex_field(g, 0.0, R, 1.0, rng);
            const CVector x = sp.to_physical(u);
            double sup = 0.0;
            for (const Complex& z : x)
                sup = std::max(sup, std::abs(z));
            ratios[static_cast<std::size_t>(i)] = sup / (l2_norm(u) / std::sqrt(g.volume()));
        }
    }
    return summarize("bernstein", std::move(ratios), seed, {{"R", R}, {"n", static_cast<double>(g.n())}});
}

EstimateReport sample_cz(const Grid& g, long samples, std::uint64_t seed)
{
    require_samples(samples, 1, "cz");
    const double K = g.k_resolved();
    std::vector<double> ratios(static_cast<std::size_t>(samples));
    for (long b = 0; b * batch_size < samples; ++b)
    {
        Rng rng = batch_rng(seed, b);
        for (long i = b * batch_size; i < std::min(samples, (b + 1) * batch_size); ++i)
        {
            std::uniform_real_distribution<double> amp(-2.0, 1.0);
            const double a = std::pow(10.0, amp(rng));
            // Disjoint shells give Im(phi conj(phi_t)) zero mean.
            const ScalarField phi = random_complex_field(g, 0.0, 0.45 * K, a, rng);
            const ScalarField phi_t = random_complex_field(g, 0.55 * K, K, a, rng);
            const ScalarField rho = truncate_to_band(elliptic::charge_density(phi, phi_t));
            const ScalarField A0 = elliptic::solve_a0(phi, phi_t);
            const double den = sobolev_norm(rho, -1.0, true);
            ratios[static_cast<std::size_t>(i)] = den > 0.0 ? sobolev_norm(A0, 1.0, true) / den : 0.0;
        }
    }
    return summarize("cz", std::move(ratios), seed, {{"n", static_cast<double>(g.n())}});
}

EstimateReport sample_h_bound(const Grid& g, long samples, std::uint64_t seed)
{
    require_samples(samples, 1, "h_bound");
    std::vector<double> ratios(static_cast<std::size_t>(samples));
    for (long b = 0; b * batch_size < samples; ++b)
    {
        Rng rng = batch_rng(seed, b);
        for (long i = b * batch_size; i < std::min(samples, (b + 1) * batch_size); ++i)
        {
            std::uniform_real_distribution<double> amp(-2.0, 0.0);
            DataSpec ds;
            ds.k_lo = 0.0;
            ds.k_hi = g.k_resolved();
            ds.amplitude = std::pow(10.0, amp(rng));
            ds.seed = rng();
            const GaugeState st = make_initial_state(g, ds);
            const double H = dynamics::hamiltonian(st);
            double grad2 = std::pow(l2_norm(gradient(st.A0)), 2) + std::pow(l2_norm(st.A_t), 2) +
                           std::pow(l2_norm(st.phi_t), 2) + std::pow(l2_norm(gradient(st.phi)), 2);
            for (int j = 0; j < 3; ++j)
                grad2 += std::pow(l2_norm(gradient(st.A[j])), 2);
            const CVector p = st.phi.samples();
            double l3 = 0.0;
            for (const Complex& z : p)
                l3 += std::pow(std::abs(z), 3);
            l3 = std::cbrt(l3 * g.volume() / static_cast<double>(p.size()));
            ratios[static_cast<std::size_t>(i)] = grad2 > 0.0 ? H / (grad2 * (1.0 + l3 * l3)) : 0.0;
        }
    }
    return summarize("h_bound", std::move(ratios), seed, {{"n", static_cast<double>(g.n())}});
}

// ---------------------------------------------------------------------------

void NoSmoothingOptions::validate() const
{
    if (!(N >= 50.0))
        throw ConfigError("nosmoothing: N must be at least 50");
    if (!(eps > 0.0 && eps < 1.0))
        throw ConfigError("nosmoothing: eps must lie in (0, 1)");
    if (!(s > 0.5 && s < 1.0))
        throw ConfigError("nosmoothing: s must lie in (1/2, 1)");
    if (samples < 100000)
        throw ConfigError("nosmoothing: samples must be at least 100000");
    if (time_points != 64)
        throw ConfigError("nosmoothing: only the 64-point Gauss-Legendre rule is built in");
}

double cosine_triple_integral(double a, double b, double c)
{
    const auto C = [](double w) { return std::abs(w) < 1e-8 ? 1.0 - w * w / 6.0 : std::sin(w) / w; };
    return 0.25 * (C(a + b + c) + C(a + b - c) + C(a - b + c) + C(-a + b + c));
}

NoSmoothingResult nosmoothing_integral(const NoSmoothingOptions& opt)
{
    opt.validate();
    using Rule = boost::math::quadrature::gauss<double, 64>;
    // Boost stores the nonnegative abscissae of the symmetric rule on [-1, 1].
    std::vector<double> x, w;
    {
        const auto& ax = Rule::abscissa();
        const auto& wt = Rule::weights();
        for (std::size_t i = 0; i < ax.size(); ++i)
        {
            x.push_back(ax[i]);
            w.push_back(wt[i]);
            if (ax[i] != 0.0)
            {
                x.push_back(-ax[i]);
                w.push_back(wt[i]);
            }
        }
    }
    // cos a cos b cos c = (cos(a+b+c) + cos(a+b-c) + cos(a-b+c) + cos(-a+b+c)) / 4;
    // each panel of width h must keep w h small enough for 64 points.
    const double omega_max = 2.0 * (opt.N + 1.0) + 0.25;
    const int panels = std::max(1, static_cast<int>(std::ceil(omega_max / 40.0)));
    const double h = 1.0 / panels;

    const double N = opt.N;
    const double amp = opt.eps * std::pow(N, -opt.s) * opt.eps * std::pow(N, opt.s - 1.0);
    const Vec3 xi_c{N, 0.0, 0.0}, eta_c{0.0, 0.1, 0.0};
    const Vec3 f_c{N + opt.f_shift[0], opt.f_shift[1], opt.f_shift[2]}; // xi + eta must land here
    const double vol = std::pow(4.0 * std::numbers::pi / 3.0, 2) * 1e-6;

    // Integral over [0,1] of cos(w t) by the composite rule, rotating the
    // per-panel phase instead of re-evaluating cosines.
    const auto cos_integral = [&](double om) {
        const Complex rot = std::polar(1.0, om * h);
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            Complex z = std::polar(1.0, om * h * 0.5 * (x[i] + 1.0));
            double sum = 0.0;
            for (int p = 0; p < panels; ++p)
            {
                sum += z.real();
                z *= rot;
            }
            total += w[i] * sum;
        }
        return 0.5 * h * total;
    };

    const long nb = (opt.samples + batch_size - 1) / batch_size;
    std::vector<double> s1(static_cast<std::size_t>(nb)), s2(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < nb; ++b)
    {
        Rng rng = batch_rng(opt.seed, b);
        double a1 = 0.0, a2 = 0.0;
        const long end = std::min(opt.samples, (b + 1) * batch_size);
        for (long i = b * batch_size; i < end; ++i)
        {
            const Vec3 xi = uniform_in_ball(rng, xi_c, 1.0);
            const Vec3 eta = uniform_in_ball(rng, eta_c, 0.01);
            const Vec3 sum{xi[0] + eta[0], xi[1] + eta[1], xi[2] + eta[2]};
            const Vec3 off{sum[0] - f_c[0], sum[1] - f_c[1], sum[2] - f_c[2]};
            double g = 0.0;
            if (norm3(off) <= 1.0)
            {
                // A(eta) = (1, -eta1/eta2, 0) is divergence-free.
                const double xa = xi[0] - xi[1] * eta[0] / eta[1];
                const double a = norm3(eta), bb = norm3(xi), c = norm3(sum);
                const double T = opt.closed_form_time
                                     ? cosine_triple_integral(a, bb, c)
                                     : 0.25 * (cos_integral(a + bb + c) + cos_integral(a + bb - c) +
                                               cos_integral(a - bb + c) + cos_integral(-a + bb + c));
                g = vol * amp * xa * T;
            }
            a1 += g;
            a2 += g * g;
        }
        s1[static_cast<std::size_t>(b)] = a1;
        s2[static_cast<std::size_t>(b)] = a2;
    }
    double m1 = 0.0, m2 = 0.0;
    for (long b = 0; b < nb; ++b)
    {
        m1 += s1[static_cast<std::size_t>(b)];
        m2 += s2[static_cast<std::size_t>(b)];
    }
    const double n = static_cast<double>(opt.samples);
    NoSmoothingResult r;
    r.value = m1 / n;
    r.std_error = std::sqrt(std::max(0.0, m2 / n - r.value * r.value) / (n - 1.0));
    r.eps_cubed = opt.eps * opt.eps * opt.eps;
    r.time_panels = panels;
    r.samples = opt.samples;
    return r;
}

} // namespace mkg::estimates
