#include "mkg/symbol.hpp"

#include "mkg/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mkg
{

double i_symbol_value(double k, double s, double N)
{
    if (k <= N)
        return 1.0;
    if (k >= 2.0 * N)
        return std::pow(k / N, s - 1.0);
    const double t = std::log2(k / N);
    return std::exp((s - 1.0) * std::numbers::ln2 * t * t * (2.0 - t));
}

namespace
{

template <class F>
std::vector<double> radial_table(const Grid& g, F f)
{
    std::vector<double> t(g.size());
    const int n = g.n();
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                t[g.index(i, j, l)] = f(g.k(i, j, l));
    return t;
}

double norm3(const Vec3& k) { return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]); }

} // namespace

Symbol::Symbol(const Grid& g, SymbolKind kind, const SymbolParams& p) : grid_(g), kind_(kind), params_(p)
{
    switch (kind)
    {
    case SymbolKind::riesz:
        if (p.component < 0 || p.component > 2)
            throw ConfigError("riesz: component must be 0, 1 or 2");
        table_ = radial_table(g, [j = p.component](const Vec3& k) {
            const double r = norm3(k);
            return r == 0.0 ? 0.0 : k[j] / r;
        });
        break;
    case SymbolKind::frac_hom:
        table_ = radial_table(g, [a = p.order](const Vec3& k) {
            const double r = norm3(k);
            if (r == 0.0)
                return a == 0.0 ? 1.0 : 0.0;
            return std::pow(r, a);
        });
        break;
    case SymbolKind::frac_inhom:
        table_ = radial_table(g, [a = p.order](const Vec3& k) {
            const double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            return std::pow(1.0 + r2, 0.5 * a);
        });
        break;
    case SymbolKind::i_op:
        if (!(p.s > 0.5 && p.s < 1.0))
            throw ConfigError("i_op: s must lie in (1/2, 1), got " + std::to_string(p.s));
        if (!(p.N > 0.0))
            throw ConfigError("i_op: N must be positive");
        table_ = radial_table(g, [s = p.s, N = p.N](const Vec3& k) { return i_symbol_value(norm3(k), s, N); });
        break;
    case SymbolKind::band:
        if (!(p.R > 0.0))
            throw ConfigError("band: R must be positive");
        // Slack keeps lattice points that sit exactly on the sphere inside.
        table_ = radial_table(g, [R2 = p.R * p.R * (1.0 + 1e-12)](const Vec3& k) {
            return k[0] * k[0] + k[1] * k[1] + k[2] * k[2] <= R2 ? 1.0 : 0.0;
        });
        break;
    case SymbolKind::leray:
        break;
    }
}

std::array<double, 9> Symbol::matrix(std::size_t idx) const
{
    const int n = grid_.n();
    const int i = static_cast<int>(idx % n);
    const int j = static_cast<int>((idx / n) % n);
    const int l = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    const Vec3 k = grid_.k(i, j, l);
    const double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    std::array<double, 9> P{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            P[3 * a + b] = (a == b ? 1.0 : 0.0) - (r2 == 0.0 ? 0.0 : k[a] * k[b] / r2);
    return P;
}

Symbol Symbol::riesz(const Grid& g, int j) { return Symbol(g, SymbolKind::riesz, {.component = j}); }
Symbol Symbol::frac_hom(const Grid& g, double a) { return Symbol(g, SymbolKind::frac_hom, {.order = a}); }
Symbol Symbol::frac_inhom(const Grid& g, double a) { return Symbol(g, SymbolKind::frac_inhom, {.order = a}); }
Symbol Symbol::i_op(const Grid& g, double s, double N) { return Symbol(g, SymbolKind::i_op, {.s = s, .N = N}); }
Symbol Symbol::band(const Grid& g, double R) { return Symbol(g, SymbolKind::band, {.R = R}); }
Symbol Symbol::leray(const Grid& g) { return Symbol(g, SymbolKind::leray, {}); }

Symbol make_symbol(const Grid& g, SymbolKind kind, const SymbolParams& p) { return Symbol(g, kind, p); }

ScalarField apply_symbol(const ScalarField& u, const Symbol& m)
{
    require_same_grid(u.grid(), m.grid(), "apply_symbol");
    if (m.is_matrix())
        throw std::invalid_argument("apply_symbol: leray acts on vector fields");
    ScalarField out = u;
    kernels::multiply_real(m.table().data(), out.data(), out.size());
    return out;
}

VectorField apply_symbol(const VectorField& v, const Symbol& m)
{
    if (m.is_matrix())
    {
        require_same_grid(v.grid(), m.grid(), "apply_symbol");
        return leray_project(v);
    }
    return VectorField(apply_symbol(v[0], m), apply_symbol(v[1], m), apply_symbol(v[2], m));
}

VectorField leray_project(const VectorField& v)
{
    const Grid& g = v.grid();
    VectorField out = v;
    const int n = g.n();
    Complex *x = out[0].data(), *y = out[1].data(), *z = out[2].data();
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const Vec3 k = g.k(i, j, l);
                const double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if (r2 == 0.0)
                    continue;
                const std::size_t idx = g.index(i, j, l);
                const Complex kv = (k[0] * x[idx] + k[1] * y[idx] + k[2] * z[idx]) / r2;
                x[idx] -= k[0] * kv;
                y[idx] -= k[1] * kv;
                z[idx] -= k[2] * kv;
            }
    return out;
}

} // namespace mkg
