#include "mkg/elliptic.hpp"

#include "mkg/kernels.hpp"
#include "mkg/symbol.hpp"

#include <cmath>
#include <string>

namespace mkg::elliptic
{

void EllipticConfig::validate() const
{
    if (!(cg_tol > 0.0 && cg_tol < 1.0))
        throw ConfigError("cg_tol must lie in (0, 1)");
    if (cg_max_iter < 1)
        throw ConfigError("cg_max_iter must be at least 1");
}

namespace
{

double dot(const ScalarField& a, const ScalarField& b) { return kernels::dot_re(a.data(), b.data(), a.size()); }

// x / (|k|^2 + c), with the k = 0 entry set to zero when c = 0.
ScalarField divide_shifted_laplacian(const ScalarField& x, double c)
{
    const Grid& g = x.grid();
    ScalarField out(g);
    const int n = g.n();
#pragma omp parallel for schedule(static)
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const Vec3 k = g.k(i, j, l);
                const double d = k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + c;
                const std::size_t idx = g.index(i, j, l);
                out[idx] = d == 0.0 ? Complex(0.0) : x[idx] / d;
            }
    return out;
}

} // namespace

ScreenedOperator::ScreenedOperator(const PaddedSpace& space, CVector weight) : space_(space), w_(std::move(weight))
{
    if (w_.size() != space_.size())
        throw std::invalid_argument("ScreenedOperator: weight size mismatch");
    double acc = 0.0;
    for (const Complex& z : w_)
    {
        acc += z.real();
        max_w_ = std::max(max_w_, std::abs(z.real()));
    }
    mean_w_ = acc / static_cast<double>(w_.size());
}

ScreenedOperator ScreenedOperator::from_phi(const ScalarField& phi)
{
    const PaddedSpace space = PaddedSpace::for_degree(phi.grid(), 4);
    CVector w = space.to_physical(phi);
    for (Complex& z : w)
        z = std::norm(z);
    return ScreenedOperator(space, std::move(w));
}

ScalarField ScreenedOperator::apply(const ScalarField& x) const
{
    CVector X = space_.to_physical(x);
    const std::size_t m = X.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
        X[i] = w_[i].real() * X[i].real();
    ScalarField y = space_.to_band(std::move(X));
    y -= laplacian(x);
    return y;
}

ScalarField ScreenedOperator::solve(const ScalarField& rhs, const EllipticConfig& cfg, SolveInfo* info,
                                   const ScalarField* guess) const
{
    cfg.validate();
    const Grid& g = rhs.grid();
    const ScalarField b = truncate_to_band(rhs);
    const double bnorm = std::sqrt(dot(b, b));
    SolveInfo local;
    SolveInfo& rec = info ? *info : local;
    rec = SolveInfo{};
    if (bnorm == 0.0)
        return ScalarField(g);

    if (degenerate())
    {
        // Pure Poisson problem: solvable only for mean-zero data.
        if (std::abs(b[0]) > 1e-12 * bnorm)
            throw EllipticError("solve_a0: right side has nonzero mean while |phi|^2 vanishes identically");
        ScalarField x = divide_shifted_laplacian(b, 0.0);
        rec.iterations = 0;
        rec.residual = 0.0;
        return x;
    }

    ScalarField x(g);
    ScalarField r = b;
    if (guess && guess->grid() == g)
    {
        x = truncate_to_band(*guess);
        r -= apply(x);
        rec.residual = std::sqrt(dot(r, r)) / bnorm;
        if (rec.residual <= cfg.cg_tol)
            return x;
    }
    ScalarField z = divide_shifted_laplacian(r, mean_w_);
    ScalarField p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= cfg.cg_max_iter; ++it)
    {
        const ScalarField Ap = apply(p);
        const double alpha = rz / dot(p, Ap);
        x.add_scaled(alpha, p);
        r.add_scaled(-alpha, Ap);
        // 1/2 <x, A x> - <b, x> = -1/2 <x, b + r>
        rec.energy.push_back(-0.5 * (dot(x, b) + dot(x, r)));
        rec.iterations = it;
        rec.residual = std::sqrt(dot(r, r)) / bnorm;
        if (!std::isfinite(rec.residual))
            throw EllipticError("solve_a0: CG produced a non-finite residual");
        if (rec.residual <= cfg.cg_tol)
            return x;
        z = divide_shifted_laplacian(r, mean_w_);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        z.add_scaled(beta, p);
        p = std::move(z);
    }
    throw EllipticError("solve_a0: CG did not converge in " + std::to_string(cfg.cg_max_iter) +
                        " iterations (relative residual " + std::to_string(rec.residual) + ")");
}

ScalarField charge_density(const ScalarField& phi, const ScalarField& phi_t)
{
    require_same_grid(phi.grid(), phi_t.grid(), "charge_density");
    const PaddedSpace space = PaddedSpace::for_degree(phi.grid(), 3);
    CVector P = space.to_physical(phi);
    const CVector Pt = space.to_physical(phi_t);
    const std::size_t m = P.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
        P[i] = std::imag(P[i] * std::conj(Pt[i]));
    return space.to_band(std::move(P));
}

ScalarField solve_a0(const ScalarField& phi, const ScalarField& phi_t, const EllipticConfig& cfg, SolveInfo* info)
{
    const ScreenedOperator op = ScreenedOperator::from_phi(phi);
    return op.solve(charge_density(phi, phi_t), cfg, info);
}

double a0_functional(const ScalarField& A0, const ScalarField& phi, const ScalarField& phi_t)
{
    require_same_grid(A0.grid(), phi.grid(), "a0_functional");
    const VectorField dA = gradient(truncate_to_band(A0));
    const double grad = 0.5 * l2_norm(dA) * l2_norm(dA);
    const PaddedSpace space = PaddedSpace::for_degree(A0.grid(), 4);
    const CVector a = space.to_physical(A0);
    const CVector P = space.to_physical(phi);
    const CVector Pt = space.to_physical(phi_t);
    CVector f(a.size());
    const std::size_t m = f.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
    {
        const double ar = a[i].real();
        f[i] = -ar * std::imag(P[i] * std::conj(Pt[i])) + 0.5 * ar * ar * std::norm(P[i]);
    }
    return grad + space.integrate_re(f);
}

VectorField current(const ScalarField& phi, const VectorField& A)
{
    const PaddedSpace space = PaddedSpace::for_degree(phi.grid(), 4);
    const CVector P = space.to_physical(phi);
    VectorField J(phi.grid());
    for (int j = 0; j < 3; ++j)
    {
        CVector D = space.to_physical(derivative(phi, j));
        const CVector a = space.to_physical(A[j]);
        const std::size_t m = D.size();
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < m; ++i)
            D[i] = std::imag(P[i] * std::conj(D[i])) - a[i].real() * std::norm(P[i]);
        J[j] = space.to_band(std::move(D));
    }
    return J;
}

ScalarField a0_t_from_current(const VectorField& J)
{
    // grad A0_t = -(1-P)J  =>  hat(A0_t) = i k.hat(J) / |k|^2
    ScalarField div = divergence(J); // i k.J
    return divide_shifted_laplacian(div, 0.0);
}

ScalarField solve_a0_t(const ScalarField& phi, const VectorField& A)
{
    require_same_grid(phi.grid(), A.grid(), "solve_a0_t");
    return a0_t_from_current(current(phi, A));
}

namespace
{

double ratio(double num, double den) { return den > 0.0 ? num / den : num; }

} // namespace

CompatResiduals compatibility_residuals(const GaugeState& st)
{
    CompatResiduals r;
    double gA = 0.0, gAt = 0.0;
    for (int j = 0; j < 3; ++j)
    {
        gA += std::pow(l2_norm(gradient(st.A[j])), 2);
        gAt += std::pow(l2_norm(gradient(st.A_t[j])), 2);
    }
    r.div_A = ratio(l2_norm(divergence(st.A)), std::sqrt(gA));
    r.div_A_t = ratio(l2_norm(divergence(st.A_t)), std::sqrt(gAt));

    const ScreenedOperator op = ScreenedOperator::from_phi(st.phi);
    const ScalarField rho = charge_density(st.phi, st.phi_t);
    const ScalarField res = op.apply(st.A0) - rho;
    r.gauss = ratio(l2_norm(res), l2_norm(rho));

    const VectorField J = current(st.phi, st.A);
    const VectorField F = -1.0 * (J - leray_project(J));
    const VectorField dA0t = gradient(st.A0_t);
    r.a0_t = ratio(l2_norm(dA0t - F), l2_norm(F));
    return r;
}

GaugeState init_compatible(const ScalarField& phi0, const ScalarField& phi_t0, const VectorField& A_raw,
                           const VectorField& A_t_raw, const EllipticConfig& cfg)
{
    require_same_grid(phi0.grid(), phi_t0.grid(), "init_compatible");
    require_same_grid(phi0.grid(), A_raw.grid(), "init_compatible");
    require_same_grid(phi0.grid(), A_t_raw.grid(), "init_compatible");
    GaugeState st(phi0.grid());
    st.phi = truncate_to_band(phi0);
    st.phi_t = truncate_to_band(phi_t0);
    st.A = leray_project(truncate_to_band(A_raw));
    st.A_t = leray_project(truncate_to_band(A_t_raw));
    st.A0 = solve_a0(st.phi, st.phi_t, cfg);
    st.A0_t = solve_a0_t(st.phi, st.A);
    return st;
}

} // namespace mkg::elliptic
