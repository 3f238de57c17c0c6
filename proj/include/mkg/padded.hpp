#pragma once

#include "mkg/field.hpp"

namespace mkg
{

// Smallest even 5-smooth M >= max(n, degree*K + 1), K the resolved band
// index radius. Products of `degree` band-limited factors then integrate
// exactly on the M^3 lattice, and degree-(d+1) sizing makes degree-d
// products truncated back to the band alias-free.
int padded_size(const Grid& g, int degree);

// Zero-padded physical evaluation of band-limited fields on an M^3 lattice.
class PaddedSpace
{
public:
    PaddedSpace(const Grid& g, int M);
    static PaddedSpace for_degree(const Grid& g, int degree) { return PaddedSpace(g, padded_size(g, degree)); }

    const Grid& grid() const { return grid_; }
    int M() const { return M_; }
    std::size_t size() const { return static_cast<std::size_t>(M_) * M_ * M_; }

    // Samples of the band part of u on the padded lattice.
    CVector to_physical(const ScalarField& u) const;
    void to_physical(const ScalarField& u, CVector& out) const;
    // Forward transform of padded samples, truncated to the resolved band.
    ScalarField to_band(CVector samples) const;
    void to_band(CVector& samples, ScalarField& out) const;
    // Mean-value quadrature: L^3 / M^3 sum f(x).
    double integrate_re(const CVector& f) const;
    double integrate_abs2(const CVector& f) const;
    double integrate_dot(const CVector& f, const CVector& g) const; // Re int f conj(g)

private:
    Grid grid_;
    int M_;
};

} // namespace mkg
