#pragma once

#include "mkg/field.hpp"

#include <array>
#include <vector>

namespace mkg
{

enum class SymbolKind
{
    riesz,      // k_j / |k|
    frac_hom,   // |k|^a
    frac_inhom, // <k>^a
    i_op,       // smoothing multiplier m_N
    band,       // indicator of |k| <= R
    leray       // Id - k k^T / |k|^2
};

struct SymbolParams
{
    int component = 0; // riesz
    double order = 0;  // frac_hom, frac_inhom
    double s = 0;      // i_op
    double N = 0;      // i_op
    double R = 0;      // band
};

// Radial profile of the I multiplier: 1 below N, (k/N)^(s-1) above 2N, and
// a cubic Hermite blend of log m against log k in between, which has zero
// slope at N and slope s-1 at 2N.
double i_symbol_value(double k, double s, double N);

class Symbol
{
public:
    Symbol() = default;
    Symbol(const Grid& g, SymbolKind kind, const SymbolParams& p);

    static Symbol riesz(const Grid& g, int j);
    static Symbol frac_hom(const Grid& g, double a);
    static Symbol frac_inhom(const Grid& g, double a);
    static Symbol i_op(const Grid& g, double s, double N);
    static Symbol band(const Grid& g, double R);
    static Symbol leray(const Grid& g);

    const Grid& grid() const { return grid_; }
    SymbolKind kind() const { return kind_; }
    const SymbolParams& params() const { return params_; }
    bool is_matrix() const { return kind_ == SymbolKind::leray; }

    // Scalar weight at flat index (not available for leray).
    double operator[](std::size_t idx) const { return table_[idx]; }
    const std::vector<double>& table() const { return table_; }
    std::array<double, 9> matrix(std::size_t idx) const;

private:
    Grid grid_;
    SymbolKind kind_ = SymbolKind::band;
    SymbolParams params_;
    std::vector<double> table_;
};

Symbol make_symbol(const Grid& g, SymbolKind kind, const SymbolParams& p);

ScalarField apply_symbol(const ScalarField& u, const Symbol& m);
VectorField apply_symbol(const VectorField& v, const Symbol& m);
VectorField leray_project(const VectorField& v);

} // namespace mkg
