#pragma once

#include "mkg/fft.hpp"
#include "mkg/grid.hpp"

#include <array>
#include <cstddef>

namespace mkg
{

// Complex scalar field held as Fourier coefficients c_k of
// u(x) = sum_k c_k exp(i k.x). Physical samples are produced on demand.
class ScalarField
{
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g);

    static ScalarField from_samples(const Grid& g, CVector samples);
    CVector samples() const;

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return c_.size(); }
    Complex* data() { return c_.data(); }
    const Complex* data() const { return c_.data(); }
    CVector& coeffs() { return c_; }
    const CVector& coeffs() const { return c_; }
    Complex& operator[](std::size_t i) { return c_[i]; }
    const Complex& operator[](std::size_t i) const { return c_[i]; }

    Complex mode(int a, int b, int c) const { return c_[grid_.index_of_mode(a, b, c)]; }
    void set_mode(int a, int b, int c, Complex v) { c_[grid_.index_of_mode(a, b, c)] = v; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(Complex a);
    void add_scaled(Complex a, const ScalarField& o);

private:
    Grid grid_;
    CVector c_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(Complex a, ScalarField b);
ScalarField operator-(ScalarField a);

// Real 3-vector field; each component is a ScalarField with real samples.
struct VectorField
{
    std::array<ScalarField, 3> c;

    VectorField() = default;
    explicit VectorField(const Grid& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}
    VectorField(ScalarField x, ScalarField y, ScalarField z) : c{std::move(x), std::move(y), std::move(z)} {}

    const Grid& grid() const { return c[0].grid(); }
    ScalarField& operator[](int j) { return c[j]; }
    const ScalarField& operator[](int j) const { return c[j]; }

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(Complex a);
    void add_scaled(Complex a, const VectorField& o);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(Complex a, VectorField b);

// Transform the raw n^3 array in place (samples <-> coefficients).
CVector transform(const Grid& g, CVector data, Direction dir);

ScalarField derivative(const ScalarField& u, int j);
VectorField gradient(const ScalarField& u);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& u);
VectorField laplacian(const VectorField& v);

// Coefficients of conj(u): c'_k = conj(c_{-k}).
ScalarField conjugate(const ScalarField& u);
ScalarField real_part(const ScalarField& u);

ScalarField truncate_to_band(const ScalarField& u);
VectorField truncate_to_band(const VectorField& v);
// Largest |c_k| outside the resolved band.
double out_of_band(const ScalarField& u);

// Parseval-based L^2 quantities: ||u||^2 = L^3 sum |c_k|^2.
double l2_norm(const ScalarField& u);
double l2_norm(const VectorField& v);
double inner(const ScalarField& u, const ScalarField& v); // Re int u conj(v)
double inner(const VectorField& u, const VectorField& v);
double max_coeff(const ScalarField& u);
double max_coeff(const VectorField& v);
Complex mean(const ScalarField& u);

} // namespace mkg
