#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mkg
{

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

// Periodic cube [0, L)^3 sampled at n points per axis. Flat index is
// i + n*(j + n*l) with the x index fastest.
class Grid
{
public:
    Grid() = default;
    Grid(int n, double L);

    int n() const { return n_; }
    double box() const { return L_; }
    double dk() const { return dk_; }
    double spacing() const { return L_ / n_; }
    double volume() const { return L_ * L_ * L_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    // Signed lattice index for array position i (range -n/2 .. n/2-1).
    int wave_index(int i) const { return i < n_ / 2 ? i : i - n_; }
    double wavenumber(int i) const { return dk_ * wave_index(i); }

    int band_index_radius() const { return n_ / 3; }
    double k_resolved() const { return dk_ * (n_ / 3); }
    double nyquist() const { return dk_ * (n_ / 2); }

    // |k|^2 in index units; the resolved band is |k| <= n/3 in those units.
    int index_norm2(int i, int j, int l) const
    {
        const int a = wave_index(i), b = wave_index(j), c = wave_index(l);
        return a * a + b * b + c * c;
    }
    bool in_band(int i, int j, int l) const
    {
        const int r = band_index_radius();
        return index_norm2(i, j, l) <= r * r;
    }

    std::size_t index(int i, int j, int l) const
    {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * l);
    }

    // Array position of the lattice point with signed indices (a, b, c).
    std::size_t index_of_mode(int a, int b, int c) const
    {
        auto wrap = [this](int m) { return m < 0 ? m + n_ : m; };
        return index(wrap(a), wrap(b), wrap(c));
    }

    Vec3 k(int i, int j, int l) const { return {wavenumber(i), wavenumber(j), wavenumber(l)}; }

    bool operator==(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    std::string describe() const;

private:
    int n_ = 0;
    double L_ = 0.0;
    double dk_ = 0.0;
};

Grid make_grid(int n, double L);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

} // namespace mkg
