#include "mkg/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mkg
{

Grid::Grid(int n, double L) : n_(n), L_(L)
{
    if (n < 8 || (n & (n - 1)) != 0)
        throw ConfigError("grid: n must be a power of two >= 8, got " + std::to_string(n));
    if (!(L > 0.0) || !std::isfinite(L))
        throw ConfigError("grid: box length must be positive");
    dk_ = 2.0 * std::numbers::pi / L;
}

std::string Grid::describe() const
{
    std::ostringstream os;
    os << n_ << "^3, L=" << L_;
    return os.str();
}

Grid make_grid(int n, double L) { return Grid(n, L); }

void require_same_grid(const Grid& a, const Grid& b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": grid mismatch (" + a.describe() +
                                    " vs " + b.describe() + ")");
}

} // namespace mkg
