#pragma once

#include <string>
#include <vector>

namespace mkg
{

struct CheckResult
{
    std::string name;
    double error = 0.0; // relative
    double tol = 0.0;
    bool pass = false;
};

// Exact-identity suite on an n^3 grid of side 2 pi: transforms, projections,
// band algebra, commutator vanishing and two-mode forms, null-form symmetry.
std::vector<CheckResult> run_selftest(int n = 32, double tol = 1e-10);

} // namespace mkg
