#pragma once

#include <string>
#include <vector>

#include "ruelle/gamma.hpp"
#include "ruelle/ruelle.hpp"

namespace ruelle {

// passed <=> lhs <= rhs + error_budget (two-sided checks store |lhs - rhs|
// against 0 in the same form).
struct CheckResult {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double error_budget = 0;
    bool passed = false;
    std::string detail;
};

CheckResult make_check(std::string name, double lhs, double rhs, double budget, std::string detail = {});

// auto_config radii for these poles with the resolution of `base`
QuadratureConfig resolved_config(const QuadratureConfig& base, const std::vector<cplx>& poles);

// ||f* phi||_1 <= ||phi||_1
CheckResult contraction_check(const CriticalData& cd, const GammaCombination& phi, const QuadratureConfig& base = {},
                              Exec exec = Exec::parallel);

// ||sum_{n<=N} x^n f^{*n} gamma_a||_1 <= ||gamma_a||_1 / (1 - |x|)
CheckResult neumann_bound_check(const CriticalData& cd, cplx x, cplx a, int N = 8, const QuadratureConfig& base = {},
                                Exec exec = Exec::parallel);

// mu(w) = amplitude (1 - |w - center|^2 / radius^2)^2 on the disc, 0 outside (C^1)
struct Bump {
    cplx center;
    double radius = 0.2;
    cplx amplitude = 1.0;
    cplx operator()(cplx w) const;
};

struct DualityParts {
    cplx pullback_pairing;  // int B_f(mu) phi over the y-plane
    cplx pushforward_pairing;  // int mu f*phi over the bump disc
    double pullback_error = 0, pushforward_error = 0, branch_tail = 0;
    std::size_t blobs = 0;
};

DualityParts duality_pairings(const CriticalData& cd, const Bump& mu, const GammaCombination& phi,
                              const QuadratureConfig& base = {}, const BranchWindow& win = {60, true},
                              Exec exec = Exec::parallel);

// |pullback - pushforward| <= budget (lhs holds the discrepancy, rhs = 0)
CheckResult duality_check(const CriticalData& cd, const Bump& mu, const GammaCombination& phi,
                          const QuadratureConfig& base = {}, const BranchWindow& win = {60, true},
                          Exec exec = Exec::parallel);

}  // namespace ruelle
