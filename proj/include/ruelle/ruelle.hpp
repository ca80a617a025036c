#pragma once

#include <functional>
#include <vector>

#include "ruelle/gamma.hpp"
#include "ruelle/map_model.hpp"

namespace ruelle {

// Inverse branches used by apply_direct: P3(y) = w0 + 2 pi k and, with both
// sheets, P3(y) = pi - w0 + 2 pi k, for |k| <= k_range.
struct BranchWindow {
    int k_range = 200;
    bool both_sheets = true;
};

// f* gamma_a = gamma_{f(a)} / f'(a) + sum_i b_i gamma_a(c_i) gamma_{d_i}.
// The critical sum runs over cd.entries and, when cd.tail_exact(), is
// completed over the full critical lattice in closed form; otherwise it is
// truncated at cd.radius. Requires f(0) = 0 and f(1) = 1.
GammaCombination apply(const CriticalData& cd, const GammaCombination& phi, Exec exec = Exec::parallel);

// Per value class: sum_{k in class} b_k gamma_a(c_k) (plus the lattice
// completion when available). Indexed like cd.classes.
std::vector<cplx> class_sums(const CriticalData& cd, cplx a);

// Bound on the coefficient mass apply() drops by truncating the critical sum.
// Rounding level when the tail is completed exactly.
double apply_tail(const CriticalData& cd, const GammaCombination& phi);

// sum_{k in Z} gamma_a(origin + k step), closed form via cot.
cplx lattice_gamma_sum(cplx a, cplx origin, cplx step);

struct DirectResult {
    cplx value;
    double tail_estimate = 0;  // cubic-decay extrapolation from the outermost branches
    int branches = 0;          // preimages used
    int skipped = 0;           // preimages dropped for |f'(y)| < 1e-10
};

// Preimages y of z in the branch window. Needs constant P1 and linear P2.
std::vector<cplx> preimages(const EntireMap& f, cplx z, const BranchWindow& win);

// sum over preimages y of phi(y) f'(y)^{-n} conj(f'(y))^{-m} for
// (n, m) in {(2, 0), (1, 1)}. Rejects z within 1e-8 of a critical value.
DirectResult apply_direct(const EntireMap& f, const std::function<cplx(cplx)>& phi, cplx z,
                          const BranchWindow& win = {}, std::pair<int, int> exponents = {2, 0},
                          Exec exec = Exec::parallel);

// n-fold apply starting from gamma_a.
GammaCombination iterate(const CriticalData& cd, cplx a, int n, Exec exec = Exec::parallel);

// Throws PreconditionError unless |f(0)| and |f(1) - 1| are below 1e-9.
void require_normalized(const EntireMap& f);

}  // namespace ruelle
