#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/map_model.hpp"
#include "ruelle/ruelle.hpp"

namespace ruelle {

struct SeriesEval {
    cplx value;
    std::size_t n_used = 0;
    double tail_estimate = 0;
    bool converged = false;
    double rate = 0;  // fitted geometric decay of the majorant
    double k1 = 0;    // max |term_n| / majorant_n seen (the sup-factor)
};

struct SeriesOptions {
    std::size_t n_max = 400;
    double tol = 1e-13;
    double escape_radius = 1e6;
};

// A(x, a, z) = sum_n x^n / (f^n)'(a) gamma_{f^n(a)}(z).
SeriesEval A_series(const EntireMap& f, cplx x, cplx a, cplx z, const SeriesOptions& opt = {});

// A(x, a, c) with the majorant |x|^n / |(f^{n+1})'(a)|, which stays valid when
// the orbit accumulates on c; k1 reports the constant relating the two.
SeriesEval A_at_point(const EntireMap& f, cplx x, cplx a, cplx c, const SeriesOptions& opt = {});

// Per value class i: sum_{k in class i} b_k A(x, a, c_k), summed along the
// orbit of a as sum_n x^n / (f^n)'(a) class_sums(f^n(a))[i] so that the
// lattice completion of cd carries over. Tails include the truncation of the
// critical sum when cd has no exact completion.
std::vector<SeriesEval> class_series(const CriticalData& cd, cplx x, cplx a, const SeriesOptions& opt = {});

struct ValueSystem {
    std::size_t q = 0;
    Eigen::MatrixXcd matrix;  // M[j][i] = x sum_{k in class i} b_k A(x, d_j, c_k)
    Eigen::VectorXcd rhs;     // A(x, d_j, z)
    double condition = 0;     // 2-norm condition of I - M
};

ValueSystem value_system(const CriticalData& cd, cplx x, cplx z, const SeriesOptions& opt = {});

// S(x, a, z) from the q x q system over distinct critical values.
// Throws ConditioningError when cond(I - M) >= 1e8.
SeriesEval S_by_system(const CriticalData& cd, cplx x, cplx a, cplx z, const SeriesOptions& opt = {});

// Partial sums of sum_n x^n (f^{*n} gamma_a)(z).
SeriesEval S_by_neumann(const CriticalData& cd, cplx x, cplx a, cplx z, const SeriesOptions& opt = {});

// Partial sum sum_{n<=N} x^n f^{*n} gamma_a as a combination.
GammaCombination neumann_partial(const CriticalData& cd, cplx x, cplx a, int N);

struct LimitResult {
    SeriesEval at_one;
    std::vector<double> xs;
    std::vector<SeriesEval> values;
    std::vector<double> trend;  // |A(x) - A(1)|
};

// Generic form: evaluator(x) along the schedule and at x = 1.
LimitResult limit_x_to_1(const std::function<SeriesEval(double)>& evaluator, const std::vector<double>& schedule,
                         Exec exec = Exec::parallel);

struct PointLimit : LimitResult {
    std::vector<double> derivative_gaps;  // sum_n |x^n - 1| / |(f^n)'(a)|
};

// A(x, a, target) with target a regular point (at_point = false) or a
// critical point (at_point = true). Requires a to classify as Summable.
PointLimit limit_x_to_1(const EntireMap& f, cplx a, cplx target, bool at_point, const std::vector<double>& schedule,
                        const SeriesOptions& opt = {});

}  // namespace ruelle
