#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/series.hpp"

namespace ruelle {

struct PsiEntry {
    std::size_t value_index = 0;  // index into cd.classes
    cplx value;                   // class critical value d_i
    cplx psi;
    double tail = 0;
};

struct RelationReport {
    cplx d1;
    std::size_t d1_class = 0;
    std::vector<PsiEntry> psi;
    bool trivial = false;
    bool instability_evidence = false;
    double tol = 1e-6;
    std::size_t n_used = 0;
};

// Psi_i = sum_{f(c_k) = d_i} b_k A(1, d1, c_k) for every value class.
// Requires f normalized and d1 a critical value classified Summable.
RelationReport psi_coefficients(const CriticalData& cd, cplx d1, double tol = 1e-6, const SeriesOptions& opt = {});

// |Psi_{d1} - 1| for the d1 class, |Psi_i| otherwise
double psi_deviation(const RelationReport& r, std::size_t k);

enum class InstabilityVerdict { Yes, NoEvidence, Inconclusive };
std::string to_string(InstabilityVerdict v);

struct VerdictRecord {
    InstabilityVerdict verdict = InstabilityVerdict::Inconclusive;
    std::vector<std::size_t> established;  // psi entries nonzero beyond max(tol, 3 tail)
    std::string text;
};

VerdictRecord instability_verdict(const RelationReport& r);

struct DefectResult {
    double max_residual = 0;
    std::vector<double> residuals;  // per accepted sample
    std::vector<cplx> rejected;     // samples at poles or critical values
    std::size_t truncation = 0;     // N: f* is applied to sum_{n<=N}
    double tail = 0;                // series and branch tails entering the residual
};

// R(z) = f*[A_N](z) - A(1,d1,z) + gamma_{d1}(z) - sum_i Psi_i gamma_{d_i}(z).
// f* acts through the direct branch sum, independent of cd, so a corrupted
// residue shows up. Without a truncation, N is the converged length of the
// Psi series.
DefectResult defect_identity(const CriticalData& cd, cplx d1, const std::vector<cplx>& samples,
                             std::optional<std::size_t> truncation = std::nullopt, const BranchWindow& win = {},
                             const SeriesOptions& opt = {});

struct TransportResult {
    double max_residual = 0;
    std::vector<double> residuals;
    std::vector<cplx> rejected;
    double tail = 0;
    std::size_t terms = 0;
};

// |G(g(z)) g'(z) - phi(z)| with g(z) = y z / (z + y - 1), phi = A(1,d1,.)
// truncated at `terms` orbit points (0: all of `orbit_data`).
TransportResult mobius_transport(const OrbitData& orbit_data, cplx y, const std::vector<cplx>& samples,
                                 std::size_t terms = 0);

struct RankDiagnostics {
    Eigen::MatrixXcd matrix;
    std::vector<double> singular_values;
    std::size_t rank = 0;
    double threshold = 0;
    bool full_rank = false;
};

// numerical rank with threshold max(1e-12, 1e-8 sigma_max)
RankDiagnostics rank_diagnostics(const Eigen::MatrixXcd& m);

// Rows over the listed summable critical values v_j, columns over value
// classes: delta - Psi^{(v_j)}.
RankDiagnostics value_rank_system(const CriticalData& cd, const std::vector<cplx>& summable_values,
                                 const SeriesOptions& opt = {});

}  // namespace ruelle
