#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruelle/map_model.hpp"

namespace ruelle {

enum class Verdict { Summable, NotSummable, Undecided };

std::string to_string(Verdict v);
std::string to_string(Boundedness b);

struct SummabilityOptions {
    std::size_t n_max = 200;
    double tol = 1e-10;
    double escape_radius = 1e6;
    double delta = 0.05;  // rate must be below 1 - delta
};

struct SummabilityReport {
    cplx point;  // the point a; the series run along the orbit of `value`
    cplx value;  // f(a) for classify, the point itself for classify_value
    Boundedness boundedness = Boundedness::Undecided;
    std::size_t n_terms = 0;
    double series1_partial = 0;  // sum_{n<=N} 1 / |(f^n)'(value)|
    double series1_tail = 0;     // geometric extrapolation, inf when no rate
    double series2_partial = 0;  // sum |f^n(value)| |ln|f^n(value)|| / |(f^n)'(value)|
    double series2_tail = 0;
    double rate = 0;             // geometric-mean term ratio over the last window
    Verdict verdict = Verdict::Undecided;
    std::vector<double> ratio_trace;  // successive term ratios of series 1
    std::optional<Cycle> cycle;
    bool degenerate = false;  // orbit passed within 1e-8 of 0 or 1
    std::string reason;
};

// Definition-4 test on the orbit of v itself: terms 1/|(f^n)'(v)|, n >= 0.
SummabilityReport classify_value(const EntireMap& f, cplx v, const SummabilityOptions& opt = {});
// classify_value on f(a), reported for a.
SummabilityReport classify(const EntireMap& f, cplx a, const SummabilityOptions& opt = {});

struct SeparationDiagnostics {
    Boundedness boundedness = Boundedness::Undecided;
    bool finite_closure = false;
    std::size_t closure_points = 0;  // distinct orbit points when finite
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
    std::size_t preimages_sampled = 0;
    double preimage_min_distance = 0;  // inf when no preimage sample was available
    std::string summary;
};

// Informational surrogates for the separation conditions of the orbit of f(a).
// Nothing here is a verdict.
SeparationDiagnostics separation_diagnostics(const EntireMap& f, cplx a, const CriticalData& cd,
                                             std::size_t n_max = 200);

}  // namespace ruelle
