#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/harness.hpp"
#include "ruelle/relation.hpp"

namespace ruelle {

// Inputs of the verification suite. Two maps are involved: the oracle map
// (default: the sine family 0.3 + 0.7 sin z, normalized) for the operator
// checks, and the landing case (critical value one step from a repelling
// fixed point p) for everything that needs a summable critical value.
struct SuiteConfig {
    std::optional<EntireMap> oracle_map;  // normalized before use
    cplx sine_a = 0.3, sine_b = 0.7;
    double landing_p = 2.5;
    double radius = 40;
    int k_range = 200;
    std::size_t samples = 20;
    std::uint64_t seed = 20240601;
    std::vector<double> x_schedule{0.9, 0.99, 0.999, 0.9999};
    std::vector<double> neumann_xs{0.5, 0.7, 0.9};
    std::vector<cplx> contraction_bases{{0.4, 0.9}, {-0.7, 0.3}, {2.0, -1.0}, {0.5, -0.6}, {-1.2, -1.1}};
    cplx series_base = 0.45;  // real: the landing map keeps the real line invariant
    Bump bump{{0.6, 0.6}, 0.15};
    std::vector<cplx> transport_ys{{2.0, 1.0}, {-1.5, 0.5}};
    QuadratureConfig quad;
    SeriesOptions series;
    // fault injection: negate the residue of this entry in both critical sets
    std::optional<std::size_t> negate_b;
};

// oracle, iterate, contraction, neumann, series, geometric, limit, defect,
// transport, duality
const std::vector<std::string>& check_names();

// Splits "a,b,c"; throws ConfigError on an unknown name. "all" expands to
// every check; an empty string selects none.
std::vector<std::string> parse_check_list(const std::string& list);

// `samples` seeded points in the box [-h, h]^2 at distance >= 0.05 from every
// point in `avoid`.
std::vector<cplx> sample_points(std::uint64_t seed, std::size_t n, double h, const std::vector<cplx>& avoid);

class Suite {
public:
    explicit Suite(SuiteConfig cfg, Exec exec = Exec::parallel);

    // One or more CheckResults per named check, in request order.
    std::vector<CheckResult> run(const std::string& name);
    std::vector<CheckResult> run(const std::vector<std::string>& names);

    const CriticalData& oracle_data();
    const CriticalData& landing_data();
    const LandingCase& landing();
    const SuiteConfig& config() const { return cfg_; }

private:
    std::vector<CheckResult> oracle();
    std::vector<CheckResult> iterate_check();
    std::vector<CheckResult> contraction();
    std::vector<CheckResult> neumann();
    std::vector<CheckResult> series();
    std::vector<CheckResult> geometric();
    std::vector<CheckResult> limit();
    std::vector<CheckResult> defect();
    std::vector<CheckResult> transport();
    std::vector<CheckResult> duality();

    SuiteConfig cfg_;
    Exec exec_;
    std::optional<CriticalData> oracle_cd_, landing_cd_;
    std::optional<LandingCase> landing_;
};

}  // namespace ruelle
