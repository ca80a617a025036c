#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/json_io.hpp"
#include "ruelle/suite.hpp"

namespace ruelle::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kUsage = 2 };

struct Tolerances {
    double series = 1e-13;
    double summability = 1e-10;
    double relation = 1e-6;
};

// Everything a subcommand needs, from the JSON config plus flag overrides.
struct RunConfig {
    Json map_spec;  // {"map": ...} | {"sine": ...} | {"landing": ...} or empty
    bool normalize = true;
    std::optional<std::string> critical_data_path;
    double radius = 40;
    std::optional<std::size_t> n_max;
    Tolerances tol;
    std::vector<double> x_schedule{0.9, 0.99, 0.999, 0.9999};
    std::uint64_t seed = 20240601;
    std::size_t samples = 20;
    std::vector<cplx> points;
    std::optional<cplx> d1;
    std::size_t grid_x = 64, grid_y = 64;
    double bounds[4] = {-3, 3, -3, 3};  // xmin, xmax, ymin, ymax
    double clip[2] = {-3, 3};           // log10 range of the raster
    std::optional<std::vector<std::string>> checks;
};

// Throws ConfigError on malformed or inconsistent input.
RunConfig parse_config(const Json& j);

std::vector<double> parse_number_list(const std::string& s);
// "N" or "NxM"
std::pair<std::size_t, std::size_t> parse_grid(const std::string& s);

// The map named by the config (normalized when requested) and, for the
// landing case, its distinguished critical value.
struct ResolvedMap {
    EntireMap map;
    std::optional<cplx> d1;
};
ResolvedMap resolve_map(const RunConfig& cfg);

// Full command line; output files go where --out says, the JSON summary of
// subcommands without --out goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ruelle::cli
