#include "cli.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ruelle/summability.hpp"

namespace ruelle::cli {

namespace {

double positive(const Json& j, const char* what) {
    if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!(v > 0)) throw ConfigError(std::string(what) + " must be positive");
    return v;
}

std::string trim(std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
}

cplx parse_point(const std::string& s) {
    const auto v = parse_number_list(s);
    if (v.size() == 1) return v[0];
    if (v.size() == 2) return {v[0], v[1]};
    throw ConfigError("a point is 're' or 're,im', got '" + s + "'");
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
    if (path.empty())
        out << j.dump(2) << '\n';
    else
        write_text_file(path, j.dump(2) + "\n");
}

bool is_csv(const std::string& path) { return path.size() > 4 && path.substr(path.size() - 4) == ".csv"; }

SummabilityOptions summability_options(const RunConfig& cfg) {
    SummabilityOptions o;
    o.tol = cfg.tol.summability;
    if (cfg.n_max) o.n_max = *cfg.n_max;
    return o;
}

SeriesOptions series_options(const RunConfig& cfg) {
    SeriesOptions o;
    o.tol = cfg.tol.series;
    if (cfg.n_max) o.n_max = *cfg.n_max;
    return o;
}

CriticalData load_critical_data(const RunConfig& cfg, const ResolvedMap& rm) {
    if (cfg.critical_data_path) return critical_data_from_json(read_json_file(*cfg.critical_data_path));
    return critical_data(rm.map, cfg.radius);
}

// d1 from the config, the landing case, or the first critical value
// classified Summable
cplx choose_d1(const RunConfig& cfg, const ResolvedMap& rm, const CriticalData& cd) {
    if (cfg.d1) return *cfg.d1;
    if (rm.d1) return *rm.d1;
    for (const auto& c : cd.classes)
        if (classify_value(cd.map, c.value, summability_options(cfg)).verdict == Verdict::Summable) return c.value;
    throw PreconditionError("no critical value is classified Summable; set d1 in the config");
}

int cmd_critical(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    const auto rm = resolve_map(cfg);
    emit(to_json(load_critical_data(cfg, rm)), out_path, out);
    return kPass;
}

int cmd_summability(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    const auto rm = resolve_map(cfg);
    std::vector<SummabilityReport> reps;
    if (!cfg.points.empty()) {
        for (const auto& a : cfg.points) reps.push_back(classify(rm.map, a, summability_options(cfg)));
    } else {
        // one representative critical point per value class
        const auto cd = load_critical_data(cfg, rm);
        for (const auto& c : cd.classes)
            if (!c.members.empty())
                reps.push_back(classify(cd.map, cd.entries[c.members.front()].c, summability_options(cfg)));
    }
    if (is_csv(out_path)) {
        std::string text = summability_csv_header() + "\n";
        for (const auto& r : reps) text += summability_csv_row(r) + "\n";
        write_text_file(out_path, text);
        return kPass;
    }
    if (reps.size() == 1) {
        emit(to_json(reps.front()), out_path, out);
    } else {
        Json a = Json::array();
        for (const auto& r : reps) a.push_back(to_json(r));
        emit(a, out_path, out);
    }
    return kPass;
}

int cmd_relation(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    const auto rm = resolve_map(cfg);
    const auto cd = load_critical_data(cfg, rm);
    const cplx d1 = choose_d1(cfg, rm, cd);
    const auto opt = series_options(cfg);
    const auto rep = psi_coefficients(cd, d1, cfg.tol.relation, opt);
    const auto verdict = instability_verdict(rep);
    if (is_csv(out_path)) {
        write_text_file(out_path, relation_csv_header(cd.q()) + "\n" + relation_csv_row(rep, verdict) + "\n");
        return kPass;
    }
    Json j = to_json(rep, verdict);
    std::vector<cplx> summable;
    for (const auto& c : cd.classes)
        if (classify_value(cd.map, c.value, summability_options(cfg)).verdict == Verdict::Summable)
            summable.push_back(c.value);
    j["value_system_rank"] = to_json(value_rank_system(cd, summable, opt));
    j["limit"] = to_json(limit_x_to_1(cd.map, d1, cd.entries.at(0).c, true, cfg.x_schedule, opt));
    emit(j, out_path, out);
    return kPass;
}

SuiteConfig suite_config(const RunConfig& cfg, std::optional<std::size_t> negate) {
    SuiteConfig s;
    if (cfg.map_spec.contains("map")) s.oracle_map = map_from_json(cfg.map_spec["map"]);
    if (cfg.map_spec.contains("sine")) {
        s.sine_a = complex_from_json(cfg.map_spec["sine"].at("a"));
        s.sine_b = complex_from_json(cfg.map_spec["sine"].at("b"));
    }
    if (cfg.map_spec.contains("landing")) s.landing_p = cfg.map_spec["landing"].value("p", 2.5);
    s.radius = cfg.radius;
    s.seed = cfg.seed;
    s.samples = cfg.samples;
    s.x_schedule = cfg.x_schedule;
    s.series = series_options(cfg);
    s.negate_b = negate;
    return s;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& names, std::optional<std::size_t> negate,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
    Suite suite(suite_config(cfg, negate));
    std::vector<CheckResult> results;
    for (const auto& n : names) {
        auto r = suite.run(n);
        for (const auto& c : r)
            err << (c.passed ? "PASS " : "FAIL ") << c.name << "  lhs " << c.lhs << "  rhs " << c.rhs
                << "  budget " << c.error_budget << '\n';
        results.insert(results.end(), r.begin(), r.end());
    }
    emit(to_json(results), out_path, out);
    for (const auto& c : results)
        if (!c.passed) return kCheckFailure;
    return kPass;
}

std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
    return path;
}

int cmd_field(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    const auto rm = resolve_map(cfg);
    require_normalized(rm.map);
    cplx d1;
    if (cfg.d1) {
        d1 = *cfg.d1;
    } else {
        const auto cd = load_critical_data(cfg, rm);
        d1 = choose_d1(cfg, rm, cd);
    }
    if (cfg.grid_x < 2 || cfg.grid_y < 2) throw ConfigError("field: grid needs at least 2 nodes per side");
    const auto opt = series_options(cfg);
    const std::size_t nx = cfg.grid_x, ny = cfg.grid_y;
    const double wx = cfg.bounds[1] - cfg.bounds[0], wy = cfg.bounds[3] - cfg.bounds[2];
    // nested grids share nodes exactly: x_i = x0 + (w i) / (n - 1)
    auto node = [&](std::size_t i, std::size_t k) {
        return cplx(cfg.bounds[0] + (wx * static_cast<double>(i)) / static_cast<double>(nx - 1),
                    cfg.bounds[2] + (wy * static_cast<double>(k)) / static_cast<double>(ny - 1));
    };
    std::vector<cplx> value(nx * ny);
    std::vector<char> on_pole(nx * ny, 0);
    const long total = static_cast<long>(nx * ny);
    LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 16)
    for (long idx = 0; idx < total; ++idx)
        errors.guard(idx, [&] {
            const std::size_t i = static_cast<std::size_t>(idx) % nx, k = static_cast<std::size_t>(idx) / nx;
            try {
                value[idx] = A_series(rm.map, 1.0, d1, node(i, k), opt).value;
            } catch (const PoleError&) {
                on_pole[idx] = 2;  // exactly on a pole
            }
        });
    errors.rethrow();

    // pixels whose cell contains a pole of the truncated series are saturated
    std::vector<cplx> poles{0.0, 1.0};
    const auto o = orbit(rm.map, d1, opt.n_max, opt.escape_radius);
    for (std::size_t n = 0; n < o.points.size(); ++n) {
        if (std::exp(-o.log_abs_derivs[n]) < opt.tol) break;
        poles.push_back(o.points[n]);
    }
    const double hx = 0.5 * wx / static_cast<double>(nx - 1), hy = 0.5 * wy / static_cast<double>(ny - 1);
    for (const auto& p : poles)
        for (std::size_t idx = 0; idx < value.size(); ++idx) {
            const cplx z = node(idx % nx, idx / nx);
            if (!on_pole[idx] && std::abs(z.real() - p.real()) <= hx && std::abs(z.imag() - p.imag()) <= hy)
                on_pole[idx] = 1;
        }

    std::ostringstream csv;
    csv << std::setprecision(17) << "ix,iy,x,y,re,im,abs,pole\n";
    for (std::size_t k = 0; k < ny; ++k)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t idx = k * nx + i;
            const cplx z = node(i, k);
            csv << i << ',' << k << ',' << z.real() << ',' << z.imag() << ',';
            if (on_pole[idx] == 2)
                csv << "inf,inf,inf,1\n";
            else
                csv << value[idx].real() << ',' << value[idx].imag() << ',' << std::abs(value[idx]) << ','
                    << (on_pole[idx] ? 1 : 0) << '\n';
        }

    std::ostringstream pgm;
    pgm << "P2\n# log10|A(1,d1,z)| clipped to [" << cfg.clip[0] << ", " << cfg.clip[1] << "], poles saturated\n"
        << nx << ' ' << ny << "\n255\n";
    for (std::size_t row = 0; row < ny; ++row) {
        const std::size_t k = ny - 1 - row;  // top row is ymax
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t idx = k * nx + i;
            int g = 255;
            if (!on_pole[idx]) {
                const double l = std::log10(std::abs(value[idx]));
                const double t = std::clamp((l - cfg.clip[0]) / (cfg.clip[1] - cfg.clip[0]), 0.0, 1.0);
                g = std::isfinite(l) ? static_cast<int>(std::lround(254 * t)) : 0;
            }
            pgm << g << (i + 1 == nx ? '\n' : ' ');
        }
    }
    const std::string stem = stem_of(out_path.empty() ? std::string("field") : out_path);
    write_text_file(stem + ".csv", csv.str());
    write_text_file(stem + ".pgm", pgm.str());
    out << Json{{"csv", stem + ".csv"}, {"pgm", stem + ".pgm"}, {"rows", nx * ny}, {"d1", to_json(d1)}}.dump()
        << '\n';
    return kPass;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
    const auto x = s.find_first_of("xX");
    auto one = [&](const std::string& t) {
        const auto v = parse_number_list(t);
        if (v.size() != 1 || v[0] < 2 || v[0] != std::floor(v[0])) throw ConfigError("bad grid '" + s + "'");
        return static_cast<std::size_t>(v[0]);
    };
    if (x == std::string::npos) {
        const auto n = one(s);
        return {n, n};
    }
    return {one(s.substr(0, x)), one(s.substr(x + 1))};
}

RunConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    try {
        int specs = 0;
        for (const char* key : {"map", "sine", "landing"})
            if (j.contains(key)) {
                c.map_spec[key] = j[key];
                ++specs;
            }
        if (specs > 1) throw ConfigError("config names more than one of map / sine / landing");
        c.normalize = j.value("normalize", true);
        if (j.contains("critical_data")) c.critical_data_path = j["critical_data"].get<std::string>();
        if (j.contains("radius")) c.radius = positive(j["radius"], "radius");
        if (j.contains("n_max")) c.n_max = static_cast<std::size_t>(positive(j["n_max"], "n_max"));
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            if (t.contains("series")) c.tol.series = positive(t["series"], "tolerances.series");
            if (t.contains("summability")) c.tol.summability = positive(t["summability"], "tolerances.summability");
            if (t.contains("relation")) c.tol.relation = positive(t["relation"], "tolerances.relation");
        }
        if (j.contains("x_schedule")) {
            c.x_schedule = j["x_schedule"].get<std::vector<double>>();
            for (double x : c.x_schedule)
                if (!(x > 0 && x < 1)) throw ConfigError("x_schedule entries must lie in (0, 1)");
        }
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("samples")) c.samples = static_cast<std::size_t>(positive(j["samples"], "samples"));
        if (j.contains("point")) c.points.push_back(complex_from_json(j["point"]));
        if (j.contains("points"))
            for (const auto& p : j["points"]) c.points.push_back(complex_from_json(p));
        if (j.contains("d1")) c.d1 = complex_from_json(j["d1"]);
        if (j.contains("grid")) {
            const auto g = j["grid"].get<std::vector<std::size_t>>();
            if (g.size() != 2 || g[0] < 2 || g[1] < 2) throw ConfigError("grid is [nx, ny] with at least 2 each");
            c.grid_x = g[0];
            c.grid_y = g[1];
        }
        if (j.contains("bounds")) {
            const auto b = j["bounds"].get<std::vector<double>>();
            if (b.size() != 4 || !(b[0] < b[1]) || !(b[2] < b[3]))
                throw ConfigError("bounds is [xmin, xmax, ymin, ymax]");
            std::copy(b.begin(), b.end(), c.bounds);
        }
        if (j.contains("clip")) {
            const auto b = j["clip"].get<std::vector<double>>();
            if (b.size() != 2 || !(b[0] < b[1])) throw ConfigError("clip is [lo, hi] in log10 units");
            c.clip[0] = b[0];
            c.clip[1] = b[1];
        }
        if (j.contains("checks")) {
            std::vector<std::string> names;
            for (const auto& n : j["checks"].get<std::vector<std::string>>()) {
                const auto parsed = parse_check_list(n);
                names.insert(names.end(), parsed.begin(), parsed.end());
            }
            c.checks = names;
        }
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ResolvedMap resolve_map(const RunConfig& cfg) {
    const auto& s = cfg.map_spec;
    try {
        if (s.contains("landing")) {
            const auto L = landing_case(s["landing"].value("p", 2.5));
            return {L.map, L.d1};
        }
        if (!s.contains("map") && !s.contains("sine")) {
            const auto L = landing_case(2.5);
            return {L.map, L.d1};
        }
        const EntireMap raw = s.contains("map") ? map_from_json(s["map"])
                                                : EntireMap::sine_family(complex_from_json(s["sine"].at("a")),
                                                                         complex_from_json(s["sine"].at("b")));
        return {cfg.normalize ? normalize(raw) : raw, std::nullopt};
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("map spec: ") + e.what());
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ruelle transfer operator of entire maps P1(z) + P2(sin(P3(z)))", "ruelle"};
    app.require_subcommand(1);
    std::string config_path, out_path, x_schedule, grid, checks, point, d1;
    double radius = 0;
    std::size_t n_max = 0;
    std::uint64_t seed = 0;
    int negate = -1;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output path (.csv selects CSV where supported)");
    auto* o_radius = app.add_option("--radius", radius, "critical point search radius")->check(CLI::PositiveNumber);
    auto* o_nmax = app.add_option("--nmax", n_max, "maximum series / orbit length")->check(CLI::PositiveNumber);
    auto* o_xs = app.add_option("--x-schedule", x_schedule, "comma-separated x values for the x -> 1 limit");
    auto* o_grid = app.add_option("--grid", grid, "field grid, N or NxM");
    auto* o_seed = app.add_option("--seed", seed, "sample seed");
    auto* o_check = app.add_option("--check", checks, "comma-separated checks for verify ('all' for every check)");
    auto* o_point = app.add_option("--point", point, "point 're,im' for summability");
    auto* o_d1 = app.add_option("--d1", d1, "critical value 're,im' for relation and field");
    app.add_option("--debug-negate-b", negate, "verify: negate the residue of this critical entry")
        ->check(CLI::NonNegativeNumber);

    auto* c_critical = app.add_subcommand("critical", "enumerate critical points, write CriticalData JSON");
    auto* c_summ = app.add_subcommand("summability", "classify points (orbits of their images)");
    auto* c_rel = app.add_subcommand("relation", "Psi coefficients and instability verdict");
    auto* c_verify = app.add_subcommand("verify", "run the verification suite");
    auto* c_field = app.add_subcommand("field", "grid CSV and PGM raster of log|A(1, d1, z)|");
    for (auto* c : {c_critical, c_summ, c_rel, c_verify, c_field}) c->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(read_json_file(config_path));
        if (o_radius->count()) cfg.radius = radius;
        if (o_nmax->count()) cfg.n_max = n_max;
        if (o_xs->count()) {
            cfg.x_schedule = parse_number_list(x_schedule);
            for (double x : cfg.x_schedule)
                if (!(x > 0 && x < 1)) throw ConfigError("--x-schedule entries must lie in (0, 1)");
        }
        if (o_grid->count()) std::tie(cfg.grid_x, cfg.grid_y) = parse_grid(grid);
        if (o_seed->count()) cfg.seed = seed;
        if (o_point->count()) cfg.points = {parse_point(point)};
        if (o_d1->count()) cfg.d1 = parse_point(d1);
        if (o_check->count()) cfg.checks = parse_check_list(checks);

        if (c_critical->parsed()) return cmd_critical(cfg, out_path, out);
        if (c_summ->parsed()) return cmd_summability(cfg, out_path, out);
        if (c_rel->parsed()) return cmd_relation(cfg, out_path, out);
        if (c_field->parsed()) return cmd_field(cfg, out_path, out);
        std::optional<std::size_t> neg;
        if (negate >= 0) neg = static_cast<std::size_t>(negate);
        return cmd_verify(cfg, cfg.checks.value_or(check_names()), neg, out_path, out, err);
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailure;
    }
}

}  // namespace ruelle::cli
