#include "ruelle/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ruelle {

namespace {

// JSON has no infinities; emit them as strings
Json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    throw ConfigError("expected a number, got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::string fmt(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

}  // namespace

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("complex numbers are [re, im] pairs, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const Polynomial& p) {
    Json a = Json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_json(c));
    return a;
}

Polynomial polynomial_from_json(const Json& j) {
    if (!j.is_array()) throw ConfigError("polynomial coefficients must be an array");
    std::vector<cplx> c;
    for (const auto& x : j) c.push_back(complex_from_json(x));
    return Polynomial(std::move(c));
}

Json to_json(const EntireMap& f) {
    Json j{{"p1", to_json(f.p1())}, {"p2", to_json(f.p2())}, {"p3", to_json(f.p3())}};
    if (f.normalization())
        j["normalization"] = {{"scale", to_json(f.normalization()->scale)},
                              {"shift", to_json(f.normalization()->shift)}};
    return j;
}

EntireMap map_from_json(const Json& j) {
    std::optional<Normalization> n;
    if (j.is_object() && j.contains("normalization"))
        n = Normalization{complex_from_json(field(j["normalization"], "scale")),
                          complex_from_json(field(j["normalization"], "shift"))};
    return EntireMap(polynomial_from_json(field(j, "p1")), polynomial_from_json(field(j, "p2")),
                     polynomial_from_json(field(j, "p3")), n);
}

Json to_json(const GammaCombination& g) {
    Json a = Json::array();
    for (const auto& t : g.terms()) a.push_back({{"a", to_json(t.a)}, {"w", to_json(t.w)}});
    return a;
}

GammaCombination combination_from_json(const Json& j) {
    if (!j.is_array()) throw ConfigError("a gamma combination is an array of {a, w} terms");
    GammaCombination g;
    for (const auto& t : j) g.add(complex_from_json(field(t, "a")), complex_from_json(field(t, "w")));
    return g;
}

Json to_json(const CriticalData& cd) {
    Json entries = Json::array(), classes = Json::array(), lattice = Json::array();
    for (const auto& e : cd.entries)
        entries.push_back({{"c", to_json(e.c)}, {"d", to_json(e.d)}, {"b", to_json(e.b)}, {"class", e.value_class}});
    for (const auto& c : cd.classes) classes.push_back({{"value", to_json(c.value)}, {"members", c.members}});
    for (const auto& l : cd.lattice)
        lattice.push_back({{"origin", to_json(l.origin)},
                           {"step", to_json(l.step)},
                           {"b", to_json(l.b)},
                           {"d", to_json(l.d)},
                           {"class", l.value_class}});
    return {{"map", to_json(cd.map)},
            {"radius", cd.radius},
            {"count", cd.entries.size()},
            {"q", cd.q()},
            {"tail_bound", num(cd.tail_bound)},
            {"tail_bound_rigorous", cd.tail_bound_rigorous},
            {"complete_tail", cd.complete_tail},
            {"entries", entries},
            {"classes", classes},
            {"lattice", lattice}};
}

CriticalData critical_data_from_json(const Json& j) {
    try {
        CriticalData cd{map_from_json(field(j, "map")), {}, 0.0, 0.0, false, {}, {}, true};
        cd.radius = field(j, "radius").get<double>();
        cd.tail_bound = num_from_json(field(j, "tail_bound"));
        cd.tail_bound_rigorous = field(j, "tail_bound_rigorous").get<bool>();
        cd.complete_tail = j.value("complete_tail", true);
        for (const auto& e : field(j, "entries"))
            cd.entries.push_back({complex_from_json(field(e, "c")), complex_from_json(field(e, "d")),
                                  complex_from_json(field(e, "b")), field(e, "class").get<int>()});
        for (const auto& c : field(j, "classes"))
            cd.classes.push_back({complex_from_json(field(c, "value")),
                                  field(c, "members").get<std::vector<std::size_t>>()});
        if (j.contains("lattice"))
            for (const auto& l : j["lattice"])
                cd.lattice.push_back({complex_from_json(field(l, "origin")), complex_from_json(field(l, "step")),
                                      complex_from_json(field(l, "b")), complex_from_json(field(l, "d")),
                                      field(l, "class").get<int>()});
        for (const auto& e : cd.entries)
            if (e.value_class < 0 || e.value_class >= static_cast<int>(cd.classes.size()))
                throw ConfigError("critical entry refers to a missing value class");
        return cd;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed critical data: ") + e.what());
    }
}

Json to_json(const SeriesEval& s) {
    return {{"value", to_json(s.value)},       {"n_used", s.n_used}, {"tail_estimate", num(s.tail_estimate)},
            {"converged", s.converged},        {"rate", num(s.rate)}, {"k1", num(s.k1)}};
}

Json to_json(const SummabilityReport& r) {
    Json j{{"point", to_json(r.point)},
           {"value", to_json(r.value)},
           {"boundedness", to_string(r.boundedness)},
           {"n_terms", r.n_terms},
           {"series1_partial", num(r.series1_partial)},
           {"series1_tail", num(r.series1_tail)},
           {"series2_partial", num(r.series2_partial)},
           {"series2_tail", num(r.series2_tail)},
           {"rate", num(r.rate)},
           {"verdict", to_string(r.verdict)},
           {"degenerate", r.degenerate},
           {"reason", r.reason}};
    Json trace = Json::array();
    for (double t : r.ratio_trace) trace.push_back(num(t));
    j["ratio_trace"] = trace;
    if (r.cycle)
        j["cycle"] = {{"start", r.cycle->start}, {"period", r.cycle->period},
                      {"multiplier", to_json(r.cycle->multiplier)}};
    else
        j["cycle"] = nullptr;
    return j;
}

Json to_json(const RelationReport& r, const VerdictRecord& v) {
    Json psi = Json::array();
    for (std::size_t k = 0; k < r.psi.size(); ++k) {
        const auto& e = r.psi[k];
        psi.push_back({{"value_index", e.value_index},
                       {"value", to_json(e.value)},
                       {"psi", to_json(e.psi)},
                       {"tail", num(e.tail)},
                       {"deviation", num(psi_deviation(r, k))}});
    }
    return {{"d1", to_json(r.d1)},
            {"d1_class", r.d1_class},
            {"psi", psi},
            {"trivial", r.trivial},
            {"instability_evidence", r.instability_evidence},
            {"tol", r.tol},
            {"n_used", r.n_used},
            {"verdict", to_string(v.verdict)},
            {"established", v.established},
            {"verdict_text", v.text}};
}

Json to_json(const CheckResult& c) {
    return {{"name", c.name},
            {"lhs", num(c.lhs)},
            {"rhs", num(c.rhs)},
            {"error_budget", num(c.error_budget)},
            {"passed", c.passed},
            {"detail", c.detail}};
}

Json to_json(const std::vector<CheckResult>& checks) {
    Json a = Json::array();
    for (const auto& c : checks) a.push_back(to_json(c));
    return a;
}

Json to_json(const DefectResult& d) {
    Json rejected = Json::array();
    for (const auto& z : d.rejected) rejected.push_back(to_json(z));
    return {{"max_residual", num(d.max_residual)}, {"residuals", d.residuals}, {"rejected", rejected},
            {"truncation", d.truncation},          {"tail", num(d.tail)}};
}

Json to_json(const TransportResult& t) {
    Json rejected = Json::array();
    for (const auto& z : t.rejected) rejected.push_back(to_json(z));
    return {{"max_residual", num(t.max_residual)}, {"residuals", t.residuals}, {"rejected", rejected},
            {"tail", num(t.tail)},                 {"terms", t.terms}};
}

Json to_json(const RankDiagnostics& r) {
    Json rows = Json::array();
    for (long i = 0; i < r.matrix.rows(); ++i) {
        Json row = Json::array();
        for (long k = 0; k < r.matrix.cols(); ++k) row.push_back(to_json(r.matrix(i, k)));
        rows.push_back(row);
    }
    return {{"matrix", rows},
            {"singular_values", r.singular_values},
            {"rank", r.rank},
            {"threshold", r.threshold},
            {"full_rank", r.full_rank}};
}

Json to_json(const PointLimit& l) {
    Json values = Json::array();
    for (const auto& v : l.values) values.push_back(to_json(v));
    return {{"at_one", to_json(l.at_one)}, {"xs", l.xs},          {"values", values},
            {"trend", l.trend},            {"derivative_gaps", l.derivative_gaps}};
}

std::string summability_csv_header() {
    return "point_re,point_im,value_re,value_im,verdict,boundedness,n_terms,series1_partial,series1_tail,"
           "series2_partial,series2_tail,rate,cycle_period,degenerate";
}

std::string summability_csv_row(const SummabilityReport& r) {
    std::ostringstream s;
    s << fmt(r.point) << ',' << fmt(r.value) << ',' << to_string(r.verdict) << ',' << to_string(r.boundedness) << ','
      << r.n_terms << ',' << fmt(r.series1_partial) << ',' << fmt(r.series1_tail) << ',' << fmt(r.series2_partial)
      << ',' << fmt(r.series2_tail) << ',' << fmt(r.rate) << ',' << (r.cycle ? r.cycle->period : 0) << ','
      << (r.degenerate ? 1 : 0);
    return s.str();
}

std::string relation_csv_header(std::size_t q) {
    std::string h = "d1_re,d1_im,d1_class,trivial,verdict,n_used";
    for (std::size_t i = 0; i < q; ++i) {
        const auto k = std::to_string(i);
        h += ",psi" + k + "_re,psi" + k + "_im,psi" + k + "_tail";
    }
    return h;
}

std::string relation_csv_row(const RelationReport& r, const VerdictRecord& v) {
    std::ostringstream s;
    s << fmt(r.d1) << ',' << r.d1_class << ',' << (r.trivial ? 1 : 0) << ',' << to_string(v.verdict) << ','
      << r.n_used;
    for (const auto& e : r.psi) s << ',' << fmt(e.psi) << ',' << fmt(e.tail);
    return s.str();
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace ruelle
