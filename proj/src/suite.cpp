#include "ruelle/suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ruelle/summability.hpp"

namespace ruelle {

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"oracle", "iterate", "contraction", "neumann", "series",
                                                "geometric", "limit",   "defect",      "transport", "duality"};
    return names;
}

std::vector<std::string> parse_check_list(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        if (item == "all") {
            out.insert(out.end(), check_names().begin(), check_names().end());
            continue;
        }
        if (std::find(check_names().begin(), check_names().end(), item) == check_names().end())
            throw ConfigError("unknown check '" + item + "'");
        out.push_back(item);
    }
    return out;
}

std::vector<cplx> sample_points(std::uint64_t seed, std::size_t n, double h, const std::vector<cplx>& avoid) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-h, h);
    std::vector<cplx> out;
    for (std::size_t tries = 0; out.size() < n; ++tries) {
        if (tries > 1000 * (n + 1)) throw ConfigError("sample_points: could not place the samples");
        const cplx z(u(rng), u(rng));
        bool ok = true;
        for (const auto& p : avoid) ok = ok && std::abs(z - p) >= 0.05;
        if (ok) out.push_back(z);
    }
    return out;
}

namespace {

std::string str(cplx z) {
    std::ostringstream s;
    s << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return s.str();
}

// 0, 1 and the first points of the orbits of the class values and of `extra`
std::vector<cplx> avoid_set(const CriticalData& cd, std::vector<cplx> extra) {
    std::vector<cplx> out{0.0, 1.0};
    for (const auto& c : cd.classes) extra.push_back(c.value);
    for (const auto& s : extra) {
        const auto o = orbit(cd.map, s, 40);
        out.insert(out.end(), o.points.begin(), o.points.end());
    }
    return out;
}

CheckResult bound_check(std::string name, double value, double tol, std::string detail = {}) {
    return make_check(std::move(name), value, tol, 0.0, std::move(detail));
}

}  // namespace

Suite::Suite(SuiteConfig cfg, Exec exec) : cfg_(std::move(cfg)), exec_(exec) {}

const LandingCase& Suite::landing() {
    if (!landing_) landing_ = landing_case(cfg_.landing_p);
    return *landing_;
}

const CriticalData& Suite::oracle_data() {
    if (!oracle_cd_) {
        const auto raw = cfg_.oracle_map ? *cfg_.oracle_map : EntireMap::sine_family(cfg_.sine_a, cfg_.sine_b);
        oracle_cd_ = critical_data(normalize(raw), cfg_.radius);
        if (cfg_.negate_b) oracle_cd_ = with_negated_residue(*oracle_cd_, *cfg_.negate_b);
    }
    return *oracle_cd_;
}

const CriticalData& Suite::landing_data() {
    if (!landing_cd_) {
        landing_cd_ = critical_data(landing().map, cfg_.radius);
        if (cfg_.negate_b) landing_cd_ = with_negated_residue(*landing_cd_, *cfg_.negate_b);
    }
    return *landing_cd_;
}

std::vector<CheckResult> Suite::run(const std::string& name) {
    if (name == "oracle") return oracle();
    if (name == "iterate") return iterate_check();
    if (name == "contraction") return contraction();
    if (name == "neumann") return neumann();
    if (name == "series") return series();
    if (name == "geometric") return geometric();
    if (name == "limit") return limit();
    if (name == "defect") return defect();
    if (name == "transport") return transport();
    if (name == "duality") return duality();
    throw ConfigError("unknown check '" + name + "'");
}

std::vector<CheckResult> Suite::run(const std::vector<std::string>& names) {
    std::vector<CheckResult> out;
    for (const auto& n : names) {
        auto r = run(n);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

// closed-form f* gamma_a against the direct branch sum
std::vector<CheckResult> Suite::oracle() {
    const auto& cd = oracle_data();
    const cplx a = cfg_.contraction_bases.at(0);
    const auto image = apply(cd, GammaCombination::single(a), exec_);
    const auto zs = sample_points(cfg_.seed, cfg_.samples, 2.5, avoid_set(cd, {a}));
    const BranchWindow win{cfg_.k_range, true};
    double worst = 0, tail = 0;
    for (const auto& z : zs) {
        const auto d = apply_direct(cd.map, [&](cplx y) { return gamma_eval(a, y); }, z, win, {2, 0}, exec_);
        worst = std::max(worst, std::abs(combo_eval(image, z) - d.value) / std::abs(d.value));
        tail = std::max(tail, d.tail_estimate / std::abs(d.value));
    }
    std::ostringstream s;
    s << zs.size() << " samples, a = " << str(a) << ", " << cd.entries.size() << " critical points, branch tail "
      << tail;
    return {bound_check("oracle", worst, 1e-6, s.str())};
}

std::vector<CheckResult> Suite::iterate_check() {
    const auto& cd = oracle_data();
    const auto& f = cd.map;
    const cplx a = cfg_.contraction_bases.at(0);
    double chain = 0, stepwise = 0;
    cplx z = a, deriv = 1.0;
    auto g = GammaCombination::single(a);
    for (int n = 1; n <= 6; ++n) {
        deriv *= f.evaluate(z, 1);
        z = f(z);
        g = apply(cd, g, exec_);
        const auto it = iterate(cd, a, n, exec_);
        chain = std::max(chain, std::abs(it.coefficient(z) * deriv - 1.0));
        double wmax = 0, diff = 0;
        for (const auto& t : it.terms()) {
            wmax = std::max(wmax, std::abs(t.w));
            diff = std::max(diff, std::abs(t.w - g.coefficient(t.a)));
        }
        for (const auto& t : g.terms()) diff = std::max(diff, std::abs(t.w - it.coefficient(t.a)));
        stepwise = std::max(stepwise, diff / wmax);
    }
    return {bound_check("iterate_chain_rule", chain, 1e-10, "n <= 6, leading weight vs 1/(f^n)'(a)"),
            bound_check("iterate_vs_apply", stepwise, 1e-12, "n <= 6, coefficient-wise")};
}

std::vector<CheckResult> Suite::contraction() {
    const auto& cd = oracle_data();
    std::vector<CheckResult> out;
    double worst = 0;
    for (const auto& a : cfg_.contraction_bases) {
        auto c = contraction_check(cd, GammaCombination::single(a), cfg_.quad, exec_);
        c.name = "contraction a=" + str(a);
        worst = std::max(worst, c.error_budget / c.rhs);
        out.push_back(c);
    }
    out.push_back(bound_check("contraction_budget", worst, 3e-3, "largest error budget relative to ||phi||"));
    return out;
}

std::vector<CheckResult> Suite::neumann() {
    const auto& cd = landing_data();
    std::vector<CheckResult> out;
    for (double x : cfg_.neumann_xs) {
        auto c = neumann_bound_check(cd, x, cfg_.series_base, 8, cfg_.quad, exec_);
        std::ostringstream s;
        s << "neumann x=" << x;
        c.name = s.str();
        out.push_back(c);
    }
    return out;
}

std::vector<CheckResult> Suite::series() {
    const auto& cd = landing_data();
    const cplx a = cfg_.series_base;
    const auto zs = sample_points(cfg_.seed + 1, 10, 1.5, avoid_set(cd, {a}));
    double worst = 0;
    for (const auto& z : zs) {
        const auto s1 = S_by_system(cd, 0.5, a, z, cfg_.series);
        const auto s2 = S_by_neumann(cd, 0.5, a, z, cfg_.series);
        worst = std::max(worst, std::abs(s1.value - s2.value) / std::abs(s2.value));
    }
    return {bound_check("series_system_vs_neumann", worst, 1e-6, "x = 0.5, 10 samples, a = " + str(a))};
}

std::vector<CheckResult> Suite::geometric() {
    const auto& L = landing();
    const auto& f = L.map;
    const cplx lambda = f.evaluate(L.p, 1);
    const auto zs = sample_points(cfg_.seed + 2, 5, 1.5, {0.0, 1.0, L.p});
    double worst = 0;
    for (double x : {0.5, 0.9, 1.0})
        for (const auto& z : zs) {
            const cplx exact = gamma_eval(L.p, z) / (1.0 - x / lambda);
            worst = std::max(worst, std::abs(A_series(f, x, L.p, z, cfg_.series).value - exact) / std::abs(exact));
        }
    const auto rep = classify_value(f, L.d1);
    const double geo = 1.0 + 1.0 / std::abs(f.evaluate(L.d1, 1)) / (1.0 - 1.0 / std::abs(lambda));
    std::ostringstream s;
    s << "verdict " << to_string(rep.verdict) << ", series1 " << rep.series1_partial << " vs " << geo;
    return {bound_check("geometric_fixed_point", worst, 1e-12, "A(x, p, z) vs gamma_p(z) / (1 - x / lambda)"),
            bound_check("geometric_verdict", rep.verdict == Verdict::Summable ? 0.0 : 1.0, 0.0,
                        to_string(rep.verdict) + ": " + rep.reason),
            bound_check("geometric_series1", std::abs(rep.series1_partial - geo), 1e-8, s.str())};
}

std::vector<CheckResult> Suite::limit() {
    const auto& L = landing();
    const auto& cd = landing_data();
    const cplx c = cd.entries.at(0).c;
    const auto lim = limit_x_to_1(L.map, L.d1, c, true, cfg_.x_schedule, cfg_.series);
    std::size_t violations = 0;
    std::ostringstream s;
    s << "|A(x) - A(1)|:";
    for (std::size_t i = 0; i < lim.trend.size(); ++i) {
        s << ' ' << lim.trend[i];
        if (i > 0 && !(lim.trend[i] < lim.trend[i - 1])) ++violations;
    }
    return {bound_check("limit_monotone", static_cast<double>(violations), 0.0, s.str())};
}

std::vector<CheckResult> Suite::defect() {
    const auto& L = landing();
    const auto& cd = landing_data();
    const auto zs = sample_points(cfg_.seed + 3, cfg_.samples, 1.5, avoid_set(cd, {}));
    const BranchWindow win{cfg_.k_range, true};
    const auto full = defect_identity(cd, L.d1, zs, std::nullopt, win, cfg_.series);
    std::ostringstream s;
    s << "N = " << full.truncation << ", tail " << full.tail << ", rejected " << full.rejected.size();
    std::vector<CheckResult> out{bound_check("defect", full.max_residual, 1e-6, s.str())};

    std::ostringstream r;
    double worst = 0, prev = 0;
    for (std::size_t n : {3, 6, 12}) {
        const auto d = defect_identity(cd, L.d1, zs, n, win, cfg_.series);
        r << "N=" << n << ": " << d.max_residual << "  ";
        if (n > 3) worst = std::max(worst, d.max_residual / prev);
        prev = d.max_residual;
    }
    out.push_back(bound_check("defect_refinement", worst, 0.5, r.str()));
    return out;
}

std::vector<CheckResult> Suite::transport() {
    const auto& L = landing();
    const auto& cd = landing_data();
    const auto o = orbit(L.map, L.d1, 60);
    std::vector<CheckResult> out;
    std::vector<TransportResult> res;
    for (const auto& y : cfg_.transport_ys) {
        std::vector<cplx> avoid = avoid_set(cd, {});
        for (const auto& t : o.points) avoid.push_back(1.0 - y - t);
        const auto zs = sample_points(cfg_.seed + 4, cfg_.samples, 1.5, avoid);
        res.push_back(mobius_transport(o, y, zs));
        std::ostringstream s;
        s << res.back().terms << " terms, tail " << res.back().tail;
        out.push_back(bound_check("transport y=" + str(y), res.back().max_residual, 1e-8, s.str()));
    }
    if (res.size() >= 2) {
        const double gap = std::abs(res[0].max_residual - res[1].max_residual);
        out.push_back(make_check("transport_agreement", gap, 0.0, res[0].tail + res[1].tail + 1e-8,
                                 "first two y values; budget = tails + 1e-8"));
    }
    return out;
}

std::vector<CheckResult> Suite::duality() {
    const auto& cd = oracle_data();
    return {duality_check(cd, cfg_.bump, GammaCombination::single(cfg_.contraction_bases.at(0)), cfg_.quad, {60, true},
                          exec_)};
}

}  // namespace ruelle
