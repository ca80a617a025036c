// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ruelle/suite.hpp"

using namespace ruelle;

namespace {

// wall-clock limits in seconds
constexpr double kOracleSeconds = 10.0;
constexpr double kContractionSeconds = 60.0;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string summary(const std::vector<CheckResult>& cs) {
    std::string s;
    for (const auto& c : cs) {
        if (!s.empty()) s += "; ";
        s += c.name + " " + fmt(c.lhs) + (c.passed ? " ok" : " FAILED");
    }
    return s;
}

bool all_passed(const std::vector<CheckResult>& cs) {
    if (cs.empty()) return false;
    for (const auto& c : cs)
        if (!c.passed) return false;
    return true;
}

bool passed(const std::vector<CheckResult>& cs, const std::string& name) {
    for (const auto& c : cs)
        if (c.name == name) return c.passed;
    return false;
}

template <class F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// sine-family parameters (a, b) with a + b sin p = p and a + b sin(a + b) = p,
// by Newton from a rough seed
std::pair<double, double> newton_landing(double p) {
    double a = 5.0, b = -4.5;
    for (int it = 0; it < 60; ++it) {
        const double F1 = a + b * std::sin(p) - p, F2 = a + b * std::sin(a + b) - p;
        const double J12 = std::sin(p);
        const double J21 = 1 + b * std::cos(a + b), J22 = std::sin(a + b) + b * std::cos(a + b);
        const double det = J22 - J12 * J21;
        a -= (F1 * J22 - J12 * F2) / det;
        b -= (F2 - J21 * F1) / det;
    }
    return {a, b};
}

}  // namespace

int main() {
    SuiteConfig cfg;
    Suite suite(cfg);

    std::vector<CheckResult> r;
    double secs = timed([&] { r = suite.run("oracle"); });
    report(1, all_passed(r) && secs <= kOracleSeconds, summary(r) + ", " + fmt(secs) + " s");

    r = suite.run("iterate");
    report(2, all_passed(r), summary(r));

    secs = timed([&] { r = suite.run("contraction"); });
    report(3, all_passed(r) && secs <= kContractionSeconds,
           std::to_string(r.size() - 1) + " bases, " + summary({r.back()}) + ", " + fmt(secs) + " s");

    r = suite.run("neumann");
    report(4, all_passed(r) && r.size() == 3, summary(r));

    r = suite.run("series");
    report(5, all_passed(r), summary(r));

    r = suite.run("geometric");
    const auto [na, nb] = newton_landing(cfg.landing_p);
    const auto [la, lb] = sine_family_landing(cfg.landing_p);
    const double landing_gap = std::abs(na - la) + std::abs(nb - lb);
    report(6, all_passed(r) && landing_gap < 1e-12, summary(r) + "; landing parameters vs Newton " + fmt(landing_gap));

    r = suite.run("limit");
    report(7, all_passed(r), r.empty() ? "" : r[0].detail);

    const auto defect = suite.run("defect");
    report(8, all_passed(defect), summary(defect));

    r = suite.run("transport");
    report(9, all_passed(r), summary(r));

    r = suite.run("duality");
    report(10, all_passed(r), summary(r) + " within " + (r.empty() ? "" : fmt(r[0].error_budget)));

    SuiteConfig bad_cfg = cfg;
    bad_cfg.negate_b = 0;
    Suite bad(bad_cfg);
    const auto injected = bad.run(std::vector<std::string>{"oracle", "defect"});
    const bool caught = !passed(injected, "oracle") && !passed(injected, "defect");
    report(11, caught, "negated residue 0: " + summary(injected));

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
