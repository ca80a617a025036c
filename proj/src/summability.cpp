#include "ruelle/summability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ruelle/ruelle.hpp"

namespace ruelle {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Summable: return "Summable";
        case Verdict::NotSummable: return "NotSummable";
        default: return "Undecided";
    }
}

std::string to_string(Boundedness b) {
    switch (b) {
        case Boundedness::Bounded: return "Bounded";
        case Boundedness::Unbounded: return "Unbounded";
        default: return "Undecided";
    }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rate {
    double rate = kInf;
    double tail = kInf;
};

// Geometric extrapolation from log-terms over the last `window` entries.
Rate fit_rate(const std::vector<double>& log_terms, std::size_t window) {
    const std::size_t n = log_terms.size() - 1;
    Rate r;
    if (!std::isfinite(log_terms[n]) || !std::isfinite(log_terms[n - window])) {
        if (log_terms[n] == -kInf) r = {0.0, 0.0};
        return r;
    }
    r.rate = std::exp((log_terms[n] - log_terms[n - window]) / static_cast<double>(window));
    if (r.rate < 1) r.tail = std::exp(log_terms[n]) * r.rate / (1 - r.rate);
    return r;
}

}  // namespace

SummabilityReport classify_value(const EntireMap& f, cplx v, const SummabilityOptions& opt) {
    SummabilityReport rep;
    rep.point = v;
    rep.value = v;
    const auto o = orbit(f, v, opt.n_max, opt.escape_radius);
    rep.boundedness = o.boundedness;
    rep.cycle = o.cycle;
    rep.degenerate = o.degenerate_index.has_value();
    const std::size_t n = o.points.size() - 1;
    rep.n_terms = n + 1;

    std::vector<double> log1(n + 1), log2(n + 1);
    CompensatedSum<double> s1, s2;
    for (std::size_t k = 0; k <= n; ++k) {
        log1[k] = -o.log_abs_derivs[k];
        const double m = std::abs(o.points[k]);
        const double lnm = std::abs(std::log(m));
        log2[k] = (m == 0 || lnm == 0) ? -kInf : std::log(m) + std::log(lnm) - o.log_abs_derivs[k];
        s1 += std::exp(log1[k]);
        s2 += std::exp(log2[k]);
        if (k > 0) rep.ratio_trace.push_back(std::exp(log1[k] - log1[k - 1]));
    }
    rep.series1_partial = s1.value();
    rep.series2_partial = s2.value();

    if (std::any_of(o.log_abs_derivs.begin(), o.log_abs_derivs.end(), [](double l) { return l == -kInf; })) {
        rep.verdict = Verdict::NotSummable;
        rep.reason = "orbit hits a critical point: (f^n)' vanishes";
        rep.series1_tail = rep.series2_tail = kInf;
        return rep;
    }
    if (o.cycle && std::abs(o.cycle->multiplier) <= 1.0) {
        rep.verdict = Verdict::NotSummable;
        rep.reason = "orbit enters an attracting or neutral cycle: terms do not tend to 0";
        rep.series1_tail = rep.series2_tail = kInf;
        rep.rate = std::pow(1.0 / std::abs(o.cycle->multiplier), 1.0 / static_cast<double>(o.cycle->period));
        return rep;
    }
    if (n < 4) {
        rep.verdict = Verdict::Undecided;
        rep.reason = "too few terms to establish a rate";
        rep.series1_tail = rep.series2_tail = kInf;
        return rep;
    }

    Rate r1, r2;
    if (o.cycle && n >= o.cycle->start + o.cycle->period) {
        // periodic tail: exact geometric sum over whole periods
        const auto& c = *o.cycle;
        const double q = 1.0 / std::abs(c.multiplier);
        double t = std::exp(log1[n]), block1 = 0, block2 = 0;
        for (std::size_t j = 1; j <= c.period; ++j) {
            // term n + j sits at the orbit point one period back
            t /= std::abs(f.evaluate(o.points[n + j - 1 - (j > 1 ? c.period : 0)], 1));
            const double m = std::abs(o.points[n + j - c.period]);
            block1 += t;
            block2 += m == 0 ? 0.0 : t * m * std::abs(std::log(m));
        }
        r1.rate = std::pow(q, 1.0 / static_cast<double>(c.period));
        r1.tail = block1 / (1 - q);
        r2.rate = r1.rate;
        r2.tail = block2 / (1 - q);
    } else {
        const std::size_t w = std::min<std::size_t>(10, n);
        r1 = fit_rate(log1, w);
        r2 = fit_rate(log2, w);
    }
    rep.rate = r1.rate;
    rep.series1_tail = r1.tail;
    rep.series2_tail = r2.tail;

    const bool s1_ok = r1.rate < 1 - opt.delta && r1.tail < opt.tol;
    const bool s2_ok = r2.rate < 1 - opt.delta && r2.tail < opt.tol;
    if (rep.boundedness == Boundedness::Unbounded) {
        if (s1_ok && s2_ok) {
            rep.verdict = Verdict::Summable;
            rep.reason = "unbounded orbit: both series decay geometrically below tol";
        } else {
            rep.reason = "unbounded orbit without geometric decay of both series";
        }
    } else if (s1_ok) {
        rep.verdict = Verdict::Summable;
        rep.reason = "series 1 decays geometrically, extrapolated tail below tol";
    } else {
        rep.reason = "no geometric decay established in the last window";
    }
    return rep;
}

SummabilityReport classify(const EntireMap& f, cplx a, const SummabilityOptions& opt) {
    auto rep = classify_value(f, f(a), opt);
    rep.point = a;
    return rep;
}

SeparationDiagnostics separation_diagnostics(const EntireMap& f, cplx a, const CriticalData& cd, std::size_t n_max) {
    SeparationDiagnostics d;
    std::vector<cplx> crit;
    for (const auto& e : cd.entries) crit.push_back(e.c);
    const cplx v = f(a);
    const auto o = orbit(f, v, n_max, 1e6, crit);
    d.boundedness = o.boundedness;

    std::vector<cplx> closure;
    if (o.cycle) {
        d.finite_closure = true;
        closure.assign(o.points.begin(), o.points.begin() + static_cast<long>(o.cycle->start + o.cycle->period));
        d.closure_points = closure.size();
    } else {
        closure = o.points;
    }
    d.re_min = d.im_min = kInf;
    d.re_max = d.im_max = -kInf;
    for (const auto& z : closure) {
        if (!finite(z)) continue;
        d.re_min = std::min(d.re_min, z.real());
        d.re_max = std::max(d.re_max, z.real());
        d.im_min = std::min(d.im_min, z.imag());
        d.im_max = std::max(d.im_max, z.imag());
    }

    d.preimage_min_distance = kInf;
    if (f.p1_constant() && f.p2_linear()) {
        for (const auto& y : preimages(f, v, {3, true})) {
            if (std::abs(y - a) <= 1e-6 * std::max(1.0, std::abs(a))) continue;
            ++d.preimages_sampled;
            for (const auto& z : closure) d.preimage_min_distance = std::min(d.preimage_min_distance, std::abs(y - z));
        }
    }

    std::ostringstream s;
    if (d.finite_closure)
        s << "finite orbit closure, " << d.closure_points << " points";
    else
        s << "orbit closure sampled by " << closure.size() << " points";
    s << "; boundedness " << to_string(d.boundedness);
    if (d.preimages_sampled > 0) s << "; preimage-to-orbit min distance " << d.preimage_min_distance;
    s << "; plane separation, measure and Fatou-boundary conditions are not decided";
    d.summary = s.str();
    return d;
}

}  // namespace ruelle
