#include "ruelle/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruelle/series.hpp"

namespace ruelle {

CheckResult make_check(std::string name, double lhs, double rhs, double budget, std::string detail) {
    CheckResult c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.error_budget = budget;
    c.passed = lhs <= rhs + budget;
    c.detail = std::move(detail);
    return c;
}

QuadratureConfig resolved_config(const QuadratureConfig& base, const std::vector<cplx>& poles) {
    QuadratureConfig cfg = auto_config(poles);
    cfg.cells_per_patch = base.cells_per_patch;
    cfg.mid_grid = base.mid_grid;
    return cfg;
}

namespace {

L1Estimate norm_of(const GammaCombination& g, const QuadratureConfig& base, Exec exec) {
    if (g.empty()) return {};
    return l1_norm(g, resolved_config(base, poles_of(g)), exec);
}

// L1 mass that apply() may have dropped: coefficient mass times the largest
// ||gamma_d|| over critical values.
double truncation_budget(const CriticalData& cd, const GammaCombination& phi, double rhs, const QuadratureConfig& base,
                         Exec exec) {
    const double mass = apply_tail(cd, phi);
    if (cd.tail_exact()) return mass * std::max(1.0, rhs);
    double worst = 0;
    for (const auto& c : cd.classes) worst = std::max(worst, norm_of(GammaCombination::single(c.value), base, exec).value);
    return mass * worst;
}

}  // namespace

CheckResult contraction_check(const CriticalData& cd, const GammaCombination& phi, const QuadratureConfig& base,
                              Exec exec) {
    if (phi.empty()) return make_check("contraction", 0, 0, 0, "phi = 0");
    const auto image = apply(cd, phi, exec);
    const auto l = norm_of(image, base, exec);
    const auto r = norm_of(phi, base, exec);
    const double budget = l.error_bound + r.error_bound + truncation_budget(cd, phi, r.value, base, exec);
    std::ostringstream s;
    s << "||f*phi|| = " << l.value << " +- " << l.error_bound << ", ||phi|| = " << r.value << " +- " << r.error_bound;
    return make_check("contraction", l.value, r.value, budget, s.str());
}

CheckResult neumann_bound_check(const CriticalData& cd, cplx x, cplx a, int N, const QuadratureConfig& base,
                                Exec exec) {
    if (!(std::abs(x) < 1)) throw PreconditionError("neumann_bound_check: requires |x| < 1");
    const auto partial = neumann_partial(cd, x, a, N);
    const auto l = norm_of(partial, base, exec);
    const auto g = norm_of(GammaCombination::single(a), base, exec);
    const double scale = 1.0 / (1.0 - std::abs(x));
    double trunc = 0;
    if (!cd.tail_exact()) {
        GammaCombination g_n = GammaCombination::single(a);
        for (int n = 1; n <= N; ++n) {
            trunc += std::pow(std::abs(x), n) * truncation_budget(cd, g_n, g.value, base, exec);
            g_n = apply(cd, g_n, exec);
        }
    }
    const double budget = l.error_bound + g.error_bound * scale + trunc;
    std::ostringstream s;
    s << "N = " << N << ", |x| = " << std::abs(x) << ", ||partial|| = " << l.value << ", ||gamma_a|| = " << g.value;
    return make_check("neumann_bound", l.value, g.value * scale, budget, s.str());
}

cplx Bump::operator()(cplx w) const {
    const double t = std::norm(w - center) / (radius * radius);
    if (t >= 1) return 0.0;
    return amplitude * ((1 - t) * (1 - t));
}

namespace {

struct Blob {
    cplx y;
    double r;
    long k;
};

// polar rule on a disc: n_sub equal radial pieces with n_g Gauss nodes each,
// n_theta trapezoid nodes
template <class F>
cplx disc_integral(cplx center, double radius, int n_sub, int n_g, int n_theta, const F& f) {
    std::vector<double> gx, gw;
    gauss_legendre(n_g, gx, gw);
    CompensatedSum<cplx> acc;
    const double dt = 2 * kPi / n_theta, h = radius / n_sub;
    for (int s = 0; s < n_sub; ++s)
        for (int i = 0; i < n_g; ++i) {
            const double r = h * (s + 0.5 + 0.5 * gx[i]);
            const double wr = 0.5 * h * gw[i] * r * dt;
            for (int k = 0; k < n_theta; ++k) acc += wr * f(center + std::polar(r, (k + 0.5) * dt));
        }
    return acc.value();
}

}  // namespace

DualityParts duality_pairings(const CriticalData& cd, const Bump& mu, const GammaCombination& phi,
                              const QuadratureConfig& base, const BranchWindow& win, Exec exec) {
    const auto& f = cd.map;
    if (!(mu.radius > 0)) throw ConfigError("duality: bump radius must be positive");
    DualityParts out;
    if (phi.empty() || mu.amplitude == cplx{}) return out;
    const auto image = apply(cd, phi, exec);

    std::vector<cplx> avoid{0.0, 1.0};
    for (const auto& c : cd.classes) avoid.push_back(c.value);
    for (const auto& t : image.terms()) avoid.push_back(t.a);
    for (const auto& p : avoid)
        if (std::abs(p - mu.center) < 1.5 * mu.radius)
            throw PreconditionError("duality: bump support too close to a critical value or a pole of f*phi");

    const int fine = base.cells_per_patch, coarse = std::max(8, fine / 2);
    auto push_at = [&](int res) {
        return disc_integral(mu.center, mu.radius, 2, std::max(4, res / 4), res, [&](cplx w) {
            const cplx m = mu(w);
            return m == cplx{} ? cplx{} : m * combo_eval(image, w);
        });
    };
    out.pushforward_pairing = push_at(fine);
    out.pushforward_error = std::abs(out.pushforward_pairing - push_at(coarse));

    // preimage blobs of the bump disc
    const cplx base_value = f.p1().coeff(0) + f.p2().coeff(0);
    if (!f.p1_constant() || !f.p2_linear())
        throw UnsupportedError("duality: preimage blobs need constant P1 and linear P2");
    const cplx w0 = std::asin((mu.center - base_value) / f.p2().coeff(1));
    std::vector<Blob> blobs;
    for (long k = -win.k_range; k <= win.k_range; ++k)
        for (int sheet = 0; sheet < (win.both_sheets ? 2 : 1); ++sheet) {
            const cplx t = (sheet == 0 ? w0 : kPi - w0) + 2 * kPi * static_cast<double>(k);
            for (const auto& y : (f.p3() + (-t)).roots()) {
                double r = 1.3 * mu.radius / std::abs(f.evaluate(y, 1));
                for (int grow = 0;; ++grow) {
                    double closest = 1e300;
                    for (int j = 0; j < 128; ++j)
                        closest = std::min(closest, std::abs(f(y + std::polar(r, 2 * kPi * j / 128)) - mu.center));
                    if (closest >= mu.radius) break;
                    if (grow == 10) throw PreconditionError("duality: could not enclose a preimage blob");
                    r *= 1.3;
                }
                blobs.push_back({y, r, k});
            }
        }
    for (std::size_t i = 0; i < blobs.size(); ++i)
        for (std::size_t j = i + 1; j < blobs.size(); ++j)
            if (std::abs(blobs[i].y - blobs[j].y) < blobs[i].r + blobs[j].r)
                throw PreconditionError("duality: preimage blobs overlap; use a smaller bump");
    out.blobs = blobs.size();

    auto pull_integrand = [&](cplx y) -> cplx {
        const auto v = f.eval2(y);
        const cplx m = mu(v[0]);
        if (m == cplx{}) return 0.0;
        return m * std::conj(v[1]) / v[1] * combo_eval(phi, y);
    };
    const long nb = static_cast<long>(blobs.size());
    std::vector<cplx> pf(nb), pc(nb);
    LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
    for (long i = 0; i < nb; ++i)
        errors.guard(i, [&] {
            pf[i] = disc_integral(blobs[i].y, blobs[i].r, 4, std::max(4, fine / 6), 2 * fine, pull_integrand);
            pc[i] = disc_integral(blobs[i].y, blobs[i].r, 4, std::max(4, coarse / 6), 2 * coarse, pull_integrand);
        });
    errors.rethrow();
    out.pullback_pairing = compensated_sum<cplx>(pf);
    out.pullback_error = std::abs(out.pullback_pairing - compensated_sum<cplx>(pc));
    double edge = 0;
    for (long i = 0; i < nb; ++i)
        if (std::abs(blobs[i].k) == win.k_range) edge += std::abs(pf[i]);
    out.branch_tail = edge * win.k_range / 2.0;
    return out;
}

CheckResult duality_check(const CriticalData& cd, const Bump& mu, const GammaCombination& phi,
                          const QuadratureConfig& base, const BranchWindow& win, Exec exec) {
    const auto p = duality_pairings(cd, mu, phi, base, win, exec);
    const double gap = std::abs(p.pullback_pairing - p.pushforward_pairing);
    const double budget = 2.0 * (p.pullback_error + p.pushforward_error + p.branch_tail) + 1e-14;
    std::ostringstream s;
    s.precision(12);
    s << "pullback " << p.pullback_pairing << ", pushforward " << p.pushforward_pairing << ", blobs " << p.blobs;
    return make_check("duality", gap, 0.0, budget, s.str());
}

}  // namespace ruelle
