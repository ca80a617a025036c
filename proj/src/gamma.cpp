#include "ruelle/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ruelle {

namespace {

bool same_base(cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

cplx gamma_eval(cplx a, cplx z) {
    if (std::abs(a) <= 1e-9 || std::abs(a - 1.0) <= 1e-9) throw ConfigError("gamma_eval: base at 0 or 1");
    for (const cplx p : {cplx(0.0), cplx(1.0), a})
        if (std::abs(z - p) <= 1e-12) throw PoleError("gamma_eval: evaluation at a pole", p);
    return a * (a - 1.0) / (z * (z - 1.0) * (z - a));
}

GammaCombination GammaCombination::single(cplx a, cplx w) {
    GammaCombination g;
    g.add(a, w);
    return g;
}

void GammaCombination::add(cplx a, cplx w) {
    if (std::abs(a) <= 1e-9 || std::abs(a - 1.0) <= 1e-9)
        throw PoleError("GammaCombination: base collides with a fixed pole", a);
    if (!finite(a) || !finite(w)) throw RangeError("GammaCombination: non-finite term");
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (!same_base(a, it->a)) continue;
        it->w += w;
        if (it->w == cplx{}) terms_.erase(it);
        return;
    }
    if (w != cplx{}) terms_.push_back({a, w});
}

void GammaCombination::add(const GammaCombination& other, cplx scale) {
    for (const auto& t : other.terms_) add(t.a, scale * t.w);
}

cplx GammaCombination::coefficient(cplx a) const {
    for (const auto& t : terms_)
        if (same_base(a, t.a)) return t.w;
    return 0.0;
}

GammaCombination GammaCombination::scaled(cplx s) const {
    GammaCombination g;
    if (s == cplx{}) return g;
    g.terms_ = terms_;
    for (auto& t : g.terms_) t.w *= s;
    return g;
}

GammaCombination operator+(const GammaCombination& x, const GammaCombination& y) {
    GammaCombination r = x;
    r.add(y);
    return r;
}

cplx combo_eval(const GammaCombination& phi, cplx z) {
    CompensatedSum<cplx> acc;
    for (const auto& t : phi.terms()) acc += t.w * gamma_eval(t.a, z);
    return acc.value();
}

// ------------------------------------------------------------ quadrature

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
    }
}

std::vector<cplx> poles_of(const GammaCombination& phi) {
    std::vector<cplx> p{0.0, 1.0};
    for (const auto& t : phi.terms()) p.push_back(t.a);
    return p;
}

namespace {

double min_pole_distance(const std::vector<cplx>& poles) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j) d = std::min(d, std::abs(poles[i] - poles[j]));
    return d;
}

double max_modulus(const std::vector<cplx>& poles) {
    double m = 0;
    for (const auto& p : poles) m = std::max(m, std::abs(p));
    return m;
}

// C-infinity cutoff: 1 on [0, 1/2], 0 on [1, inf)
double cutoff(double t) {
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    const double s = 2.0 * (t - 0.5);
    const double a = std::exp(-1.0 / (1.0 - s)), b = std::exp(-1.0 / s);
    return a / (a + b);
}

enum class CellKind { patch, annulus, far };

struct Cell {
    CellKind kind;
    cplx center;
    double r0, r1;
    int n_r, n_theta;
};

struct GlTable {
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> rules;
    const std::pair<std::vector<double>, std::vector<double>>& get(int n) {
        auto it = rules.find(n);
        if (it == rules.end()) {
            std::pair<std::vector<double>, std::vector<double>> r;
            gauss_legendre(n, r.first, r.second);
            it = rules.emplace(n, std::move(r)).first;
        }
        return it->second;
    }
};

std::vector<Cell> build_cells(const std::vector<cplx>& poles, const QuadratureConfig& cfg, int patch_n, int mid) {
    std::vector<Cell> cells;
    const double rho = cfg.pole_radius;
    const int n_r_patch = std::max(3, patch_n / 6);
    for (const auto& p : poles) {
        const double edges[] = {0.0, rho / 8, rho / 4, rho / 2, rho};
        for (int k = 0; k < 4; ++k) cells.push_back({CellKind::patch, p, edges[k], edges[k + 1], n_r_patch, patch_n});
    }

    // the origin always grades the annuli, so pole-free fields are resolved too
    std::vector<double> mods{0.0};
    for (const auto& p : poles) mods.push_back(std::abs(p));
    auto dist_to_moduli = [&](double r0, double r1) {
        double d = std::numeric_limits<double>::infinity();
        for (double m : mods) d = std::min(d, m < r0 ? r0 - m : (m > r1 ? m - r1 : 0.0));
        return d;
    };
    double r = 0;
    while (r < cfg.far_radius) {
        const double step = std::max(rho / 2, 0.5 * dist_to_moduli(r, r));
        const double r1 = std::min(cfg.far_radius, r + step);
        const double ell = std::max(rho, dist_to_moduli(r, r1));
        const int n_theta = std::max(16, static_cast<int>(std::ceil(mid * 2 * kPi * r1 / ell)));
        cells.push_back({CellKind::annulus, 0.0, r, r1, mid, n_theta});
        r = r1;
    }
    // beyond far_radius in the variable s = far_radius / r
    const int n_theta_far = std::max(16, static_cast<int>(std::ceil(mid * 4 * kPi)));
    cells.push_back({CellKind::far, 0.0, 0.0, 0.5, mid, n_theta_far});
    cells.push_back({CellKind::far, 0.0, 0.5, 1.0, mid, n_theta_far});
    return cells;
}

template <class Field>
cplx integrate_cell(const Cell& c, const Field& field, const std::vector<cplx>& poles, double rho,
                    const std::vector<double>& gx, const std::vector<double>& gw, double far_radius) {
    CompensatedSum<cplx> acc;
    const double half = 0.5 * (c.r1 - c.r0), mid = 0.5 * (c.r1 + c.r0);
    const double dtheta = 2 * kPi / c.n_theta;
    for (int i = 0; i < c.n_r; ++i) {
        const double t = mid + half * gx[i];
        double r, jac;
        if (c.kind == CellKind::far) {
            r = far_radius / t;
            jac = far_radius * far_radius / (t * t * t);
        } else {
            r = t;
            jac = t;
        }
        const double wr = gw[i] * half * jac * dtheta;
        for (int k = 0; k < c.n_theta; ++k) {
            const cplx z = c.center + std::polar(r, (k + 0.5) * dtheta);
            double weight;
            if (c.kind == CellKind::patch) {
                weight = cutoff(r / rho);
            } else {
                double covered = 0;
                for (const auto& p : poles) covered = std::max(covered, cutoff(std::abs(z - p) / rho));
                weight = 1.0 - covered;
            }
            if (weight == 0.0) continue;
            acc += (wr * weight) * field(z);
        }
    }
    return acc.value();
}

template <class Field>
cplx integrate_at(const Field& field, const std::vector<cplx>& poles, const QuadratureConfig& cfg, int patch_n,
                  int mid, Exec exec) {
    const auto cells = build_cells(poles, cfg, patch_n, mid);
    GlTable table;
    for (const auto& c : cells) table.get(c.n_r);
    std::vector<cplx> partial(cells.size());
    const long n = static_cast<long>(cells.size());
    LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
    for (long i = 0; i < n; ++i)
        errors.guard(i, [&] {
            const auto& rule = table.rules.at(cells[i].n_r);
            partial[i] =
                integrate_cell(cells[i], field, poles, cfg.pole_radius, rule.first, rule.second, cfg.far_radius);
        });
    errors.rethrow();
    return compensated_sum<cplx>(partial);
}

template <class Field>
ComplexIntegral integrate_two_levels(const Field& field, const std::vector<cplx>& poles, const QuadratureConfig& cfg,
                                     Exec exec) {
    validate(cfg, poles);
    const cplx fine = integrate_at(field, poles, cfg, cfg.cells_per_patch, cfg.mid_grid, exec);
    const cplx coarse =
        integrate_at(field, poles, cfg, std::max(8, cfg.cells_per_patch / 2), std::max(2, cfg.mid_grid / 2), exec);
    return {fine, std::abs(fine - coarse) + 1e-13 * std::abs(fine)};
}

}  // namespace

QuadratureConfig auto_config(const std::vector<cplx>& poles) {
    QuadratureConfig cfg;
    cfg.pole_radius = std::min(0.25, 0.45 * min_pole_distance(poles));
    cfg.far_radius = std::max(4.0, 2.5 * max_modulus(poles));
    return cfg;
}

QuadratureConfig auto_config(const GammaCombination& phi) { return auto_config(poles_of(phi)); }

void validate(const QuadratureConfig& cfg, const std::vector<cplx>& poles) {
    if (!(cfg.pole_radius > 0)) throw ConfigError("quadrature: pole_radius must be positive");
    // the half-resolution level must differ from the fine one for the error bound to mean anything
    if (cfg.cells_per_patch < 16 || cfg.mid_grid < 4) throw ConfigError("quadrature: resolution too small");
    if (!(cfg.pole_radius < 0.5 * min_pole_distance(poles)))
        throw ConfigError("quadrature: pole patches overlap (pole_radius >= half the pole separation)");
    const double m = max_modulus(poles);
    if (!(cfg.far_radius > 2 * m) || !(cfg.far_radius > m + cfg.pole_radius))
        throw ConfigError("quadrature: far_radius must exceed twice the largest pole modulus");
}

L1Estimate l1_norm(const GammaCombination& phi, const QuadratureConfig& cfg, Exec exec) {
    if (phi.empty()) return {0.0, 0.0};
    const auto& terms = phi.terms();
    auto field = [&terms](cplx z) -> cplx {
        cplx s{};
        for (const auto& t : terms) s += t.w * t.a * (t.a - 1.0) / (z * (z - 1.0) * (z - t.a));
        return std::abs(s);
    };
    const auto r = integrate_two_levels(field, poles_of(phi), cfg, exec);
    return {r.value.real(), r.error_bound};
}

L1Estimate integrate_plane(const std::function<double(cplx)>& field, const std::vector<cplx>& poles,
                           const QuadratureConfig& cfg, Exec exec) {
    const auto r = integrate_two_levels([&field](cplx z) -> cplx { return field(z); }, poles, cfg, exec);
    return {r.value.real(), r.error_bound};
}

ComplexIntegral integrate_plane_complex(const std::function<cplx(cplx)>& field, const std::vector<cplx>& poles,
                                        const QuadratureConfig& cfg, Exec exec) {
    return integrate_two_levels(field, poles, cfg, exec);
}

cplx beltrami_pullback(const std::function<cplx(cplx)>& mu, const EntireMap& f, cplx z) {
    const auto v = f.eval2(z);
    if (!(std::abs(v[1]) > 1e-12) || !finite(v[1])) throw DegeneracyError("beltrami_pullback: f'(z) = 0");
    const cplx m = mu(v[0]);
    if (m == cplx{}) return 0.0;
    return m * std::conj(v[1]) / v[1];
}

}  // namespace ruelle
