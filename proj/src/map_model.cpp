#include "ruelle/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace ruelle {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

bool close_rel(cplx a, cplx b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// Stable ordering key used wherever the library sorts points: modulus
// quantized to 1e-9 so mirror-symmetric points tie, then argument.
bool point_order(cplx a, cplx b) {
    const auto qa = std::llround(std::abs(a) * 1e9);
    const auto qb = std::llround(std::abs(b) * 1e9);
    if (qa != qb) return qa < qb;
    return std::arg(a) < std::arg(b);
}

void dedupe_points(std::vector<cplx>& pts, double tol) {
    std::vector<cplx> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : out)
            if (close_rel(p, q, tol)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(p);
    }
    pts = std::move(out);
}

double max_modulus_bound(const Polynomial& p, double radius) {
    double m = 0, pw = 1;
    for (const auto& c : p.coeffs()) {
        m += std::abs(c) * pw;
        pw *= radius;
    }
    return m;
}

// Zeros of d/du [P2(sin u)] in one period strip: cos u = 0 and P2'(sin u) = 0.
std::vector<cplx> periodic_critical_phases(const EntireMap& f) {
    std::vector<cplx> u0{kPi / 2, -kPi / 2};
    for (const auto& s : f.p2().derivative().roots()) {
        const cplx w = std::asin(s);
        u0.push_back(w);
        u0.push_back(kPi - w);
    }
    return u0;
}

std::optional<cplx> newton_on_derivative(const EntireMap& f, cplx z) {
    for (int it = 0; it < 80; ++it) {
        const auto v = f.eval2(z);
        if (!finite(v[1]) || !finite(v[2]) || v[2] == cplx{}) return std::nullopt;
        const cplx step = v[1] / v[2];
        z -= step;
        if (!finite(z) || std::abs(z) > 1e12) return std::nullopt;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) {
            const auto w = f.eval2(z);
            if (std::abs(w[1]) <= 1e-12 * (1.0 + std::abs(w[2]))) return z;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<cplx> lattice_seeds(const EntireMap& f, double radius) {
    std::vector<cplx> targets;
    if (f.p1_constant()) {
        targets = periodic_critical_phases(f);
    } else if (f.p1().degree() == 1 && f.p2_linear() && f.p3_linear()) {
        const cplx w = -f.p1().coeff(1) / (f.p2().coeff(1) * f.p3().coeff(1));
        const cplx a = std::acos(w);
        targets = {a, -a};
    }
    std::vector<cplx> seeds;
    const double umax = max_modulus_bound(f.p3(), radius);
    for (const auto& u0 : targets) {
        const long kmax = static_cast<long>((umax + std::abs(u0)) / kTwoPi) + 2;
        for (long k = -kmax; k <= kmax; ++k) {
            const cplx t = u0 + kTwoPi * static_cast<double>(k);
            if (std::abs(t) > umax + kTwoPi) continue;
            for (const auto& z : (f.p3() + (-t)).roots())
                if (std::abs(z) < 1.5 * radius + 1.0) seeds.push_back(z);
        }
    }
    for (const auto& z : f.p3().derivative().roots()) seeds.push_back(z);
    return seeds;
}

std::vector<cplx> grid_seeds(double radius, int per_side) {
    std::vector<cplx> seeds;
    const double h = 2.0 * radius / per_side;
    for (int i = 0; i <= per_side; ++i)
        for (int j = 0; j <= per_side; ++j) {
            const cplx z(-radius + i * h, -radius + j * h);
            if (std::abs(z) < radius) seeds.push_back(z);
        }
    return seeds;
}

std::vector<cplx> refine_all(const EntireMap& f, const std::vector<cplx>& seeds, Exec exec) {
    std::vector<std::optional<cplx>> out(seeds.size());
    const long n = static_cast<long>(seeds.size());
    LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::parallel)
    for (long i = 0; i < n; ++i) errors.guard(i, [&] { out[i] = newton_on_derivative(f, seeds[i]); });
    errors.rethrow();
    std::vector<cplx> roots;
    for (const auto& r : out)
        if (r) roots.push_back(*r);
    return roots;
}

struct Located {
    std::vector<cplx> roots;
    double radius;
};

Located locate(const EntireMap& f, double radius, const CriticalSearchOptions& opts) {
    if (!(radius > 0)) throw ConfigError("critical_points: radius must be positive");
    double r = radius;
    for (int nudge = 0; nudge < 6; ++nudge, r *= 1.0 + 1e-6) {
        int expected;
        try {
            expected = winding_count(f, r);
        } catch (const RangeError&) {
            continue;  // zero on (or numerically at) the circle
        }
        std::vector<cplx> pool = refine_all(f, lattice_seeds(f, r), opts.exec);
        auto collect = [&] {
            std::vector<cplx> inside;
            for (const auto& z : pool)
                if (std::abs(z) < r) inside.push_back(z);
            dedupe_points(inside, 1e-8);
            return inside;
        };
        auto inside = collect();
        bool near_circle = false;
        for (int attempt = 0; attempt <= opts.retries; ++attempt) {
            near_circle = std::any_of(pool.begin(), pool.end(), [&](cplx z) {
                return std::abs(std::abs(z) - r) < 1e-9 * r;
            });
            if (near_circle) break;
            if (static_cast<int>(inside.size()) == expected) {
                std::sort(inside.begin(), inside.end(), point_order);
                return {inside, r};
            }
            if (attempt == opts.retries) break;
            auto extra = refine_all(f, grid_seeds(r, 16 << attempt), opts.exec);
            pool.insert(pool.end(), extra.begin(), extra.end());
            inside = collect();
        }
        if (!near_circle) {
            // a multiple zero counts more than once in the winding number
            for (const auto& z : inside)
                if (std::abs(f.eval2(z)[2]) <= 1e-9)
                    throw NonSimpleCriticalError("critical point is not simple (|f''(c)| <= 1e-9)");
            throw EnumerationError("critical_points: located " + std::to_string(inside.size()) +
                                   " roots but the winding number is " + std::to_string(expected));
        }
    }
    throw EnumerationError("critical_points: could not find a circle free of critical points");
}

// Sum of |b| / |c|^3 over lattice points outside the disc: explicit terms in a
// window around the foot of the perpendicular from 0, then the integral
// comparison (1/s) int_t^inf (u^2 + delta^2)^{-3/2} du on each side.
double lattice_tail_bound(const std::vector<LatticeLine>& lines, double radius) {
    auto side_integral = [](double t, double delta) {
        const double rho = std::hypot(t, delta);
        return 1.0 / (rho * (rho + t));
    };
    double total = 0;
    for (const auto& line : lines) {
        const double s = std::abs(line.step);
        const cplx dir = line.step / s;
        const double delta = std::abs((line.origin * std::conj(dir)).imag());
        // parameter m of the foot: origin + m step closest to 0
        const double foot = -(line.origin * std::conj(dir)).real() / s;
        const double half = radius > delta ? std::sqrt(radius * radius - delta * delta) / s : 0.0;
        const long lo = static_cast<long>(std::floor(foot - half)) - 16;
        const long hi = static_cast<long>(std::ceil(foot + half)) + 16;
        double acc = 0;
        for (long m = lo; m <= hi; ++m) {
            const double r = std::abs(line.origin + static_cast<double>(m) * line.step);
            if (r >= radius) acc += 1.0 / (r * r * r);
        }
        acc += side_integral((hi - foot) * s, delta) / s + side_integral((foot - lo) * s, delta) / s;
        total += std::abs(line.b) * acc;
    }
    return total;
}

}  // namespace

// ------------------------------------------------------------------ map

EntireMap::EntireMap(Polynomial p1, Polynomial p2, Polynomial p3, std::optional<Normalization> normalization)
    : p1_(std::move(p1)), p2_(std::move(p2)), p3_(std::move(p3)), norm_(normalization) {
    if (p2_.degree() < 1 || p3_.degree() < 1)
        throw ConfigError("EntireMap: P2 and P3 must be non-constant");
    dp1_ = p1_.derivative();
    dp2_ = p2_.derivative();
    dp3_ = p3_.derivative();
}

EntireMap EntireMap::sine_family(cplx a, cplx b) {
    return EntireMap(Polynomial::constant(a), Polynomial({0.0, b}), Polynomial::identity());
}

std::array<cplx, 3> EntireMap::eval2(cplx z) const {
    const auto [u, du, ddu] = p3_.eval2(z);
    const cplx s = std::sin(u), c = std::cos(u);
    const auto [q, dq, ddq] = p2_.eval2(s);
    const auto [r, dr, ddr] = p1_.eval2(z);
    const cplx cdu = c * du;
    return {r + q, dr + dq * cdu, ddr + ddq * cdu * cdu + dq * (-s * du * du + c * ddu)};
}

cplx EntireMap::evaluate(cplx z, int order) const {
    if (order < 0 || order > 2) throw ConfigError("evaluate: order must be 0, 1 or 2");
    const cplx v = eval2(z)[order];
    if (!finite(v)) throw RangeError("evaluate: non-finite value");
    return v;
}

cplx EntireMap::scaled_derivative(cplx z) const {
    const auto [u, du, ddu] = p3_.eval2(z);
    (void)ddu;
    const double x = u.real(), y = u.imag(), ay = std::abs(y);
    const cplx e1 = std::polar(std::exp(-y - ay), x);
    const cplx e2 = std::polar(std::exp(y - ay), -x);
    const cplx st = (e1 - e2) / cplx(0.0, 2.0);
    const cplx ct = 0.5 * (e1 + e2);
    const int d = p2_.degree();
    cplx acc{};
    cplx spow = 1.0;
    for (int j = 1; j <= d; ++j) {
        acc += static_cast<double>(j) * p2_.coeff(j) * spow * ct * std::exp((j - d) * ay);
        spow *= st;
    }
    return dp1_(z) * std::exp(-d * ay) + acc * du;
}

int CriticalData::class_of_value(cplx d) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (close_rel(d, classes[i].value, 1e-9)) return static_cast<int>(i);
    return -1;
}

// ------------------------------------------------------------ critical

int winding_count(const EntireMap& f, double radius) {
    const double maxdu = max_modulus_bound(f.p3().derivative(), radius);
    const int n0 = 256 + 16 * static_cast<int>(std::ceil(maxdu * radius));
    auto value = [&](double t) {
        const cplx v = f.scaled_derivative(std::polar(radius, t));
        if (!finite(v) || v == cplx{}) throw RangeError("winding_count: f' vanishes on the circle");
        return v;
    };
    std::function<double(double, cplx, double, cplx, int)> segment =
        [&](double ta, cplx va, double tb, cplx vb, int depth) -> double {
        const double dphi = std::arg(vb / va);
        if (std::abs(dphi) < kPi / 4 || depth > 40) return dphi;
        const double tm = 0.5 * (ta + tb);
        const cplx vm = value(tm);
        return segment(ta, va, tm, vm, depth + 1) + segment(tm, vm, tb, vb, depth + 1);
    };
    double total = 0;
    cplx prev = value(0.0);
    const cplx first = prev;
    for (int k = 1; k <= n0; ++k) {
        const double ta = kTwoPi * (k - 1) / n0, tb = kTwoPi * k / n0;
        const cplx cur = k == n0 ? first : value(tb);
        total += segment(ta, prev, tb, cur, 0);
        prev = cur;
    }
    const double w = total / kTwoPi;
    if (std::abs(w - std::round(w)) > 0.1) throw RangeError("winding_count: phase tracking failed");
    return static_cast<int>(std::lround(w));
}

std::vector<cplx> critical_points(const EntireMap& f, double radius, const CriticalSearchOptions& opts) {
    return locate(f, radius, opts).roots;
}

CriticalData critical_data(const EntireMap& f, double radius, const CriticalSearchOptions& opts) {
    auto located = locate(f, radius, opts);
    CriticalData cd{f, {}, located.radius, 0.0, false, {}, {}, true};

    for (const auto& c : located.roots) {
        const auto v = f.eval2(c);
        if (std::abs(v[2]) <= 1e-9)
            throw NonSimpleCriticalError("critical point is not simple (|f''(c)| <= 1e-9)");
        cd.entries.push_back({c, v[0], 1.0 / v[2], -1});
    }
    for (std::size_t k = 0; k < cd.entries.size(); ++k) {
        auto& e = cd.entries[k];
        int cls = cd.class_of_value(e.d);
        if (cls < 0) {
            cd.classes.push_back({e.d, {}});
            cls = static_cast<int>(cd.classes.size()) - 1;
        }
        e.value_class = cls;
        cd.classes[cls].members.push_back(k);
    }

    if (f.p1_constant() && f.p3_linear()) {
        const cplx alpha = f.p3().coeff(1), beta = f.p3().coeff(0);
        std::vector<cplx> phases;
        for (const auto& u0 : periodic_critical_phases(f)) {
            // one line per residue class of u0 modulo 2 pi
            const bool dup = std::any_of(phases.begin(), phases.end(), [&](cplx w) {
                const cplx k = (u0 - w) / kTwoPi;
                return std::abs(k.imag()) < 1e-12 && std::abs(k.real() - std::round(k.real())) < 1e-12;
            });
            if (!dup) phases.push_back(u0);
        }
        std::vector<LatticeLine> lines;
        std::size_t inside = 0;
        bool consistent = true;
        const double r = cd.radius;
        for (const auto& u0 : phases) {
            LatticeLine line;
            line.origin = (u0 - beta) / alpha;
            line.step = kTwoPi / alpha;
            const auto v = f.eval2(line.origin);
            if (std::abs(v[2]) <= 1e-9) {
                consistent = false;
                break;
            }
            line.b = 1.0 / v[2];
            line.d = v[0];
            line.value_class = cd.class_of_value(line.d);
            if (line.value_class < 0) {
                cd.classes.push_back({line.d, {}});
                line.value_class = static_cast<int>(cd.classes.size()) - 1;
            }
            const double a2 = std::norm(line.step);
            const double b2 = 2.0 * (line.origin * std::conj(line.step)).real();
            const double c2 = std::norm(line.origin) - r * r;
            const double disc = b2 * b2 - 4 * a2 * c2;
            if (disc > 0) {
                const double lo = (-b2 - std::sqrt(disc)) / (2 * a2);
                const double hi = (-b2 + std::sqrt(disc)) / (2 * a2);
                for (long m = static_cast<long>(std::floor(lo)) + 1; m < hi; ++m) {
                    const cplx z = line.origin + static_cast<double>(m) * line.step;
                    if (std::abs(z) >= r) continue;
                    ++inside;
                    const bool found = std::any_of(cd.entries.begin(), cd.entries.end(),
                                                   [&](const CriticalEntry& e) { return close_rel(e.c, z, 1e-7); });
                    if (!found) consistent = false;
                }
            }
            lines.push_back(line);
        }
        if (consistent && inside == cd.entries.size()) cd.lattice = std::move(lines);
    }

    if (!cd.lattice.empty()) {
        cd.tail_bound = lattice_tail_bound(cd.lattice, cd.radius);
        cd.tail_bound_rigorous = true;
    } else {
        // Power-law model sum_{dr} |b| ~ kappa r^p fitted on the outer annulus.
        const int m = std::max(1, f.p3().degree());
        const double p = f.p1_constant() ? 1.0 - m : 0.0;
        double ann = 0;
        for (const auto& e : cd.entries)
            if (std::abs(e.c) >= 0.5 * cd.radius) ann += std::abs(e.b);
        const double r = cd.radius;
        const double shell = std::abs(p + 1.0) < 1e-12 ? std::log(2.0)
                                                       : (std::pow(r, p + 1) - std::pow(0.5 * r, p + 1)) / (p + 1);
        const double kappa = ann / shell;
        cd.tail_bound = 4.0 * kappa * std::pow(r, p - 2.0) / (2.0 - p);
        cd.tail_bound_rigorous = false;
    }
    return cd;
}

double residue_check(const EntireMap& f, cplx c, cplx b, double eps, int ring) {
    double worst = 0;
    for (int k = 0; k < ring; ++k) {
        const cplx dz = std::polar(eps, kTwoPi * k / ring);
        worst = std::max(worst, std::abs(dz / f.evaluate(c + dz, 1) - b));
    }
    return worst;
}

double residue_check(const EntireMap& f, cplx c) { return residue_check(f, c, 1.0 / f.evaluate(c, 2)); }

CriticalData with_negated_residue(CriticalData cd, std::size_t index) {
    if (index >= cd.entries.size()) throw ConfigError("with_negated_residue: index out of range");
    cd.entries[index].b = -cd.entries[index].b;
    return cd;
}

// --------------------------------------------------------------- orbits

namespace {

// Newton on f^P(z) - z starting from z0.
std::optional<cplx> polish_cycle(const EntireMap& f, cplx z0, std::size_t period) {
    cplx z = z0;
    for (int it = 0; it < 60; ++it) {
        cplx w = z, dw = 1.0;
        for (std::size_t j = 0; j < period; ++j) {
            const auto v = f.eval2(w);
            dw *= v[1];
            w = v[0];
        }
        if (!finite(w) || !finite(dw) || dw == cplx(1.0)) return std::nullopt;
        const cplx step = (w - z) / (dw - 1.0);
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (std::abs(z - z0) > 1e-6 * std::max(1.0, std::abs(z0))) return std::nullopt;
    return z;
}

}  // namespace

OrbitData orbit(const EntireMap& f, cplx start, std::size_t n_max, double escape_radius,
                std::span<const cplx> avoid) {
    OrbitData o;
    o.start = start;
    o.escape_radius = escape_radius;
    o.points.push_back(start);
    o.derivs.push_back(1.0);
    o.log_abs_derivs.push_back(0.0);

    auto check_degenerate = [&](std::size_t idx) {
        if (o.degenerate_index) return;
        const cplx z = o.points[idx];
        bool hit = std::abs(z) < 1e-8 || std::abs(z - 1.0) < 1e-8;
        for (const auto& a : avoid) hit = hit || std::abs(z - a) < 1e-8;
        if (hit) o.degenerate_index = idx;
    };
    check_degenerate(0);

    std::vector<cplx> cycle_pts, cycle_df;
    int increases = 0;
    bool escaped = false;

    for (std::size_t n = 0; n < n_max; ++n) {
        const cplx z = o.points[n];
        cplx next, df;
        if (!cycle_pts.empty()) {
            const std::size_t phase = (n - o.cycle->start) % o.cycle->period;
            df = cycle_df[phase];
            next = cycle_pts[(phase + 1) % o.cycle->period];
        } else {
            const auto v = f.eval2(z);
            next = v[0];
            df = v[1];
            if (!finite(next) || !finite(df)) {
                o.overflow = true;
                escaped = true;
                break;
            }
        }
        o.points.push_back(next);
        o.derivs.push_back(o.derivs.back() * df);
        o.log_abs_derivs.push_back(o.log_abs_derivs.back() + std::log(std::abs(df)));
        check_degenerate(n + 1);

        if (!cycle_pts.empty()) continue;

        increases = std::abs(next) > std::abs(z) ? increases + 1 : 0;
        if (std::abs(next) > escape_radius && increases >= 3) escaped = true;
        if (escaped) continue;

        // recurrence of the newest point against the last 64
        const std::size_t idx = n + 1;
        for (std::size_t period = 1; period <= std::min<std::size_t>(idx, 64); ++period) {
            const cplx prev = o.points[idx - period];
            if (std::abs(next - prev) > 1e-9 * std::max(1.0, std::abs(prev))) continue;
            const cplx w0 = polish_cycle(f, prev, period).value_or(prev);
            cycle_pts.assign(1, w0);
            for (std::size_t j = 1; j < period; ++j) cycle_pts.push_back(f(cycle_pts.back()));
            cycle_df.clear();
            cplx mult = 1.0;
            for (const auto& w : cycle_pts) {
                cycle_df.push_back(f.evaluate(w, 1));
                mult *= cycle_df.back();
            }
            o.cycle = Cycle{idx - period, period, mult};
            o.points[idx] = w0;
            break;
        }
    }
    if (o.cycle)
        o.boundedness = Boundedness::Bounded;
    else if (escaped)
        o.boundedness = Boundedness::Unbounded;
    else
        o.boundedness = Boundedness::Undecided;
    return o;
}

// -------------------------------------------------------- normalization

std::vector<cplx> fixed_points(const EntireMap& f, const FixedPointSearch& search) {
    std::vector<cplx> seeds;
    const int n = static_cast<int>(std::round(2 * search.half_width / search.spacing));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            seeds.emplace_back(-search.half_width + i * search.spacing, -search.half_width + j * search.spacing);

    std::vector<cplx> found;
    for (auto z : seeds) {
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            const auto v = f.eval2(z);
            if (!finite(v[0]) || !finite(v[1]) || v[1] == cplx(1.0)) break;
            const cplx step = (v[0] - z) / (v[1] - 1.0);
            z -= step;
            if (!finite(z) || std::abs(z) > 1e6) break;
            if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) {
                ok = std::abs(f.eval2(z)[0] - z) <= 1e-11 * std::max(1.0, std::abs(z));
                break;
            }
        }
        if (ok) found.push_back(z);
    }
    dedupe_points(found, 1e-8);
    std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
        const auto qa = std::llround(std::abs(a) * 1e9);
        const auto qb = std::llround(std::abs(b) * 1e9);
        if (qa != qb) return qa < qb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return found;
}

EntireMap normalize_with(const EntireMap& f, cplx p0, cplx p1) {
    const cplx alpha = p1 - p0, beta = p0;
    if (std::abs(alpha) < 1e-12) throw NormalizationError("normalize: fixed points coincide");
    const cplx inv = 1.0 / alpha;
    Normalization rec{alpha, beta};
    if (f.normalization()) {
        const auto& old = *f.normalization();
        rec = {old.scale * alpha, old.scale * beta + old.shift};
    }
    EntireMap g((f.p1().compose_affine(alpha, beta) + (-beta)) * inv, f.p2() * inv,
                f.p3().compose_affine(alpha, beta), rec);
    const double scale = 1.0 + std::abs(g.eval2(1.0)[1]);
    if (std::abs(g(0.0)) > 1e-10 * scale || std::abs(g(1.0) - 1.0) > 1e-10 * scale)
        throw NormalizationError("normalize: conjugate does not fix 0 and 1");
    return g;
}

EntireMap normalize(const EntireMap& f, const FixedPointSearch& search) {
    if (std::abs(f(0.0)) <= 1e-10 && std::abs(f(1.0) - 1.0) <= 1e-10) {
        if (f.normalization()) return f;
        return EntireMap(f.p1(), f.p2(), f.p3(), Normalization{});
    }
    const auto fps = fixed_points(f, search);
    if (fps.size() < 2) throw NormalizationError("normalize: fewer than two fixed points found");
    return normalize_with(f, fps[0], fps[1]);
}

std::pair<cplx, cplx> sine_family_landing(cplx p) {
    const cplx denom = 1.0 - std::sin(p);
    if (std::abs(denom) < 1e-12) throw PreconditionError("sine_family_landing: sin(p) = 1");
    const cplx b = (kPi - 2.0 * p) / denom;
    return {kPi - p - b, b};
}

LandingCase landing_case(double p) {
    const auto [a, b] = sine_family_landing(p);
    const EntireMap raw = EntireMap::sine_family(a, b);
    std::vector<cplx> real_fixed;
    for (const auto& z : fixed_points(raw, {16.0, 0.25}))
        if (std::abs(z.imag()) < 1e-12 && std::abs(z - p) > 1e-6) real_fixed.push_back(z.real());
    if (real_fixed.size() < 2) throw NormalizationError("landing_case: fewer than two real fixed points besides p");
    const EntireMap map = normalize_with(raw, real_fixed[0], real_fixed[1]);
    const auto& n = *map.normalization();
    auto to_map = [&n](cplx z) { return (z - n.shift) / n.scale; };
    return {raw, map, to_map(p), to_map(a + b), to_map(a - b)};
}

}  // namespace ruelle
