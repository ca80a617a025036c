#include "ruelle/ruelle.hpp"

#include <algorithm>
#include <cmath>

namespace ruelle {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// cot(x) without overflow for large |Im x|
cplx cot(cplx x) {
    const cplx i(0.0, 1.0);
    if (x.imag() >= 0) {
        const cplx q = std::exp(2.0 * i * x);
        return i * (q + 1.0) / (q - 1.0);
    }
    const cplx q = std::exp(-2.0 * i * x);
    return i * (1.0 + q) / (1.0 - q);
}

// integers m with |origin + m step| < radius
std::pair<long, long> inside_range(cplx origin, cplx step, double radius) {
    const double a2 = std::norm(step);
    const double b2 = 2.0 * (origin * std::conj(step)).real();
    const double c2 = std::norm(origin) - radius * radius;
    const double disc = b2 * b2 - 4 * a2 * c2;
    if (disc <= 0) return {1, 0};
    const double lo = (-b2 - std::sqrt(disc)) / (2 * a2);
    const double hi = (-b2 + std::sqrt(disc)) / (2 * a2);
    long mlo = static_cast<long>(std::floor(lo)) - 1, mhi = static_cast<long>(std::ceil(hi)) + 1;
    while (mlo <= mhi && std::abs(origin + static_cast<double>(mlo) * step) >= radius) ++mlo;
    while (mhi >= mlo && std::abs(origin + static_cast<double>(mhi) * step) >= radius) --mhi;
    return {mlo, mhi};
}

void check_base(const CriticalData& cd, cplx a) {
    for (const auto& e : cd.entries)
        if (std::abs(a - e.c) <= 1e-8 * std::max(1.0, std::abs(e.c)))
            throw DegeneracyError("apply: base within 1e-8 of a critical point");
}

}  // namespace

void require_normalized(const EntireMap& f) {
    if (std::abs(f(0.0)) > 1e-9 || std::abs(f(1.0) - 1.0) > 1e-9)
        throw PreconditionError("map must fix 0 and 1 (normalize it first)");
}

cplx lattice_gamma_sum(cplx a, cplx origin, cplx step) {
    const cplx k = kPi / step;
    return k * ((a - 1.0) * cot(k * origin) - a * cot(k * (origin - 1.0)) + cot(k * (origin - a)));
}

std::vector<cplx> class_sums(const CriticalData& cd, cplx a) {
    std::vector<CompensatedSum<cplx>> acc(cd.classes.size());
    for (const auto& e : cd.entries) acc[e.value_class] += e.b * gamma_eval(a, e.c);
    if (cd.tail_exact()) {
        for (const auto& line : cd.lattice) {
            const auto [mlo, mhi] = inside_range(line.origin, line.step, cd.radius);
            CompensatedSum<cplx> inside;
            for (long m = mlo; m <= mhi; ++m) inside += gamma_eval(a, line.origin + static_cast<double>(m) * line.step);
            acc[line.value_class] += line.b * (lattice_gamma_sum(a, line.origin, line.step) - inside.value());
        }
    }
    std::vector<cplx> out;
    out.reserve(acc.size());
    for (const auto& s : acc) out.push_back(s.value());
    return out;
}

double apply_tail(const CriticalData& cd, const GammaCombination& phi) {
    double mass = 0;
    for (const auto& t : phi.terms()) {
        const double r = cd.radius;
        const double shrink = (1.0 - 1.0 / r) * (1.0 - std::abs(t.a) / r);
        const double coef = std::abs(t.w * t.a * (t.a - 1.0));
        if (cd.tail_exact() || shrink <= 0)
            mass += 1e-13 * coef * (1.0 + static_cast<double>(cd.entries.size()));
        else
            mass += coef * cd.tail_bound / shrink;
    }
    return mass;
}

GammaCombination apply(const CriticalData& cd, const GammaCombination& phi, Exec exec) {
    require_normalized(cd.map);
    const auto& terms = phi.terms();
    const long n = static_cast<long>(terms.size());
    std::vector<cplx> image(n), lead(n);
    std::vector<std::vector<cplx>> sums(n);
    for (const auto& t : terms) check_base(cd, t.a);
    LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel && n > 1)
    for (long j = 0; j < n; ++j)
        errors.guard(j, [&] {
            const auto v = cd.map.eval2(terms[j].a);
            image[j] = v[0];
            lead[j] = v[1];
            sums[j] = class_sums(cd, terms[j].a);
        });
    errors.rethrow();
    GammaCombination out;
    for (long j = 0; j < n; ++j) {
        if (lead[j] == cplx{} || !finite(lead[j]) || !finite(image[j]))
            throw DegeneracyError("apply: f'(a) vanishes or overflows at a base");
        out.add(image[j], terms[j].w / lead[j]);
    }
    for (std::size_t i = 0; i < cd.classes.size(); ++i) {
        CompensatedSum<cplx> w;
        for (long j = 0; j < n; ++j) w += terms[j].w * sums[j][i];
        out.add(cd.classes[i].value, w.value());
    }
    return out;
}

GammaCombination iterate(const CriticalData& cd, cplx a, int n, Exec exec) {
    if (n < 0) throw ConfigError("iterate: n must be non-negative");
    GammaCombination g = GammaCombination::single(a);
    for (int k = 0; k < n; ++k) g = apply(cd, g, exec);
    return g;
}

// ----------------------------------------------------------- direct sum

namespace {

void require_branch_shape(const EntireMap& f) {
    if (!f.p1_constant() || !f.p2_linear())
        throw UnsupportedError("apply_direct: branch enumeration needs constant P1 and linear P2");
}

}  // namespace

std::vector<cplx> preimages(const EntireMap& f, cplx z, const BranchWindow& win) {
    require_branch_shape(f);
    if (win.k_range < 1) throw ConfigError("BranchWindow: k_range must be >= 1");
    const cplx u = (z - f.p1().coeff(0) - f.p2().coeff(0)) / f.p2().coeff(1);
    const cplx w0 = std::asin(u);
    std::vector<cplx> ys;
    for (int k = -win.k_range; k <= win.k_range; ++k) {
        const double shift = kTwoPi * k;
        for (int sheet = 0; sheet < (win.both_sheets ? 2 : 1); ++sheet) {
            const cplx t = (sheet == 0 ? w0 : kPi - w0) + shift;
            for (const auto& y : (f.p3() + (-t)).roots()) ys.push_back(y);
        }
    }
    return ys;
}

DirectResult apply_direct(const EntireMap& f, const std::function<cplx(cplx)>& phi, cplx z, const BranchWindow& win,
                          std::pair<int, int> exponents, Exec exec) {
    require_branch_shape(f);
    if (exponents != std::pair<int, int>{2, 0} && exponents != std::pair<int, int>{1, 1})
        throw UnsupportedError("apply_direct: exponents must be (2,0) or (1,1)");
    if (win.k_range < 1) throw ConfigError("BranchWindow: k_range must be >= 1");

    const cplx base = f.p1().coeff(0) + f.p2().coeff(0);
    const cplx q1 = f.p2().coeff(1);
    std::vector<cplx> crit_values{base + q1, base - q1};
    for (const auto& c : f.p3().derivative().roots()) crit_values.push_back(f(c));
    for (const auto& d : crit_values)
        if (std::abs(z - d) < 1e-8) throw DegeneracyError("apply_direct: z is within 1e-8 of a critical value");

    const cplx u = (z - base) / q1;
    const cplx w0 = std::asin(u);
    const int sheets = win.both_sheets ? 2 : 1;
    const long nk = 2L * win.k_range + 1;

    struct Slot {
        cplx sum;
        double modulus = 0;
        int used = 0, skipped = 0;
    };
    std::vector<Slot> slots(nk);
    LoopErrors errors;
#pragma omp parallel for schedule(dynamic, 8) if (exec == Exec::parallel)
    for (long idx = 0; idx < nk; ++idx)
        errors.guard(idx, [&] {
            const long k = idx - win.k_range;
            Slot s;
            CompensatedSum<cplx> acc;
            for (int sheet = 0; sheet < sheets; ++sheet) {
                const cplx t = (sheet == 0 ? w0 : kPi - w0) + kTwoPi * static_cast<double>(k);
                for (const auto& y : (f.p3() + (-t)).roots()) {
                    const cplx d = f.eval2(y)[1];
                    if (std::abs(d) < 1e-10) {
                        ++s.skipped;
                        continue;
                    }
                    const cplx term = exponents.first == 2 ? phi(y) / (d * d) : phi(y) / std::norm(d);
                    acc += term;
                    s.modulus += std::abs(term);
                    ++s.used;
                }
            }
            s.sum = acc.value();
            slots[idx] = s;
        });
    errors.rethrow();
    DirectResult r;
    CompensatedSum<cplx> total;
    for (const auto& s : slots) {
        total += s.sum;
        r.branches += s.used;
        r.skipped += s.skipped;
    }
    r.value = total.value();
    r.tail_estimate = (slots.front().modulus + slots.back().modulus) * win.k_range / 2.0;
    return r;
}

}  // namespace ruelle
