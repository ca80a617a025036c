#include "ruelle/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruelle/summability.hpp"

namespace ruelle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tail control shared by every series here: terms are compared against a
// majorant m_n given by its logarithm; the tail is extrapolated as
// k1 * m_N * rate / (1 - rate) with the rate fitted on the last window.
class TailTracker {
public:
    explicit TailTracker(std::size_t period_hint = 0) : period_(period_hint) {}

    void push(double term_modulus, double log_majorant) {
        logs_.push_back(log_majorant);
        if (std::isfinite(log_majorant) && term_modulus > 0)
            k1_ = std::max(k1_, term_modulus / std::exp(log_majorant));
    }

    double rate() const {
        const std::size_t n = logs_.size() - 1;
        std::size_t w = std::min<std::size_t>(10, n);
        if (period_ > 0 && period_ <= 10 && n >= period_) w = period_ * std::min(n / period_, 10 / period_);
        if (w == 0) return kInf;
        if (logs_[n] == -kInf) return 0.0;
        if (!std::isfinite(logs_[n - w])) return kInf;
        return std::exp((logs_[n] - logs_[n - w]) / static_cast<double>(w));
    }

    double tail() const {
        if (logs_.size() < 4) return kInf;
        if (logs_.back() == -kInf) return 0.0;
        const double r = rate();
        if (!(r < 1)) return kInf;
        return k1_ * std::exp(logs_.back()) * r / (1 - r);
    }

    // three successive tails below tol
    bool step_converged(double tol) {
        below_ = tail() <= tol ? below_ + 1 : 0;
        return below_ >= 3;
    }

    double k1() const { return k1_; }
    void set_period(std::size_t p) { period_ = p; }

private:
    std::vector<double> logs_;
    double k1_ = 0;
    std::size_t period_ = 0;
    int below_ = 0;
};

void check_orbit(const OrbitData& o, std::size_t upto) {
    for (std::size_t n = 0; n <= upto && n < o.points.size(); ++n) {
        const cplx w = o.points[n];
        if (std::abs(w) < 1e-8 || std::abs(w - 1.0) < 1e-8)
            throw DegeneracyError("series: orbit passes within 1e-8 of a pole 0 or 1");
        if (o.log_abs_derivs[n] == -std::numeric_limits<double>::infinity())
            throw DegeneracyError("series: orbit hits a critical point");
    }
}

// x^n / (f^n)'(a), robust to overflow of the derivative product
cplx orbit_coefficient(const OrbitData& o, cplx xn, std::size_t n) {
    const cplx d = o.derivs[n];
    if (finite(d) && d != cplx{}) return xn / d;
    const double lm = std::log(std::abs(xn)) - o.log_abs_derivs[n];
    if (lm < -700) return 0.0;
    throw RangeError("series: derivative product overflow with non-negligible term");
}

double log_abs(cplx x) { return x == cplx{} ? -kInf : std::log(std::abs(x)); }

SeriesEval sum_along_orbit(const EntireMap& f, cplx x, cplx a, cplx z, bool at_critical, const SeriesOptions& opt) {
    if (std::abs(x) > 1.0 + 1e-15) throw PreconditionError("series: |x| must not exceed 1");
    SeriesEval r;
    if (x == cplx{}) {
        r.value = gamma_eval(a, z);
        r.n_used = 1;
        r.converged = true;
        return r;
    }
    const auto o = orbit(f, a, opt.n_max + 1, opt.escape_radius);
    const std::size_t last = std::min(opt.n_max, o.points.size() - 1 - (at_critical ? 1 : 0));
    check_orbit(o, last + (at_critical ? 1 : 0));
    TailTracker tr(o.cycle ? o.cycle->period : 0);
    CompensatedSum<cplx> acc;
    const double lx = log_abs(x);
    cplx xn = 1.0;
    for (std::size_t n = 0; n <= last; ++n) {
        const cplx w = o.points[n];
        if (std::abs(z - w) <= (at_critical ? 1e-12 : 1e-10) * std::max(1.0, std::abs(z))) {
            if (at_critical) throw DegeneracyError("A_at_point: orbit hits the critical point");
            throw PoleError("A_series: z is a pole of an orbit kernel", w);
        }
        const cplx term = orbit_coefficient(o, xn, n) * gamma_eval(w, z);
        acc += term;
        const double lm = n * lx - o.log_abs_derivs[n + (at_critical ? 1 : 0)];
        tr.push(std::abs(term), lm);
        r.n_used = n + 1;
        if (tr.step_converged(opt.tol)) {
            r.converged = true;
            break;
        }
        xn *= x;
    }
    r.value = acc.value();
    r.tail_estimate = tr.tail();
    r.rate = tr.rate();
    r.k1 = tr.k1();
    return r;
}

}  // namespace

SeriesEval A_series(const EntireMap& f, cplx x, cplx a, cplx z, const SeriesOptions& opt) {
    return sum_along_orbit(f, x, a, z, false, opt);
}

SeriesEval A_at_point(const EntireMap& f, cplx x, cplx a, cplx c, const SeriesOptions& opt) {
    return sum_along_orbit(f, x, a, c, true, opt);
}

std::vector<SeriesEval> class_series(const CriticalData& cd, cplx x, cplx a, const SeriesOptions& opt) {
    if (std::abs(x) > 1.0 + 1e-15) throw PreconditionError("series: |x| must not exceed 1");
    const std::size_t q = cd.q();
    std::vector<SeriesEval> out(q);
    if (x == cplx{}) {
        const auto s = class_sums(cd, a);
        for (std::size_t i = 0; i < q; ++i) out[i] = {s[i], 1, 0.0, true, 0.0, 0.0};
        return out;
    }
    const auto& f = cd.map;
    const auto o = orbit(f, a, opt.n_max + 1, opt.escape_radius);
    const std::size_t last = std::min(opt.n_max, o.points.size() - 2);
    check_orbit(o, last + 1);
    TailTracker tr(o.cycle ? o.cycle->period : 0);
    std::vector<CompensatedSum<cplx>> acc(q);
    double trunc = 0;
    const double lx = log_abs(x);
    cplx xn = 1.0;
    bool converged = false;
    std::size_t used = 0;
    for (std::size_t n = 0; n <= last; ++n) {
        const cplx coef = orbit_coefficient(o, xn, n);
        const auto s = class_sums(cd, o.points[n]);
        double biggest = 0;
        for (std::size_t i = 0; i < q; ++i) {
            acc[i] += coef * s[i];
            biggest = std::max(biggest, std::abs(coef * s[i]));
        }
        trunc += apply_tail(cd, GammaCombination::single(o.points[n], coef));
        tr.push(biggest, n * lx - o.log_abs_derivs[n + 1]);
        used = n + 1;
        if (tr.step_converged(opt.tol)) {
            converged = true;
            break;
        }
        xn *= x;
    }
    for (std::size_t i = 0; i < q; ++i)
        out[i] = {acc[i].value(), used, tr.tail() + trunc, converged, tr.rate(), tr.k1()};
    return out;
}

ValueSystem value_system(const CriticalData& cd, cplx x, cplx z, const SeriesOptions& opt) {
    ValueSystem vs;
    vs.q = cd.q();
    const long q = static_cast<long>(vs.q);
    vs.matrix = Eigen::MatrixXcd::Zero(q, q);
    vs.rhs = Eigen::VectorXcd::Zero(q);
    for (long j = 0; j < q; ++j) {
        const cplx dj = cd.classes[j].value;
        const auto cs = class_series(cd, x, dj, opt);
        for (long i = 0; i < q; ++i) vs.matrix(j, i) = x * cs[i].value;
        vs.rhs(j) = A_series(cd.map, x, dj, z, opt).value;
    }
    if (!vs.matrix.allFinite() || !vs.rhs.allFinite()) throw RangeError("value_system: non-finite entries");
    const Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(q, q) - vs.matrix;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(lhs);
    const auto& sv = svd.singularValues();
    vs.condition = q == 0 ? 1.0 : (sv(q - 1) > 0 ? sv(0) / sv(q - 1) : kInf);
    return vs;
}

SeriesEval S_by_system(const CriticalData& cd, cplx x, cplx a, cplx z, const SeriesOptions& opt) {
    if (!(std::abs(x) < 1)) throw PreconditionError("S_by_system: requires |x| < 1");
    SeriesEval r;
    if (x == cplx{}) {
        r.value = gamma_eval(a, z);
        r.n_used = 1;
        r.converged = true;
        return r;
    }
    const auto vs = value_system(cd, x, z, opt);
    if (!(vs.condition < 1e8)) throw ConditioningError("S_by_system: ill-conditioned value system", vs.condition);
    const long q = static_cast<long>(vs.q);
    const Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(q, q) - vs.matrix;
    const Eigen::VectorXcd s = q ? Eigen::VectorXcd(lhs.fullPivLu().solve(vs.rhs)) : Eigen::VectorXcd();

    const auto A = A_series(cd.map, x, a, z, opt);
    const auto cs = class_series(cd, x, a, opt);
    CompensatedSum<cplx> acc;
    acc += A.value;
    double tail = A.tail_estimate, smax = 0;
    bool conv = A.converged;
    for (long i = 0; i < q; ++i) smax = std::max(smax, std::abs(s(i)));
    for (long i = 0; i < q; ++i) {
        acc += x * cs[i].value * s(i);
        tail += std::abs(x) * (cs[i].tail_estimate * std::abs(s(i)) + std::abs(cs[i].value) * vs.condition * opt.tol * (1 + smax));
        conv = conv && cs[i].converged;
    }
    r.value = acc.value();
    r.n_used = A.n_used;
    r.tail_estimate = tail;
    r.converged = conv;
    r.rate = A.rate;
    r.k1 = A.k1;
    return r;
}

SeriesEval S_by_neumann(const CriticalData& cd, cplx x, cplx a, cplx z, const SeriesOptions& opt) {
    if (!(std::abs(x) < 1)) throw PreconditionError("S_by_neumann: requires |x| < 1");
    SeriesEval r;
    GammaCombination g = GammaCombination::single(a);
    CompensatedSum<cplx> acc;
    TailTracker tr;
    const double lx = log_abs(x);
    cplx xn = 1.0;
    for (std::size_t n = 0; n <= opt.n_max; ++n) {
        if (n > 0) {
            xn *= x;
            if (xn == cplx{}) {
                r.converged = true;
                break;
            }
            g = apply(cd, g);
        }
        const cplx term = xn * combo_eval(g, z);
        acc += term;
        double mass = 0;
        for (const auto& t : g.terms()) mass += std::abs(t.w * gamma_eval(t.a, z));
        tr.push(std::abs(term), n * lx + std::log(mass > 0 ? mass : 1e-300));
        r.n_used = n + 1;
        if (tr.step_converged(opt.tol)) {
            r.converged = true;
            break;
        }
    }
    r.value = acc.value();
    r.tail_estimate = r.converged && x == cplx{} ? 0.0 : tr.tail();
    r.rate = tr.rate();
    r.k1 = tr.k1();
    return r;
}

GammaCombination neumann_partial(const CriticalData& cd, cplx x, cplx a, int N) {
    GammaCombination g = GammaCombination::single(a), total = g;
    cplx xn = 1.0;
    for (int n = 1; n <= N; ++n) {
        xn *= x;
        g = apply(cd, g);
        total.add(g, xn);
    }
    return total;
}

LimitResult limit_x_to_1(const std::function<SeriesEval(double)>& evaluator, const std::vector<double>& schedule,
                         Exec exec) {
    for (std::size_t i = 0; i < schedule.size(); ++i)
        if (!(schedule[i] < 1.0) || (i > 0 && !(schedule[i] > schedule[i - 1])))
            throw ConfigError("limit_x_to_1: schedule must increase strictly below 1");
    LimitResult r;
    r.at_one = evaluator(1.0);
    r.xs = schedule;
    r.values.resize(schedule.size());
    const long n = static_cast<long>(schedule.size());
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
    for (long i = 0; i < n; ++i) {
        try {
            r.values[i] = evaluator(schedule[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const auto& v : r.values) r.trend.push_back(std::abs(v.value - r.at_one.value));
    return r;
}

PointLimit limit_x_to_1(const EntireMap& f, cplx a, cplx target, bool at_point, const std::vector<double>& schedule,
                        const SeriesOptions& opt) {
    SummabilityOptions sopt;
    sopt.n_max = std::max<std::size_t>(opt.n_max, 50);
    const auto rep = classify_value(f, a, sopt);
    if (rep.verdict != Verdict::Summable)
        throw PreconditionError("limit_x_to_1: base point is not classified Summable (" + rep.reason + ")");
    auto eval = [&](double x) {
        return at_point ? A_at_point(f, x, a, target, opt) : A_series(f, x, a, target, opt);
    };
    PointLimit r;
    static_cast<LimitResult&>(r) = limit_x_to_1(eval, schedule);
    const auto o = orbit(f, a, opt.n_max, opt.escape_radius);
    for (double x : schedule) {
        CompensatedSum<double> s;
        double xn = 1.0;
        for (std::size_t n = 0; n < o.points.size(); ++n) {
            s += std::abs(xn - 1.0) * std::exp(-o.log_abs_derivs[n]);
            xn *= x;
        }
        r.derivative_gaps.push_back(s.value());
    }
    return r;
}

}  // namespace ruelle
