#include "ruelle/relation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruelle/summability.hpp"

namespace ruelle {

namespace {

void require_summable(const EntireMap& f, cplx d1) {
    const auto rep = classify_value(f, d1);
    if (rep.verdict != Verdict::Summable)
        throw PreconditionError("d1 is not classified Summable (" + to_string(rep.verdict) + ": " + rep.reason + ")");
}

}  // namespace

RelationReport psi_coefficients(const CriticalData& cd, cplx d1, double tol, const SeriesOptions& opt) {
    require_normalized(cd.map);
    const int cls = cd.class_of_value(d1);
    if (cls < 0) throw PreconditionError("psi_coefficients: d1 is not a critical value of cd");
    require_summable(cd.map, d1);
    RelationReport r;
    r.d1 = d1;
    r.d1_class = static_cast<std::size_t>(cls);
    r.tol = tol;
    const auto cs = class_series(cd, 1.0, d1, opt);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        r.psi.push_back({i, cd.classes[i].value, cs[i].value, cs[i].tail_estimate});
        r.n_used = std::max(r.n_used, cs[i].n_used);
    }
    r.trivial = true;
    for (std::size_t k = 0; k < r.psi.size(); ++k) r.trivial = r.trivial && psi_deviation(r, k) <= tol;
    r.instability_evidence = !r.trivial;
    return r;
}

double psi_deviation(const RelationReport& r, std::size_t k) {
    const auto& e = r.psi.at(k);
    return e.value_index == r.d1_class ? std::abs(e.psi - 1.0) : std::abs(e.psi);
}

std::string to_string(InstabilityVerdict v) {
    switch (v) {
        case InstabilityVerdict::Yes: return "instability evidence: yes";
        case InstabilityVerdict::NoEvidence: return "no evidence";
        default: return "inconclusive";
    }
}

VerdictRecord instability_verdict(const RelationReport& r) {
    VerdictRecord v;
    bool all_small = true;
    for (std::size_t k = 0; k < r.psi.size(); ++k) {
        const double dev = psi_deviation(r, k);
        if (dev > std::max(r.tol, 3.0 * r.psi[k].tail)) v.established.push_back(k);
        all_small = all_small && dev <= r.tol;
    }
    std::ostringstream s;
    if (!v.established.empty()) {
        v.verdict = InstabilityVerdict::Yes;
        s << "non-trivial relation: " << v.established.size() << " coefficient(s) established nonzero beyond 3x tail";
    } else if (all_small) {
        v.verdict = InstabilityVerdict::NoEvidence;
        s << "relation is trivial within tolerance (this is not a proof of stability)";
    } else {
        v.verdict = InstabilityVerdict::Inconclusive;
        s << "deviations exceed tolerance but not 3x their tails";
    }
    v.text = to_string(v.verdict) + " - " + s.str();
    return v;
}

DefectResult defect_identity(const CriticalData& cd, cplx d1, const std::vector<cplx>& samples,
                             std::optional<std::size_t> truncation, const BranchWindow& win,
                             const SeriesOptions& opt) {
    const auto& f = cd.map;
    const auto rel = psi_coefficients(cd, d1, 1e-6, opt);
    DefectResult out;
    out.truncation = truncation.value_or(rel.n_used);

    const auto o = orbit(f, d1, out.truncation, opt.escape_radius);
    if (o.points.size() < out.truncation + 1) throw RangeError("defect_identity: orbit overflow before truncation");
    std::vector<cplx> kappa, base;
    for (std::size_t n = 0; n <= out.truncation; ++n) {
        kappa.push_back(1.0 / o.derivs[n]);
        base.push_back(o.points[n]);
    }
    auto phi_n = [&](cplx y) {
        CompensatedSum<cplx> s;
        for (std::size_t n = 0; n < kappa.size(); ++n) s += kappa[n] * gamma_eval(base[n], y);
        return s.value();
    };
    double psi_tail = 0;
    for (const auto& e : rel.psi) psi_tail += e.tail;

    for (const auto& z : samples) {
        try {
            const auto direct = apply_direct(f, phi_n, z, win);
            const auto A = A_series(f, 1.0, d1, z, opt);
            CompensatedSum<cplx> r;
            r += direct.value;
            r += -A.value;
            r += gamma_eval(d1, z);
            double gmax = 0;
            for (const auto& e : rel.psi) {
                const cplx g = gamma_eval(e.value, z);
                r += -e.psi * g;
                gmax = std::max(gmax, std::abs(g));
            }
            const double res = std::abs(r.value());
            out.residuals.push_back(res);
            out.max_residual = std::max(out.max_residual, res);
            out.tail = std::max(out.tail, direct.tail_estimate + A.tail_estimate + psi_tail * gmax);
        } catch (const PoleError&) {
            out.rejected.push_back(z);
        } catch (const DegeneracyError&) {
            out.rejected.push_back(z);
        }
    }
    return out;
}

TransportResult mobius_transport(const OrbitData& orbit_data, cplx y, const std::vector<cplx>& samples,
                                 std::size_t terms) {
    if (std::abs(y - 1.0) < 1e-12 || std::abs(y) < 1e-12)
        throw PreconditionError("mobius_transport: y must differ from 0 and 1");
    const std::size_t n = terms == 0 ? orbit_data.points.size() : std::min(terms, orbit_data.points.size());
    std::vector<cplx> kappa(n), t(n), gt(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = orbit_data.points[k];
        kappa[k] = 1.0 / orbit_data.derivs[k];
        if (std::abs(1.0 - y - t[k]) < 1e-6)
            throw PreconditionError("mobius_transport: 1 - y lies on the orbit of d1");
        gt[k] = y * t[k] / (t[k] + y - 1.0);
    }
    CompensatedSum<cplx> c1, c2;
    for (std::size_t k = 0; k < n; ++k) {
        c1 += kappa[k] * (t[k] - 1.0);
        c2 += kappa[k] * t[k];
    }
    const cplx C1 = c1.value(), C2 = c2.value();

    TransportResult out;
    out.terms = n;
    if (n >= 2) {
        const double ratio = std::abs(kappa[n - 1] / kappa[n - 2]);
        out.tail = ratio < 1 ? std::abs(kappa[n - 1]) * ratio / (1 - ratio) : std::numeric_limits<double>::infinity();
    }
    for (const auto& z : samples) {
        bool bad = std::abs(z + y - 1.0) < 1e-10 || std::abs(z) < 1e-10 || std::abs(z - 1.0) < 1e-10;
        for (const auto& tk : t) bad = bad || std::abs(z - tk) < 1e-10;
        if (bad) {
            out.rejected.push_back(z);
            continue;
        }
        const cplx w = y * z / (z + y - 1.0);
        const cplx dg = y * (y - 1.0) / ((z + y - 1.0) * (z + y - 1.0));
        CompensatedSum<cplx> G, phi;
        G += C1 / w;
        G += -C2 / (w - 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            G += kappa[k] / (w - gt[k]);
            phi += kappa[k] * t[k] * (t[k] - 1.0) / (z * (z - 1.0) * (z - t[k]));
        }
        const double res = std::abs(G.value() * dg - phi.value());
        out.residuals.push_back(res);
        out.max_residual = std::max(out.max_residual, res);
    }
    return out;
}

RankDiagnostics rank_diagnostics(const Eigen::MatrixXcd& m) {
    RankDiagnostics d;
    d.matrix = m;
    if (m.size() == 0) return d;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    for (long i = 0; i < sv.size(); ++i) d.singular_values.push_back(sv(i));
    d.threshold = std::max(1e-12, 1e-8 * sv(0));
    for (double s : d.singular_values) d.rank += s > d.threshold ? 1 : 0;
    d.full_rank = d.rank == static_cast<std::size_t>(std::min(m.rows(), m.cols()));
    return d;
}

RankDiagnostics value_rank_system(const CriticalData& cd, const std::vector<cplx>& summable_values,
                                 const SeriesOptions& opt) {
    const long rows = static_cast<long>(summable_values.size());
    const long cols = static_cast<long>(cd.q());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    for (long j = 0; j < rows; ++j) {
        const cplx v = summable_values[j];
        const auto rel = psi_coefficients(cd, v, 1e-6, opt);
        for (const auto& e : rel.psi)
            m(j, static_cast<long>(e.value_index)) = (e.value_index == rel.d1_class ? 1.0 : 0.0) - e.psi;
    }
    return rank_diagnostics(m);
}

}  // namespace ruelle
