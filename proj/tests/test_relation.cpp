#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ruelle/harness.hpp"
#include "ruelle/relation.hpp"

using namespace ruelle;

namespace {

const LandingCase& landing() {
    static const LandingCase L = landing_case(2.5);
    return L;
}

const CriticalData& landing_cd() {
    static const CriticalData cd = critical_data(landing().map, 40.0);
    return cd;
}

const CriticalData& sine_cd() {
    static const CriticalData cd = critical_data(normalize(EntireMap::sine_family(0.3, 0.7)), 40.0);
    return cd;
}

std::vector<cplx> samples(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < n) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) > 0.05 && std::abs(z - 1.0) > 0.05 && std::abs(z - landing().p) > 0.05 &&
            std::abs(z - landing().d1) > 0.05)
            out.push_back(z);
    }
    return out;
}

RelationReport manual_report(double psi2, double tail2) {
    RelationReport r;
    r.d1_class = 0;
    r.tol = 1e-6;
    r.psi = {{0, 0.3, 1.0, 1e-12}, {1, 0.7, psi2, tail2}};
    return r;
}

}  // namespace

TEST_SUITE("relation") {

TEST_CASE("zero residues give zero coefficients and a non-trivial relation") {
    auto cd = landing_cd();
    for (auto& e : cd.entries) e.b = 0.0;
    for (auto& l : cd.lattice) l.b = 0.0;
    const auto r = psi_coefficients(cd, landing().d1);
    for (const auto& e : r.psi) CHECK(std::abs(e.psi) == 0.0);
    CHECK_FALSE(r.trivial);
    CHECK(r.instability_evidence);
}

TEST_CASE("coefficients are stable under radius doubling") {
    const auto r40 = psi_coefficients(landing_cd(), landing().d1);
    const auto cd80 = critical_data(landing().map, 80.0);
    const auto r80 = psi_coefficients(cd80, landing().d1);
    REQUIRE(r40.psi.size() == r80.psi.size());
    for (std::size_t i = 0; i < r40.psi.size(); ++i) {
        const int k = cd80.class_of_value(r40.psi[i].value);
        REQUIRE(k >= 0);
        CHECK(std::abs(r40.psi[i].psi - r80.psi[k].psi) <= r40.psi[i].tail + r80.psi[k].tail + 1e-12);
    }
}

TEST_CASE("coefficients do not depend on the order of critical entries") {
    auto cd = landing_cd();
    std::reverse(cd.entries.begin(), cd.entries.end());
    for (auto& c : cd.classes) c.members.clear();
    for (std::size_t k = 0; k < cd.entries.size(); ++k) cd.classes[cd.entries[k].value_class].members.push_back(k);
    const auto a = psi_coefficients(landing_cd(), landing().d1), b = psi_coefficients(cd, landing().d1);
    for (std::size_t i = 0; i < a.psi.size(); ++i) CHECK(std::abs(a.psi[i].psi - b.psi[i].psi) < 1e-14);
}

TEST_CASE("d1 must be summable") {
    const auto& cd = sine_cd();
    CHECK_THROWS_AS(psi_coefficients(cd, cd.classes[0].value), PreconditionError);
    CHECK_THROWS_AS(psi_coefficients(landing_cd(), cplx(0.3, 0.3)), PreconditionError);
}

TEST_CASE("verdict margin rule") {
    CHECK(instability_verdict(manual_report(0.1, 0.001)).verdict == InstabilityVerdict::Yes);
    CHECK(instability_verdict(manual_report(0.001, 0.01)).verdict == InstabilityVerdict::Inconclusive);
    const auto triv = instability_verdict(manual_report(0.0, 1e-9));
    CHECK(triv.verdict == InstabilityVerdict::NoEvidence);
    CHECK(triv.text.find("not a proof") != std::string::npos);
    // shrinking tails never turns "yes" into anything else
    for (double t : {1e-3, 1e-5, 1e-9}) CHECK(instability_verdict(manual_report(0.1, t)).verdict == InstabilityVerdict::Yes);
    const auto yes = instability_verdict(manual_report(0.1, 0.001));
    REQUIRE(yes.established.size() == 1);
    CHECK(yes.established[0] == 1);
}

TEST_CASE("engineered case shows instability evidence") {
    const auto r = psi_coefficients(landing_cd(), landing().d1);
    CHECK(r.psi.size() == 2);
    CHECK(instability_verdict(r).verdict == InstabilityVerdict::Yes);
}

TEST_CASE("defect at truncation zero reduces to coefficient differences") {
    const auto& cd = landing_cd();
    const auto& f = cd.map;
    const cplx d1 = landing().d1;
    const auto zs = samples(11, 4);
    const auto d = defect_identity(cd, d1, zs, std::size_t{0});
    const auto rel = psi_coefficients(cd, d1);
    const auto psi0 = class_sums(cd, d1);  // f* gamma_{d1} = gamma_{f(d1)} / f'(d1) + sum psi0_i gamma_{d_i}
    const cplx fd1 = f(d1), dfd1 = f.evaluate(d1, 1);
    for (std::size_t k = 0; k < zs.size(); ++k) {
        const cplx z = zs[k];
        cplx expect = gamma_eval(fd1, z) / dfd1 - (A_series(f, 1.0, d1, z).value - gamma_eval(d1, z));
        for (const auto& e : rel.psi) expect += (psi0[e.value_index] - e.psi) * gamma_eval(e.value, z);
        CHECK(std::abs(d.residuals[k] - std::abs(expect)) < 1e-9 * (1 + std::abs(expect)));
    }
}

TEST_CASE("defect rejects pole samples and detects a corrupted residue") {
    const auto& cd = landing_cd();
    const auto d = defect_identity(cd, landing().d1, {0.0, cplx(0.3, 0.7)});
    CHECK(d.rejected.size() == 1);
    CHECK(d.residuals.size() == 1);
    CHECK(d.max_residual < 1e-6);
    const auto bad = defect_identity(with_negated_residue(cd, 0), landing().d1, samples(3, 5));
    CHECK(bad.max_residual > 1e-3);
}

TEST_CASE("Moebius transport") {
    const auto o = orbit(landing().map, landing().d1, 60);
    const auto zs = samples(5, 10);
    CHECK_THROWS_AS(mobius_transport(o, 1.0, zs), PreconditionError);
    // one term: the per-term identity alone
    const auto one = mobius_transport(o, cplx(2.0, 1.0), zs, 1);
    CHECK(one.terms == 1);
    CHECK(one.max_residual < 1e-14);
    const auto r = mobius_transport(o, cplx(2.0, 1.0), {cplx(-1.0, -1.0), cplx(0.2, 0.3)});
    CHECK(r.rejected.size() == 1);  // z + y - 1 = 0
}

TEST_CASE("rank diagnostics") {
    const auto b = value_rank_system(landing_cd(), {landing().d1});
    CHECK(b.rank == 1);
    CHECK(b.full_rank);
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, 0.5, 0.0, 0.0;
    const auto d = rank_diagnostics(m);
    CHECK(d.rank == 1);
    CHECK_FALSE(d.full_rank);
}

}  // TEST_SUITE

TEST_SUITE("harness") {

TEST_CASE("check result semantics") {
    CHECK(make_check("x", 1.0, 1.0, 0.0).passed);
    CHECK(make_check("x", 1.1, 1.0, 0.2).passed);
    CHECK_FALSE(make_check("x", 1.3, 1.0, 0.2).passed);
}

TEST_CASE("trivial cases") {
    const auto& cd = sine_cd();
    const auto z = contraction_check(cd, GammaCombination());
    CHECK(z.passed);
    CHECK(z.lhs == 0.0);
    const auto n = neumann_bound_check(landing_cd(), 0.0, 0.45, 4);
    CHECK(n.lhs == n.rhs);
    CHECK(n.passed);
    Bump zero{cplx(0.6, 0.6), 0.15, 0.0};
    const auto p = duality_pairings(cd, zero, GammaCombination::single(cplx(0.4, 0.9)));
    CHECK(p.pullback_pairing == cplx{});
    CHECK(p.pushforward_pairing == cplx{});
    CHECK_THROWS_AS(neumann_bound_check(landing_cd(), 1.0, 0.45), PreconditionError);
    Bump on_value{cd.classes[0].value, 0.1};
    CHECK_THROWS_AS(duality_check(cd, on_value, GammaCombination::single(cplx(0.4, 0.9))), PreconditionError);
}

TEST_CASE("contraction budget shrinks under refinement and stays passed") {
    const auto& cd = sine_cd();
    const auto phi = GammaCombination::single(cplx(-0.7, 0.3));
    double prev = INFINITY;
    for (int cells : {24, 48, 96}) {
        QuadratureConfig q;
        q.cells_per_patch = cells;
        q.mid_grid = cells / 6;
        const auto c = contraction_check(cd, phi, q);
        CHECK(c.passed);
        CHECK(c.error_budget < prev);
        prev = c.error_budget;
    }
}

TEST_CASE("checks are reproducible bit for bit") {
    const auto& cd = sine_cd();
    const auto phi = GammaCombination::single(cplx(0.5, -0.6));
    const auto a = contraction_check(cd, phi, {}, Exec::parallel);
    const auto b = contraction_check(cd, phi, {}, Exec::serial);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
    CHECK(a.error_budget == b.error_budget);
}

TEST_CASE("duality discrepancy shrinks with the bump") {
    const auto& cd = sine_cd();
    const auto phi = GammaCombination::single(cplx(0.4, 0.9));
    const auto big = duality_check(cd, {cplx(0.6, 0.6), 0.15}, phi);
    const auto small = duality_check(cd, {cplx(0.6, 0.6), 0.075}, phi);
    CHECK(big.passed);
    CHECK(small.passed);
    CHECK(small.error_budget < big.error_budget);
}

}  // TEST_SUITE
