#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "ruelle/map_model.hpp"

using namespace ruelle;

namespace {

EntireMap sine() { return EntireMap::sine_family(0.0, 1.0); }

// fourth-order central difference
cplx numeric_derivative(const std::function<cplx(cplx)>& g, cplx z, double h = 1e-3) {
    return (-g(z + 2 * h) + 8.0 * g(z + h) - 8.0 * g(z - h) + g(z - 2 * h)) / (12 * h);
}

}  // namespace

TEST_SUITE("map") {

TEST_CASE("polynomial arithmetic and roots") {
    const Polynomial p({-6.0, 11.0, -6.0, 1.0});  // (z-1)(z-2)(z-3)
    CHECK(p.degree() == 3);
    CHECK(std::abs(p(4.0) - 6.0) < 1e-14);
    auto r = p.roots();
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (int k = 0; k < 3; ++k) CHECK(std::abs(r[k] - double(k + 1)) < 1e-12);
    const auto q = p.compose_affine(2.0, 1.0);  // p(2z + 1)
    CHECK(std::abs(q(0.5) - p(2.0)) < 1e-14);
    CHECK(Polynomial().degree() == -1);
    CHECK(Polynomial({1.0, 0.0, 0.0}).degree() == 0);
}

TEST_CASE("map derivatives agree with finite differences") {
    const EntireMap f(Polynomial({0.2, 0.1, cplx(0, 0.05)}), Polynomial({0.0, 0.7, 0.2}),
                      Polynomial({0.1, 1.0, cplx(0.02, 0.01)}));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 10; ++i) {
        const cplx z(u(rng), u(rng));
        const auto v = f.eval2(z);
        CHECK(std::abs(v[0] - f(z)) < 1e-15);
        const cplx d1 = numeric_derivative([&](cplx w) { return f(w); }, z);
        const cplx d2 = numeric_derivative([&](cplx w) { return f.evaluate(w, 1); }, z);
        CHECK(std::abs(v[1] - d1) < 1e-8 * (1 + std::abs(d1)));
        CHECK(std::abs(v[2] - d2) < 1e-8 * (1 + std::abs(d2)));
    }
}

TEST_CASE("sin has six critical points in |z| < 10") {
    const auto cd = critical_data(sine(), 10.0);
    REQUIRE(cd.entries.size() == 6);
    CHECK(winding_count(sine(), 10.0) == 6);
    for (const auto& e : cd.entries) {
        // c = (k + 1/2) pi, b = 1 / f''(c) = -1 / sin(c)
        const double k = e.c.real() / kPi - 0.5;
        CHECK(std::abs(k - std::round(k)) < 1e-12);
        CHECK(std::abs(e.c.imag()) < 1e-12);
        CHECK(std::abs(e.b + 1.0 / std::sin(e.c)) < 1e-12);
        CHECK(residue_check(sine(), e.c) < 1e-6);
    }
    CHECK(cd.q() == 2);
    for (std::size_t i = 1; i < cd.entries.size(); ++i)
        CHECK(std::abs(cd.entries[i - 1].c) <= std::abs(cd.entries[i].c) + 1e-12);
}

TEST_CASE("critical count matches the winding number for a non-lattice map") {
    const EntireMap f(Polynomial({0.0, 0.5}), Polynomial({0.0, 1.0}), Polynomial::identity());  // z/2 + sin z
    const auto pts = critical_points(f, 20.0);
    CHECK(static_cast<int>(pts.size()) == winding_count(f, 20.0));
    for (const auto& c : pts) CHECK(std::abs(0.5 + std::cos(c)) < 1e-10);
}

TEST_CASE("critical count grows with the lattice rate under radius doubling") {
    const auto f = sine();
    for (double r : {10.0, 20.0, 40.0}) {
        const auto n = critical_points(f, r).size();
        // (k + 1/2) pi inside |z| < r
        std::size_t expected = 0;
        for (int k = -100; k < 100; ++k) expected += std::abs((k + 0.5) * kPi) < r ? 1 : 0;
        CHECK(n == expected);
    }
}

TEST_CASE("non-simple critical points are rejected") {
    const EntireMap f(Polynomial(), Polynomial({0.0, 0.0, 0.0, 1.0}), Polynomial::identity());  // sin^3
    CHECK_THROWS_AS(critical_data(f, 5.0), NonSimpleCriticalError);
}

TEST_CASE("tail bound dominates the brute-force tail sum") {
    // sin: |b| = 1 at (k + 1/2) pi
    const auto cd = critical_data(sine(), 10.0);
    double brute = 0;
    for (long k = 0; k < 1000000; ++k) {
        const double c = (k + 0.5) * kPi;
        if (c > 10.0) brute += 2.0 / (c * c * c);
    }
    CHECK(cd.tail_bound >= brute);
    CHECK(cd.tail_bound <= 4 * brute);

    // normalized landing map: brute force along every lattice line
    const auto L = landing_case(2.5);
    const auto cl = critical_data(L.map, 40.0);
    REQUIRE(!cl.lattice.empty());
    double brute2 = 0;
    for (const auto& line : cl.lattice)
        for (long m = -300000; m <= 300000; ++m) {
            const double r = std::abs(line.origin + double(m) * line.step);
            if (r > cl.radius) brute2 += std::abs(line.b) / (r * r * r);
        }
    CHECK(cl.tail_bound >= brute2);
    CHECK(cl.tail_bound <= 4 * brute2);
}

TEST_CASE("negated residue copy") {
    const auto cd = critical_data(sine(), 10.0);
    const auto bad = with_negated_residue(cd, 2);
    CHECK(bad.entries[2].b == -cd.entries[2].b);
    CHECK(bad.entries[1].b == cd.entries[1].b);
    CHECK_THROWS(with_negated_residue(cd, 99));
}

TEST_CASE("orbits against a hand-written iteration") {
    const auto f = EntireMap::sine_family(0.3, 0.7);
    const cplx z0(0.4, 0.2);
    const auto o = orbit(f, z0, 30);
    cplx z = z0, d = 1.0;
    for (std::size_t n = 0; n < o.points.size(); ++n) {
        // once a cycle is seen the orbit runs on the polished cycle (1e-9 snap)
        const bool snapped = o.cycle && n >= o.cycle->start;
        CHECK(std::abs(o.points[n] - z) < (snapped ? 1e-8 : 1e-12) * (1 + std::abs(z)));
        CHECK(std::abs(o.derivs[n] - d) < (snapped ? 1e-7 : 1e-10) * std::abs(d));
        d *= 0.7 * std::cos(z);
        z = 0.3 + 0.7 * std::sin(z);
    }
}

TEST_CASE("orbit detects attracting cycles and escape") {
    const auto f = EntireMap::sine_family(0.3, 0.7);
    const auto o = orbit(f, 0.5, 200);
    REQUIRE(o.cycle.has_value());
    CHECK(o.cycle->period == 1);
    CHECK(std::abs(o.cycle->multiplier) < 1);
    CHECK(o.boundedness == Boundedness::Bounded);

    const EntireMap g(Polynomial({0.0, 2.0}), Polynomial({0.0, 1.0}), Polynomial::identity());  // 2z + sin z
    const auto e = orbit(g, 1.0, 200, 1e6);
    CHECK(e.boundedness == Boundedness::Unbounded);
}

TEST_CASE("normalization conjugates and fixes 0 and 1") {
    const auto raw = EntireMap::sine_family(0.0, 2.0);
    const auto f = normalize(raw);
    CHECK(std::abs(f(0.0)) < 1e-10);
    CHECK(std::abs(f(1.0) - 1.0) < 1e-10);
    REQUIRE(f.normalization().has_value());
    const auto n = *f.normalization();
    for (cplx z : {cplx(0.3, 0.1), cplx(-0.4, 0.7)}) {
        const cplx lhs = n.scale * f(z) + n.shift;
        CHECK(std::abs(lhs - raw(n.scale * z + n.shift)) < 1e-10);
    }
    CHECK(std::abs(std::abs(n.scale) - 1.89549) < 1e-4);
}

TEST_CASE("landing parameters against a Newton solve") {
    // unknowns (a, b): a + b sin p = p (p fixed) and a + b sin(a + b) = p
    // (the critical value a + b lands on p), from a rough seed
    const double p = 2.5;
    double a = 5.0, b = -4.5;
    for (int it = 0; it < 60; ++it) {
        const double F1 = a + b * std::sin(p) - p, F2 = a + b * std::sin(a + b) - p;
        const double J11 = 1, J12 = std::sin(p);
        const double J21 = 1 + b * std::cos(a + b), J22 = std::sin(a + b) + b * std::cos(a + b);
        const double det = J11 * J22 - J12 * J21;
        a -= (F1 * J22 - J12 * F2) / det;
        b -= (J11 * F2 - J21 * F1) / det;
    }
    REQUIRE(std::abs(a + b - p) > 0.1);  // not the trivial branch
    const auto [ea, eb] = sine_family_landing(p);
    CHECK(std::abs(ea - a) < 1e-12);
    CHECK(std::abs(eb - b) < 1e-12);
    CHECK(std::abs(std::abs(b * std::cos(p)) - 3.708) < 1e-3);

    const auto L = landing_case(p);
    CHECK(std::abs(L.map(L.d1) - L.p) < 1e-12);
    CHECK(std::abs(L.map(L.p) - L.p) < 1e-12);
    CHECK(std::abs(L.map(0.0)) < 1e-12);
    CHECK(std::abs(L.map(1.0) - 1.0) < 1e-12);
    CHECK(std::abs(L.p.imag()) < 1e-15);
}

TEST_CASE("evaluate rejects overflow") {
    CHECK_THROWS_AS(sine().evaluate(cplx(0, 800), 0), RangeError);
}

}  // TEST_SUITE
