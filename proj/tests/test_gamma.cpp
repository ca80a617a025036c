#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ruelle/gamma.hpp"

using namespace ruelle;

namespace {

// ||gamma_a||_1 by nested adaptive Gauss-Kronrod quadrature in polar
// coordinates about the origin, split at the radii and angles of the poles.
double l1_oracle(cplx a) {
    using boost::math::quadrature::gauss_kronrod;
    const double ta = std::arg(a) < 0 ? std::arg(a) + 2 * kPi : std::arg(a);
    auto ring = [&](double r) {
        auto g = [&](double t) {
            const cplx z = std::polar(r, t);
            return std::abs((a - 1.0) / z - a / (z - 1.0) + 1.0 / (z - a));
        };
        double s = 0;
        for (auto [t0, t1] : {std::pair{0.0, ta}, std::pair{ta, 2 * kPi}})
            if (t1 > t0) s += gauss_kronrod<double, 61>::integrate(g, t0, t1, 12, 1e-8);
        return r * s;
    };
    const double ra = std::abs(a);
    const double lo = std::min(1.0, ra), hi = std::max(1.0, ra);
    double total = 0;
    for (auto [r0, r1] : {std::pair{0.0, lo}, std::pair{lo, hi}, std::pair{hi, 2 * hi}})
        if (r1 > r0) total += gauss_kronrod<double, 61>::integrate(ring, r0, r1, 12, 1e-7);
    // r = 2 hi / s on s in (0, 1]
    auto inverted = [&](double s) { return ring(2 * hi / s) * 2 * hi / (s * s); };
    total += gauss_kronrod<double, 61>::integrate(inverted, 0.0, 1.0, 12, 1e-7);
    return total;
}

}  // namespace

TEST_SUITE("gamma") {

TEST_CASE("gamma kernel partial fractions") {
    for (cplx a : {cplx(2.0, 0.0), cplx(0.4, 0.9), cplx(-1.3, -0.2)})
        for (cplx z : {cplx(0.3, 0.4), cplx(-2.0, 1.0), cplx(5.0, -3.0)}) {
            const cplx pf = (a - 1.0) / z - a / (z - 1.0) + 1.0 / (z - a);
            CHECK(std::abs(gamma_eval(a, z) - pf) < 1e-14 * (1 + std::abs(pf)));
        }
    CHECK_THROWS_AS(gamma_eval(0.0, cplx(0.5, 0.5)), ConfigError);
    CHECK_THROWS_AS(gamma_eval(1.0, cplx(0.5, 0.5)), ConfigError);
    CHECK_THROWS_AS(gamma_eval(cplx(2.0, 0.0), cplx(2.0, 0.0)), PoleError);
    CHECK_THROWS_AS(gamma_eval(cplx(2.0, 0.0), 0.0), PoleError);
}

TEST_CASE("combinations merge, drop zeros and reject degenerate bases") {
    GammaCombination g;
    g.add(cplx(0.5, 0.5), 1.0);
    g.add(cplx(0.5, 0.5) * (1 + 1e-12), 2.0);
    CHECK(g.size() == 1);
    CHECK(std::abs(g.coefficient(cplx(0.5, 0.5)) - 3.0) < 1e-15);
    g.add(cplx(0.5, 0.5), -3.0);
    CHECK(g.empty());
    CHECK_THROWS(g.add(1e-12, 1.0));
    CHECK_THROWS(g.add(1.0 + 1e-12, 1.0));
    const auto h = GammaCombination::single(2.0, 0.5) + GammaCombination::single(3.0);
    CHECK(std::abs(combo_eval(h, cplx(0.2, 0.7)) - 0.5 * gamma_eval(2.0, cplx(0.2, 0.7)) -
                   gamma_eval(3.0, cplx(0.2, 0.7))) < 1e-14);
    CHECK(combo_eval(GammaCombination(), 0.3) == cplx{});
}

TEST_CASE("l1 norm against nested double-exponential quadrature") {
    for (cplx a : {cplx(2.0, 0.0), cplx(0.4, 0.9)}) {
        const auto g = GammaCombination::single(a);
        const auto est = l1_norm(g, auto_config(g));
        const double ref = l1_oracle(a);
        INFO("a = " << a << " estimate " << est.value << " +- " << est.error_bound << " oracle " << ref);
        CHECK(std::abs(est.value - ref) <= est.error_bound);
        CHECK(std::abs(est.value - ref) <= 1e-3 * ref);
    }
}

TEST_CASE("l1 norm symmetries") {
    // gamma_{1-a}(1-z) = -gamma_a(z) and gamma_{conj a}(conj z) = conj gamma_a(z)
    const cplx a(0.4, 0.9);
    const auto n = l1_norm(GammaCombination::single(a), auto_config(GammaCombination::single(a)));
    for (cplx b : {1.0 - a, std::conj(a)}) {
        const auto m = l1_norm(GammaCombination::single(b), auto_config(GammaCombination::single(b)));
        CHECK(std::abs(n.value - m.value) <= n.error_bound + m.error_bound);
    }
}

TEST_CASE("plane integrals with known values") {
    QuadratureConfig cfg;
    cfg.far_radius = 6;
    const auto g1 = integrate_plane([](cplx z) { return std::exp(-std::norm(z)); }, {}, cfg);
    CHECK(std::abs(g1.value - kPi) < 1e-8);
    const auto g2 = integrate_plane([](cplx z) { return 1.0 / ((1 + std::norm(z)) * (1 + std::norm(z))); }, {}, cfg);
    CHECK(std::abs(g2.value - kPi) < 1e-6);
    // integrable pole at the origin: int e^{-r^2} / r dA = pi^{3/2}
    const auto g3 = integrate_plane([](cplx z) { return std::exp(-std::norm(z)) / std::abs(z); }, {0.0}, cfg);
    CHECK(std::abs(g3.value - std::pow(kPi, 1.5)) < 1e-6);
    const auto c = integrate_plane_complex([](cplx z) { return cplx(1, 2) * std::exp(-std::norm(z)); }, {}, cfg);
    CHECK(std::abs(c.value - cplx(1, 2) * kPi) < 1e-8);
}

TEST_CASE("serial and parallel quadrature agree bit for bit") {
    GammaCombination g = GammaCombination::single(cplx(0.4, 0.9));
    g.add(cplx(-0.7, 0.3), cplx(0.2, -0.5));
    const auto cfg = auto_config(g);
    const auto s = l1_norm(g, cfg, Exec::serial);
    const auto p = l1_norm(g, cfg, Exec::parallel);
    CHECK(s.value == p.value);
    CHECK(s.error_bound == p.error_bound);
}

TEST_CASE("error bound shrinks under refinement") {
    const auto g = GammaCombination::single(cplx(0.4, 0.9));
    auto cfg = auto_config(g);
    double prev = INFINITY;
    for (int cells : {16, 32, 64}) {
        cfg.cells_per_patch = cells;
        cfg.mid_grid = cells / 4;
        const auto e = l1_norm(g, cfg);
        CHECK(e.error_bound < prev);
        prev = e.error_bound;
    }
}

TEST_CASE("quadrature config validation") {
    const std::vector<cplx> poles{0.0, 1.0, cplx(0.3, 0.0)};
    QuadratureConfig cfg;
    cfg.pole_radius = 0.25;
    CHECK_THROWS_AS(validate(cfg, poles), ConfigError);
    CHECK_NOTHROW(validate(auto_config(poles), poles));
    CHECK(l1_norm(GammaCombination(), cfg).value == 0.0);
}

TEST_CASE("Beltrami pullback") {
    const auto f = EntireMap::sine_family(0.0, 1.0);
    auto mu = [](cplx w) { return std::polar(0.5, w.real()); };
    const cplx z(0.3, 0.2);
    const cplx v = beltrami_pullback(mu, f, z);
    CHECK(std::abs(std::abs(v) - 0.5) < 1e-15);
    const cplx d = std::cos(z);
    CHECK(std::abs(v - mu(std::sin(z)) * std::conj(d) / d) < 1e-15);
    CHECK_THROWS_AS(beltrami_pullback(mu, f, kPi / 2), DegeneracyError);
}

TEST_CASE("Gauss-Legendre exactness") {
    std::vector<double> x, w;
    gauss_legendre(6, x, w);
    for (int k = 0; k <= 11; ++k) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
        const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
        CHECK(std::abs(s - exact) < 1e-14);
    }
}

}  // TEST_SUITE
