#include <doctest.h>

#include <cmath>

#include "ruelle/ruelle.hpp"

using namespace ruelle;

namespace {

const CriticalData& sine_cd() {
    static const CriticalData cd = critical_data(normalize(EntireMap::sine_family(0.3, 0.7)), 40.0);
    return cd;
}

}  // namespace

TEST_SUITE("ruelle") {

TEST_CASE("lattice gamma sum against a brute-force sum") {
    for (cplx a : {cplx(0.4, 0.9), cplx(2.0, -1.0)}) {
        const cplx origin(0.3, 0.2), step(2.1, 0.4);
        CompensatedSum<cplx> s;
        for (long m = 1000000; m >= 1; --m) {
            s += gamma_eval(a, origin + double(m) * step);
            s += gamma_eval(a, origin - double(m) * step);
        }
        s += gamma_eval(a, origin);
        const cplx closed = lattice_gamma_sum(a, origin, step);
        CHECK(std::abs(closed - s.value()) < 1e-10 * std::abs(closed));
    }
}

TEST_CASE("class sums without completion are the explicit critical sums") {
    auto cd = sine_cd();
    cd.complete_tail = false;
    const cplx a(0.4, 0.9);
    std::vector<cplx> expect(cd.q());
    for (const auto& e : cd.entries) expect[e.value_class] += e.b * gamma_eval(a, e.c);
    const auto got = class_sums(cd, a);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-13);
}

TEST_CASE("closed form against direct branch summation") {
    const auto& cd = sine_cd();
    for (cplx a : {cplx(0.4, 0.9), cplx(-1.2, -1.1), cplx(2.5, 0.3)}) {
        const auto image = apply(cd, GammaCombination::single(a));
        for (cplx z : {cplx(0.7, -0.4), cplx(-1.1, 1.6)}) {
            const auto d = apply_direct(cd.map, [&](cplx y) { return gamma_eval(a, y); }, z);
            CHECK(std::abs(combo_eval(image, z) - d.value) < 1e-6 * std::abs(d.value));
        }
    }
}

TEST_CASE("truncated critical sum stays within the reported tail") {
    auto cut = sine_cd();
    cut.complete_tail = false;
    const auto phi = GammaCombination::single(cplx(0.4, 0.9));
    const auto full = apply(sine_cd(), phi), trunc = apply(cut, phi);
    double moved = 0;
    for (const auto& t : full.terms()) moved += std::abs(t.w - trunc.coefficient(t.a));
    CHECK(moved <= apply_tail(cut, phi));
    CHECK(apply_tail(sine_cd(), phi) < 1e-10);
}

TEST_CASE("preimages solve f(y) = z") {
    const auto& f = sine_cd().map;
    const cplx z(0.7, -0.4);
    const auto ys = preimages(f, z, {20, true});
    CHECK(ys.size() == 82);
    for (const auto& y : ys) CHECK(std::abs(f(y) - z) < 1e-10);
}

TEST_CASE("modulus operator weights") {
    const auto& f = sine_cd().map;
    const cplx z(0.7, -0.4);
    const BranchWindow win{30, true};
    auto phi = [](cplx y) { return cplx(1.0 / (1.0 + std::norm(y)), 0.0); };
    const auto d = apply_direct(f, phi, z, win, {1, 1});
    CompensatedSum<cplx> s;
    for (const auto& y : preimages(f, z, win)) s += phi(y) / std::norm(f.evaluate(y, 1));
    CHECK(std::abs(d.value - s.value()) < 1e-13 * std::abs(d.value));
    CHECK(d.value.imag() == doctest::Approx(0.0));
    CHECK_THROWS_AS(apply_direct(f, phi, z, win, {0, 2}), UnsupportedError);
}

TEST_CASE("iterate is repeated apply") {
    const auto& cd = sine_cd();
    const cplx a(0.4, 0.9);
    const auto i0 = iterate(cd, a, 0);
    CHECK(i0.size() == 1);
    CHECK(i0.coefficient(a) == cplx(1.0));
    auto g = GammaCombination::single(a);
    for (int n = 1; n <= 3; ++n) {
        g = apply(cd, g);
        const auto it = iterate(cd, a, n);
        CHECK(it.size() == g.size());
        for (const auto& t : g.terms()) CHECK(std::abs(it.coefficient(t.a) - t.w) <= 1e-14 * std::abs(t.w));
    }
}

TEST_CASE("serial and parallel paths agree") {
    const auto& cd = sine_cd();
    const auto phi = GammaCombination::single(cplx(-0.7, 0.3));
    const auto s = apply(cd, phi, Exec::serial), p = apply(cd, phi, Exec::parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.terms()[i].w == p.terms()[i].w);
    auto g = [](cplx y) { return gamma_eval(cplx(-0.7, 0.3), y); };
    CHECK(apply_direct(cd.map, g, cplx(0.2, 0.5), {}, {2, 0}, Exec::serial).value ==
          apply_direct(cd.map, g, cplx(0.2, 0.5), {}, {2, 0}, Exec::parallel).value);
}

TEST_CASE("operator preconditions") {
    const auto raw = critical_data(EntireMap::sine_family(0.3, 0.7), 10.0);
    CHECK_THROWS_AS(apply(raw, GammaCombination::single(cplx(0.4, 0.9))), PreconditionError);
    const auto& cd = sine_cd();
    // base at a critical point: f'(a) = 0
    CHECK_THROWS_AS(apply(cd, GammaCombination::single(cd.entries[0].c)), DegeneracyError);
    auto g = [](cplx y) { return gamma_eval(cplx(0.4, 0.9), y); };
    CHECK_THROWS_AS(apply_direct(cd.map, g, cd.classes[0].value), DegeneracyError);
    const EntireMap h(Polynomial({0.0, 0.5}), Polynomial({0.0, 1.0}), Polynomial::identity());
    CHECK_THROWS_AS(apply_direct(h, g, 0.3), UnsupportedError);
    CHECK(apply(cd, GammaCombination()).empty());
}

}  // TEST_SUITE
