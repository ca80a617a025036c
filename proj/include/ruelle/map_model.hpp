#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ruelle/common.hpp"
#include "ruelle/polynomial.hpp"

namespace ruelle {

// Affine conjugacy record: original coordinate = scale * z + shift.
struct Normalization {
    cplx scale{1.0};
    cplx shift{0.0};
};

// f(z) = P1(z) + P2(sin(P3(z))) with P2, P3 non-constant.
class EntireMap {
public:
    EntireMap(Polynomial p1, Polynomial p2, Polynomial p3,
              std::optional<Normalization> normalization = std::nullopt);

    // a + b sin z
    static EntireMap sine_family(cplx a, cplx b);

    const Polynomial& p1() const { return p1_; }
    const Polynomial& p2() const { return p2_; }
    const Polynomial& p3() const { return p3_; }
    const std::optional<Normalization>& normalization() const { return norm_; }

    cplx operator()(cplx z) const { return evaluate(z, 0); }
    // order 0, 1 or 2; throws RangeError on a non-finite result
    cplx evaluate(cplx z, int order) const;
    // {f, f', f''} in one pass (no finiteness check)
    std::array<cplx, 3> eval2(cplx z) const;

    // f'(z) * exp(-deg(P2) * |Im P3(z)|): same argument as f'(z) but finite far
    // from the real axis of P3. Used for winding numbers.
    cplx scaled_derivative(cplx z) const;

    bool p1_constant() const { return p1_.degree() <= 0; }
    bool p2_linear() const { return p2_.degree() == 1; }
    bool p3_linear() const { return p3_.degree() == 1; }

private:
    Polynomial p1_, p2_, p3_;
    Polynomial dp1_, dp2_, dp3_;
    std::optional<Normalization> norm_;
};

inline cplx evaluate(const EntireMap& f, cplx z, int order) { return f.evaluate(z, order); }

struct CriticalEntry {
    cplx c;  // critical point
    cplx d;  // critical value f(c)
    cplx b;  // residue 1/f''(c)
    int value_class = -1;
};

struct ValueClass {
    cplx value;
    std::vector<std::size_t> members;  // indices into CriticalData::entries
};

// One arithmetic progression origin + m * step (m in Z) of critical points
// sharing residue b and critical value d. Present only when the map has
// constant P1 and linear P3, where the progression is exact.
struct LatticeLine {
    cplx origin;
    cplx step;
    cplx b;
    cplx d;
    int value_class = -1;
};

struct CriticalData {
    EntireMap map;
    std::vector<CriticalEntry> entries;  // sorted by (|c|, arg c)
    double radius = 0;
    // bound on sum_{|c_i| > radius} |b_i| / |c_i|^3
    double tail_bound = 0;
    bool tail_bound_rigorous = false;
    std::vector<ValueClass> classes;
    std::vector<LatticeLine> lattice;
    // When true and the lattice is known, sums over critical points are
    // completed beyond `radius` in closed form.
    bool complete_tail = true;

    std::size_t q() const { return classes.size(); }
    bool tail_exact() const { return complete_tail && !lattice.empty(); }
    // index of the class with this value, -1 when none
    int class_of_value(cplx d) const;
};

struct CriticalSearchOptions {
    int retries = 4;
    Exec exec = Exec::parallel;
};

// Winding number of f' along |z| = radius (phase tracking with adaptive
// refinement). Throws RangeError when f' vanishes numerically on the circle.
int winding_count(const EntireMap& f, double radius);

// All zeros of f' in |z| < radius, Newton-refined, sorted by (|c|, arg c).
// The count is certified against winding_count.
std::vector<cplx> critical_points(const EntireMap& f, double radius,
                                  const CriticalSearchOptions& opts = {});

CriticalData critical_data(const EntireMap& f, double radius,
                           const CriticalSearchOptions& opts = {});

// max over a ring z = c + eps e^{it} of |(z - c) / f'(z) - b|
double residue_check(const EntireMap& f, cplx c, cplx b, double eps = 1e-4, int ring = 16);
double residue_check(const EntireMap& f, cplx c);

// Copy of cd with the residue of entry `index` negated (fault injection).
CriticalData with_negated_residue(CriticalData cd, std::size_t index);

// ---------------------------------------------------------------- orbits

enum class Boundedness { Bounded, Unbounded, Undecided };

struct Cycle {
    std::size_t start = 0;  // first orbit index on the cycle
    std::size_t period = 0;
    cplx multiplier;        // (f^period)' along the cycle
};

struct OrbitData {
    cplx start;
    std::vector<cplx> points;          // f^n(start), n = 0..N
    std::vector<cplx> derivs;          // (f^n)'(start)
    std::vector<double> log_abs_derivs;
    Boundedness boundedness = Boundedness::Undecided;
    double escape_radius = 1e6;
    std::optional<Cycle> cycle;
    bool overflow = false;
    // first index within 1e-8 of 0, 1 or an avoided point
    std::optional<std::size_t> degenerate_index;
};

// Iterates f from `start` for n_max steps. Once a recurrence within 1e-9 is
// seen, the cycle is polished by Newton on f^P(z) - z and the orbit continues
// periodically on the polished cycle.
OrbitData orbit(const EntireMap& f, cplx start, std::size_t n_max, double escape_radius = 1e6,
                std::span<const cplx> avoid = {});

// ---------------------------------------------------------- normalization

struct FixedPointSearch {
    double half_width = 8.0;
    double spacing = 0.5;
};

// Fixed points found by Newton from a square seed grid, sorted by
// (|z|, -Re z, -Im z).
std::vector<cplx> fixed_points(const EntireMap& f, const FixedPointSearch& search = {});

// A^{-1} o f o A with A(z) = (p1 - p0) z + p0, so the result fixes 0 and 1.
EntireMap normalize_with(const EntireMap& f, cplx p0, cplx p1);
// Identity when f already fixes 0 and 1, otherwise normalize_with the two
// first entries of fixed_points().
EntireMap normalize(const EntireMap& f, const FixedPointSearch& search = {});

// Parameters (a, b) of a + b sin z whose critical value a + b is mapped in
// one step onto the fixed point p (closed form).
std::pair<cplx, cplx> sine_family_landing(cplx p);

// The landing map a + b sin z for a real p, normalized by its two real fixed
// points of smallest modulus other than p. Real coefficients keep the real
// axis invariant in floating point, so the other critical orbit does not
// drift off it.
struct LandingCase {
    EntireMap raw;
    EntireMap map;
    cplx p;   // the repelling fixed point, normalized coordinates
    cplx d1;  // critical value landing on p, normalized coordinates
    cplx d2;  // the other critical value
};
LandingCase landing_case(double p);

}  // namespace ruelle
