#pragma once

#include <functional>
#include <vector>

#include "ruelle/common.hpp"
#include "ruelle/map_model.hpp"

namespace ruelle {

// gamma_a(z) = a (a - 1) / (z (z - 1) (z - a)). Throws ConfigError for a in
// {0, 1} and PoleError when z is within 1e-12 of a pole.
cplx gamma_eval(cplx a, cplx z);

struct GammaTerm {
    cplx a;
    cplx w;
};

// sum_j w_j gamma_{a_j}. Bases closer than 1e-9 (relative) merge on insertion;
// bases within 1e-9 of 0 or 1 are rejected. Terms whose merged weight is
// exactly zero are dropped.
class GammaCombination {
public:
    GammaCombination() = default;
    static GammaCombination single(cplx a, cplx w = 1.0);

    void add(cplx a, cplx w);
    void add(const GammaCombination& other, cplx scale = 1.0);

    const std::vector<GammaTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // weight on the base matching a (0 when absent)
    cplx coefficient(cplx a) const;
    GammaCombination scaled(cplx s) const;

private:
    std::vector<GammaTerm> terms_;
};

GammaCombination operator+(const GammaCombination& x, const GammaCombination& y);

cplx combo_eval(const GammaCombination& phi, cplx z);

// Partition-of-unity quadrature of |phi| over the plane. A smooth cutoff of
// radius pole_radius around every pole is integrated in polar coordinates
// about that pole; the remainder is integrated in polar coordinates about the
// origin out to far_radius and by the inversion r = far_radius / s beyond.
struct QuadratureConfig {
    double pole_radius = 0.25;
    double far_radius = 8.0;
    int cells_per_patch = 48;  // angular nodes per pole patch, >= 16
    int mid_grid = 8;          // outer-field nodes per local feature length, >= 4
};

struct L1Estimate {
    double value = 0;
    double error_bound = 0;  // |fine - half-resolution| plus rounding
};

std::vector<cplx> poles_of(const GammaCombination& phi);

// Largest admissible pole_radius (capped at 0.25) and far_radius
// max(4, 2.5 max |pole|) for these poles.
QuadratureConfig auto_config(const std::vector<cplx>& poles);
QuadratureConfig auto_config(const GammaCombination& phi);

// Throws ConfigError when patches overlap or far_radius is too small.
void validate(const QuadratureConfig& cfg, const std::vector<cplx>& poles);

L1Estimate l1_norm(const GammaCombination& phi, const QuadratureConfig& cfg, Exec exec = Exec::parallel);

// Integral over the plane of a scalar field with integrable singularities at
// `poles` (same scheme as l1_norm; the field must decay like |z|^-3).
L1Estimate integrate_plane(const std::function<double(cplx)>& field, const std::vector<cplx>& poles,
                           const QuadratureConfig& cfg, Exec exec = Exec::parallel);

struct ComplexIntegral {
    cplx value;
    double error_bound = 0;
};
ComplexIntegral integrate_plane_complex(const std::function<cplx(cplx)>& field, const std::vector<cplx>& poles,
                                        const QuadratureConfig& cfg, Exec exec = Exec::parallel);

// mu(f(z)) conj(f'(z)) / f'(z). Throws DegeneracyError at a critical point.
cplx beltrami_pullback(const std::function<cplx(cplx)>& mu, const EntireMap& f, cplx z);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace ruelle
