#pragma once

#include <array>
#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

// Dense complex polynomial, coefficients in ascending order. Trailing zero
// coefficients are trimmed so degree() is exact.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs);

    static Polynomial constant(cplx c) { return Polynomial({c}); }
    static Polynomial identity() { return Polynomial({0.0, 1.0}); }

    const std::vector<cplx>& coeffs() const { return c_; }
    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    cplx coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : cplx{}; }

    cplx operator()(cplx z) const;
    // value, first and second derivative by a single Horner pass
    std::array<cplx, 3> eval2(cplx z) const;

    Polynomial derivative() const;
    // p(scale * z + shift)
    Polynomial compose_affine(cplx scale, cplx shift) const;
    Polynomial operator*(cplx s) const;
    Polynomial operator+(cplx s) const;

    // All complex roots (with multiplicity) by Aberth-Ehrlich iteration.
    // Throws EnumerationError when the iteration does not settle.
    std::vector<cplx> roots() const;

private:
    void trim();
    std::vector<cplx> c_;
};

}  // namespace ruelle
