#include "ruelle/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace ruelle {

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

cplx Polynomial::operator()(cplx z) const {
    cplx v{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + *it;
    return v;
}

std::array<cplx, 3> Polynomial::eval2(cplx z) const {
    cplx p{}, dp{}, ddp{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        ddp = ddp * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp, ddp};
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::compose_affine(cplx scale, cplx shift) const {
    // Horner in polynomial arithmetic: r <- r * (scale z + shift) + c_k
    std::vector<cplx> r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        std::vector<cplx> next(r.size() + 1);
        for (std::size_t j = 0; j < r.size(); ++j) {
            next[j] += r[j] * shift;
            next[j + 1] += r[j] * scale;
        }
        next[0] += *it;
        r = std::move(next);
    }
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(cplx s) const {
    auto c = c_;
    for (auto& v : c) v *= s;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(cplx s) const {
    auto c = c_;
    if (c.empty()) c.push_back(0.0);
    c[0] += s;
    return Polynomial(std::move(c));
}

std::vector<cplx> Polynomial::roots() const {
    const int n = degree();
    if (n <= 0) return {};
    if (n == 1) return {-c_[0] / c_[1]};

    // Cauchy bound for the initial circle.
    const cplx lead = c_.back();
    double bound = 0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c_[k] / lead));
    const double r0 = 0.5 * (1.0 + bound);

    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(r0, 2.0 * kPi * k / n + 0.4);

    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0;
        for (int k = 0; k < n; ++k) {
            const auto [p, dp, ddp] = eval2(z[k]);
            (void)ddp;
            if (p == cplx{}) continue;
            const cplx ratio = p / dp;
            cplx repulse{};
            for (int j = 0; j < n; ++j)
                if (j != k) repulse += 1.0 / (z[k] - z[j]);
            const cplx step = ratio / (1.0 - ratio * repulse);
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        if (max_step < 1e-15) return z;
    }
    // Accept a stalled iteration when the residuals are at rounding level.
    for (const auto& r : z) {
        double mag = 0, pw = 1;
        for (const auto& c : c_) {
            mag += std::abs(c) * pw;
            pw *= std::abs(r);
        }
        if (std::abs((*this)(r)) > 1e-9 * mag) throw EnumerationError("polynomial root iteration did not converge");
    }
    return z;
}

}  // namespace ruelle
