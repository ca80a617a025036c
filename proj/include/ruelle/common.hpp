#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruelle {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. Every numerical failure mode the library can report has
// its own type so callers (and the CLI) can map them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct EnumerationError : Error { using Error::Error; };
struct NonSimpleCriticalError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct ConditioningError : Error {
    ConditioningError(const std::string& what, double cond)
        : Error(what), condition(cond) {}
    double condition;
};

// Raised when a gamma kernel is evaluated on one of its poles.
struct PoleError : Error {
    PoleError(const std::string& what, cplx pole_at) : Error(what), pole(pole_at) {}
    cplx pole;
};

// Neumaier-compensated accumulator. Summation order is the call order, so a
// fixed call order gives bit-reproducible results.
namespace detail {
struct NeumaierPart {
    double s = 0, c = 0;
    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};
}  // namespace detail

template <class T>
class CompensatedSum;

template <>
class CompensatedSum<double> {
public:
    CompensatedSum& operator+=(double v) {
        part_.add(v);
        return *this;
    }
    double value() const { return part_.value(); }

private:
    detail::NeumaierPart part_;
};

template <>
class CompensatedSum<cplx> {
public:
    CompensatedSum& operator+=(cplx v) {
        re_.add(v.real());
        im_.add(v.imag());
        return *this;
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    detail::NeumaierPart re_, im_;
};

template <class T, class Range>
T compensated_sum(const Range& values) {
    CompensatedSum<T> acc;
    for (const auto& v : values) acc += v;
    return acc.value();
}

// Kernels that loop over independent cells take an execution policy. Both
// paths write per-cell partials into an indexed buffer that is then reduced
// serially, so the two policies give identical bits.
enum class Exec { serial, parallel };

// Exceptions must not cross an OpenMP region boundary. Loop bodies run
// through guard(i, body); the exception of the lowest index is rethrown
// after the join, which is the one the serial path would have raised.
class LoopErrors {
public:
    template <class Body>
    void guard(long i, Body&& body) noexcept {
        try {
            body();
        } catch (...) {
#pragma omp critical(ruelle_loop_errors)
            if (i < index_) {
                index_ = i;
                error_ = std::current_exception();
            }
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    long index_ = std::numeric_limits<long>::max();
    std::exception_ptr error_;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace ruelle
