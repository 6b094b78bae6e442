// Shared small types for the DNLS asymptotics library: complex alias, a plain
// 2x2 complex matrix with the handful of operations the Riemann-Hilbert
// machinery needs, and the error taxonomy surfaced through the C API.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dnls {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

// Error codes shared between C++ exceptions and the extern-C surface.
enum class ErrCode : int {
    ok = 0,
    invalid_argument = 1,   // precondition violation (bad input)
    range = 2,              // outside a supported box / grid
    numeric = 3,            // quadrature / ODE / solver failure
    consistency = 4,        // an invariant check failed beyond tolerance
    domain = 5,             // mathematical domain error (pole, log of <= 0)
};

class Error : public std::runtime_error {
  public:
    Error(ErrCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrCode code() const { return code_; }

  private:
    ErrCode code_;
};

// Row-major 2x2 complex matrix. Deliberately tiny: the RHP layer only ever
// multiplies, inverts (via the determinant) and measures these.
struct Mat2 {
    cplx a11{0.0}, a12{0.0}, a21{0.0}, a22{0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx det() const { return a11 * a22 - a12 * a21; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }

    // Inverse through the adjugate; valid whenever det != 0 (the model
    // matrices all have det == 1, so this is exact up to rounding).
    Mat2 inv() const {
        const cplx d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    double frobenius() const {
        return std::sqrt(std::norm(a11) + std::norm(a12) + std::norm(a21) +
                         std::norm(a22));
    }
};

}  // namespace dnls
