#pragma once

#include <array>
#include <cmath>

#include "orthoglide/vec3.hpp"

namespace orthoglide {

/// Eigenvalues of a symmetric 3x3 matrix, descending, by the closed-form
/// trigonometric solution of the characteristic cubic. Branch-free except for
/// the clamp guards; the batch kernels evaluate exactly this function per lane
/// so scalar and SIMD paths agree.
inline std::array<double, 3> sym3x3_eigenvalues_closed(double s00, double s01, double s02,
                                                       double s11, double s12, double s22) {
    const double q = (s00 + s11 + s22) / 3.0;
    const double p1 = s01 * s01 + s02 * s02 + s12 * s12;
    const double d0 = s00 - q, d1 = s11 - q, d2 = s22 - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);

    // det(S - qI); exactly zero when p == 0 (S is then a multiple of I)
    const double det_b = d0 * (d1 * d2 - s12 * s12) - s01 * (s01 * d2 - s12 * s02) +
                         s02 * (s01 * s12 - d1 * s02);
    const double ps = std::fmax(p, 1e-100);
    const double r = std::fmin(1.0, std::fmax(-1.0, det_b / (2.0 * ps * ps * ps)));

    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931953;  // 2*pi/3
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + two_pi_3);
    const double e2 = 3.0 * q - e1 - e3;
    return {e1, e2, e3};
}

inline std::array<double, 3> sym_eigenvalues_closed(const Mat3& s) {
    return sym3x3_eigenvalues_closed(s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2));
}

struct SymEigen {
    std::array<double, 3> values{};  // descending
    std::array<Vec3, 3> vectors{};   // unit, vectors[k] pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric 3x3 matrix.
SymEigen sym_eigen3(const Mat3& s);

/// Singular values of a 3x3 matrix, descending, by one-sided Jacobi
/// (column orthogonalization; never forms M^T M).
std::array<double, 3> singular_values3(const Mat3& m);

/// Solve A x = b by partial-pivot Gaussian elimination.
/// Returns false when a pivot vanishes.
bool solve3(const Mat3& a, const Vec3& b, Vec3& x);

}  // namespace orthoglide
