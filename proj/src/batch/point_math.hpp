#pragma once

// Shared scalar per-point math for the batch kernels. The AVX2 kernel mirrors
// these expressions operation for operation (both translation units build with
// -ffp-contract=off), so scalar and SIMD lanes agree bitwise.

#include <cmath>

#include "orthoglide/batch.hpp"
#include "orthoglide/linalg3.hpp"

namespace orthoglide::batch::detail {

// Relative slack on w <= L^2; must match kin::try_inverse_kinematics.
constexpr double kReachSlack = 1e-12;

struct PointCore {
    bool reachable = false;     // all three legs
    double rho[3]{};            // minus-branch joint values (reach-clamped)
    double eta[3]{};            // = sqrt(L^2 - w), >= 0 on the minus branch
    double det_a = 0.0;         // length^3
    double det_b = 0.0;         // length^3
    double ds = 0.0;            // det_a / L^3
    double k00 = 0.0, k01 = 0.0, k02 = 0.0, k11 = 0.0, k12 = 0.0, k22 = 0.0;  // K = (J*ds)(J*ds)^T
};

inline PointCore compute_point(const KernelGeometry& g, double x, double y, double z) {
    PointCore pc;
    double gx[3], gy[3], gz[3];  // strut vectors c_i - b_i
    bool reach = true;
    for (int i = 0; i < 3; ++i) {
        const double cx = x + g.dx[i];
        const double cy = y + g.dy[i];
        const double cz = z + g.dz[i];
        const double mx = cx - g.ax[i];
        const double my = cy - g.ay[i];
        const double mz = cz - g.az[i];
        const double u = mx * g.ex[i] + my * g.ey[i] + mz * g.ez[i];
        const double mm = mx * mx + my * my + mz * mz;
        const double w = mm - u * u;
        reach = reach && (w <= g.L2 * (1.0 + kReachSlack));
        const double wc = std::fmin(w, g.L2);
        const double s = std::sqrt(g.L2 - wc);
        pc.rho[i] = u - s;
        pc.eta[i] = s;
        gx[i] = mx - pc.rho[i] * g.ex[i];
        gy[i] = my - pc.rho[i] * g.ey[i];
        gz[i] = mz - pc.rho[i] * g.ez[i];
    }
    pc.reachable = reach;

    pc.det_a = gx[0] * (gy[1] * gz[2] - gz[1] * gy[2]) - gy[0] * (gx[1] * gz[2] - gz[1] * gx[2]) +
               gz[0] * (gx[1] * gy[2] - gy[1] * gx[2]);
    pc.det_b = (pc.eta[0] * pc.eta[1]) * pc.eta[2];
    pc.ds = pc.det_a * g.inv_L3;

    // Columns of det(A)*A^-1 are the row cross products; J~ = det(A)*J/L^3
    // has columns (g_j x g_k) * eta_i / L^3.
    const double c0x = gy[1] * gz[2] - gz[1] * gy[2];
    const double c0y = gz[1] * gx[2] - gx[1] * gz[2];
    const double c0z = gx[1] * gy[2] - gy[1] * gx[2];
    const double c1x = gy[2] * gz[0] - gz[2] * gy[0];
    const double c1y = gz[2] * gx[0] - gx[2] * gz[0];
    const double c1z = gx[2] * gy[0] - gy[2] * gx[0];
    const double c2x = gy[0] * gz[1] - gz[0] * gy[1];
    const double c2y = gz[0] * gx[1] - gx[0] * gz[1];
    const double c2z = gx[0] * gy[1] - gy[0] * gx[1];

    const double f0 = pc.eta[0] * g.inv_L3;
    const double f1 = pc.eta[1] * g.inv_L3;
    const double f2 = pc.eta[2] * g.inv_L3;
    const double j0x = c0x * f0, j0y = c0y * f0, j0z = c0z * f0;
    const double j1x = c1x * f1, j1y = c1y * f1, j1z = c1z * f1;
    const double j2x = c2x * f2, j2y = c2y * f2, j2z = c2z * f2;

    pc.k00 = j0x * j0x + j1x * j1x + j2x * j2x;
    pc.k01 = j0x * j0y + j1x * j1y + j2x * j2y;
    pc.k02 = j0x * j0z + j1x * j1z + j2x * j2z;
    pc.k11 = j0y * j0y + j1y * j1y + j2y * j2y;
    pc.k12 = j0y * j0z + j1y * j1z + j2y * j2z;
    pc.k22 = j0z * j0z + j1z * j1z + j2z * j2z;
    return pc;
}

/// All eigenvalues of the symmetric matrix nonnegative, via the signs of the
/// characteristic-polynomial coefficients (valid because eigenvalues are real).
inline bool psd3(double m00, double m01, double m02, double m11, double m12, double m22) {
    const double tr = (m00 + m11) + m22;
    const double minor2 = ((m00 * m11 - m01 * m01) + (m00 * m22 - m02 * m02)) +
                          (m11 * m22 - m12 * m12);
    const double det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                       m02 * (m01 * m12 - m11 * m02);
    return tr >= 0.0 && minor2 >= 0.0 && det >= 0.0;
}

/// psi_lo <= psi_i <= psi_hi for all i, as two PSD tests on shifted K.
inline bool psi_within(const PointCore& pc, double psi_lo, double psi_hi) {
    const double al = psi_lo * pc.ds;
    const double bl = psi_hi * pc.ds;
    const double a = al * al;
    const double b = bl * bl;
    const bool low_ok = psd3(pc.k00 - a, pc.k01, pc.k02, pc.k11 - a, pc.k12, pc.k22 - a);
    const bool high_ok = psd3(b - pc.k00, -pc.k01, -pc.k02, b - pc.k11, -pc.k12, b - pc.k22);
    return low_ok && high_ok;
}

inline unsigned char predicate_flags(const PredicateParams& p, double x, double y, double z) {
    const PointCore pc = compute_point(p.geom, x, y, z);
    unsigned char flags = 0;
    if (pc.reachable) flags |= kReachable;
    bool limits_ok = true;
    for (int i = 0; i < 3; ++i)
        limits_ok = limits_ok && (pc.rho[i] >= p.lim_lo[i] && pc.rho[i] <= p.lim_hi[i]);
    if (limits_ok) flags |= kWithinLimits;
    if (psi_within(pc, p.psi_lo, p.psi_hi)) flags |= kPsiOk;
    const double eta_min = std::fmin(pc.eta[0], std::fmin(pc.eta[1], pc.eta[2]));
    if (eta_min >= p.min_eta) flags |= kEtaOk;
    if (pc.det_a * p.geom.mode_sign >= p.min_det_a) flags |= kDetAOk;

    bool feasible = pc.reachable;
    if (p.check_limits) feasible = feasible && limits_ok;
    if (p.check_psi) feasible = feasible && (flags & kPsiOk);
    feasible = feasible && (flags & kEtaOk) && (flags & kDetAOk);
    if (feasible) flags |= kFeasible;
    return flags;
}

inline void quantities_at(const KernelGeometry& g, double x, double y, double z, std::size_t i,
                          const QuantityView& out) {
    const PointCore pc = compute_point(g, x, y, z);
    out.reachable[i] = pc.reachable ? 1 : 0;
    for (int k = 0; k < 3; ++k) {
        out.rho[k][i] = pc.rho[k];
        out.eta[k][i] = pc.eta[k];
    }
    out.det_a[i] = pc.det_a;
    out.det_b[i] = pc.det_b;
    const auto lam = sym3x3_eigenvalues_closed(pc.k00, pc.k01, pc.k02, pc.k11, pc.k12, pc.k22);
    const double s_max = std::sqrt(std::fmax(lam[0], 0.0));
    const double s_min = std::sqrt(std::fmax(lam[2], 0.0));
    const double abs_ds = std::fabs(pc.ds);
    out.psi_max[i] = s_max / abs_ds;
    out.psi_min[i] = s_min / abs_ds;
    out.kappa_standard[i] = s_max / s_min;
}

}  // namespace orthoglide::batch::detail
