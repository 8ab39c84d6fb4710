// AVX2 variants of the batch kernels, four points per iteration. Expressions
// mirror point_math.hpp operation for operation (this TU builds with
// -ffp-contract=off and no FMA intrinsics), so lanes agree bitwise with the
// scalar kernel; the remainder goes through the scalar per-point helpers.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "point_math.hpp"

namespace orthoglide::batch {

namespace {

using detail::kReachSlack;

inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
    return _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

inline __m256d neg(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }

struct CoreVec {
    __m256d reach_mask;
    __m256d rho[3], eta[3];
    __m256d det_a, det_b, ds;
    __m256d k00, k01, k02, k11, k12, k22;
};

inline CoreVec compute_core(const KernelGeometry& g, __m256d x, __m256d y, __m256d z) {
    CoreVec cv;
    const __m256d l2 = _mm256_set1_pd(g.L2);
    const __m256d reach_thr = _mm256_set1_pd(g.L2 * (1.0 + kReachSlack));
    const __m256d inv_l3 = _mm256_set1_pd(g.inv_L3);
    __m256d reach = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    __m256d gx[3], gy[3], gz[3];
    for (int i = 0; i < 3; ++i) {
        const __m256d ex = _mm256_set1_pd(g.ex[i]);
        const __m256d ey = _mm256_set1_pd(g.ey[i]);
        const __m256d ez = _mm256_set1_pd(g.ez[i]);
        const __m256d cx = _mm256_add_pd(x, _mm256_set1_pd(g.dx[i]));
        const __m256d cy = _mm256_add_pd(y, _mm256_set1_pd(g.dy[i]));
        const __m256d cz = _mm256_add_pd(z, _mm256_set1_pd(g.dz[i]));
        const __m256d mx = _mm256_sub_pd(cx, _mm256_set1_pd(g.ax[i]));
        const __m256d my = _mm256_sub_pd(cy, _mm256_set1_pd(g.ay[i]));
        const __m256d mz = _mm256_sub_pd(cz, _mm256_set1_pd(g.az[i]));
        const __m256d u = dot3(mx, my, mz, ex, ey, ez);
        const __m256d mm = dot3(mx, my, mz, mx, my, mz);
        const __m256d w = _mm256_sub_pd(mm, _mm256_mul_pd(u, u));
        reach = _mm256_and_pd(reach, _mm256_cmp_pd(w, reach_thr, _CMP_LE_OQ));
        const __m256d wc = _mm256_min_pd(w, l2);
        const __m256d s = _mm256_sqrt_pd(_mm256_sub_pd(l2, wc));
        cv.rho[i] = _mm256_sub_pd(u, s);
        cv.eta[i] = s;
        gx[i] = _mm256_sub_pd(mx, _mm256_mul_pd(cv.rho[i], ex));
        gy[i] = _mm256_sub_pd(my, _mm256_mul_pd(cv.rho[i], ey));
        gz[i] = _mm256_sub_pd(mz, _mm256_mul_pd(cv.rho[i], ez));
    }
    cv.reach_mask = reach;

    auto cross_x = [](__m256d ay, __m256d az, __m256d by, __m256d bz) {
        return _mm256_sub_pd(_mm256_mul_pd(ay, bz), _mm256_mul_pd(az, by));
    };
    const __m256d c0x = cross_x(gy[1], gz[1], gy[2], gz[2]);
    const __m256d c0y = cross_x(gz[1], gx[1], gz[2], gx[2]);
    const __m256d c0z = cross_x(gx[1], gy[1], gx[2], gy[2]);
    cv.det_a = _mm256_add_pd(
        _mm256_sub_pd(_mm256_mul_pd(gx[0], c0x),
                      _mm256_mul_pd(gy[0], cross_x(gx[1], gz[1], gx[2], gz[2]))),
        _mm256_mul_pd(gz[0], c0z));
    cv.det_b = _mm256_mul_pd(_mm256_mul_pd(cv.eta[0], cv.eta[1]), cv.eta[2]);
    cv.ds = _mm256_mul_pd(cv.det_a, inv_l3);

    const __m256d c1x = cross_x(gy[2], gz[2], gy[0], gz[0]);
    const __m256d c1y = cross_x(gz[2], gx[2], gz[0], gx[0]);
    const __m256d c1z = cross_x(gx[2], gy[2], gx[0], gy[0]);
    const __m256d c2x = cross_x(gy[0], gz[0], gy[1], gz[1]);
    const __m256d c2y = cross_x(gz[0], gx[0], gz[1], gx[1]);
    const __m256d c2z = cross_x(gx[0], gy[0], gx[1], gy[1]);

    const __m256d f0 = _mm256_mul_pd(cv.eta[0], inv_l3);
    const __m256d f1 = _mm256_mul_pd(cv.eta[1], inv_l3);
    const __m256d f2 = _mm256_mul_pd(cv.eta[2], inv_l3);
    const __m256d j0x = _mm256_mul_pd(c0x, f0), j0y = _mm256_mul_pd(c0y, f0),
                  j0z = _mm256_mul_pd(c0z, f0);
    const __m256d j1x = _mm256_mul_pd(c1x, f1), j1y = _mm256_mul_pd(c1y, f1),
                  j1z = _mm256_mul_pd(c1z, f1);
    const __m256d j2x = _mm256_mul_pd(c2x, f2), j2y = _mm256_mul_pd(c2y, f2),
                  j2z = _mm256_mul_pd(c2z, f2);

    cv.k00 = dot3(j0x, j1x, j2x, j0x, j1x, j2x);
    cv.k01 = dot3(j0x, j1x, j2x, j0y, j1y, j2y);
    cv.k02 = dot3(j0x, j1x, j2x, j0z, j1z, j2z);
    cv.k11 = dot3(j0y, j1y, j2y, j0y, j1y, j2y);
    cv.k12 = dot3(j0y, j1y, j2y, j0z, j1z, j2z);
    cv.k22 = dot3(j0z, j1z, j2z, j0z, j1z, j2z);
    return cv;
}

inline __m256d psd3_mask(__m256d m00, __m256d m01, __m256d m02, __m256d m11, __m256d m12,
                         __m256d m22) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d tr = _mm256_add_pd(_mm256_add_pd(m00, m11), m22);
    const __m256d minor2 = _mm256_add_pd(
        _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(m00, m11), _mm256_mul_pd(m01, m01)),
                      _mm256_sub_pd(_mm256_mul_pd(m00, m22), _mm256_mul_pd(m02, m02))),
        _mm256_sub_pd(_mm256_mul_pd(m11, m22), _mm256_mul_pd(m12, m12)));
    const __m256d det = _mm256_add_pd(
        _mm256_sub_pd(
            _mm256_mul_pd(m00, _mm256_sub_pd(_mm256_mul_pd(m11, m22), _mm256_mul_pd(m12, m12))),
            _mm256_mul_pd(m01, _mm256_sub_pd(_mm256_mul_pd(m01, m22), _mm256_mul_pd(m12, m02)))),
        _mm256_mul_pd(m02, _mm256_sub_pd(_mm256_mul_pd(m01, m12), _mm256_mul_pd(m11, m02))));
    return _mm256_and_pd(_mm256_and_pd(_mm256_cmp_pd(tr, zero, _CMP_GE_OQ),
                                       _mm256_cmp_pd(minor2, zero, _CMP_GE_OQ)),
                         _mm256_cmp_pd(det, zero, _CMP_GE_OQ));
}

inline __m256d psi_within_mask(const CoreVec& cv, double psi_lo, double psi_hi) {
    const __m256d al = _mm256_mul_pd(_mm256_set1_pd(psi_lo), cv.ds);
    const __m256d bl = _mm256_mul_pd(_mm256_set1_pd(psi_hi), cv.ds);
    const __m256d a = _mm256_mul_pd(al, al);
    const __m256d b = _mm256_mul_pd(bl, bl);
    const __m256d low = psd3_mask(_mm256_sub_pd(cv.k00, a), cv.k01, cv.k02,
                                  _mm256_sub_pd(cv.k11, a), cv.k12, _mm256_sub_pd(cv.k22, a));
    const __m256d high = psd3_mask(_mm256_sub_pd(b, cv.k00), neg(cv.k01), neg(cv.k02),
                                   _mm256_sub_pd(b, cv.k11), neg(cv.k12), _mm256_sub_pd(b, cv.k22));
    return _mm256_and_pd(low, high);
}

}  // namespace

void predicate_kernel_avx2(const PredicateParams& params, const double* px, const double* py,
                           const double* pz, std::size_t n, unsigned char* flags) {
    const std::size_t vec_n = n - n % 4;
    for (std::size_t i = 0; i < vec_n; i += 4) {
        const __m256d x = _mm256_loadu_pd(px + i);
        const __m256d y = _mm256_loadu_pd(py + i);
        const __m256d z = _mm256_loadu_pd(pz + i);
        const CoreVec cv = compute_core(params.geom, x, y, z);

        __m256d limits = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (int leg = 0; leg < 3; ++leg) {
            limits = _mm256_and_pd(
                limits, _mm256_cmp_pd(cv.rho[leg], _mm256_set1_pd(params.lim_lo[leg]), _CMP_GE_OQ));
            limits = _mm256_and_pd(
                limits, _mm256_cmp_pd(cv.rho[leg], _mm256_set1_pd(params.lim_hi[leg]), _CMP_LE_OQ));
        }
        const __m256d psi = psi_within_mask(cv, params.psi_lo, params.psi_hi);
        const __m256d eta_min = _mm256_min_pd(cv.eta[0], _mm256_min_pd(cv.eta[1], cv.eta[2]));
        const __m256d eta_ok =
            _mm256_cmp_pd(eta_min, _mm256_set1_pd(params.min_eta), _CMP_GE_OQ);
        const __m256d det_ok = _mm256_cmp_pd(
            _mm256_mul_pd(cv.det_a, _mm256_set1_pd(params.geom.mode_sign)),
            _mm256_set1_pd(params.min_det_a), _CMP_GE_OQ);

        __m256d feasible = cv.reach_mask;
        if (params.check_limits) feasible = _mm256_and_pd(feasible, limits);
        if (params.check_psi) feasible = _mm256_and_pd(feasible, psi);
        feasible = _mm256_and_pd(feasible, _mm256_and_pd(eta_ok, det_ok));

        const int m_reach = _mm256_movemask_pd(cv.reach_mask);
        const int m_lim = _mm256_movemask_pd(limits);
        const int m_psi = _mm256_movemask_pd(psi);
        const int m_eta = _mm256_movemask_pd(eta_ok);
        const int m_det = _mm256_movemask_pd(det_ok);
        const int m_feas = _mm256_movemask_pd(feasible);
        for (int lane = 0; lane < 4; ++lane) {
            unsigned char f = 0;
            if (m_reach >> lane & 1) f |= kReachable;
            if (m_lim >> lane & 1) f |= kWithinLimits;
            if (m_psi >> lane & 1) f |= kPsiOk;
            if (m_eta >> lane & 1) f |= kEtaOk;
            if (m_det >> lane & 1) f |= kDetAOk;
            if (m_feas >> lane & 1) f |= kFeasible;
            flags[i + lane] = f;
        }
    }
    for (std::size_t i = vec_n; i < n; ++i)
        flags[i] = detail::predicate_flags(params, px[i], py[i], pz[i]);
}

void quantity_kernel_avx2(const KernelGeometry& geom, const double* px, const double* py,
                          const double* pz, std::size_t n, const QuantityView& out) {
    const std::size_t vec_n = n - n % 4;
    for (std::size_t i = 0; i < vec_n; i += 4) {
        const __m256d x = _mm256_loadu_pd(px + i);
        const __m256d y = _mm256_loadu_pd(py + i);
        const __m256d z = _mm256_loadu_pd(pz + i);
        const CoreVec cv = compute_core(geom, x, y, z);

        const int m_reach = _mm256_movemask_pd(cv.reach_mask);
        for (int leg = 0; leg < 3; ++leg) {
            _mm256_storeu_pd(out.rho[leg] + i, cv.rho[leg]);
            _mm256_storeu_pd(out.eta[leg] + i, cv.eta[leg]);
        }
        _mm256_storeu_pd(out.det_a + i, cv.det_a);
        _mm256_storeu_pd(out.det_b + i, cv.det_b);

        alignas(32) double k00[4], k01[4], k02[4], k11[4], k12[4], k22[4], ds[4];
        _mm256_store_pd(k00, cv.k00);
        _mm256_store_pd(k01, cv.k01);
        _mm256_store_pd(k02, cv.k02);
        _mm256_store_pd(k11, cv.k11);
        _mm256_store_pd(k12, cv.k12);
        _mm256_store_pd(ds, cv.ds);
        _mm256_store_pd(k22, cv.k22);
        for (int lane = 0; lane < 4; ++lane) {
            out.reachable[i + lane] = (m_reach >> lane & 1) ? 1 : 0;
            const auto lam = sym3x3_eigenvalues_closed(k00[lane], k01[lane], k02[lane], k11[lane],
                                                       k12[lane], k22[lane]);
            const double s_max = std::sqrt(std::fmax(lam[0], 0.0));
            const double s_min = std::sqrt(std::fmax(lam[2], 0.0));
            const double abs_ds = std::fabs(ds[lane]);
            out.psi_max[i + lane] = s_max / abs_ds;
            out.psi_min[i + lane] = s_min / abs_ds;
            out.kappa_standard[i + lane] = s_max / s_min;
        }
    }
    for (std::size_t i = vec_n; i < n; ++i) detail::quantities_at(geom, px[i], py[i], pz[i], i, out);
}

}  // namespace orthoglide::batch

#endif  // x86_64
