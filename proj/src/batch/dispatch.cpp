#include "orthoglide/batch.hpp"

#include <atomic>

#include "orthoglide/errors.hpp"

namespace orthoglide::batch {

void predicate_kernel_scalar(const PredicateParams&, const double*, const double*, const double*,
                             std::size_t, unsigned char*);
void quantity_kernel_scalar(const KernelGeometry&, const double*, const double*, const double*,
                            std::size_t, const QuantityView&);
#ifdef ORTHOGLIDE_HAVE_AVX2
void predicate_kernel_avx2(const PredicateParams&, const double*, const double*, const double*,
                           std::size_t, unsigned char*);
void quantity_kernel_avx2(const KernelGeometry&, const double*, const double*, const double*,
                          std::size_t, const QuantityView&);
#endif

KernelGeometry KernelGeometry::from(const MachineGeometry& geom) {
    KernelGeometry g;
    g.L = geom.leg_length;
    g.L2 = geom.leg_length * geom.leg_length;
    g.inv_L3 = 1.0 / (geom.leg_length * geom.leg_length * geom.leg_length);
    g.mode_sign =
        Mat3::from_rows(geom.legs[0].axis, geom.legs[1].axis, geom.legs[2].axis).det() >= 0.0
            ? 1.0
            : -1.0;
    for (int i = 0; i < 3; ++i) {
        g.ax[i] = geom.legs[i].anchor.x;
        g.ay[i] = geom.legs[i].anchor.y;
        g.az[i] = geom.legs[i].anchor.z;
        g.ex[i] = geom.legs[i].axis.x;
        g.ey[i] = geom.legs[i].axis.y;
        g.ez[i] = geom.legs[i].axis.z;
        g.dx[i] = geom.legs[i].platform_offset.x;
        g.dy[i] = geom.legs[i].platform_offset.y;
        g.dz[i] = geom.legs[i].platform_offset.z;
    }
    return g;
}

void QuantityBuffer::resize(std::size_t n) {
    reachable.resize(n);
    for (int k = 0; k < 3; ++k) {
        rho[k].resize(n);
        eta[k].resize(n);
    }
    det_a.resize(n);
    det_b.resize(n);
    psi_min.resize(n);
    psi_max.resize(n);
    kappa_standard.resize(n);
}

QuantityView QuantityBuffer::view() {
    QuantityView v;
    v.reachable = reachable.data();
    for (int k = 0; k < 3; ++k) {
        v.rho[k] = rho[k].data();
        v.eta[k] = eta[k].data();
    }
    v.det_a = det_a.data();
    v.det_b = det_b.data();
    v.psi_min = psi_min.data();
    v.psi_max = psi_max.data();
    v.kappa_standard = kappa_standard.data();
    return v;
}

namespace {

bool cpu_has_avx2() {
#if defined(ORTHOGLIDE_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<int> g_forced{-1};  // -1 auto, else KernelKind

KernelKind resolve() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<KernelKind>(forced);
    return cpu_has_avx2() ? KernelKind::avx2 : KernelKind::scalar;
}

}  // namespace

const char* kernel_name(KernelKind kind) {
    return kind == KernelKind::avx2 ? "avx2" : "scalar";
}

bool kernel_available(KernelKind kind) {
    if (kind == KernelKind::scalar) return true;
    return cpu_has_avx2();
}

KernelKind active_kernel() { return resolve(); }

void force_kernel(std::optional<KernelKind> kind) {
    if (!kind) {
        g_forced.store(-1, std::memory_order_relaxed);
        return;
    }
    if (!kernel_available(*kind))
        throw DomainError(std::string("kernel not available on this machine: ") +
                          kernel_name(*kind));
    g_forced.store(static_cast<int>(*kind), std::memory_order_relaxed);
}

PredicateKernelFn predicate_kernel() {
#ifdef ORTHOGLIDE_HAVE_AVX2
    if (resolve() == KernelKind::avx2) return &predicate_kernel_avx2;
#endif
    return &predicate_kernel_scalar;
}

QuantityKernelFn quantity_kernel() {
#ifdef ORTHOGLIDE_HAVE_AVX2
    if (resolve() == KernelKind::avx2) return &quantity_kernel_avx2;
#endif
    return &quantity_kernel_scalar;
}

void eval_predicate(const PredicateParams& params, const double* px, const double* py,
                    const double* pz, std::size_t n, unsigned char* flags) {
    predicate_kernel()(params, px, py, pz, n, flags);
}

void eval_quantities(const KernelGeometry& geom, const double* px, const double* py,
                     const double* pz, std::size_t n, const QuantityView& out) {
    quantity_kernel()(geom, px, py, pz, n, out);
}

}  // namespace orthoglide::batch
