#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orthoglide/model.hpp"

namespace orthoglide::batch {

/// Geometry flattened to plain arrays for the kernels.
struct KernelGeometry {
    double L = 1.0;
    double L2 = 1.0;
    double inv_L3 = 1.0;
    double mode_sign = 1.0;  // sign of det(axes): det A carries this sign in
                             // the assembly mode containing the isotropic point
    double ax[3]{}, ay[3]{}, az[3]{};  // anchors
    double ex[3]{}, ey[3]{}, ez[3]{};  // unit axes
    double dx[3]{}, dy[3]{}, dz[3]{};  // platform offsets

    static KernelGeometry from(const MachineGeometry& geom);
};

/// Feasibility thresholds for the predicate kernel. All checks inclusive.
/// The parallel margin is signed: mode_sign * det A >= min_det_a, so the
/// mirror assembly mode beyond the det A = 0 surface is excluded along with
/// the singular shell.
struct PredicateParams {
    KernelGeometry geom;
    bool check_limits = false;
    double lim_lo[3]{}, lim_hi[3]{};
    bool check_psi = true;
    double psi_lo = 1.0 / 3.0;
    double psi_hi = 3.0;
    double min_eta = 0.0;    // length units
    double min_det_a = 0.0;  // length^3 units
};

/// Per-point flag bits written by the predicate kernel. Bits other than
/// kReachable carry clamped-input garbage when the point is unreachable;
/// kFeasible is always meaningful.
enum PointFlags : unsigned char {
    kReachable = 1u << 0,
    kWithinLimits = 1u << 1,
    kPsiOk = 1u << 2,
    kEtaOk = 1u << 3,
    kDetAOk = 1u << 4,
    kFeasible = 1u << 5,
};

/// SoA output of the quantities kernel. Values at unreachable points are
/// computed from reach-clamped inputs and must be masked by `reachable`.
/// psi/kappa come from the closed-form symmetric eigensolve: field-grade
/// accuracy (absolute error can reach ~1e-6 where singular values cluster);
/// the analysis module's SVD route is the precision reference.
struct QuantityView {
    unsigned char* reachable = nullptr;
    double* rho[3] = {nullptr, nullptr, nullptr};
    double* eta[3] = {nullptr, nullptr, nullptr};
    double* det_a = nullptr;
    double* det_b = nullptr;
    double* psi_min = nullptr;
    double* psi_max = nullptr;
    double* kappa_standard = nullptr;  // = psi_max/psi_min = kappa of J^-1
};

struct QuantityBuffer {
    std::vector<unsigned char> reachable;
    std::vector<double> rho[3], eta[3];
    std::vector<double> det_a, det_b, psi_min, psi_max, kappa_standard;

    void resize(std::size_t n);
    QuantityView view();
};

inline QuantityView shifted(QuantityView v, std::size_t off) {
    v.reachable += off;
    for (int k = 0; k < 3; ++k) {
        v.rho[k] += off;
        v.eta[k] += off;
    }
    v.det_a += off;
    v.det_b += off;
    v.psi_min += off;
    v.psi_max += off;
    v.kappa_standard += off;
    return v;
}

using PredicateKernelFn = void (*)(const PredicateParams&, const double* px, const double* py,
                                   const double* pz, std::size_t n, unsigned char* flags);
using QuantityKernelFn = void (*)(const KernelGeometry&, const double* px, const double* py,
                                  const double* pz, std::size_t n, const QuantityView& out);

enum class KernelKind { scalar, avx2 };

const char* kernel_name(KernelKind kind);

/// Kernel in use after dispatch (AVX2 when the CPU supports it).
KernelKind active_kernel();

/// Test hook: pin the kernel choice, or reset to auto with nullopt.
/// Throws DomainError when the requested kernel is unavailable.
void force_kernel(std::optional<KernelKind> kind);

bool kernel_available(KernelKind kind);

PredicateKernelFn predicate_kernel();
QuantityKernelFn quantity_kernel();

/// Dispatched entry points.
void eval_predicate(const PredicateParams& params, const double* px, const double* py,
                    const double* pz, std::size_t n, unsigned char* flags);
void eval_quantities(const KernelGeometry& geom, const double* px, const double* py,
                     const double* pz, std::size_t n, const QuantityView& out);

}  // namespace orthoglide::batch
