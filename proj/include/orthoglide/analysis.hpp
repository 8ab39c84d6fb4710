#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "orthoglide/kinematics.hpp"
#include "orthoglide/linalg3.hpp"
#include "orthoglide/model.hpp"

namespace orthoglide::analysis {

enum class CondVariant {
    paper,     // sqrt(sigma_max / sigma_min)
    standard,  // sigma_max / sigma_min
};

/// Condition number from the singular values of m.
/// Returns +inf when sigma_min <= 1e-300. Throws DomainError on non-finite input.
double condition_number(const Mat3& m, CondVariant variant);

/// Velocity ellipsoid of J: eigen-decomposition of (J J^T)^-1, formed as the
/// Gram matrix of the explicit J^-1 (no inversion). xi ascending so that the
/// paired psi = 1/xi come out descending.
struct Manipulability {
    std::array<Vec3, 3> axes{};     // unit principal directions, paired with xi
    std::array<double, 3> xi{};     // principal semi-axis lengths, ascending
    std::array<double, 3> psi{};    // 1/xi, descending (eigen route)
};

/// Throws SingularError at parallel- or serial-singular states.
Manipulability manipulability(const kin::JacobianSet& jac);

/// Residuals of the isotropy conditions, all dimensionless:
///   ratio_diffs: pairwise differences of r_i = |c_i - b_i| / eta_i     (6a)
///   link_dots:   pairwise (c_i-b_i).(c_j-b_j) / L^2                    (6b)
///   unit_gap:    |r_i - 1|                                (unit amplification)
/// Pair order is (1,2), (2,3), (3,1).
struct IsotropyReport {
    std::array<double, 3> ratio_diffs{};
    std::array<double, 3> link_dots{};
    std::array<double, 3> unit_gap{};
    bool isotropic = false;
    double max_residual = 0.0;
};

IsotropyReport isotropy_check(const MachineGeometry& geom, const kin::KinematicState& state,
                              double tol);

enum class ParallelKind { none, coplanar, parallel_links };

struct Classification {
    std::array<bool, 3> serial_leg{};
    bool parallel = false;
    ParallelKind kind = ParallelKind::none;

    bool serial() const { return serial_leg[0] || serial_leg[1] || serial_leg[2]; }
    bool regular() const { return !serial() && !parallel; }
    std::vector<int> serial_legs() const;  // 1-based
    std::string str() const;
};

Classification classify_singularity(const kin::JacobianSet& jac, const kin::Tolerances& tol = {});

/// Everything the performance analysis yields at one state. Optional fields
/// are absent when the blocking singularity makes them undefined.
struct AnalysisReport {
    std::optional<double> kappa_paper;      // of J^-1, sqrt of the sigma ratio
    std::optional<double> kappa_standard;   // of J^-1, sigma ratio
    std::optional<std::array<double, 3>> singular_values;  // of J^-1, descending
    std::optional<std::array<double, 3>> psi;               // singular values of J (SVD route), descending
    std::optional<Manipulability> ellipsoid;                // eigen route
    double det_A = 0.0;
    double det_B = 0.0;
    Vec3 eta;
    Classification classification;
};

AnalysisReport analyze(const MachineGeometry& geom, const kin::KinematicState& state,
                       const kin::Tolerances& tol = {});

}  // namespace orthoglide::analysis
