#pragma once

#include <array>
#include <optional>
#include <string>

#include "orthoglide/errors.hpp"
#include "orthoglide/model.hpp"
#include "orthoglide/vec3.hpp"

namespace orthoglide::kin {

/// IK root selection per leg: rho_i = u_i + sign * sqrt(L^2 - w_i).
/// The default (-,-,-) branch puts the canonical isotropic point at
/// rho = (-L,-L,-L) with all eta_i = +L.
struct BranchSigns {
    std::array<int, 3> sign = {-1, -1, -1};
    static BranchSigns minus() { return {}; }
    static BranchSigns parse(const std::string& s);  // e.g. "---", "+-+"
    std::string str() const;
};

/// A closed pose: |c_i - b_i| = L within 1e-9 L on every leg.
struct KinematicState {
    CartesianPoint p;
    JointVector rho;
    std::array<Vec3, 3> b{};  // slider points, b_i = a_i + rho_i * axis_i
    std::array<Vec3, 3> c{};  // platform attachments, c_i = p + d_i
    BranchSigns branch;
    bool within_joint_limits = false;
};

constexpr double kClosureRelTol = 1e-9;

/// |  |c_i - b_i| - L  | per leg.
std::array<double, 3> closure_residuals(const MachineGeometry& geom, const KinematicState& state);

/// Build a state from (p, rho), validating closure; branch signs inferred.
KinematicState make_state(const MachineGeometry& geom, const CartesianPoint& p,
                          const JointVector& rho);

/// Closed-form IK. Throws UnreachableError when some leg has w_i > L^2.
/// Out-of-limits results are flagged on the state, not errors.
KinematicState inverse_kinematics(const MachineGeometry& geom, const CartesianPoint& p,
                                  const BranchSigns& branch = BranchSigns::minus());

/// Non-throwing IK used by reference-path feasibility checks.
/// On failure returns false and fills reach_excess (w_i - L^2 where positive).
bool try_inverse_kinematics(const MachineGeometry& geom, const CartesianPoint& p,
                            const BranchSigns& branch, KinematicState& out,
                            std::array<double, 3>& reach_excess);

/// FK by intersecting three spheres of radius L centered at b_i - d_i.
/// Root selection: nearest to hint when given, else the root with all
/// eta_i > 0, ties toward larger component sum.
KinematicState forward_kinematics(const MachineGeometry& geom, const JointVector& rho,
                                  std::optional<CartesianPoint> hint = std::nullopt);

/// Singularity thresholds, relative to the machine scale:
/// eps_A = parallel_rel * L^3 on det A, eps_B = serial_rel * L per eta_i.
struct Tolerances {
    double parallel_rel = 1e-9;
    double serial_rel = 1e-9;
    double eps_det_a(double leg_length) const {
        return parallel_rel * leg_length * leg_length * leg_length;
    }
    double eps_eta(double leg_length) const { return serial_rel * leg_length; }
};

struct JacobianSet {
    Mat3 A;                      // rows (c_i - b_i)^T
    Vec3 eta;                    // eta_i = (c_i - b_i) . axis_i
    Mat3 B;                      // diag(eta)
    double det_A = 0.0;
    std::optional<Mat3> J;       // A^-1 B, absent when |det A| <= eps_A
    std::optional<Mat3> J_inv;   // rows (1/eta_i)(c_i - b_i)^T, absent when some |eta_i| <= eps_B
    bool parallel_singular = false;
    bool serial_singular = false;
    std::array<bool, 3> serial_leg{};  // |eta_i| <= eps_B
    double leg_length = 0.0;

    double det_B() const { return eta.x * eta.y * eta.z; }
};

JacobianSet jacobians(const MachineGeometry& geom, const KinematicState& state,
                      const Tolerances& tol = {});

/// Pose where every strut aligns with its prismatic axis, so J = I on the
/// minus branch. Closed form for orthonormal axes; nullopt when the axes are
/// not orthonormal or the per-leg alignment constraints are inconsistent.
std::optional<Vec3> isotropic_center(const MachineGeometry& geom);

/// p_dot = J rho_dot. Throws SingularError when J is absent.
Vec3 velocity_map(const JacobianSet& jac, const Vec3& rho_dot);

/// rho_dot = J^-1 p_dot. Throws SingularError when J^-1 is absent.
Vec3 joint_rates(const JacobianSet& jac, const Vec3& p_dot);

}  // namespace orthoglide::kin
