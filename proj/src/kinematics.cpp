#include "orthoglide/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "orthoglide/linalg3.hpp"

namespace orthoglide::kin {

namespace {

// Relative slack on the reachability test: w in (L^2, L^2(1+slack)] is treated
// as the tangent case w = L^2, so poses on the reach boundary survive rounding.
constexpr double kReachSlack = 1e-12;

std::string leg_list(const std::array<bool, 3>& flags) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
        if (!flags[i]) continue;
        if (!s.empty()) s += ", ";
        s += std::to_string(i + 1);
    }
    return s;
}

}  // namespace

BranchSigns BranchSigns::parse(const std::string& s) {
    if (s.size() != 3) throw DomainError("branch must be 3 characters of '+'/'-': " + s);
    BranchSigns b;
    for (int i = 0; i < 3; ++i) {
        if (s[i] == '+')
            b.sign[i] = 1;
        else if (s[i] == '-')
            b.sign[i] = -1;
        else
            throw DomainError("branch must be 3 characters of '+'/'-': " + s);
    }
    return b;
}

std::string BranchSigns::str() const {
    std::string s;
    for (int i = 0; i < 3; ++i) s += sign[i] > 0 ? '+' : '-';
    return s;
}

std::array<double, 3> closure_residuals(const MachineGeometry& geom, const KinematicState& state) {
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i)
        r[i] = std::fabs((state.c[i] - state.b[i]).norm() - geom.leg_length);
    return r;
}

KinematicState make_state(const MachineGeometry& geom, const CartesianPoint& p,
                          const JointVector& rho) {
    if (!p.finite()) throw DomainError("non-finite Cartesian point");
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(rho[i])) throw DomainError("non-finite joint value");
    KinematicState s;
    s.p = p;
    s.rho = rho;
    for (int i = 0; i < 3; ++i) {
        s.b[i] = geom.legs[i].anchor + rho[i] * geom.legs[i].axis;
        s.c[i] = p + geom.legs[i].platform_offset;
        const double u = (s.c[i] - geom.legs[i].anchor).dot(geom.legs[i].axis);
        s.branch.sign[i] = (rho[i] - u) > 0.0 ? 1 : -1;
    }
    const auto res = closure_residuals(geom, s);
    for (int i = 0; i < 3; ++i) {
        if (res[i] > kClosureRelTol * geom.leg_length) {
            std::ostringstream msg;
            msg << "leg " << (i + 1) << " closure residual " << res[i] << " exceeds "
                << kClosureRelTol * geom.leg_length;
            throw DomainError(msg.str());
        }
    }
    s.within_joint_limits = geom.within_joint_limits(rho);
    return s;
}

bool try_inverse_kinematics(const MachineGeometry& geom, const CartesianPoint& p,
                            const BranchSigns& branch, KinematicState& out,
                            std::array<double, 3>& reach_excess) {
    reach_excess = {0.0, 0.0, 0.0};
    if (!p.finite()) return false;
    const double l2 = geom.leg_length * geom.leg_length;
    bool ok = true;
    KinematicState s;
    s.p = p;
    s.branch = branch;
    for (int i = 0; i < 3; ++i) {
        const LegGeometry& leg = geom.legs[i];
        const Vec3 c = p + leg.platform_offset;
        const Vec3 m = c - leg.anchor;
        const double u = m.dot(leg.axis);
        double w = m.squared_norm() - u * u;
        if (w > l2) {
            if (w <= l2 * (1.0 + kReachSlack)) {
                w = l2;
            } else {
                reach_excess[i] = w - l2;
                ok = false;
                continue;
            }
        }
        const double root = std::sqrt(std::fmax(l2 - w, 0.0));
        s.rho[i] = u + branch.sign[i] * root;
        s.b[i] = leg.anchor + s.rho[i] * leg.axis;
        s.c[i] = c;
    }
    if (!ok) return false;
    s.within_joint_limits = geom.within_joint_limits(s.rho);
    out = s;
    return true;
}

KinematicState inverse_kinematics(const MachineGeometry& geom, const CartesianPoint& p,
                                  const BranchSigns& branch) {
    if (!p.finite()) throw DomainError("non-finite Cartesian point");
    KinematicState s;
    std::array<double, 3> excess{};
    if (try_inverse_kinematics(geom, p, branch, s, excess)) return s;
    const double l2 = geom.leg_length * geom.leg_length;
    std::ostringstream msg;
    msg << "point unreachable:";
    for (int i = 0; i < 3; ++i) {
        if (excess[i] > 0.0)
            msg << " leg " << (i + 1) << " (w = " << (excess[i] + l2) << " > L^2 = " << l2 << ")";
    }
    throw UnreachableError(msg.str(), excess);
}

KinematicState forward_kinematics(const MachineGeometry& geom, const JointVector& rho,
                                  std::optional<CartesianPoint> hint) {
    const double L = geom.leg_length;
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(rho[i])) throw DomainError("non-finite joint value");

    // Sphere centers: p must satisfy |p - q_i| = L with q_i = b_i - d_i.
    std::array<Vec3, 3> q;
    for (int i = 0; i < 3; ++i) {
        const LegGeometry& leg = geom.legs[i];
        q[i] = leg.anchor + rho[i] * leg.axis - leg.platform_offset;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if ((q[i] - q[j]).norm() > 2.0 * L) {
                std::ostringstream msg;
                msg << "no assembly: spheres " << (i + 1) << " and " << (j + 1)
                    << " are disjoint (center distance " << (q[i] - q[j]).norm() << " > 2L)";
                throw NoAssemblyError(msg.str());
            }

    // Pairwise sphere subtraction gives two planes; their line is p0 + t*dir.
    const Vec3 n1 = q[1] - q[0];
    const Vec3 n2 = q[2] - q[0];
    const Vec3 dir = n1.cross(n2);
    const double scale = std::fmax(n1.norm(), n2.norm());
    if (dir.norm() <= 1e-12 * scale * scale)
        throw NoAssemblyError("no assembly: sphere centers are collinear");

    const double r1 = 0.5 * (q[1].squared_norm() - q[0].squared_norm());
    const double r2 = 0.5 * (q[2].squared_norm() - q[0].squared_norm());
    // Pick the line point with (p0 - q0) orthogonal to dir; the quadratic in t
    // then has no linear term.
    Vec3 p0;
    if (!solve3(Mat3::from_rows(n1, n2, dir), Vec3{r1, r2, dir.dot(q[0])}, p0))
        throw NoAssemblyError("no assembly: degenerate sphere arrangement");

    double disc = L * L - (p0 - q[0]).squared_norm();
    if (disc < 0.0) {
        if (disc >= -1e-12 * L * L)
            disc = 0.0;
        else
            throw NoAssemblyError("no assembly: spheres have no common point");
    }
    const Vec3 step = dir * (std::sqrt(disc) / dir.norm());
    const Vec3 cand[2] = {p0 + step, p0 - step};

    auto all_eta_positive = [&](const Vec3& p) {
        // c_i - b_i = p + d_i - (q_i + d_i) = p - q_i
        for (int i = 0; i < 3; ++i)
            if ((p - q[i]).dot(geom.legs[i].axis) <= 0.0) return false;
        return true;
    };
    // The isotropic configuration has det A = L^3 det(axes); the two roots of
    // a double-valued joint vector are separated by the det A = 0 surface, so
    // a matching sign marks the assembly mode containing the isotropic point.
    const double mode_sign =
        Mat3::from_rows(geom.legs[0].axis, geom.legs[1].axis, geom.legs[2].axis).det() >= 0.0
            ? 1.0
            : -1.0;
    auto det_matches_mode = [&](const Vec3& p) {
        return Mat3::from_rows(p - q[0], p - q[1], p - q[2]).det() * mode_sign > 0.0;
    };
    auto larger_sum = [&] {
        return (cand[0].x + cand[0].y + cand[0].z) >= (cand[1].x + cand[1].y + cand[1].z)
                   ? cand[0]
                   : cand[1];
    };
    auto pick = [&](const Vec3& p) {
        JointVector jr = rho;
        return make_state(geom, p, jr);
    };

    if (hint) {
        const double da = (cand[0] - *hint).squared_norm();
        const double db = (cand[1] - *hint).squared_norm();
        if (da < db) return pick(cand[0]);
        if (db < da) return pick(cand[1]);
        return pick(larger_sum());
    }

    const bool pos0 = all_eta_positive(cand[0]);
    const bool pos1 = all_eta_positive(cand[1]);
    if (pos0 && !pos1) return pick(cand[0]);
    if (pos1 && !pos0) return pick(cand[1]);
    if (pos0 && pos1) {
        const bool mode0 = det_matches_mode(cand[0]);
        const bool mode1 = det_matches_mode(cand[1]);
        if (mode0 && !mode1) return pick(cand[0]);
        if (mode1 && !mode0) return pick(cand[1]);
        return pick(larger_sum());
    }
    std::ostringstream msg;
    msg << "ambiguous assembly: no root has all eta > 0 and no hint was given; candidates ("
        << cand[0].x << ", " << cand[0].y << ", " << cand[0].z << ") and (" << cand[1].x << ", "
        << cand[1].y << ", " << cand[1].z << ")";
    throw AmbiguousAssemblyError(msg.str());
}

JacobianSet jacobians(const MachineGeometry& geom, const KinematicState& state,
                      const Tolerances& tol) {
    JacobianSet js;
    js.leg_length = geom.leg_length;
    for (int i = 0; i < 3; ++i) {
        const Vec3 strut = state.c[i] - state.b[i];
        js.A.row[i] = strut;
        js.eta[i] = strut.dot(geom.legs[i].axis);
    }
    js.B = Mat3::diagonal(js.eta);
    js.det_A = js.A.det();

    const double eps_eta = tol.eps_eta(geom.leg_length);
    for (int i = 0; i < 3; ++i) js.serial_leg[i] = std::fabs(js.eta[i]) <= eps_eta;
    js.serial_singular = js.serial_leg[0] || js.serial_leg[1] || js.serial_leg[2];
    js.parallel_singular = std::fabs(js.det_A) <= tol.eps_det_a(geom.leg_length);

    if (!js.serial_singular) {
        // explicit form: rows of J^-1 are (1/eta_i)(c_i - b_i)^T
        Mat3 jinv;
        for (int i = 0; i < 3; ++i) jinv.row[i] = js.A.row[i] / js.eta[i];
        js.J_inv = jinv;
    }
    if (!js.parallel_singular) {
        const Mat3 adj = js.A.adjugate();
        Mat3 j;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) j(i, k) = adj(i, k) * js.eta[k] / js.det_A;
        js.J = j;
    }
    return js;
}

std::optional<Vec3> isotropic_center(const MachineGeometry& geom) {
    if (!is_canonical_orthogonal(geom)) return std::nullopt;
    // With sum(e_i e_i^T) = I the least-squares solution of the per-leg
    // perpendicularity constraints P_i (p + d_i - a_i) = 0 is closed-form:
    // p = (1/2) sum_i P_i (a_i - d_i).
    Vec3 p = Vec3::zero();
    for (int i = 0; i < 3; ++i) {
        const Vec3 r = geom.legs[i].anchor - geom.legs[i].platform_offset;
        p += (r - geom.legs[i].axis * r.dot(geom.legs[i].axis)) * 0.5;
    }
    for (int i = 0; i < 3; ++i) {
        const Vec3 m = p + geom.legs[i].platform_offset - geom.legs[i].anchor;
        const Vec3 perp = m - geom.legs[i].axis * m.dot(geom.legs[i].axis);
        if (perp.norm() > 1e-9 * geom.leg_length) return std::nullopt;
    }
    return p;
}

Vec3 velocity_map(const JacobianSet& jac, const Vec3& rho_dot) {
    if (!jac.J)
        throw SingularError("J unavailable: parallel-singular configuration (|det A| = " +
                            std::to_string(std::fabs(jac.det_A)) + ")");
    return (*jac.J) * rho_dot;
}

Vec3 joint_rates(const JacobianSet& jac, const Vec3& p_dot) {
    if (!jac.J_inv)
        throw SingularError("J^-1 unavailable: serial-singular legs {" + leg_list(jac.serial_leg) +
                            "}");
    return (*jac.J_inv) * p_dot;
}

}  // namespace orthoglide::kin
