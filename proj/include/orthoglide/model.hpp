#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orthoglide/errors.hpp"
#include "orthoglide/vec3.hpp"

namespace orthoglide {

using CartesianPoint = Vec3;

struct JointVector {
    std::array<double, 3> rho{};
    double operator[](std::size_t i) const { return rho[i]; }
    double& operator[](std::size_t i) { return rho[i]; }
};

struct JointRange {
    double min = 0.0;
    double max = 0.0;
};

/// One PRPaR leg: prismatic line {anchor + t*axis}, slider at b = anchor + rho*axis,
/// strut of length L from b to c = p + platform_offset.
struct LegGeometry {
    Vec3 anchor;           ///< foot point A_i
    Vec3 axis;             ///< unit direction of prismatic travel
    Vec3 platform_offset;  ///< d_i with c_i = p + d_i
};

struct MachineGeometry {
    double leg_length = 1.0;  ///< L = |B_i C_i|, identical for all legs
    std::array<LegGeometry, 3> legs{};
    std::array<JointRange, 3> joint_limits{};
    std::string name;

    bool within_joint_limits(const JointVector& rho) const {
        for (int i = 0; i < 3; ++i)
            if (rho[i] < joint_limits[i].min || rho[i] > joint_limits[i].max) return false;
        return true;
    }
};

struct Violation {
    std::string field;
    std::string message;
    bool is_error = true;  ///< false for the non-canonical note
};

/// Symmetric construction: axes = x,y,z, anchors at the origin, zero platform
/// offsets, placeholder joint limits [-2L, 2L]. On the (-,-,-) IK branch the
/// isotropic configuration sits at p = 0 with rho = (-L,-L,-L).
MachineGeometry canonical_orthoglide(double leg_length);

/// Empty iff all type invariants hold; entries with is_error=false are
/// advisory (non-canonical axes).
std::vector<Violation> validate(const MachineGeometry& geom);

bool has_errors(const std::vector<Violation>& violations);

/// Axes unit and pairwise orthogonal within 1e-12.
bool is_canonical_orthogonal(const MachineGeometry& geom);

/// Model file I/O (JSON, schema 1; see docs/model_format.md).
/// Unknown fields, wrong leg counts, and non-finite numbers are ParseErrors.
MachineGeometry load_geometry(const std::string& text);
MachineGeometry load_geometry_file(const std::string& path);
std::string save_geometry(const MachineGeometry& geom);
void save_geometry_file(const MachineGeometry& geom, const std::string& path);

}  // namespace orthoglide
