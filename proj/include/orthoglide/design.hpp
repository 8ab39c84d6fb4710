#pragma once

#include <array>
#include <string>

#include "orthoglide/model.hpp"

namespace orthoglide::design {

/// Joint limits sized so every psi_i stays within the requested bounds over a
/// Cartesian cube centered at the isotropic point.
struct DesignResult {
    std::array<JointRange, 3> joint_limits{};
    Vec3 cube_center;
    double cube_half = 0.0;
    double psi_min_observed = 0.0;  // over the verification grid
    double psi_max_observed = 0.0;
    double volume_ratio = 0.0;  // certified cube volume / machine bounding box volume
    double psi_lo = 0.0, psi_hi = 0.0;
    int grid_resolution = 0;
};

/// Bisection on the cube half-side (tolerance 1e-4 L): a candidate passes
/// when every point of an inclusive resolution^3 lattice is reachable with
/// all psi_i in [psi_lo, psi_hi]. Joint limits are the lattice extremes of
/// each rho_i widened by one grid step. Requires 0 < psi_lo < 1 < psi_hi and
/// a canonical-orthogonal geometry.
DesignResult size_joint_limits(const MachineGeometry& geom, double psi_lo, double psi_hi,
                               int grid_resolution, int threads = 1);

struct CubeCheck {
    bool pass = false;
    double psi_min = 0.0;  // observed extremes over the grid (reachable points)
    double psi_max = 0.0;
    std::size_t infeasible_points = 0;
};

/// Independent re-verification of a cube at a chosen resolution; checks psi
/// values (SVD-equivalent eigenvalue route) rather than the predicate kernel's
/// PSD test.
CubeCheck verify_cube(const MachineGeometry& geom, const Vec3& center, double half, double psi_lo,
                      double psi_hi, int resolution, int threads = 1);

struct SizeMetrics {
    Vec3 bbox_min, bbox_max;  // anchors + prismatic travel + cube inflated by L
    double bbox_volume = 0.0;
    double cube_volume = 0.0;
    double volume_ratio = 0.0;
};

SizeMetrics size_metrics(const MachineGeometry& geom, const DesignResult& result);

/// Same structured-text container as the model file (schema 1, section
/// "design_result").
std::string save_design_result(const DesignResult& result);
DesignResult load_design_result(const std::string& text);
void save_design_result_file(const DesignResult& result, const std::string& path);
DesignResult load_design_result_file(const std::string& path);

}  // namespace orthoglide::design
