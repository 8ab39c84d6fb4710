#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthoglide/batch.hpp"
#include "orthoglide/kinematics.hpp"
#include "orthoglide/model.hpp"

namespace orthoglide::ws {

/// Per-point feasibility rule: IK on the default (-,-,-) branch, joint
/// limits, velocity-amplification bounds, and singularity margins. The
/// parallel margin is applied to det A oriented by the axes' handedness, so
/// only the assembly mode containing the isotropic point counts as workspace;
/// the mirror mode beyond det A = 0 is infeasible by definition.
struct PointPredicate {
    MachineGeometry geom;
    bool require_reachable = true;
    bool require_joint_limits = true;
    std::optional<std::pair<double, double>> psi_bounds;  // default (1/3, 3)
    double min_eta = 0.0;    // serial margin, length units
    double min_det_a = 0.0;  // parallel margin on oriented det A, length^3 units

    static PointPredicate defaults(const MachineGeometry& geom);

    /// Validates invariants (psi_lo < psi_hi, margins >= 0) and flattens.
    batch::PredicateParams params() const;
};

struct PointFeasibility {
    bool feasible = false;
    std::vector<std::string> reasons;  // every failed check
};

/// Reference (library-route) evaluation of one point; the batch kernels are
/// the hot-path equivalent and are equivalence-tested against this.
PointFeasibility evaluate_point(const PointPredicate& pred, const CartesianPoint& p);

enum class CellLabel : std::uint8_t { open = 0, inside, outside, boundary };

const char* label_name(CellLabel label);

struct OctCell {
    std::array<std::int32_t, 3> lo{};  // min corner in max-depth voxel units
    std::int32_t size = 0;             // edge length in voxels (power of two)
    std::int16_t depth = 0;
    CellLabel label = CellLabel::open;
    std::int32_t first_child = -1;  // index of 8 consecutive children
};

struct OctreeWorkspace {
    Vec3 center;
    double half = 0.0;
    int max_depth = 0;
    std::vector<OctCell> cells;  // cells[0] is the root
    double volume_lower = 0.0;   // inside cells
    double volume_upper = 0.0;   // inside + boundary cells
    std::size_t inside_count = 0, outside_count = 0, boundary_count = 0;

    double voxel_step() const;                    // 2*half / 2^max_depth
    double cell_half(const OctCell& c) const;
    Vec3 cell_center(const OctCell& c) const;
    /// Leaf label covering the voxel (ix, iy, iz).
    CellLabel label_at(std::int32_t ix, std::int32_t iy, std::int32_t iz) const;
};

/// Recursive 15-sample classification (8 corners + center + 6 face centers),
/// with a per-leg ball-exclusion cutoff for provably unreachable cells.
/// max_depth must be in [1, 12].
OctreeWorkspace compute_octree(const PointPredicate& pred, const Vec3& root_center,
                               double root_half, int max_depth, int threads = 1);

/// Root box the canonical analysis uses: half-side 1.5 L centered at the
/// isotropic point (falls back to the anchor centroid when none exists).
Vec3 default_root_center(const MachineGeometry& geom);
double default_root_half(const MachineGeometry& geom);

struct Connectivity {
    bool connected = false;
    std::size_t component_count = 0;
    double largest_component_volume = 0.0;
};

/// 6-neighbor flood fill over inside cells. An empty workspace is reported
/// as not connected with zero components.
Connectivity t_connected(const OctreeWorkspace& octree);

/// Largest inside-labeled voxel cube centered at the root center; a
/// shape-regularity metric (the workspace is close to a cube), reported but
/// never asserted against a threshold.
struct InscribedCube {
    double side = 0.0;
    double volume_fraction = 0.0;  // side^3 / volume_lower
};

InscribedCube inscribed_cube(const OctreeWorkspace& octree);

struct CrossSection {
    int axis = 2;  // 0=x, 1=y, 2=z
    double offset = 0.0;
    int resolution = 0;
    int axis_u = 0, axis_v = 1;  // varying axes, in index order
    double u0 = 0.0, v0 = 0.0, step = 0.0;  // first cell center and spacing
    std::vector<std::uint8_t> feasible;     // index = iu * resolution + iv

    bool at(int iu, int iv) const { return feasible[static_cast<std::size_t>(iu) * resolution + iv] != 0; }
    double area() const;  // feasible cell count * step^2
};

/// Feasibility grid of cell centers on an axis-aligned plane through the
/// root box. resolution in [8, 4096]; the plane must intersect the box.
CrossSection cross_section(const PointPredicate& pred, int axis, double offset, int resolution,
                           const Vec3& root_center, double root_half, int threads = 1);

enum class FieldQuantity { kappa, psi_max, psi_min, det_A, det_B, eta_min };

FieldQuantity parse_quantity(const std::string& name);
const char* quantity_name(FieldQuantity q);

/// Inclusive lattice: n[k] points per axis (coordinate = center when n[k]==1).
struct GridSpec {
    Vec3 center;
    Vec3 half;
    std::array<int, 3> n{2, 2, 2};

    std::size_t total() const {
        return static_cast<std::size_t>(n[0]) * n[1] * n[2];
    }
    double coord(int axis, int i) const;
};

struct ScalarField {
    GridSpec grid;
    FieldQuantity quantity = FieldQuantity::kappa;
    std::vector<double> value;          // index = (ix*ny + iy)*nz + iz
    std::vector<std::uint8_t> feasible;   // full predicate
    std::vector<std::uint8_t> has_value;  // reachable; value meaningless otherwise
};

/// kappa defaults to the square-root convention (kappa_paper); pass
/// standard=true for the plain singular-value ratio.
ScalarField scalar_field(const PointPredicate& pred, FieldQuantity quantity, const GridSpec& grid,
                         bool kappa_standard_variant = false, int threads = 1);

/// CSV emitters (12 significant digits; see External Interfaces).
void write_voxel_csv(std::ostream& out, const OctreeWorkspace& octree);
void write_field_csv(std::ostream& out, const ScalarField& field);
void write_section_csv(std::ostream& out, const CrossSection& section);

}  // namespace orthoglide::ws
