#include "orthoglide/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "orthoglide/format.hpp"
#include "orthoglide/linalg3.hpp"
#include "orthoglide/parallel.hpp"

namespace orthoglide::ws {

namespace {

constexpr int kMinDepth = 1;
constexpr int kMaxDepth = 12;
constexpr int kSamplesPerCell = 15;

std::string leg_tag(int i) { return "leg " + std::to_string(i + 1); }

}  // namespace

PointPredicate PointPredicate::defaults(const MachineGeometry& geom) {
    PointPredicate p;
    p.geom = geom;
    p.psi_bounds = std::make_pair(1.0 / 3.0, 3.0);
    p.min_eta = 1e-6 * geom.leg_length;
    p.min_det_a = 1e-6 * geom.leg_length * geom.leg_length * geom.leg_length;
    return p;
}

batch::PredicateParams PointPredicate::params() const {
    if (psi_bounds && !(psi_bounds->first < psi_bounds->second))
        throw DomainError("psi bounds require psi_lo < psi_hi");
    if (min_eta < 0.0 || min_det_a < 0.0) throw DomainError("singularity margins must be >= 0");
    batch::PredicateParams p;
    p.geom = batch::KernelGeometry::from(geom);
    p.check_limits = require_joint_limits;
    for (int i = 0; i < 3; ++i) {
        p.lim_lo[i] = geom.joint_limits[i].min;
        p.lim_hi[i] = geom.joint_limits[i].max;
    }
    p.check_psi = psi_bounds.has_value();
    if (psi_bounds) {
        p.psi_lo = psi_bounds->first;
        p.psi_hi = psi_bounds->second;
    }
    p.min_eta = min_eta;
    p.min_det_a = min_det_a;
    return p;
}

PointFeasibility evaluate_point(const PointPredicate& pred, const CartesianPoint& p) {
    pred.params();  // validate invariants
    PointFeasibility out;
    kin::KinematicState state;
    std::array<double, 3> excess{};
    if (!kin::try_inverse_kinematics(pred.geom, p, kin::BranchSigns::minus(), state, excess)) {
        out.feasible = false;
        const double l2 = pred.geom.leg_length * pred.geom.leg_length;
        for (int i = 0; i < 3; ++i)
            if (excess[i] > 0.0) {
                std::ostringstream r;
                r << "unreachable: " << leg_tag(i) << " (w = " << fmt12(excess[i] + l2)
                  << " > L^2 = " << fmt12(l2) << ")";
                out.reasons.push_back(r.str());
            }
        return out;
    }

    bool ok = true;
    if (pred.require_joint_limits) {
        for (int i = 0; i < 3; ++i) {
            const JointRange& r = pred.geom.joint_limits[i];
            if (state.rho[i] < r.min || state.rho[i] > r.max) {
                ok = false;
                out.reasons.push_back("joint_limit: " + leg_tag(i) + " (rho = " +
                                      fmt12(state.rho[i]) + " outside [" + fmt12(r.min) + ", " +
                                      fmt12(r.max) + "])");
            }
        }
    }

    const kin::JacobianSet jac = kin::jacobians(pred.geom, state);
    double eta_min = std::fabs(jac.eta[0]);
    for (int i = 1; i < 3; ++i) eta_min = std::fmin(eta_min, std::fabs(jac.eta[i]));
    if (eta_min < pred.min_eta) {
        ok = false;
        out.reasons.push_back("eta_margin: min |eta| = " + fmt12(eta_min) + " < " +
                              fmt12(pred.min_eta));
    }
    // signed: the mirror assembly mode past det A = 0 is out of the workspace
    const double mode_sign =
        Mat3::from_rows(pred.geom.legs[0].axis, pred.geom.legs[1].axis, pred.geom.legs[2].axis)
                    .det() >= 0.0
            ? 1.0
            : -1.0;
    if (jac.det_A * mode_sign < pred.min_det_a) {
        ok = false;
        out.reasons.push_back("detA_margin: oriented det A = " + fmt12(jac.det_A * mode_sign) +
                              " < " + fmt12(pred.min_det_a));
    }
    if (pred.psi_bounds) {
        if (!jac.J) {
            ok = false;
            out.reasons.push_back("psi: unavailable (parallel-singular)");
        } else {
            const auto sv = singular_values3(*jac.J);  // psi, descending
            if (sv[0] > pred.psi_bounds->second) {
                ok = false;
                out.reasons.push_back("psi: max = " + fmt12(sv[0]) + " > " +
                                      fmt12(pred.psi_bounds->second));
            }
            if (sv[2] < pred.psi_bounds->first) {
                ok = false;
                out.reasons.push_back("psi: min = " + fmt12(sv[2]) + " < " +
                                      fmt12(pred.psi_bounds->first));
            }
        }
    }
    out.feasible = ok;
    return out;
}

const char* label_name(CellLabel label) {
    switch (label) {
        case CellLabel::inside: return "inside";
        case CellLabel::outside: return "outside";
        case CellLabel::boundary: return "boundary";
        default: return "open";
    }
}

double OctreeWorkspace::voxel_step() const {
    return 2.0 * half / static_cast<double>(std::int64_t{1} << max_depth);
}

double OctreeWorkspace::cell_half(const OctCell& c) const {
    return half / static_cast<double>(std::int64_t{1} << c.depth);
}

Vec3 OctreeWorkspace::cell_center(const OctCell& c) const {
    const double step = voxel_step();
    Vec3 out;
    for (int k = 0; k < 3; ++k)
        out[k] = (center[k] - half) + (static_cast<double>(c.lo[k]) + 0.5 * c.size) * step;
    return out;
}

CellLabel OctreeWorkspace::label_at(std::int32_t ix, std::int32_t iy, std::int32_t iz) const {
    const std::int32_t n = std::int32_t{1} << max_depth;
    if (ix < 0 || iy < 0 || iz < 0 || ix >= n || iy >= n || iz >= n) return CellLabel::outside;
    std::size_t idx = 0;
    while (cells[idx].first_child >= 0) {
        const OctCell& c = cells[idx];
        const std::int32_t h = c.size / 2;
        int child = 0;
        if (ix >= c.lo[0] + h) child |= 1;
        if (iy >= c.lo[1] + h) child |= 2;
        if (iz >= c.lo[2] + h) child |= 4;
        idx = static_cast<std::size_t>(c.first_child) + child;
    }
    return cells[idx].label;
}

namespace {

// Distance from c_i = p + d_i to the prismatic line (or the limit-clamped
// segment) minus L; positive means leg i cannot close at p.
bool cell_excluded(const PointPredicate& pred, const Vec3& cell_center, double cell_half) {
    const double L = pred.geom.leg_length;
    const double diag = 2.0 * cell_half * std::sqrt(3.0);
    for (int i = 0; i < 3; ++i) {
        const LegGeometry& leg = pred.geom.legs[i];
        const Vec3 m = cell_center + leg.platform_offset - leg.anchor;
        const double u = m.dot(leg.axis);
        const double w = std::fmax(m.squared_norm() - u * u, 0.0);
        double dist2 = w;
        if (pred.require_joint_limits) {
            // fmin(fmax(...)) stays defined even for an empty joint range
            const double uc =
                std::fmin(std::fmax(u, pred.geom.joint_limits[i].min),
                          pred.geom.joint_limits[i].max);
            dist2 = w + (u - uc) * (u - uc);
        }
        if (std::sqrt(dist2) > L + diag) return true;
    }
    return false;
}

}  // namespace

OctreeWorkspace compute_octree(const PointPredicate& pred, const Vec3& root_center,
                               double root_half, int max_depth, int threads) {
    if (max_depth < kMinDepth || max_depth > kMaxDepth)
        throw DomainError("max_depth must be in [1, 12]");
    if (!(root_half > 0.0) || !root_center.finite() || !std::isfinite(root_half))
        throw DomainError("degenerate root box");
    const batch::PredicateParams params = pred.params();

    OctreeWorkspace oct;
    oct.center = root_center;
    oct.half = root_half;
    oct.max_depth = max_depth;
    oct.cells.push_back(
        OctCell{{0, 0, 0}, std::int32_t{1} << max_depth, 0, CellLabel::open, -1});

    std::vector<std::size_t> frontier{0};
    std::vector<double> sx, sy, sz;
    std::vector<unsigned char> flags;
    std::vector<char> excluded;

    while (!frontier.empty()) {
        const std::size_t m = frontier.size();
        excluded.assign(m, 0);
        for (std::size_t k = 0; k < m; ++k) {
            const OctCell& c = oct.cells[frontier[k]];
            excluded[k] =
                cell_excluded(pred, oct.cell_center(c), oct.cell_half(c)) ? 1 : 0;
        }

        // 15 samples per non-excluded cell: 8 corners, center, 6 face centers.
        sx.clear(); sy.clear(); sz.clear();
        for (std::size_t k = 0; k < m; ++k) {
            if (excluded[k]) continue;
            const OctCell& c = oct.cells[frontier[k]];
            const Vec3 cc = oct.cell_center(c);
            const double h = oct.cell_half(c);
            for (int corner = 0; corner < 8; ++corner) {
                sx.push_back(cc.x + ((corner & 1) ? h : -h));
                sy.push_back(cc.y + ((corner & 2) ? h : -h));
                sz.push_back(cc.z + ((corner & 4) ? h : -h));
            }
            sx.push_back(cc.x); sy.push_back(cc.y); sz.push_back(cc.z);
            for (int axis = 0; axis < 3; ++axis)
                for (int side = -1; side <= 1; side += 2) {
                    Vec3 f = cc;
                    f[axis] += side * h;
                    sx.push_back(f.x); sy.push_back(f.y); sz.push_back(f.z);
                }
        }

        flags.assign(sx.size(), 0);
        parallel_for(sx.size(), threads, [&](std::size_t lo, std::size_t hi) {
            batch::eval_predicate(params, sx.data() + lo, sy.data() + lo, sz.data() + lo, hi - lo,
                                  flags.data() + lo);
        });

        std::vector<std::size_t> next;
        std::size_t sample_base = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t idx = frontier[k];
            OctCell& c = oct.cells[idx];
            if (excluded[k]) {
                c.label = CellLabel::outside;
                continue;
            }
            int feasible_count = 0;
            for (int s = 0; s < kSamplesPerCell; ++s)
                if (flags[sample_base + s] & batch::kFeasible) ++feasible_count;
            sample_base += kSamplesPerCell;

            if (feasible_count == kSamplesPerCell && c.depth >= 2) {
                c.label = CellLabel::inside;
            } else if (c.depth == max_depth) {
                c.label = feasible_count == 0 ? CellLabel::outside : CellLabel::boundary;
            } else {
                const OctCell parent = c;  // push_back below may reallocate
                oct.cells[idx].first_child = static_cast<std::int32_t>(oct.cells.size());
                const std::int32_t h = parent.size / 2;
                for (int child = 0; child < 8; ++child) {
                    OctCell ch;
                    ch.lo = {parent.lo[0] + ((child & 1) ? h : 0),
                             parent.lo[1] + ((child & 2) ? h : 0),
                             parent.lo[2] + ((child & 4) ? h : 0)};
                    ch.size = h;
                    ch.depth = static_cast<std::int16_t>(parent.depth + 1);
                    next.push_back(oct.cells.size());
                    oct.cells.push_back(ch);
                }
            }
        }
        frontier = std::move(next);
    }

    for (const OctCell& c : oct.cells) {
        if (c.first_child >= 0) continue;
        const double side = 2.0 * oct.cell_half(c);
        const double vol = side * side * side;
        switch (c.label) {
            case CellLabel::inside:
                oct.volume_lower += vol;
                ++oct.inside_count;
                break;
            case CellLabel::boundary:
                oct.volume_upper += vol;
                ++oct.boundary_count;
                break;
            case CellLabel::outside:
                ++oct.outside_count;
                break;
            default:
                break;
        }
    }
    oct.volume_upper += oct.volume_lower;
    return oct;
}

Vec3 default_root_center(const MachineGeometry& geom) {
    if (auto c = kin::isotropic_center(geom)) return *c;
    Vec3 mean = Vec3::zero();
    for (int i = 0; i < 3; ++i) mean += (geom.legs[i].anchor - geom.legs[i].platform_offset) / 3.0;
    return mean;
}

double default_root_half(const MachineGeometry& geom) { return 1.5 * geom.leg_length; }

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::int32_t find(std::int32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Connectivity t_connected(const OctreeWorkspace& oct) {
    std::vector<std::size_t> inside;
    std::vector<std::int32_t> leaf_component(oct.cells.size(), -1);
    for (std::size_t i = 0; i < oct.cells.size(); ++i)
        if (oct.cells[i].first_child < 0 && oct.cells[i].label == CellLabel::inside) {
            leaf_component[i] = static_cast<std::int32_t>(inside.size());
            inside.push_back(i);
        }
    if (inside.empty()) return {false, 0, 0.0};

    // Locate the inside leaf covering a voxel, if any.
    auto inside_leaf_at = [&](std::int32_t ix, std::int32_t iy,
                              std::int32_t iz) -> std::int32_t {
        const std::int32_t n = std::int32_t{1} << oct.max_depth;
        if (ix < 0 || iy < 0 || iz < 0 || ix >= n || iy >= n || iz >= n) return -1;
        std::size_t idx = 0;
        while (oct.cells[idx].first_child >= 0) {
            const OctCell& c = oct.cells[idx];
            const std::int32_t h = c.size / 2;
            int child = 0;
            if (ix >= c.lo[0] + h) child |= 1;
            if (iy >= c.lo[1] + h) child |= 2;
            if (iz >= c.lo[2] + h) child |= 4;
            idx = static_cast<std::size_t>(c.first_child) + child;
        }
        return oct.cells[idx].label == CellLabel::inside ? leaf_component[idx] : -1;
    };

    UnionFind uf(inside.size());
    for (std::size_t k = 0; k < inside.size(); ++k) {
        const OctCell& c = oct.cells[inside[k]];
        // Probes just across each face at the min corner; smaller neighbors
        // probe back, so every face adjacency yields at least one edge.
        const std::int32_t probes[6][3] = {
            {c.lo[0] - 1, c.lo[1], c.lo[2]}, {c.lo[0] + c.size, c.lo[1], c.lo[2]},
            {c.lo[0], c.lo[1] - 1, c.lo[2]}, {c.lo[0], c.lo[1] + c.size, c.lo[2]},
            {c.lo[0], c.lo[1], c.lo[2] - 1}, {c.lo[0], c.lo[1], c.lo[2] + c.size}};
        for (const auto& pr : probes) {
            const std::int32_t other = inside_leaf_at(pr[0], pr[1], pr[2]);
            if (other >= 0) uf.unite(static_cast<std::int32_t>(k), other);
        }
    }

    std::vector<double> component_volume(inside.size(), 0.0);
    std::size_t components = 0;
    for (std::size_t k = 0; k < inside.size(); ++k) {
        const std::int32_t root = uf.find(static_cast<std::int32_t>(k));
        if (root == static_cast<std::int32_t>(k)) ++components;
        const OctCell& c = oct.cells[inside[k]];
        const double side = 2.0 * oct.cell_half(c);
        component_volume[root] += side * side * side;
    }
    const double largest = *std::max_element(component_volume.begin(), component_volume.end());
    return {components == 1, components, largest};
}

InscribedCube inscribed_cube(const OctreeWorkspace& oct) {
    InscribedCube out;
    const std::int32_t n = std::int32_t{1} << oct.max_depth;
    const std::int32_t mid = n / 2;
    std::int32_t r = 0;
    for (std::int32_t cand = 1; cand <= mid; ++cand) {
        bool all_inside = true;
        // only the new shell needs checking
        for (std::int32_t ix = mid - cand; ix < mid + cand && all_inside; ++ix)
            for (std::int32_t iy = mid - cand; iy < mid + cand && all_inside; ++iy)
                for (std::int32_t iz = mid - cand; iz < mid + cand; ++iz) {
                    const bool shell = ix == mid - cand || ix == mid + cand - 1 ||
                                       iy == mid - cand || iy == mid + cand - 1 ||
                                       iz == mid - cand || iz == mid + cand - 1;
                    if (!shell) continue;
                    if (oct.label_at(ix, iy, iz) != CellLabel::inside) {
                        all_inside = false;
                        break;
                    }
                }
        if (!all_inside) break;
        r = cand;
    }
    out.side = 2.0 * r * oct.voxel_step();
    out.volume_fraction =
        oct.volume_lower > 0.0 ? (out.side * out.side * out.side) / oct.volume_lower : 0.0;
    return out;
}

double CrossSection::area() const {
    std::size_t count = 0;
    for (unsigned char f : feasible) count += f;
    return static_cast<double>(count) * step * step;
}

CrossSection cross_section(const PointPredicate& pred, int axis, double offset, int resolution,
                           const Vec3& root_center, double root_half, int threads) {
    if (axis < 0 || axis > 2) throw DomainError("axis must be 0, 1 or 2");
    if (resolution < 8 || resolution > 4096) throw DomainError("resolution must be in [8, 4096]");
    if (std::fabs(offset - root_center[axis]) > root_half)
        throw DomainError("section plane lies outside the root box");
    const batch::PredicateParams params = pred.params();

    CrossSection cs;
    cs.axis = axis;
    cs.offset = offset;
    cs.resolution = resolution;
    cs.axis_u = axis == 0 ? 1 : 0;
    cs.axis_v = axis == 2 ? 1 : 2;
    cs.step = 2.0 * root_half / resolution;
    cs.u0 = root_center[cs.axis_u] - root_half + 0.5 * cs.step;
    cs.v0 = root_center[cs.axis_v] - root_half + 0.5 * cs.step;

    const std::size_t total = static_cast<std::size_t>(resolution) * resolution;
    std::vector<double> px(total), py(total), pz(total);
    for (int iu = 0; iu < resolution; ++iu)
        for (int iv = 0; iv < resolution; ++iv) {
            Vec3 p;
            p[axis] = offset;
            p[cs.axis_u] = cs.u0 + iu * cs.step;
            p[cs.axis_v] = cs.v0 + iv * cs.step;
            const std::size_t i = static_cast<std::size_t>(iu) * resolution + iv;
            px[i] = p.x; py[i] = p.y; pz[i] = p.z;
        }
    std::vector<unsigned char> flags(total, 0);
    parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
        batch::eval_predicate(params, px.data() + lo, py.data() + lo, pz.data() + lo, hi - lo,
                              flags.data() + lo);
    });
    cs.feasible.resize(total);
    for (std::size_t i = 0; i < total; ++i) cs.feasible[i] = (flags[i] & batch::kFeasible) ? 1 : 0;
    return cs;
}

FieldQuantity parse_quantity(const std::string& name) {
    if (name == "kappa") return FieldQuantity::kappa;
    if (name == "psi_max") return FieldQuantity::psi_max;
    if (name == "psi_min") return FieldQuantity::psi_min;
    if (name == "det_A") return FieldQuantity::det_A;
    if (name == "det_B") return FieldQuantity::det_B;
    if (name == "eta_min") return FieldQuantity::eta_min;
    throw DomainError("unknown quantity \"" + name +
                      "\" (expected kappa, psi_max, psi_min, det_A, det_B or eta_min)");
}

const char* quantity_name(FieldQuantity q) {
    switch (q) {
        case FieldQuantity::kappa: return "kappa";
        case FieldQuantity::psi_max: return "psi_max";
        case FieldQuantity::psi_min: return "psi_min";
        case FieldQuantity::det_A: return "det_A";
        case FieldQuantity::det_B: return "det_B";
        default: return "eta_min";
    }
}

double GridSpec::coord(int axis, int i) const {
    if (n[axis] <= 1) return center[axis];
    return (center[axis] - half[axis]) + i * (2.0 * half[axis] / (n[axis] - 1));
}

ScalarField scalar_field(const PointPredicate& pred, FieldQuantity quantity, const GridSpec& grid,
                         bool kappa_standard_variant, int threads) {
    for (int k = 0; k < 3; ++k) {
        if (grid.n[k] < 1 || grid.n[k] > 4096) throw DomainError("grid resolution out of range");
        if (!(grid.half[k] >= 0.0)) throw DomainError("grid half-extent must be >= 0");
    }
    const batch::PredicateParams params = pred.params();
    const batch::KernelGeometry kg = batch::KernelGeometry::from(pred.geom);

    ScalarField f;
    f.grid = grid;
    f.quantity = quantity;
    const std::size_t total = grid.total();
    std::vector<double> px(total), py(total), pz(total);
    std::size_t i = 0;
    for (int ix = 0; ix < grid.n[0]; ++ix)
        for (int iy = 0; iy < grid.n[1]; ++iy)
            for (int iz = 0; iz < grid.n[2]; ++iz, ++i) {
                px[i] = grid.coord(0, ix);
                py[i] = grid.coord(1, iy);
                pz[i] = grid.coord(2, iz);
            }

    batch::QuantityBuffer qb;
    qb.resize(total);
    std::vector<unsigned char> flags(total, 0);
    parallel_for(total, threads, [&](std::size_t lo, std::size_t hi) {
        batch::eval_quantities(kg, px.data() + lo, py.data() + lo, pz.data() + lo, hi - lo,
                               batch::shifted(qb.view(), lo));
        batch::eval_predicate(params, px.data() + lo, py.data() + lo, pz.data() + lo, hi - lo,
                              flags.data() + lo);
    });

    f.value.resize(total);
    f.feasible.resize(total);
    f.has_value.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
        f.feasible[k] = (flags[k] & batch::kFeasible) ? 1 : 0;
        f.has_value[k] = qb.reachable[k];
        double v = 0.0;
        switch (quantity) {
            case FieldQuantity::kappa:
                v = kappa_standard_variant ? qb.kappa_standard[k]
                                           : std::sqrt(qb.kappa_standard[k]);
                break;
            case FieldQuantity::psi_max: v = qb.psi_max[k]; break;
            case FieldQuantity::psi_min: v = qb.psi_min[k]; break;
            case FieldQuantity::det_A: v = qb.det_a[k]; break;
            case FieldQuantity::det_B: v = qb.det_b[k]; break;
            case FieldQuantity::eta_min:
                v = std::fmin(qb.eta[0][k], std::fmin(qb.eta[1][k], qb.eta[2][k]));
                break;
        }
        f.value[k] = v;
    }
    return f;
}

void write_voxel_csv(std::ostream& out, const OctreeWorkspace& oct) {
    out << "x_center,y_center,z_center,half_side,label\n";
    const std::int32_t n = std::int32_t{1} << oct.max_depth;
    const double step = oct.voxel_step();
    const double h = 0.5 * step;
    for (std::int32_t ix = 0; ix < n; ++ix)
        for (std::int32_t iy = 0; iy < n; ++iy)
            for (std::int32_t iz = 0; iz < n; ++iz) {
                const CellLabel label = oct.label_at(ix, iy, iz);
                out << fmt12((oct.center.x - oct.half) + (ix + 0.5) * step) << ','
                    << fmt12((oct.center.y - oct.half) + (iy + 0.5) * step) << ','
                    << fmt12((oct.center.z - oct.half) + (iz + 0.5) * step) << ',' << fmt12(h)
                    << ',' << label_name(label) << '\n';
            }
}

void write_field_csv(std::ostream& out, const ScalarField& f) {
    out << "x,y,z,value,feasible\n";
    std::size_t i = 0;
    for (int ix = 0; ix < f.grid.n[0]; ++ix)
        for (int iy = 0; iy < f.grid.n[1]; ++iy)
            for (int iz = 0; iz < f.grid.n[2]; ++iz, ++i) {
                out << fmt12(f.grid.coord(0, ix)) << ',' << fmt12(f.grid.coord(1, iy)) << ','
                    << fmt12(f.grid.coord(2, iz)) << ',';
                if (f.has_value[i]) out << fmt12(f.value[i]);
                out << ',' << (f.feasible[i] ? 1 : 0) << '\n';
            }
}

void write_section_csv(std::ostream& out, const CrossSection& cs) {
    const char* names[3] = {"x", "y", "z"};
    out << names[cs.axis_u] << ',' << names[cs.axis_v] << ',' << names[cs.axis] << ",feasible\n";
    for (int iu = 0; iu < cs.resolution; ++iu)
        for (int iv = 0; iv < cs.resolution; ++iv)
            out << fmt12(cs.u0 + iu * cs.step) << ',' << fmt12(cs.v0 + iv * cs.step) << ','
                << fmt12(cs.offset) << ',' << (cs.at(iu, iv) ? 1 : 0) << '\n';
}

}  // namespace orthoglide::ws
