#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "orthoglide/design.hpp"
#include "orthoglide/workspace.hpp"
#include "support/oracles.hpp"

using namespace orthoglide;
using namespace orthoglide::ws;

namespace {

PointPredicate canonical_predicate() {
    return PointPredicate::defaults(canonical_orthoglide(1.0));
}

bool has_reason(const PointFeasibility& f, const std::string& needle) {
    for (const auto& r : f.reasons)
        if (r.find(needle) != std::string::npos) return true;
    return false;
}

// Hand-built octrees for connectivity tests: one root plus eight depth-1
// children with chosen labels.
OctreeWorkspace synthetic_octree(const std::array<CellLabel, 8>& labels) {
    OctreeWorkspace oct;
    oct.center = Vec3::zero();
    oct.half = 1.0;
    oct.max_depth = 1;
    OctCell root;
    root.lo = {0, 0, 0};
    root.size = 2;
    root.depth = 0;
    root.first_child = 1;
    oct.cells.push_back(root);
    for (int child = 0; child < 8; ++child) {
        OctCell c;
        c.lo = {(child & 1), (child & 2) ? 1 : 0, (child & 4) ? 1 : 0};
        c.size = 1;
        c.depth = 1;
        c.label = labels[child];
        oct.cells.push_back(c);
    }
    return oct;
}

}  // namespace

TEST_CASE("evaluate_point handles the reference cases") {
    const auto pred = canonical_predicate();
    SUBCASE("isotropic point is feasible") {
        const auto f = evaluate_point(pred, {0, 0, 0});
        CHECK(f.feasible);
        CHECK(f.reasons.empty());
    }
    SUBCASE("far point is unreachable") {
        const auto f = evaluate_point(pred, {0, 1.5, 0});
        CHECK(!f.feasible);
        CHECK(has_reason(f, "unreachable"));
        CHECK(has_reason(f, "leg 1"));
    }
    SUBCASE("serial-singular point fails the eta margin") {
        const auto f = evaluate_point(pred, {0, 1, 0});
        CHECK(!f.feasible);
        CHECK(has_reason(f, "eta_margin"));
    }
    SUBCASE("joint limits are reported") {
        auto p = pred;
        for (int i = 0; i < 3; ++i) p.geom.joint_limits[i] = {-0.95, 2.0};
        const auto f = evaluate_point(p, {0, 0, 0});  // rho = (-1,-1,-1)
        CHECK(!f.feasible);
        CHECK(has_reason(f, "joint_limit"));
    }
    SUBCASE("psi bound violations are reported") {
        auto p = pred;
        p.psi_bounds = std::make_pair(0.99, 1.01);
        const auto f = evaluate_point(p, {0, 0.5, 0});  // psi_max ~ 1.488
        CHECK(!f.feasible);
        CHECK(has_reason(f, "psi"));
    }
}

TEST_CASE("predicate invariants are validated") {
    auto pred = canonical_predicate();
    pred.psi_bounds = std::make_pair(3.0, 1.0);
    CHECK_THROWS_AS(pred.params(), DomainError);
    pred = canonical_predicate();
    pred.min_eta = -1.0;
    CHECK_THROWS_AS(pred.params(), DomainError);
}

TEST_CASE("canonical feasibility is symmetric under coordinate permutation") {
    const auto pred = canonical_predicate();
    std::mt19937_64 rng(61);
    for (int k = 0; k < 200; ++k) {
        const Vec3 p = oracles::random_point(rng, 1.2);
        const bool a = evaluate_point(pred, p).feasible;
        CHECK(a == evaluate_point(pred, {p.y, p.z, p.x}).feasible);
        CHECK(a == evaluate_point(pred, {p.z, p.x, p.y}).feasible);
    }
}

TEST_CASE("octree rejects bad arguments") {
    const auto pred = canonical_predicate();
    CHECK_THROWS_AS(compute_octree(pred, Vec3::zero(), 1.5, 0), DomainError);
    CHECK_THROWS_AS(compute_octree(pred, Vec3::zero(), 1.5, 13), DomainError);
    CHECK_THROWS_AS(compute_octree(pred, Vec3::zero(), 0.0, 4), DomainError);
}

TEST_CASE("octree volume bounds bracket the Monte Carlo estimate") {
    const auto pred = canonical_predicate();
    const Vec3 c = default_root_center(pred.geom);
    const double h = default_root_half(pred.geom);

    const auto o3 = compute_octree(pred, c, h, 3, 2);
    const auto o4 = compute_octree(pred, c, h, 4, 2);
    const auto o5 = compute_octree(pred, c, h, 5, 2);

    CHECK(o3.volume_lower <= o3.volume_upper);
    CHECK(o4.volume_lower <= o4.volume_upper);
    CHECK(o5.volume_lower <= o5.volume_upper);
    CHECK(o3.volume_lower <= o4.volume_lower);
    CHECK(o4.volume_lower <= o5.volume_lower);
    CHECK(o3.volume_upper >= o4.volume_upper);
    CHECK(o4.volume_upper >= o5.volume_upper);
    CHECK(o5.volume_lower > 0.0);

    const auto mc = oracles::mc_volume(pred, c, h, 200000);
    CHECK(o5.volume_lower <= mc.estimate + 3.0 * mc.sigma);
    CHECK(o5.volume_upper >= mc.estimate - 3.0 * mc.sigma);
}

TEST_CASE("octree labels are trustworthy at the cell level") {
    const auto pred = canonical_predicate();
    const auto oct = compute_octree(pred, default_root_center(pred.geom),
                                    default_root_half(pred.geom), 4, 2);
    std::size_t inside_checked = 0, outside_checked = 0;
    for (const auto& cell : oct.cells) {
        if (cell.first_child >= 0) continue;
        if (cell.label == CellLabel::inside && inside_checked < 100) {
            CHECK(evaluate_point(pred, oct.cell_center(cell)).feasible);
            ++inside_checked;
        } else if (cell.label == CellLabel::outside && outside_checked < 100) {
            CHECK(!evaluate_point(pred, oct.cell_center(cell)).feasible);
            ++outside_checked;
        }
    }
    CHECK(inside_checked > 0);
    CHECK(outside_checked > 0);
}

TEST_CASE("empty joint range empties the workspace") {
    auto pred = canonical_predicate();
    for (int i = 0; i < 3; ++i) pred.geom.joint_limits[i] = {1.0, -1.0};
    const auto oct = compute_octree(pred, Vec3::zero(), 1.5, 3, 2);
    CHECK(oct.volume_upper == 0.0);
    CHECK(oct.inside_count == 0);
    CHECK(oct.boundary_count == 0);
}

TEST_CASE("t-connectivity of the canonical workspace") {
    const auto pred = canonical_predicate();
    const auto oct = compute_octree(pred, default_root_center(pred.geom),
                                    default_root_half(pred.geom), 4, 2);
    const auto conn = t_connected(oct);
    CHECK(conn.connected);
    CHECK(conn.component_count == 1);
    CHECK(conn.largest_component_volume == doctest::Approx(oct.volume_lower).epsilon(1e-12));
}

TEST_CASE("t-connectivity on synthetic octrees") {
    SUBCASE("two opposite corners are disconnected") {
        auto labels = std::array<CellLabel, 8>{};
        labels.fill(CellLabel::outside);
        labels[0] = CellLabel::inside;
        labels[7] = CellLabel::inside;
        const auto conn = t_connected(synthetic_octree(labels));
        CHECK(!conn.connected);
        CHECK(conn.component_count == 2);
        CHECK(conn.largest_component_volume == doctest::Approx(1.0));  // one unit cell (step=1)
    }
    SUBCASE("face-adjacent cells form one component") {
        auto labels = std::array<CellLabel, 8>{};
        labels.fill(CellLabel::outside);
        labels[0] = CellLabel::inside;
        labels[1] = CellLabel::inside;  // +x neighbor of child 0
        const auto conn = t_connected(synthetic_octree(labels));
        CHECK(conn.connected);
        CHECK(conn.component_count == 1);
    }
    SUBCASE("empty workspace") {
        auto labels = std::array<CellLabel, 8>{};
        labels.fill(CellLabel::outside);
        const auto conn = t_connected(synthetic_octree(labels));
        CHECK(!conn.connected);
        CHECK(conn.component_count == 0);
        CHECK(conn.largest_component_volume == 0.0);
    }
}

TEST_CASE("coarse-fine face adjacency unites across depths") {
    // child 0 stays a depth-1 inside leaf; child 1 is subdivided and only its
    // sub-child touching child 0's +x face is inside.
    OctreeWorkspace oct = synthetic_octree({CellLabel::inside, CellLabel::open, CellLabel::outside,
                                            CellLabel::outside, CellLabel::outside,
                                            CellLabel::outside, CellLabel::outside,
                                            CellLabel::outside});
    oct.max_depth = 2;
    // re-scale: with max_depth 2 the root spans 4 voxels per axis
    oct.cells[0].size = 4;
    for (int child = 0; child < 8; ++child) {
        auto& c = oct.cells[1 + child];
        c.lo = {(child & 1) ? 2 : 0, (child & 2) ? 2 : 0, (child & 4) ? 2 : 0};
        c.size = 2;
    }
    auto& split = oct.cells[2];  // child 1 at lo = (2,0,0)
    split.first_child = static_cast<std::int32_t>(oct.cells.size());
    for (int sub = 0; sub < 8; ++sub) {
        OctCell c;
        c.lo = {split.lo[0] + ((sub & 1) ? 1 : 0), split.lo[1] + ((sub & 2) ? 1 : 0),
                split.lo[2] + ((sub & 4) ? 1 : 0)};
        c.size = 1;
        c.depth = 2;
        c.label = sub == 0 ? CellLabel::inside : CellLabel::outside;
        oct.cells.push_back(c);
    }
    const auto conn = t_connected(oct);
    CHECK(conn.connected);
    CHECK(conn.component_count == 1);
}

TEST_CASE("inscribed cube of the canonical workspace") {
    const auto pred = canonical_predicate();
    const auto oct = compute_octree(pred, default_root_center(pred.geom),
                                    default_root_half(pred.geom), 5, 2);
    const auto cube = inscribed_cube(oct);
    CHECK(cube.side > 0.0);
    CHECK(cube.volume_fraction > 0.0);
    CHECK(cube.side * cube.side * cube.side <= oct.volume_lower * (1.0 + 1e-12));
}

TEST_CASE("cross-section validation and symmetry") {
    const auto pred = canonical_predicate();
    CHECK_THROWS_AS(cross_section(pred, 3, 0.0, 64, Vec3::zero(), 1.5, 1), DomainError);
    CHECK_THROWS_AS(cross_section(pred, 2, 0.0, 7, Vec3::zero(), 1.5, 1), DomainError);
    CHECK_THROWS_AS(cross_section(pred, 2, 2.0, 64, Vec3::zero(), 1.5, 1), DomainError);

    const auto cs = cross_section(pred, 2, 0.0, 96, Vec3::zero(), 1.5, 2);
    CHECK(cs.area() > 0.0);
    for (int iu = 0; iu < cs.resolution; ++iu)
        for (int iv = iu + 1; iv < cs.resolution; ++iv)
            CHECK(cs.at(iu, iv) == cs.at(iv, iu));

    // far plane: nothing reachable at z = 1.4
    const auto far = cross_section(pred, 2, 1.4, 32, Vec3::zero(), 1.5, 2);
    CHECK(far.area() == 0.0);
}

TEST_CASE("cross-section area matches a 2-D Monte Carlo oracle") {
    const auto pred = canonical_predicate();
    const auto cs = cross_section(pred, 2, 0.0, 512, Vec3::zero(), 1.5, 2);

    const batch::PredicateParams params = pred.params();
    const std::size_t n = 400000;
    std::vector<double> px(n), py(n), pz(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = -1.5 + 3.0 * oracles::hash01(7, i, 0);
        py[i] = -1.5 + 3.0 * oracles::hash01(7, i, 1);
    }
    std::vector<unsigned char> flags(n, 0);
    batch::eval_predicate(params, px.data(), py.data(), pz.data(), n, flags.data());
    std::size_t hits = 0;
    for (auto f : flags) hits += (f & batch::kFeasible) ? 1 : 0;
    const double mc_area = 9.0 * static_cast<double>(hits) / static_cast<double>(n);
    CHECK(cs.area() == doctest::Approx(mc_area).epsilon(0.02));
}

TEST_CASE("scalar fields") {
    const auto pred = canonical_predicate();
    SUBCASE("kappa is 1 at the isotropic point") {
        GridSpec grid;
        grid.center = Vec3::zero();
        grid.half = {0.1, 0.1, 0.1};
        grid.n = {3, 3, 3};
        const auto f = scalar_field(pred, FieldQuantity::kappa, grid);
        // center of the 3x3x3 lattice is the isotropic point
        const std::size_t center_idx = (1 * 3 + 1) * 3 + 1;
        CHECK(f.has_value[center_idx]);
        CHECK(f.value[center_idx] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(f.feasible[center_idx]);
    }
    SUBCASE("det_B keeps one sign over the feasible interior") {
        GridSpec grid;
        grid.center = Vec3::zero();
        grid.half = {0.4, 0.4, 0.4};
        grid.n = {21, 21, 21};
        const auto f = scalar_field(pred, FieldQuantity::det_B, grid);
        for (std::size_t i = 0; i < f.value.size(); ++i)
            if (f.feasible[i]) CHECK(f.value[i] > 0.0);
    }
    SUBCASE("unreachable points are masked") {
        GridSpec grid;
        grid.center = {1.4, 0, 0};
        grid.half = {0.05, 0.05, 0.05};
        grid.n = {2, 2, 2};
        const auto f = scalar_field(pred, FieldQuantity::psi_max, grid);
        for (std::size_t i = 0; i < f.value.size(); ++i) {
            CHECK(!f.has_value[i]);
            CHECK(!f.feasible[i]);
        }
    }
    SUBCASE("unknown quantity name") {
        CHECK_THROWS_AS(parse_quantity("bogus"), DomainError);
    }
    SUBCASE("kappa variants differ off-center") {
        GridSpec grid;
        grid.center = {0, 0.5, 0};
        grid.half = {0, 0, 0};
        grid.n = {1, 1, 1};
        const auto paper = scalar_field(pred, FieldQuantity::kappa, grid, false);
        const auto standard = scalar_field(pred, FieldQuantity::kappa, grid, true);
        CHECK(paper.value[0] == doctest::Approx(std::sqrt(standard.value[0])).epsilon(1e-12));
        CHECK(standard.value[0] == doctest::Approx(2.2152504370215302).epsilon(1e-9));
    }
}

TEST_CASE("CSV emitters") {
    const auto pred = canonical_predicate();
    SUBCASE("field csv shape") {
        GridSpec grid;
        grid.center = Vec3::zero();
        grid.half = {0.1, 0, 0};
        grid.n = {2, 1, 1};
        const auto f = scalar_field(pred, FieldQuantity::det_B, grid);
        std::ostringstream out;
        write_field_csv(out, f);
        const std::string csv = out.str();
        const std::string expect_header = "x,y,z,value,feasible\n";
        CHECK(csv.substr(0, expect_header.size()) == expect_header);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    }
    SUBCASE("voxel csv covers the uniform grid") {
        const auto oct = compute_octree(pred, Vec3::zero(), 1.5, 2, 1);
        std::ostringstream out;
        write_voxel_csv(out, oct);
        const std::string csv = out.str();
        // header + 4^3 voxel rows
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 64);
        CHECK(csv.rfind("x_center,y_center,z_center,half_side,label\n", 0) == 0);
    }
    SUBCASE("section csv has one row per grid cell") {
        const auto cs = cross_section(pred, 2, 0.0, 8, Vec3::zero(), 1.5, 1);
        std::ostringstream out;
        write_section_csv(out, cs);
        const std::string csv = out.str();
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 64);
        CHECK(csv.rfind("x,y,z,feasible\n", 0) == 0);
    }
}

TEST_CASE("design-limited workspace still brackets its Monte Carlo volume") {
    MachineGeometry g = canonical_orthoglide(1.0);
    g.joint_limits = design::size_joint_limits(g, 1.0 / 3.0, 3.0, 13, 2).joint_limits;
    const auto pred = PointPredicate::defaults(g);
    const auto oct = compute_octree(pred, default_root_center(g), default_root_half(g), 5, 2);
    CHECK(oct.volume_lower > 0.0);
    const auto mc = oracles::mc_volume(pred, default_root_center(g), default_root_half(g), 200000);
    CHECK(oct.volume_lower <= mc.estimate + 3.0 * mc.sigma);
    CHECK(oct.volume_upper >= mc.estimate - 3.0 * mc.sigma);
}

TEST_CASE("psi_max field over the certified cube respects the bound") {
    MachineGeometry g = canonical_orthoglide(1.0);
    const auto r = design::size_joint_limits(g, 1.0 / 3.0, 3.0, 13, 2);
    auto pred = PointPredicate::defaults(g);
    GridSpec grid;
    grid.center = r.cube_center;
    grid.half = {r.cube_half, r.cube_half, r.cube_half};
    grid.n = {33, 33, 33};
    const auto f = scalar_field(pred, FieldQuantity::psi_max, grid, false, 2);
    double max_psi = 0.0;
    for (std::size_t i = 0; i < f.value.size(); ++i) {
        REQUIRE(f.has_value[i]);
        max_psi = std::fmax(max_psi, f.value[i]);
    }
    CHECK(max_psi <= 3.0 + 1e-4);  // field route carries ~1e-6-grade eigen noise
}

TEST_CASE("results are independent of the thread count") {
    const auto pred = canonical_predicate();
    const auto a = compute_octree(pred, Vec3::zero(), 1.5, 4, 1);
    const auto b = compute_octree(pred, Vec3::zero(), 1.5, 4, 4);
    CHECK(a.volume_lower == b.volume_lower);
    CHECK(a.volume_upper == b.volume_upper);
    CHECK(a.cells.size() == b.cells.size());
}
