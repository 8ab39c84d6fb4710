#include "orthoglide/design.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "orthoglide/batch.hpp"
#include "orthoglide/errors.hpp"
#include "orthoglide/kinematics.hpp"
#include "orthoglide/linalg3.hpp"
#include "orthoglide/parallel.hpp"

namespace orthoglide::design {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Lattice {
    std::vector<double> px, py, pz;
};

Lattice make_lattice(const Vec3& center, double half, int res) {
    Lattice l;
    const std::size_t total = static_cast<std::size_t>(res) * res * res;
    l.px.reserve(total);
    l.py.reserve(total);
    l.pz.reserve(total);
    auto coord = [&](int axis, int i) {
        if (res == 1) return center[axis];
        return (center[axis] - half) + i * (2.0 * half / (res - 1));
    };
    for (int ix = 0; ix < res; ++ix)
        for (int iy = 0; iy < res; ++iy)
            for (int iz = 0; iz < res; ++iz) {
                l.px.push_back(coord(0, ix));
                l.py.push_back(coord(1, iy));
                l.pz.push_back(coord(2, iz));
            }
    return l;
}

bool lattice_feasible(const batch::PredicateParams& params, const Lattice& l, int threads) {
    const std::size_t n = l.px.size();
    std::vector<unsigned char> flags(n, 0);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        batch::eval_predicate(params, l.px.data() + lo, l.py.data() + lo, l.pz.data() + lo,
                              hi - lo, flags.data() + lo);
    });
    for (unsigned char f : flags)
        if (!(f & batch::kFeasible)) return false;
    return true;
}

batch::PredicateParams psi_only_params(const MachineGeometry& geom, double psi_lo, double psi_hi) {
    batch::PredicateParams p;
    p.geom = batch::KernelGeometry::from(geom);
    p.check_limits = false;
    p.check_psi = true;
    p.psi_lo = psi_lo;
    p.psi_hi = psi_hi;
    p.min_eta = 0.0;
    p.min_det_a = 0.0;
    return p;
}

}  // namespace

DesignResult size_joint_limits(const MachineGeometry& geom, double psi_lo, double psi_hi,
                               int grid_resolution, int threads) {
    if (!(psi_lo > 0.0 && psi_lo < 1.0 && psi_hi > 1.0))
        throw DomainError("psi bounds must satisfy 0 < lo < 1 < hi");
    if (grid_resolution < 2 || grid_resolution > 512)
        throw DomainError("grid_resolution must be in [2, 512]");
    const auto center_opt = kin::isotropic_center(geom);
    if (!center_opt)
        throw DomainError("unsupported geometry: joint-limit sizing requires the "
                          "canonical-orthogonal construction");
    const Vec3 center = *center_opt;
    const double L = geom.leg_length;
    const batch::PredicateParams params = psi_only_params(geom, psi_lo, psi_hi);

    {
        // the center must pass; psi = (1,1,1) there
        unsigned char f = 0;
        const double cx = center.x, cy = center.y, cz = center.z;
        batch::eval_predicate(params, &cx, &cy, &cz, 1, &f);
        if (!(f & batch::kFeasible))
            throw DomainError("infeasible psi bounds: the isotropic point itself fails");
    }

    auto passes = [&](double s) {
        return lattice_feasible(params, make_lattice(center, s, grid_resolution), threads);
    };

    double s_lo = 0.0;
    double s_hi = L;
    while (passes(s_hi)) {
        s_lo = s_hi;
        s_hi *= 2.0;
        if (s_hi > 8.0 * L)
            throw DomainError("joint-limit sizing failed to bracket the cube half-side");
    }
    while (s_hi - s_lo > 1e-4 * L) {
        const double mid = 0.5 * (s_lo + s_hi);
        if (passes(mid))
            s_lo = mid;
        else
            s_hi = mid;
    }
    if (s_lo <= 0.0)
        throw DomainError("infeasible psi bounds: no cube passes the verification grid");

    // The bisection certifies via the PSD predicate kernel; shave the result
    // until the accurate SVD-route check at doubled lattice density agrees,
    // so the returned cube always re-verifies.
    const int fine_res = 2 * grid_resolution - 1;
    CubeCheck fine = verify_cube(geom, center, s_lo, psi_lo, psi_hi, fine_res, threads);
    for (int attempt = 0; attempt < 20 && !fine.pass; ++attempt) {
        s_lo -= 1e-4 * L;
        if (s_lo <= 0.0) throw DomainError("infeasible psi bounds: certificate collapsed");
        fine = verify_cube(geom, center, s_lo, psi_lo, psi_hi, fine_res, threads);
    }
    if (!fine.pass)
        throw DomainError("joint-limit sizing could not certify a cube against the fine grid");

    DesignResult result;
    result.cube_center = center;
    result.cube_half = s_lo;
    result.psi_lo = psi_lo;
    result.psi_hi = psi_hi;
    result.grid_resolution = grid_resolution;
    result.psi_min_observed = fine.psi_min;
    result.psi_max_observed = fine.psi_max;

    // Joint limits: extremes of each rho_i over the certified lattice, widened
    // by one grid step.
    const Lattice lat = make_lattice(center, s_lo, grid_resolution);
    const std::size_t n = lat.px.size();
    batch::QuantityBuffer qb;
    qb.resize(n);
    const batch::KernelGeometry kg = batch::KernelGeometry::from(geom);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        batch::eval_quantities(kg, lat.px.data() + lo, lat.py.data() + lo, lat.pz.data() + lo,
                               hi - lo, batch::shifted(qb.view(), lo));
    });
    double rho_min[3], rho_max[3];
    for (int k = 0; k < 3; ++k) {
        rho_min[k] = qb.rho[k][0];
        rho_max[k] = qb.rho[k][0];
    }
    for (std::size_t i = 1; i < n; ++i) {
        for (int k = 0; k < 3; ++k) {
            rho_min[k] = std::fmin(rho_min[k], qb.rho[k][i]);
            rho_max[k] = std::fmax(rho_max[k], qb.rho[k][i]);
        }
    }
    const double step = grid_resolution > 1 ? 2.0 * s_lo / (grid_resolution - 1) : s_lo;
    for (int k = 0; k < 3; ++k)
        result.joint_limits[k] = {rho_min[k] - step, rho_max[k] + step};

    result.volume_ratio = size_metrics(geom, result).volume_ratio;
    return result;
}

CubeCheck verify_cube(const MachineGeometry& geom, const Vec3& center, double half, double psi_lo,
                      double psi_hi, int resolution, int threads) {
    if (resolution < 2) throw DomainError("verification resolution must be >= 2");
    const Lattice lat = make_lattice(center, half, resolution);
    const std::size_t n = lat.px.size();

    // Library route on purpose (IK + explicit Jacobians + Jacobi SVD), so the
    // verification is independent of the predicate kernel used for sizing.
    std::vector<double> lo_vals(n), hi_vals(n);
    std::vector<unsigned char> ok(n, 0);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            kin::KinematicState s;
            std::array<double, 3> excess{};
            if (!kin::try_inverse_kinematics(geom, {lat.px[i], lat.py[i], lat.pz[i]},
                                             kin::BranchSigns::minus(), s, excess))
                continue;
            const kin::JacobianSet jac = kin::jacobians(geom, s);
            if (!jac.J) continue;
            const auto sv = singular_values3(*jac.J);
            lo_vals[i] = sv[2];
            hi_vals[i] = sv[0];
            ok[i] = 1;
        }
    });

    CubeCheck check;
    bool have = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!ok[i]) {
            ++check.infeasible_points;
            continue;
        }
        if (!have) {
            check.psi_min = lo_vals[i];
            check.psi_max = hi_vals[i];
            have = true;
        } else {
            check.psi_min = std::fmin(check.psi_min, lo_vals[i]);
            check.psi_max = std::fmax(check.psi_max, hi_vals[i]);
        }
        if (lo_vals[i] < psi_lo || hi_vals[i] > psi_hi) ++check.infeasible_points;
    }
    check.pass = have && check.infeasible_points == 0 && check.psi_min >= psi_lo &&
                 check.psi_max <= psi_hi;
    return check;
}

SizeMetrics size_metrics(const MachineGeometry& geom, const DesignResult& result) {
    SizeMetrics m;
    const double L = geom.leg_length;
    Vec3 lo = geom.legs[0].anchor, hi = geom.legs[0].anchor;
    auto grow = [&](const Vec3& p) {
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::fmin(lo[k], p[k]);
            hi[k] = std::fmax(hi[k], p[k]);
        }
    };
    for (int i = 0; i < 3; ++i) {
        const LegGeometry& leg = geom.legs[i];
        grow(leg.anchor);
        grow(leg.anchor + result.joint_limits[i].min * leg.axis);
        grow(leg.anchor + result.joint_limits[i].max * leg.axis);
    }
    const double inflate = result.cube_half + L;
    grow(result.cube_center + Vec3{inflate, inflate, inflate});
    grow(result.cube_center - Vec3{inflate, inflate, inflate});
    m.bbox_min = lo;
    m.bbox_max = hi;
    const Vec3 ext = hi - lo;
    m.bbox_volume = ext.x * ext.y * ext.z;
    const double side = 2.0 * result.cube_half;
    m.cube_volume = side * side * side;
    m.volume_ratio = m.bbox_volume > 0.0 ? m.cube_volume / m.bbox_volume : 0.0;
    return m;
}

std::string save_design_result(const DesignResult& r) {
    ordered_json doc;
    doc["schema"] = 1;
    ordered_json d;
    d["psi_bounds"] = ordered_json::array({r.psi_lo, r.psi_hi});
    d["grid_resolution"] = r.grid_resolution;
    d["cube_center"] = ordered_json::array({r.cube_center.x, r.cube_center.y, r.cube_center.z});
    d["cube_half_side"] = r.cube_half;
    d["joint_limits"] = ordered_json::array();
    for (int i = 0; i < 3; ++i) {
        ordered_json jr;
        jr["min"] = r.joint_limits[i].min;
        jr["max"] = r.joint_limits[i].max;
        d["joint_limits"].push_back(jr);
    }
    d["psi_extremes"] =
        ordered_json{{"min", r.psi_min_observed}, {"max", r.psi_max_observed}};
    d["volume_ratio"] = r.volume_ratio;
    doc["design_result"] = d;
    return doc.dump(2) + "\n";
}

DesignResult load_design_result(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    if (!doc.is_object() || !doc.contains("schema") || doc.at("schema") != 1)
        throw ParseError("$", "expected schema 1 document");
    if (!doc.contains("design_result")) throw ParseError("$", "missing section \"design_result\"");
    const auto& d = doc.at("design_result");
    DesignResult r;
    try {
        r.psi_lo = d.at("psi_bounds").at(0).get<double>();
        r.psi_hi = d.at("psi_bounds").at(1).get<double>();
        r.grid_resolution = d.at("grid_resolution").get<int>();
        r.cube_center = {d.at("cube_center").at(0).get<double>(),
                         d.at("cube_center").at(1).get<double>(),
                         d.at("cube_center").at(2).get<double>()};
        r.cube_half = d.at("cube_half_side").get<double>();
        for (int i = 0; i < 3; ++i) {
            r.joint_limits[i].min = d.at("joint_limits").at(i).at("min").get<double>();
            r.joint_limits[i].max = d.at("joint_limits").at(i).at("max").get<double>();
        }
        r.psi_min_observed = d.at("psi_extremes").at("min").get<double>();
        r.psi_max_observed = d.at("psi_extremes").at("max").get<double>();
        r.volume_ratio = d.at("volume_ratio").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("$.design_result", e.what());
    }
    return r;
}

void save_design_result_file(const DesignResult& r, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write design file: " + path);
        out << save_design_result(r);
        if (!out) throw Error("write failed: " + path);
    }
    std::filesystem::rename(tmp, path);
}

DesignResult load_design_result_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open design file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_design_result(ss.str());
}

}  // namespace orthoglide::design
