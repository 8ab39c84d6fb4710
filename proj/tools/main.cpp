// orthoglide CLI: point queries, field maps, workspace computation and
// joint-limit sizing for the Orthoglide translational parallel machine.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthoglide/analysis.hpp"
#include "orthoglide/batch.hpp"
#include "orthoglide/design.hpp"
#include "orthoglide/format.hpp"
#include "orthoglide/kinematics.hpp"
#include "orthoglide/model.hpp"
#include "orthoglide/parallel.hpp"
#include "orthoglide/version.hpp"
#include "orthoglide/workspace.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace orthoglide;

struct GlobalOpts {
    std::string model_path;
    std::string out_path;
    std::string format;  // "" = subcommand default
    int threads = default_threads();
};

MachineGeometry load_model(const GlobalOpts& g) {
    if (g.model_path.empty()) return canonical_orthoglide(1.0);
    return load_geometry_file(g.model_path);
}

ordered_json jvec(const Vec3& v) {
    return ordered_json::array({round12(v.x), round12(v.y), round12(v.z)});
}

ordered_json jarr3(const std::array<double, 3>& a) {
    return ordered_json::array({round12(a[0]), round12(a[1]), round12(a[2])});
}

Vec3 as_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

void write_output(const GlobalOpts& g, const std::string& content) {
    if (g.out_path.empty()) {
        std::cout << content;
        return;
    }
    const std::string tmp = g.out_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + g.out_path);
        out << content;
        if (!out) throw Error("write failed: " + g.out_path);
    }
    std::filesystem::rename(tmp, g.out_path);
}

void summary_line(const GlobalOpts& g, const std::string& cmd, const std::string& params) {
    std::cerr << "orthoglide " << kVersion << " cmd=" << cmd
              << " model=" << (g.model_path.empty() ? "canonical(L=1)" : g.model_path)
              << (params.empty() ? "" : " ") << params
              << " kernel=" << batch::kernel_name(batch::active_kernel())
              << " threads=" << g.threads << "\n";
}

void require_format(const GlobalOpts& g, const char* expected) {
    if (!g.format.empty() && g.format != expected)
        throw DomainError(std::string("this subcommand only supports --format ") + expected);
}

ordered_json state_json(const MachineGeometry& geom, const kin::KinematicState& s) {
    ordered_json doc;
    doc["p"] = jvec(s.p);
    doc["rho"] = jarr3(s.rho.rho);
    doc["branch"] = s.branch.str();
    for (int i = 0; i < 3; ++i) {
        ordered_json leg;
        leg["b"] = jvec(s.b[i]);
        leg["c"] = jvec(s.c[i]);
        doc["legs"].push_back(leg);
    }
    doc["closure_residuals"] = jarr3(kin::closure_residuals(geom, s));
    doc["within_joint_limits"] = s.within_joint_limits;
    return doc;
}

ordered_json report_json(const analysis::AnalysisReport& rep) {
    ordered_json doc;
    auto opt = [](const std::optional<double>& v) {
        return v ? ordered_json(round12(*v)) : ordered_json(nullptr);
    };
    doc["kappa_paper"] = opt(rep.kappa_paper);
    doc["kappa_standard"] = opt(rep.kappa_standard);
    doc["singular_values_J_inv"] =
        rep.singular_values ? ordered_json(jarr3(*rep.singular_values)) : ordered_json(nullptr);
    doc["psi"] = rep.psi ? ordered_json(jarr3(*rep.psi)) : ordered_json(nullptr);
    if (rep.ellipsoid) {
        ordered_json e;
        e["xi"] = jarr3(rep.ellipsoid->xi);
        for (int k = 0; k < 3; ++k) e["axes"].push_back(jvec(rep.ellipsoid->axes[k]));
        doc["ellipsoid"] = e;
    } else {
        doc["ellipsoid"] = nullptr;
    }
    doc["det_A"] = round12(rep.det_A);
    doc["det_B"] = round12(rep.det_B);
    doc["eta"] = jvec(rep.eta);
    doc["classification"] = rep.classification.str();
    return doc;
}

struct PredicateOpts {
    std::vector<double> psi{1.0 / 3.0, 3.0};
    bool no_psi = false;
    bool no_joint_limits = false;
    double min_eta = -1.0;    // <0: default 1e-6 L
    double min_det_a = -1.0;  // <0: default 1e-6 L^3
    std::string limits_from;  // design-result file overriding joint limits

    void add_options(CLI::App* cmd) {
        cmd->add_option("--psi", psi, "psi bounds lo,hi (default 1/3,3)")
            ->delimiter(',')
            ->expected(2);
        cmd->add_flag("--no-psi", no_psi, "disable the psi-bounds check");
        cmd->add_flag("--no-joint-limits", no_joint_limits, "disable the joint-limit check");
        cmd->add_option("--min-eta", min_eta, "serial-singularity margin (default 1e-6 L)");
        cmd->add_option("--min-detA", min_det_a, "parallel-singularity margin (default 1e-6 L^3)");
        cmd->add_option("--limits-from", limits_from,
                        "design-result file whose joint limits replace the model's");
    }

    ws::PointPredicate build(MachineGeometry geom) const {
        if (!limits_from.empty()) {
            const design::DesignResult dr = design::load_design_result_file(limits_from);
            geom.joint_limits = dr.joint_limits;
        }
        ws::PointPredicate pred = ws::PointPredicate::defaults(geom);
        if (no_psi)
            pred.psi_bounds.reset();
        else
            pred.psi_bounds = std::make_pair(psi[0], psi[1]);
        pred.require_joint_limits = !no_joint_limits;
        if (min_eta >= 0.0) pred.min_eta = min_eta;
        if (min_det_a >= 0.0) pred.min_det_a = min_det_a;
        return pred;
    }

    std::string describe() const {
        std::ostringstream s;
        if (no_psi)
            s << "psi=off";
        else
            s << "psi=[" << fmt12(psi[0]) << "," << fmt12(psi[1]) << "]";
        s << " joint_limits=" << (no_joint_limits ? "off" : "on");
        return s.str();
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Orthoglide kinematics, performance analysis and workspace tool"};
    app.set_version_flag("--version", std::string("orthoglide ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--model", g.model_path, "model file (default: canonical geometry, L = 1)");
    app.add_option("--out", g.out_path, "output file (default: stdout)");
    app.add_option("--format", g.format, "output format: csv | text")
        ->check(CLI::IsMember({"csv", "text"}));
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 64));

    // --- validate ---
    auto* cmd_validate = app.add_subcommand("validate", "check a model file against the schema");

    // --- ik / fk ---
    std::vector<double> point{0, 0, 0};
    std::string branch_str = "---";
    auto* cmd_ik = app.add_subcommand("ik", "inverse kinematics at a Cartesian point");
    cmd_ik->add_option("--point", point, "platform point x,y,z")
        ->delimiter(',')
        ->expected(3)
        ->required();
    cmd_ik->add_option("--branch", branch_str, "IK branch signs, e.g. ---, +-+");

    std::vector<double> rho_in{0, 0, 0};
    std::vector<double> hint_in;
    auto* cmd_fk = app.add_subcommand("fk", "forward kinematics at a joint vector");
    cmd_fk->add_option("--rho", rho_in, "joint values rho1,rho2,rho3")
        ->delimiter(',')
        ->expected(3)
        ->required();
    cmd_fk->add_option("--hint", hint_in, "root-selection hint x,y,z")->delimiter(',')->expected(3);

    // --- analyze ---
    std::vector<double> apoint{0, 0, 0};
    auto* cmd_analyze = app.add_subcommand("analyze", "conditioning/singularity report at a point");
    cmd_analyze->add_option("--point", apoint, "platform point x,y,z")
        ->delimiter(',')
        ->expected(3)
        ->required();

    // --- map ---
    std::string quantity = "kappa";
    int map_grid = 64;
    std::vector<double> map_box;  // cx,cy,cz,half
    std::string kappa_variant = "paper";
    PredicateOpts map_pred;
    auto* cmd_map = app.add_subcommand("map", "scalar field over a grid, as CSV");
    cmd_map->add_option("--quantity", quantity,
                        "kappa | psi_max | psi_min | det_A | det_B | eta_min");
    cmd_map->add_option("--grid", map_grid, "points per axis")->check(CLI::Range(1, 4096));
    cmd_map->add_option("--box", map_box, "grid cube cx,cy,cz,half (default: half = 0.5 L)")
        ->delimiter(',')
        ->expected(4);
    cmd_map->add_option("--kappa-variant", kappa_variant, "paper | standard")
        ->check(CLI::IsMember({"paper", "standard"}));
    map_pred.add_options(cmd_map);

    // --- workspace ---
    int depth = 6;
    std::vector<double> ws_box;
    PredicateOpts ws_pred;
    auto* cmd_workspace =
        app.add_subcommand("workspace", "octree workspace: voxel CSV (--out) + summary");
    cmd_workspace->add_option("--depth", depth, "octree depth")->check(CLI::Range(1, 12));
    cmd_workspace->add_option("--box", ws_box, "root cube cx,cy,cz,half (default 1.5 L)")
        ->delimiter(',')
        ->expected(4);
    ws_pred.add_options(cmd_workspace);

    // --- section ---
    std::string axis_name = "z";
    double offset = 0.0;
    int resolution = 128;
    std::vector<double> sec_box;
    PredicateOpts sec_pred;
    auto* cmd_section = app.add_subcommand("section", "planar cross-section feasibility CSV");
    cmd_section->add_option("--axis", axis_name, "plane normal axis: x | y | z")
        ->check(CLI::IsMember({"x", "y", "z"}));
    cmd_section->add_option("--offset", offset, "plane position along the axis");
    cmd_section->add_option("--res", resolution, "grid resolution")->check(CLI::Range(8, 4096));
    cmd_section->add_option("--box", sec_box, "root cube cx,cy,cz,half (default 1.5 L)")
        ->delimiter(',')
        ->expected(4);
    sec_pred.add_options(cmd_section);

    // --- design ---
    std::vector<double> psi_bounds{1.0 / 3.0, 3.0};
    int design_grid = 17;
    auto* cmd_design =
        app.add_subcommand("design", "size joint limits for a psi-bounded workspace cube");
    cmd_design->add_option("--psi", psi_bounds, "amplification bounds lo,hi (default 1/3,3)")
        ->delimiter(',')
        ->expected(2);
    cmd_design->add_option("--grid", design_grid, "verification lattice points per axis")
        ->check(CLI::Range(2, 512));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors are exit code 1
    }

    if (*cmd_validate) {
        require_format(g, "text");
        if (g.model_path.empty()) throw DomainError("validate requires --model");
        const MachineGeometry geom = load_geometry_file(g.model_path);
        const auto violations = validate(geom);
        ordered_json doc;
        doc["violations"] = ordered_json::array();
        for (const auto& v : violations)
            doc["violations"].push_back(ordered_json{
                {"field", v.field}, {"message", v.message}, {"error", v.is_error}});
        doc["valid"] = !has_errors(violations);
        summary_line(g, "validate", "");
        write_output(g, doc.dump(2) + "\n");
        return has_errors(violations) ? 1 : 0;
    }

    const MachineGeometry geom = load_model(g);

    if (*cmd_ik) {
        require_format(g, "text");
        const auto state =
            kin::inverse_kinematics(geom, as_vec3(point), kin::BranchSigns::parse(branch_str));
        summary_line(g, "ik",
                     "point=" + fmt12(point[0]) + "," + fmt12(point[1]) + "," + fmt12(point[2]) +
                         " branch=" + branch_str);
        write_output(g, state_json(geom, state).dump(2) + "\n");
        return 0;
    }
    if (*cmd_fk) {
        require_format(g, "text");
        std::optional<Vec3> hint;
        if (hint_in.size() == 3) hint = as_vec3(hint_in);
        JointVector jv;
        jv.rho = {rho_in[0], rho_in[1], rho_in[2]};
        const auto state = kin::forward_kinematics(geom, jv, hint);
        summary_line(g, "fk",
                     "rho=" + fmt12(rho_in[0]) + "," + fmt12(rho_in[1]) + "," + fmt12(rho_in[2]));
        write_output(g, state_json(geom, state).dump(2) + "\n");
        return 0;
    }
    if (*cmd_analyze) {
        require_format(g, "text");
        const auto state = kin::inverse_kinematics(geom, as_vec3(apoint));
        const auto rep = analysis::analyze(geom, state);
        summary_line(g, "analyze",
                     "point=" + fmt12(apoint[0]) + "," + fmt12(apoint[1]) + "," + fmt12(apoint[2]));
        write_output(g, report_json(rep).dump(2) + "\n");
        return 0;
    }
    if (*cmd_map) {
        require_format(g, "csv");
        const ws::PointPredicate pred = map_pred.build(geom);
        ws::GridSpec grid;
        if (map_box.size() == 4) {
            grid.center = {map_box[0], map_box[1], map_box[2]};
            grid.half = {map_box[3], map_box[3], map_box[3]};
        } else {
            grid.center = ws::default_root_center(geom);
            const double h = 0.5 * geom.leg_length;
            grid.half = {h, h, h};
        }
        grid.n = {map_grid, map_grid, map_grid};
        const auto field = ws::scalar_field(pred, ws::parse_quantity(quantity), grid,
                                            kappa_variant == "standard", g.threads);
        summary_line(g, "map",
                     "quantity=" + quantity + " grid=" + std::to_string(map_grid) + " " +
                         map_pred.describe());
        std::ostringstream out;
        ws::write_field_csv(out, field);
        write_output(g, out.str());
        return 0;
    }
    if (*cmd_workspace) {
        require_format(g, "csv");
        if (g.out_path.empty()) throw DomainError("workspace requires --out for the voxel CSV");
        const ws::PointPredicate pred = ws_pred.build(geom);
        Vec3 center = ws::default_root_center(geom);
        double half = ws::default_root_half(geom);
        if (ws_box.size() == 4) {
            center = {ws_box[0], ws_box[1], ws_box[2]};
            half = ws_box[3];
        }
        const auto oct = ws::compute_octree(pred, center, half, depth, g.threads);
        const auto conn = ws::t_connected(oct);
        const auto cube = ws::inscribed_cube(oct);
        summary_line(g, "workspace",
                     "depth=" + std::to_string(depth) + " " + ws_pred.describe());
        std::ostringstream out;
        ws::write_voxel_csv(out, oct);
        write_output(g, out.str());

        ordered_json doc;
        doc["schema"] = 1;
        ordered_json w;
        w["depth"] = depth;
        w["root_center"] = jvec(center);
        w["root_half_side"] = round12(half);
        w["volume_lower"] = round12(oct.volume_lower);
        w["volume_upper"] = round12(oct.volume_upper);
        w["cells"] = ordered_json{{"inside", oct.inside_count},
                                  {"outside", oct.outside_count},
                                  {"boundary", oct.boundary_count}};
        w["connected"] = conn.connected;
        w["component_count"] = conn.component_count;
        w["largest_component_volume"] = round12(conn.largest_component_volume);
        w["inscribed_cube_side"] = round12(cube.side);
        w["inscribed_cube_volume_fraction"] = round12(cube.volume_fraction);
        doc["workspace_summary"] = w;
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    if (*cmd_section) {
        require_format(g, "csv");
        const ws::PointPredicate pred = sec_pred.build(geom);
        Vec3 center = ws::default_root_center(geom);
        double half = ws::default_root_half(geom);
        if (sec_box.size() == 4) {
            center = {sec_box[0], sec_box[1], sec_box[2]};
            half = sec_box[3];
        }
        const int axis = axis_name == "x" ? 0 : (axis_name == "y" ? 1 : 2);
        const auto cs =
            ws::cross_section(pred, axis, offset, resolution, center, half, g.threads);
        summary_line(g, "section",
                     "axis=" + axis_name + " offset=" + fmt12(offset) +
                         " res=" + std::to_string(resolution) + " " + sec_pred.describe());
        std::ostringstream out;
        ws::write_section_csv(out, cs);
        write_output(g, out.str());
        return 0;
    }
    if (*cmd_design) {
        require_format(g, "text");
        const auto result = design::size_joint_limits(geom, psi_bounds[0], psi_bounds[1],
                                                      design_grid, g.threads);
        summary_line(g, "design",
                     "psi=[" + fmt12(psi_bounds[0]) + "," + fmt12(psi_bounds[1]) +
                         "] grid=" + std::to_string(design_grid));
        write_output(g, design::save_design_result(result));
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const KinematicError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
