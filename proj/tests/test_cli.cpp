#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "orthoglide/design.hpp"
#include "orthoglide/model.hpp"

#ifndef ORTHOGLIDE_CLI_BIN
#error "ORTHOGLIDE_CLI_BIN must point at the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "orthoglide_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(ORTHOGLIDE_CLI_BIN) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "orthoglide_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("ik at the isotropic point") {
    const auto r = run_cli("ik --point 0,0,0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("-1.0") != std::string::npos);
    CHECK(r.err.find("orthoglide") != std::string::npos);  // summary line
    CHECK(r.err.find("cmd=ik") != std::string::npos);
}

TEST_CASE("ik unreachable point exits 2 with per-leg reasons") {
    const auto r = run_cli("ik --point 0,1.5,0");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("leg 1") != std::string::npos);
    CHECK(r.err.find("unreachable") != std::string::npos);
}

TEST_CASE("fk inverts the isotropic joint vector") {
    const auto r = run_cli("fk --rho -1,-1,-1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"p\"") != std::string::npos);
    CHECK(r.out.find("0.0") != std::string::npos);
}

TEST_CASE("fk with no assembly exits 2") {
    const auto r = run_cli("fk --rho 10,10,10");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no assembly") != std::string::npos);
}

TEST_CASE("analyze reports both condition-number variants") {
    const auto r = run_cli("analyze --point 0,0,0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"kappa_paper\": 1.0") != std::string::npos);
    CHECK(r.out.find("\"kappa_standard\": 1.0") != std::string::npos);
    CHECK(r.out.find("\"classification\": \"regular\"") != std::string::npos);

    const auto r2 = run_cli("analyze --point 0,1,0");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("serial_singular") != std::string::npos);
}

TEST_CASE("validate distinguishes good and broken model files") {
    const auto dir = scratch_dir();
    const auto good = dir / "good_model.json";
    orthoglide::save_geometry_file(orthoglide::canonical_orthoglide(1.0), good.string());
    const auto r = run_cli("--model " + good.string() + " validate");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"valid\": true") != std::string::npos);

    const auto broken = dir / "broken_model.json";
    {
        std::ofstream f(broken);
        f << R"({"schema":1,"leg_length":1.0,"legs":[],"joint_limits":[]})";
    }
    const auto r2 = run_cli("--model " + broken.string() + " validate");
    CHECK(r2.exit_code == 1);
    CHECK(r2.err.find("expected 3 legs") != std::string::npos);

    const auto r3 = run_cli("validate");
    CHECK(r3.exit_code == 1);  // validate requires --model
}

TEST_CASE("map writes a deterministic CSV") {
    const auto dir = scratch_dir();
    const auto f1 = dir / "map1.csv";
    const auto f2 = dir / "map2.csv";
    const std::string args = "map --quantity psi_max --grid 8 --box 0,0,0,0.3";
    CHECK(run_cli(args + " --out " + f1.string()).exit_code == 0);
    CHECK(run_cli(args + " --out " + f2.string()).exit_code == 0);
    const std::string a = slurp(f1), b = slurp(f2);
    CHECK(!a.empty());
    CHECK(a == b);  // byte-identical reruns
    CHECK(a.rfind("x,y,z,value,feasible\n", 0) == 0);
}

TEST_CASE("outputs are byte-identical across thread counts") {
    const auto dir = scratch_dir();
    const auto f1 = dir / "map_t1.csv";
    const auto f2 = dir / "map_t2.csv";
    const std::string args = "map --quantity kappa --grid 16 --box 0,0,0,0.4";
    CHECK(run_cli(args + " --threads 1 --out " + f1.string()).exit_code == 0);
    CHECK(run_cli(args + " --threads 2 --out " + f2.string()).exit_code == 0);
    CHECK(slurp(f1) == slurp(f2));
}

TEST_CASE("map rejects unknown quantities with exit 1") {
    const auto r = run_cli("map --quantity bogus --grid 4");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown quantity") != std::string::npos);
}

TEST_CASE("workspace emits voxels plus a summary") {
    const auto dir = scratch_dir();
    const auto vox = dir / "vox.csv";
    const auto r = run_cli("workspace --depth 3 --out " + vox.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"workspace_summary\"") != std::string::npos);
    CHECK(r.out.find("\"connected\": true") != std::string::npos);
    CHECK(slurp(vox).rfind("x_center,y_center,z_center,half_side,label\n", 0) == 0);

    // no --out: usage error, no partial file
    const auto missing = dir / "never_written.csv";
    const auto r2 = run_cli("workspace --depth 3");
    CHECK(r2.exit_code == 1);
    CHECK(!fs::exists(missing));
}

TEST_CASE("section emits the plane grid") {
    const auto dir = scratch_dir();
    const auto csv = dir / "section.csv";
    const auto r = run_cli("section --axis z --offset 0 --res 16 --out " + csv.string());
    CHECK(r.exit_code == 0);
    const std::string content = slurp(csv);
    CHECK(content.rfind("x,y,z,feasible\n", 0) == 0);
    CHECK(std::count(content.begin(), content.end(), '\n') == 1 + 16 * 16);
}

TEST_CASE("design writes a result file that re-validates") {
    const auto dir = scratch_dir();
    const auto out = dir / "design.json";
    const auto r = run_cli("design --psi 0.8,1.25 --grid 9 --out " + out.string());
    CHECK(r.exit_code == 0);
    const auto dr = orthoglide::design::load_design_result_file(out.string());
    CHECK(dr.cube_half > 0.0);
    const auto check = orthoglide::design::verify_cube(
        orthoglide::canonical_orthoglide(1.0), dr.cube_center, dr.cube_half, dr.psi_lo, dr.psi_hi,
        17, 2);
    CHECK(check.pass);
}

TEST_CASE("workspace accepts joint limits from a design file") {
    const auto dir = scratch_dir();
    const auto design_file = dir / "limits.json";
    CHECK(run_cli("design --psi 0.5,2 --grid 9 --out " + design_file.string()).exit_code == 0);
    const auto vox = dir / "vox_limited.csv";
    const auto r = run_cli("workspace --depth 3 --limits-from " + design_file.string() +
                           " --out " + vox.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"volume_lower\"") != std::string::npos);
}

TEST_CASE("format mismatches exit 1") {
    CHECK(run_cli("--format csv analyze --point 0,0,0").exit_code == 1);
    CHECK(run_cli("--format text map --grid 4").exit_code == 1);
}

TEST_CASE("model flag feeds every subcommand") {
    const auto dir = scratch_dir();
    const auto model = dir / "l25.json";
    orthoglide::save_geometry_file(orthoglide::canonical_orthoglide(2.5), model.string());
    const auto r = run_cli("--model " + model.string() + " ik --point 0,0,0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("-2.5") != std::string::npos);

    const auto r2 = run_cli("--model does_not_exist.json ik --point 0,0,0");
    CHECK(r2.exit_code == 3);
}
