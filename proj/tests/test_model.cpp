#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "orthoglide/model.hpp"

using namespace orthoglide;

namespace {

bool mentions(const std::vector<Violation>& vs, const std::string& needle) {
    for (const auto& v : vs)
        if (v.message.find(needle) != std::string::npos) return true;
    return false;
}

MachineGeometry random_geometry(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::uniform_real_distribution<double> pos(0.1, 5.0);
    MachineGeometry g;
    g.leg_length = pos(rng);
    g.name = "random";
    for (int i = 0; i < 3; ++i) {
        g.legs[i].anchor = {d(rng), d(rng), d(rng)};
        Vec3 a{d(rng), d(rng), d(rng)};
        while (a.norm() < 1e-3) a = {d(rng), d(rng), d(rng)};
        g.legs[i].axis = a / a.norm();
        g.legs[i].platform_offset = {d(rng), d(rng), d(rng)};
        const double lo = d(rng);
        g.joint_limits[i] = {lo, lo + pos(rng)};
    }
    return g;
}

bool equal_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

bool equal_bits(const Vec3& a, const Vec3& b) {
    return equal_bits(a.x, b.x) && equal_bits(a.y, b.y) && equal_bits(a.z, b.z);
}

}  // namespace

TEST_CASE("canonical construction") {
    const MachineGeometry g = canonical_orthoglide(1.0);
    CHECK(g.leg_length == 1.0);
    CHECK(g.legs[0].axis == Vec3::unit_x());
    CHECK(g.legs[1].axis == Vec3::unit_y());
    CHECK(g.legs[2].axis == Vec3::unit_z());
    for (int i = 0; i < 3; ++i) {
        CHECK(g.legs[i].anchor == Vec3::zero());
        CHECK(g.legs[i].platform_offset == Vec3::zero());
        CHECK(g.joint_limits[i].min == -2.0);
        CHECK(g.joint_limits[i].max == 2.0);
    }
    CHECK(validate(g).empty());
    CHECK(is_canonical_orthogonal(g));

    // pairwise axis orthogonality
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(std::fabs(g.legs[i].axis.dot(g.legs[j].axis)) <= 1e-12);
}

TEST_CASE("canonical rejects non-positive length") {
    CHECK_THROWS_AS(canonical_orthoglide(0.0), DomainError);
    CHECK_THROWS_AS(canonical_orthoglide(-1.0), DomainError);
}

TEST_CASE("canonical validates for random L > 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(1e-6, 1e6);
    for (int k = 0; k < 100; ++k) CHECK(validate(canonical_orthoglide(pos(rng))).empty());
}

TEST_CASE("validate flags broken fields") {
    MachineGeometry g = canonical_orthoglide(1.0);
    g.legs[0].axis = {2.0, 0.0, 0.0};
    auto vs = validate(g);
    CHECK(has_errors(vs));
    CHECK(mentions(vs, "leg 1: axis not unit"));

    g = canonical_orthoglide(1.0);
    g.joint_limits[1] = {0.5, 0.5};
    vs = validate(g);
    CHECK(has_errors(vs));
    CHECK(mentions(vs, "leg 2: empty joint range"));
}

TEST_CASE("non-orthogonal axes are a note, not an error") {
    MachineGeometry g = canonical_orthoglide(1.0);
    const double s = 1.0 / std::sqrt(2.0);
    g.legs[1].axis = {s, s, 0.0};
    const auto vs = validate(g);
    CHECK(!has_errors(vs));
    REQUIRE(vs.size() == 1);
    CHECK(!vs[0].is_error);
    CHECK(mentions(vs, "non-canonical"));
    CHECK(!is_canonical_orthogonal(g));
}

TEST_CASE("save/load roundtrip is identity") {
    const MachineGeometry g = canonical_orthoglide(1.0);
    const MachineGeometry h = load_geometry(save_geometry(g));
    CHECK(h.leg_length == g.leg_length);
    CHECK(h.name == g.name);
    for (int i = 0; i < 3; ++i) {
        CHECK(equal_bits(h.legs[i].anchor, g.legs[i].anchor));
        CHECK(equal_bits(h.legs[i].axis, g.legs[i].axis));
        CHECK(equal_bits(h.legs[i].platform_offset, g.legs[i].platform_offset));
        CHECK(equal_bits(h.joint_limits[i].min, g.joint_limits[i].min));
        CHECK(equal_bits(h.joint_limits[i].max, g.joint_limits[i].max));
    }
}

TEST_CASE("save/load roundtrip on randomized geometries") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const MachineGeometry g = random_geometry(rng);
        const MachineGeometry h = load_geometry(save_geometry(g));
        CHECK(equal_bits(h.leg_length, g.leg_length));
        for (int i = 0; i < 3; ++i) {
            CHECK(equal_bits(h.legs[i].anchor, g.legs[i].anchor));
            CHECK(equal_bits(h.legs[i].axis, g.legs[i].axis));
            CHECK(equal_bits(h.legs[i].platform_offset, g.legs[i].platform_offset));
            CHECK(equal_bits(h.joint_limits[i].min, g.joint_limits[i].min));
            CHECK(equal_bits(h.joint_limits[i].max, g.joint_limits[i].max));
        }
    }
}

TEST_CASE("parse errors name the field") {
    const std::string good = save_geometry(canonical_orthoglide(1.0));

    SUBCASE("missing leg_length") {
        std::string bad = good;
        const auto pos = bad.find("\"leg_length\"");
        bad.replace(pos, 12, "\"leg_lengthX\"");
        CHECK_THROWS_WITH_AS(load_geometry(bad),
                             doctest::Contains("unknown field \"leg_lengthX\""), ParseError);
    }
    SUBCASE("two legs") {
        try {
            load_geometry(R"({"schema":1,"leg_length":1.0,
                "legs":[{"anchor":[0,0,0],"axis":[1,0,0],"platform_offset":[0,0,0]},
                        {"anchor":[0,0,0],"axis":[0,1,0],"platform_offset":[0,0,0]}],
                "joint_limits":[{"min":-2,"max":2},{"min":-2,"max":2},{"min":-2,"max":2}]})");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("expected 3 legs") != std::string::npos);
        }
    }
    SUBCASE("missing field entirely") {
        CHECK_THROWS_WITH_AS(load_geometry(R"({"schema":1})"),
                             doctest::Contains("missing field \"leg_length\""), ParseError);
    }
    SUBCASE("NaN rejected") {
        std::string bad = good;
        bad.replace(bad.find("1.0"), 3, "NaN");
        CHECK_THROWS_AS(load_geometry(bad), ParseError);
    }
    SUBCASE("overflowing number rejected") {
        std::string bad = good;
        bad.replace(bad.find("\"leg_length\": 1.0"), 17, "\"leg_length\": 1e999");
        CHECK_THROWS_AS(load_geometry(bad), ParseError);
    }
    SUBCASE("wrong schema") {
        std::string bad = good;
        bad.replace(bad.find("\"schema\": 1"), 11, "\"schema\": 2");
        CHECK_THROWS_WITH_AS(load_geometry(bad), doctest::Contains("schema"), ParseError);
    }
    SUBCASE("not json") {
        CHECK_THROWS_AS(load_geometry("leg_length: 1.0"), ParseError);
    }
}

TEST_CASE("truncated documents raise parse errors, never crashes") {
    const std::string good = save_geometry(canonical_orthoglide(1.0));
    for (std::size_t cut = 0; cut < good.size(); cut += 7) {
        try {
            load_geometry(good.substr(0, cut));
            FAIL("expected ParseError at cut ", cut);
        } catch (const ParseError&) {
        }
    }
    // random single-byte corruptions either parse to something valid or throw
    std::mt19937_64 rng(401);
    std::uniform_int_distribution<std::size_t> pos(0, good.size() - 1);
    std::uniform_int_distribution<int> byte(32, 126);
    for (int k = 0; k < 300; ++k) {
        std::string bad = good;
        bad[pos(rng)] = static_cast<char>(byte(rng));
        try {
            (void)load_geometry(bad);
        } catch (const ParseError&) {
        }
    }
}

TEST_CASE("file I/O") {
    const MachineGeometry g = canonical_orthoglide(2.5);
    const std::string path = "model_roundtrip_test.json";
    save_geometry_file(g, path);
    const MachineGeometry h = load_geometry_file(path);
    CHECK(h.leg_length == 2.5);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_geometry_file("does_not_exist.json"), Error);
}
