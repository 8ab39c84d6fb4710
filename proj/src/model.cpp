#include "orthoglide/model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace orthoglide {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kOrthoTol = 1e-12;

double finite_number(const ordered_json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(where, "non-finite number");
    return v;
}

Vec3 vec3_field(const ordered_json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where, "missing field \"" + key + "\"");
    const auto& arr = obj.at(key);
    if (!arr.is_array() || arr.size() != 3)
        throw ParseError(where + "." + key, "expected an array of 3 numbers");
    return {finite_number(arr[0], where + "." + key + "[0]"),
            finite_number(arr[1], where + "." + key + "[1]"),
            finite_number(arr[2], where + "." + key + "[2]")};
}

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok) throw ParseError(where, "unknown field \"" + item.key() + "\"");
    }
}

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

}  // namespace

MachineGeometry canonical_orthoglide(double leg_length) {
    if (!(leg_length > 0.0) || !std::isfinite(leg_length))
        throw DomainError("leg_length must be a positive finite number");
    MachineGeometry g;
    g.leg_length = leg_length;
    const Vec3 axes[3] = {Vec3::unit_x(), Vec3::unit_y(), Vec3::unit_z()};
    for (int i = 0; i < 3; ++i) {
        g.legs[i].anchor = Vec3::zero();
        g.legs[i].axis = axes[i];
        g.legs[i].platform_offset = Vec3::zero();
        g.joint_limits[i] = {-2.0 * leg_length, 2.0 * leg_length};
    }
    g.name = "canonical";
    return g;
}

std::vector<Violation> validate(const MachineGeometry& geom) {
    std::vector<Violation> out;
    if (!(geom.leg_length > 0.0) || !std::isfinite(geom.leg_length))
        out.push_back({"leg_length", "leg_length must be positive", true});
    for (int i = 0; i < 3; ++i) {
        const std::string leg = "leg " + std::to_string(i + 1);
        const LegGeometry& l = geom.legs[i];
        if (!l.anchor.finite() || !l.axis.finite() || !l.platform_offset.finite())
            out.push_back({"legs[" + std::to_string(i) + "]", leg + ": non-finite component", true});
        else if (std::fabs(l.axis.norm() - 1.0) > kOrthoTol)
            out.push_back({"legs[" + std::to_string(i) + "].axis", leg + ": axis not unit", true});
        const JointRange& r = geom.joint_limits[i];
        if (!std::isfinite(r.min) || !std::isfinite(r.max))
            out.push_back(
                {"joint_limits[" + std::to_string(i) + "]", leg + ": non-finite joint limit", true});
        else if (!(r.min < r.max))
            out.push_back(
                {"joint_limits[" + std::to_string(i) + "]", leg + ": empty joint range", true});
    }
    if (!has_errors(out) && !is_canonical_orthogonal(geom))
        out.push_back({"legs", "non-canonical: prismatic axes not pairwise orthogonal", false});
    return out;
}

bool has_errors(const std::vector<Violation>& violations) {
    for (const auto& v : violations)
        if (v.is_error) return true;
    return false;
}

bool is_canonical_orthogonal(const MachineGeometry& geom) {
    for (int i = 0; i < 3; ++i) {
        if (std::fabs(geom.legs[i].axis.norm() - 1.0) > kOrthoTol) return false;
        for (int j = i + 1; j < 3; ++j)
            if (std::fabs(geom.legs[i].axis.dot(geom.legs[j].axis)) > kOrthoTol) return false;
    }
    return true;
}

MachineGeometry load_geometry(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("$", e.what());  // e.g. number overflow
    }
    if (!doc.is_object()) throw ParseError("$", "model file must be a JSON object");
    reject_unknown_keys(doc, {"schema", "name", "leg_length", "legs", "joint_limits"}, "$");

    if (!doc.contains("schema")) throw ParseError("$", "missing field \"schema\"");
    if (!doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != 1)
        throw ParseError("$.schema", "unsupported schema (expected 1)");

    MachineGeometry g;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw ParseError("$.name", "expected a string");
        g.name = doc.at("name").get<std::string>();
    }
    if (!doc.contains("leg_length")) throw ParseError("$", "missing field \"leg_length\"");
    g.leg_length = finite_number(doc.at("leg_length"), "$.leg_length");

    if (!doc.contains("legs")) throw ParseError("$", "missing field \"legs\"");
    const auto& legs = doc.at("legs");
    if (!legs.is_array() || legs.size() != 3)
        throw ParseError("$.legs",
                         "expected 3 legs, got " + std::to_string(legs.is_array() ? legs.size() : 0));
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string where = "$.legs[" + std::to_string(i) + "]";
        const auto& leg = legs[i];
        if (!leg.is_object()) throw ParseError(where, "expected an object");
        reject_unknown_keys(leg, {"anchor", "axis", "platform_offset"}, where);
        g.legs[i].anchor = vec3_field(leg, "anchor", where);
        g.legs[i].axis = vec3_field(leg, "axis", where);
        g.legs[i].platform_offset = vec3_field(leg, "platform_offset", where);
    }

    if (!doc.contains("joint_limits")) throw ParseError("$", "missing field \"joint_limits\"");
    const auto& lim = doc.at("joint_limits");
    if (!lim.is_array() || lim.size() != 3)
        throw ParseError("$.joint_limits", "expected 3 joint ranges");
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string where = "$.joint_limits[" + std::to_string(i) + "]";
        const auto& r = lim[i];
        if (!r.is_object()) throw ParseError(where, "expected an object");
        reject_unknown_keys(r, {"min", "max"}, where);
        if (!r.contains("min") || !r.contains("max"))
            throw ParseError(where, "missing field \"min\" or \"max\"");
        g.joint_limits[i].min = finite_number(r.at("min"), where + ".min");
        g.joint_limits[i].max = finite_number(r.at("max"), where + ".max");
    }
    return g;
}

MachineGeometry load_geometry_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return load_geometry(ss.str());
    } catch (ParseError& e) {
        throw ParseError(path + (e.location.empty() ? "" : " at " + e.location), e.what());
    }
}

std::string save_geometry(const MachineGeometry& geom) {
    ordered_json doc;
    doc["schema"] = 1;
    if (!geom.name.empty()) doc["name"] = geom.name;
    doc["leg_length"] = geom.leg_length;
    doc["legs"] = ordered_json::array();
    for (int i = 0; i < 3; ++i) {
        ordered_json leg;
        leg["anchor"] = vec3_json(geom.legs[i].anchor);
        leg["axis"] = vec3_json(geom.legs[i].axis);
        leg["platform_offset"] = vec3_json(geom.legs[i].platform_offset);
        doc["legs"].push_back(leg);
    }
    doc["joint_limits"] = ordered_json::array();
    for (int i = 0; i < 3; ++i) {
        ordered_json r;
        r["min"] = geom.joint_limits[i].min;
        r["max"] = geom.joint_limits[i].max;
        doc["joint_limits"].push_back(r);
    }
    return doc.dump(2) + "\n";
}

void save_geometry_file(const MachineGeometry& geom, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write model file: " + path);
        out << save_geometry(geom);
        if (!out) throw Error("write failed: " + path);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace orthoglide
