#pragma once

// Canonical action payload: a JSON array of action objects, e.g.
//   [{"action":"AVOID_AREAS","region":"repair_area"},
//    {"action":"MODIFY_COST","region":{"rect":[0,0,3,3]},"value":2.0,"mode":"add"},
//    {"action":"SET_GOAL","target":[4,2]}]
// Decoding is strict: unknown action names, unknown keys, keys that do not
// belong to the variant and ill-typed values are all rejected.

#include "gridpilot/action.hpp"

#include <nlohmann/json.hpp>

#include <climits>
#include <string>
#include <string_view>

namespace gridpilot {

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaViolation, what + " at " + path, path);
}

inline int json_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_fail(path, "expected integer");
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(INT_MAX)) schema_fail(path, "integer out of range");
        return static_cast<int>(v);
    }
    const auto v = j.get<std::int64_t>();
    if (v < INT_MIN || v > INT_MAX) schema_fail(path, "integer out of range");
    return static_cast<int>(v);
}

inline Cell json_cell(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) schema_fail(path, "expected [x,y]");
    return {json_int(j[0], path + "[0]"), json_int(j[1], path + "[1]")};
}

inline RegionRef decode_region(const nlohmann::json& j, const std::string& path) {
    if (j.is_string()) {
        auto name = j.get<std::string>();
        if (name.empty()) schema_fail(path, "empty landmark name");
        return name;
    }
    if (!j.is_object() || j.size() != 1) schema_fail(path, "expected landmark name, {\"rect\":...} or {\"cells\":...}");
    if (j.contains("rect")) {
        const auto& r = j.at("rect");
        const std::string rp = path + ".rect";
        if (!r.is_array() || r.size() != 4) schema_fail(rp, "expected [x0,y0,x1,y1]");
        Rect rect{json_int(r[0], rp + "[0]"), json_int(r[1], rp + "[1]"), json_int(r[2], rp + "[2]"),
                  json_int(r[3], rp + "[3]")};
        if (rect.x0 > rect.x1 || rect.y0 > rect.y1) schema_fail(rp, "rectangle corners out of order");
        return Region(rect);
    }
    if (j.contains("cells")) {
        const auto& cs = j.at("cells");
        const std::string cp = path + ".cells";
        if (!cs.is_array() || cs.empty()) schema_fail(cp, "expected non-empty cell list");
        std::vector<Cell> cells;
        for (std::size_t i = 0; i < cs.size(); ++i)
            cells.push_back(json_cell(cs[i], cp + "[" + std::to_string(i) + "]"));
        return Region(std::move(cells));
    }
    schema_fail(path, "unknown region form");
}

inline nlohmann::json encode_region(const RegionRef& ref) {
    if (const auto* name = std::get_if<std::string>(&ref)) return *name;
    const Region& region = std::get<Region>(ref);
    if (region.is_rect()) {
        const Rect& r = region.rect();
        return {{"rect", {r.x0, r.y0, r.x1, r.y1}}};
    }
    nlohmann::json cells = nlohmann::json::array();
    for (const Cell& c : region.cells()) cells.push_back({c.x, c.y});
    return {{"cells", cells}};
}

inline void allow_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> keys,
                       const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto k : keys) ok = ok || key == k;
        if (!ok) schema_fail(path + "." + key, "unexpected key '" + key + "'");
    }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& path) {
    if (!obj.contains(key)) schema_fail(path + "." + key, std::string("missing required field '") + key + "'");
    return obj.at(key);
}

} // namespace detail

inline nlohmann::json encode_action(const Action& action) {
    using nlohmann::json;
    return std::visit(
        overloaded{
            [](const ResetMap&) -> json { return {{"action", "RESET_MAP"}}; },
            [](const ModifyCost& m) -> json {
                json value = is_blocked(m.value) ? json("BLOCKED") : json(m.value);
                return {{"action", "MODIFY_COST"},
                        {"region", detail::encode_region(m.region)},
                        {"value", value},
                        {"mode", m.mode == CostMode::Set ? "set" : "add"}};
            },
            [](const AvoidAreas& a) -> json {
                return {{"action", "AVOID_AREAS"}, {"region", detail::encode_region(a.region)}};
            },
            [](const PreferAreas& a) -> json {
                return {{"action", "PREFER_AREAS"}, {"region", detail::encode_region(a.region)}};
            },
            [](const SetGoal& g) -> json {
                json target;
                if (const auto* n = std::get_if<std::string>(&g.target)) target = *n;
                else target = {std::get<Cell>(g.target).x, std::get<Cell>(g.target).y};
                return {{"action", "SET_GOAL"}, {"target", target}};
            },
        },
        action);
}

inline nlohmann::json encode_sequence(const ActionSequence& seq) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Action& a : seq) arr.push_back(encode_action(a));
    return arr;
}

/// Canonical text form: compact JSON, keys sorted.
inline std::string encode_payload(const ActionSequence& seq) { return encode_sequence(seq).dump(); }

inline Action decode_action(const nlohmann::json& obj, const std::string& path) {
    using detail::schema_fail;
    if (!obj.is_object()) schema_fail(path, "expected action object");
    const auto& name_j = detail::require(obj, "action", path);
    if (!name_j.is_string()) schema_fail(path + ".action", "action name must be a string");
    const auto name = name_j.get<std::string>();

    if (name == "RESET_MAP") {
        detail::allow_keys(obj, {"action"}, path);
        return ResetMap{};
    }
    if (name == "MODIFY_COST") {
        detail::allow_keys(obj, {"action", "region", "value", "mode"}, path);
        ModifyCost m;
        m.region = detail::decode_region(detail::require(obj, "region", path), path + ".region");
        const auto& v = detail::require(obj, "value", path);
        if (v.is_string()) {
            if (v.get<std::string>() != "BLOCKED") schema_fail(path + ".value", "string value must be \"BLOCKED\"");
            m.value = kBlocked;
        } else if (v.is_number()) {
            m.value = v.get<double>();
            if (!std::isfinite(m.value)) schema_fail(path + ".value", "value must be finite");
        } else {
            schema_fail(path + ".value", "value must be a number or \"BLOCKED\"");
        }
        if (obj.contains("mode")) {
            const auto& mode = obj.at("mode");
            if (mode == "set") m.mode = CostMode::Set;
            else if (mode == "add") m.mode = CostMode::Add;
            else schema_fail(path + ".mode", "mode must be \"set\" or \"add\"");
        }
        return m;
    }
    if (name == "AVOID_AREAS" || name == "PREFER_AREAS") {
        detail::allow_keys(obj, {"action", "region"}, path);
        auto region = detail::decode_region(detail::require(obj, "region", path), path + ".region");
        if (name == "AVOID_AREAS") return AvoidAreas{std::move(region)};
        return PreferAreas{std::move(region)};
    }
    if (name == "SET_GOAL") {
        detail::allow_keys(obj, {"action", "target"}, path);
        const auto& t = detail::require(obj, "target", path);
        if (t.is_string()) {
            auto target = t.get<std::string>();
            if (target.empty()) schema_fail(path + ".target", "empty landmark name");
            return SetGoal{std::move(target)};
        }
        return SetGoal{detail::json_cell(t, path + ".target")};
    }
    schema_fail(path + ".action", "unknown action '" + name + "'");
}

inline ActionSequence decode_sequence(const nlohmann::json& j) {
    if (!j.is_array()) detail::schema_fail("$", "payload must be a JSON array");
    ActionSequence seq;
    seq.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        seq.push_back(decode_action(j[i], "$[" + std::to_string(i) + "]"));
    return seq;
}

/// Strict parse of the canonical action payload text.
inline ActionSequence decode_action_payload(std::string_view payload) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(payload);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaViolation, std::string("payload is not valid JSON: ") + e.what(), "$");
    }
    return decode_sequence(j);
}

} // namespace gridpilot
