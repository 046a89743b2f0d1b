#pragma once

#include "gridpilot/action.hpp"
#include "gridpilot/landmarks.hpp"
#include "gridpilot/payload.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace gridpilot {

/// Half-open byte range into the instruction text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

/// Task definition, action format and semantic constraints of one instruction.
struct InstructionParts {
    std::string task;  // first goal phrase, empty when there is none
    Span task_span;
    std::vector<std::string> extra_tasks;  // later goal phrases, kept for diagnostics
    std::vector<std::string> action_format;
    std::vector<std::string> semantic_constraints;
    std::vector<Span> constraint_spans;
};

namespace detail {

enum class MarkerKind { Task, Constraint, Reset };

struct Marker {
    std::string_view phrase;
    MarkerKind kind;
};

// A phrase is listed before any shorter phrase it extends ("drop off" before "drop").
inline constexpr Marker kMarkers[] = {
    {"reset the occupancy grid", MarkerKind::Reset},
    {"reset the map", MarkerKind::Reset},
    {"clear the map", MarkerKind::Reset},
    {"reset map", MarkerKind::Reset},
    {"stay away from", MarkerKind::Constraint},
    {"keep away from", MarkerKind::Constraint},
    {"steer clear of", MarkerKind::Constraint},
    {"keep clear of", MarkerKind::Constraint},
    {"navigate to", MarkerKind::Task},
    {"proceed to", MarkerKind::Task},
    {"return to", MarkerKind::Task},
    {"travel to", MarkerKind::Task},
    {"drive to", MarkerKind::Task},
    {"head to", MarkerKind::Task},
    {"move to", MarkerKind::Task},
    {"go to", MarkerKind::Task},
    {"drop off", MarkerKind::Task},
    {"pick up", MarkerKind::Task},
    {"stay out of", MarkerKind::Constraint},
    {"stick to", MarkerKind::Constraint},
    {"stay in", MarkerKind::Constraint},
    {"maintaining", MarkerKind::Constraint},
    {"preferring", MarkerKind::Constraint},
    {"utilizing", MarkerKind::Constraint},
    {"retrieve", MarkerKind::Task},
    {"avoiding", MarkerKind::Constraint},
    {"maintain", MarkerKind::Constraint},
    {"deliver", MarkerKind::Task},
    {"utilize", MarkerKind::Constraint},
    {"keeping", MarkerKind::Constraint},
    {"prefer", MarkerKind::Constraint},
    {"avoid", MarkerKind::Constraint},
    {"while", MarkerKind::Constraint},
    {"using", MarkerKind::Constraint},
    {"fetch", MarkerKind::Task},
    {"bring", MarkerKind::Task},
    {"place", MarkerKind::Task},
    {"keep", MarkerKind::Constraint},
    {"pick", MarkerKind::Task},
    {"drop", MarkerKind::Task},
    {"put", MarkerKind::Task},
    {"use", MarkerKind::Constraint},
};

inline bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

inline std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool is_trailing_junk(std::string_view word) {
    static constexpr std::string_view junk[] = {"and", "then", "but", "also", "please", "to", "so", "&"};
    return std::find(std::begin(junk), std::end(junk), word) != std::end(junk);
}

/// Trims whitespace, punctuation and dangling connector words from both ends.
inline Span tidy_span(std::string_view lower, Span s) {
    auto is_trim = [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '.' || c == ';' ||
               c == '!' || c == '?' || c == ':';
    };
    bool changed = true;
    while (changed && s.begin < s.end) {
        changed = false;
        while (s.begin < s.end && is_trim(lower[s.begin])) {
            ++s.begin;
            changed = true;
        }
        while (s.end > s.begin && is_trim(lower[s.end - 1])) {
            --s.end;
            changed = true;
        }
        std::size_t ws = s.end;
        while (ws > s.begin && is_word_char(lower[ws - 1])) --ws;
        if (ws < s.end && ws > s.begin && is_trailing_junk(lower.substr(ws, s.end - ws))) {
            s.end = ws;
            changed = true;
        }
    }
    return s;
}

} // namespace detail

/// Splits an instruction into task, action keywords and constraint phrases.
/// Goal verbs open the task span; constraint markers ("avoid", "prefer",
/// "maintain", "while", ...) open constraint spans; each span runs to the
/// next marker.
inline InstructionParts dissect(std::string_view text) {
    const std::string lower = detail::lower_ascii(text);
    struct Hit {
        std::size_t pos;
        detail::MarkerKind kind;
        std::size_t len;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!detail::is_word_char(lower[i]) || (i > 0 && detail::is_word_char(lower[i - 1]))) continue;
        for (const auto& m : detail::kMarkers) {
            const std::size_t n = m.phrase.size();
            if (lower.compare(i, n, m.phrase) != 0) continue;
            if (i + n < lower.size() && detail::is_word_char(lower[i + n])) continue;
            // "while" immediately followed by another constraint marker joins it.
            if (!hits.empty() && hits.back().kind == detail::MarkerKind::Constraint &&
                m.kind == detail::MarkerKind::Constraint &&
                lower.substr(hits.back().pos, hits.back().len) == "while") {
                bool only_space = true;
                for (std::size_t k = hits.back().pos + hits.back().len; k < i; ++k)
                    only_space = only_space && std::isspace(static_cast<unsigned char>(lower[k]));
                if (only_space) {
                    i += n - 1;
                    break;
                }
            }
            hits.push_back({i, m.kind, n});
            i += n - 1;
            break;
        }
    }
    if (hits.empty())
        throw Error(ErrorCode::NoTaskFound, "no goal verb or action keyword found", std::string(text));

    InstructionParts parts;
    for (std::size_t h = 0; h < hits.size(); ++h) {
        const std::size_t end = h + 1 < hits.size() ? hits[h + 1].pos : lower.size();
        const Span span = detail::tidy_span(lower, {hits[h].pos, end});
        const std::string phrase(text.substr(span.begin, span.end - span.begin));
        switch (hits[h].kind) {
        case detail::MarkerKind::Reset:
            parts.action_format.emplace_back("RESET_MAP");
            break;
        case detail::MarkerKind::Task:
            if (parts.task.empty()) {
                parts.task = phrase;
                parts.task_span = span;
                parts.action_format.emplace_back("SET_GOAL");
            } else {
                parts.extra_tasks.push_back(phrase);
            }
            break;
        case detail::MarkerKind::Constraint:
            parts.semantic_constraints.push_back(phrase);
            parts.constraint_spans.push_back(span);
            break;
        }
    }
    return parts;
}

namespace detail {

inline std::vector<std::string> words_of(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (is_word_char(c)) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline bool is_determiner(std::string_view w) {
    static constexpr std::string_view dets[] = {"the", "a", "an", "any", "all", "every", "each",
                                                "those", "these", "that", "this", "our", "my"};
    return std::find(std::begin(dets), std::end(dets), w) != std::end(dets);
}

inline bool is_generic_noun(std::string_view w) {
    static constexpr std::string_view nouns[] = {"area", "areas", "zone", "zones", "region",
                                                 "regions", "location", "station"};
    return std::find(std::begin(nouns), std::end(nouns), w) != std::end(nouns);
}

inline std::string join(const std::vector<std::string>& ws, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) out.append(sep);
        out.append(ws[i]);
    }
    return out;
}

inline std::optional<LandmarkKind> kind_alias(const std::string& key) {
    static const std::map<std::string, LandmarkKind> aliases = {
        {"repair", LandmarkKind::Repair},          {"repairarea", LandmarkKind::Repair},
        {"repairzone", LandmarkKind::Repair},      {"restrictedzone", LandmarkKind::Repair},
        {"restrictedarea", LandmarkKind::Repair},  {"hazard", LandmarkKind::Repair},
        {"maintenancearea", LandmarkKind::Repair}, {"lane", LandmarkKind::Lane},
        {"openlane", LandmarkKind::Lane},          {"emptylane", LandmarkKind::Lane},
        {"freelane", LandmarkKind::Lane},          {"freearea", LandmarkKind::Lane},
        {"openarea", LandmarkKind::Lane},          {"emptyspace", LandmarkKind::Lane},
        {"openspace", LandmarkKind::Lane},         {"freespace", LandmarkKind::Lane},
        {"aisle", LandmarkKind::Lane},             {"storage", LandmarkKind::Storage},
        {"storagearea", LandmarkKind::Storage},    {"shelf", LandmarkKind::Shelf},
        {"shelve", LandmarkKind::Shelf},           {"pedestrianzone", LandmarkKind::PedestrianZone},
        {"walkway", LandmarkKind::PedestrianZone},
    };
    auto it = aliases.find(key);
    if (it == aliases.end() && key.size() > 1 && key.back() == 's')
        it = aliases.find(key.substr(0, key.size() - 1));
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

inline bool names_pedestrians(const std::vector<std::string>& words) {
    static constexpr std::string_view people[] = {"pedestrian", "pedestrians", "people", "person",
                                                  "persons", "human", "humans", "worker", "workers"};
    for (const auto& w : words)
        if (std::find(std::begin(people), std::end(people), w) != std::end(people)) return true;
    return false;
}

inline std::optional<Cell> parse_coordinate_phrase(std::string_view phrase) {
    static const std::regex re(R"(^\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?\s*$)");
    std::cmatch m;
    const std::string s(phrase);
    if (!std::regex_match(s.c_str(), m, re)) return std::nullopt;
    return Cell{std::stoi(m[1].str()), std::stoi(m[2].str())};
}

} // namespace detail

/// Landmark names a noun phrase refers to. An exact name match comes first;
/// when the phrase also names a landmark kind ("repair area", "open lanes")
/// and `include_kind` is set, every landmark of that kind is added.
inline std::vector<std::string> resolve_phrase(std::string_view phrase, const LandmarkRegistry& registry,
                                               bool include_kind) {
    std::vector<std::string> ws = detail::words_of(phrase);
    while (!ws.empty() && detail::is_determiner(ws.front())) ws.erase(ws.begin());
    std::vector<std::string> out;
    if (ws.empty()) return out;
    const std::string key = detail::join(ws, "");
    std::vector<std::string> stripped = ws;
    while (stripped.size() > 1 && detail::is_generic_noun(stripped.back())) stripped.pop_back();
    const std::string key2 = detail::join(stripped, "");

    for (const auto& [name, lm] : registry.entries()) {
        const std::string nk = detail::squash(name);
        if (nk == key || nk == key2 || (key.size() > 1 && key.back() == 's' && nk == key.substr(0, key.size() - 1))) {
            out.push_back(name);
            break;
        }
    }
    if (out.empty() || include_kind) {
        std::optional<LandmarkKind> kind = detail::kind_alias(key);
        if (!kind) kind = detail::kind_alias(key2);
        if (kind)
            for (const Landmark* lm : registry.of_kind(*kind))
                if (std::find(out.begin(), out.end(), lm->name) == out.end()) {
                    out.push_back(lm->name);
                    if (!include_kind) break;
                }
    }
    return out;
}

/// Result of instruction parsing: the validated action sequence plus the
/// pedestrian-distance flag, which is realised at plan time.
struct ParsedInstruction {
    ActionSequence actions;
    bool pedestrian_safety = false;
    std::optional<InstructionParts> parts;
};

namespace detail {

inline std::string unresolved_phrase(std::string_view phrase) {
    std::vector<std::string> ws = words_of(phrase);
    while (!ws.empty() && is_determiner(ws.front())) ws.erase(ws.begin());
    return join(ws, " ");
}

/// Strips the goal verb and, for pick/place verbs, the object ("pick up the
/// box from shelf 3" -> "shelf 3"); also cuts relational tails ("beside ...").
inline std::string goal_phrase(const std::string& task) {
    std::string lower = lower_ascii(task);
    std::string_view verb;
    for (const auto& m : kMarkers) {
        if (m.kind == MarkerKind::Task && lower.compare(0, m.phrase.size(), m.phrase) == 0) {
            verb = m.phrase;
            break;
        }
    }
    std::string rest = lower.substr(verb.size());
    const bool nav_verb = verb.size() > 3 && verb.substr(verb.size() - 3) == " to";
    if (!nav_verb) {
        static constexpr std::string_view preps[] = {" from ", " at ", " in ", " into ", " on ", " onto ", " to "};
        std::size_t best = std::string::npos;
        std::size_t best_len = 0;
        for (auto p : preps) {
            const std::size_t at = (" " + rest + " ").rfind(p);
            if (at != std::string::npos && (best == std::string::npos || at > best)) {
                best = at;
                best_len = p.size();
            }
        }
        if (best != std::string::npos) {
            const std::string padded = " " + rest + " ";
            rest = padded.substr(best + best_len);
        }
    }
    static constexpr std::string_view cuts[] = {" beside ", " next to ", " near ", " behind ", " by the "};
    for (auto c : cuts) {
        const std::size_t at = (" " + rest + " ").find(c);
        if (at != std::string::npos && at > 0) rest = rest.substr(0, at - 1);
    }
    return rest;
}

enum class ConstraintVerb { Avoid, Prefer, Maintain };

inline std::pair<ConstraintVerb, std::string> split_constraint(const std::string& constraint) {
    std::string lower = lower_ascii(constraint);
    if (lower.rfind("while ", 0) == 0) lower = lower.substr(6);
    struct V {
        std::string_view phrase;
        ConstraintVerb verb;
    };
    static constexpr V verbs[] = {
        {"stay away from", ConstraintVerb::Avoid}, {"keep away from", ConstraintVerb::Avoid},
        {"steer clear of", ConstraintVerb::Avoid}, {"keep clear of", ConstraintVerb::Avoid},
        {"stay out of", ConstraintVerb::Avoid},    {"avoiding", ConstraintVerb::Avoid},
        {"avoid", ConstraintVerb::Avoid},          {"preferring", ConstraintVerb::Prefer},
        {"prefer", ConstraintVerb::Prefer},        {"utilizing", ConstraintVerb::Prefer},
        {"utilize", ConstraintVerb::Prefer},       {"using", ConstraintVerb::Prefer},
        {"use", ConstraintVerb::Prefer},           {"stick to", ConstraintVerb::Prefer},
        {"stay in", ConstraintVerb::Prefer},       {"keep to", ConstraintVerb::Prefer},
        {"maintaining", ConstraintVerb::Maintain},
        {"maintain", ConstraintVerb::Maintain},    {"keeping", ConstraintVerb::Maintain},
        {"keep", ConstraintVerb::Maintain},
    };
    for (const auto& v : verbs)
        if (lower.rfind(v.phrase, 0) == 0 &&
            (lower.size() == v.phrase.size() || !is_word_char(lower[v.phrase.size()])))
            return {v.verb, lower.substr(v.phrase.size())};
    return {ConstraintVerb::Maintain, lower};
}

/// Splits "the repair area and the storage area" into its conjuncts.
inline std::vector<std::string> conjuncts(const std::string& phrase) {
    std::vector<std::string> out;
    std::string cur;
    for (const auto& w : words_of(phrase)) {
        if (w == "and" || w == "or") {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
            continue;
        }
        if (!cur.empty()) cur.push_back(' ');
        cur.append(w);
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace detail

/// Deterministic rule-based mapping of an instruction onto actions, ordered
/// resets, cost modifications, goal.
inline ParsedInstruction rule_parse(std::string_view text, const LandmarkRegistry& registry) {
    ParsedInstruction out;
    InstructionParts parts = dissect(text);
    ActionSequence resets;
    ActionSequence costs;
    std::optional<Action> goal;

    for (const auto& kw : parts.action_format)
        if (kw == "RESET_MAP") resets.emplace_back(ResetMap{});

    auto push_unique = [&](Action a) {
        if (std::find(costs.begin(), costs.end(), a) == costs.end()) costs.push_back(std::move(a));
    };

    for (const auto& constraint : parts.semantic_constraints) {
        const auto [verb, object] = detail::split_constraint(constraint);
        const auto object_words = detail::words_of(object);
        if (detail::names_pedestrians(object_words)) {
            out.pedestrian_safety = true;
            continue;
        }
        if (verb == detail::ConstraintVerb::Maintain)
            throw Error(ErrorCode::UnsupportedConstraint, "unsupported constraint '" + constraint + "'", constraint);
        for (const auto& target : detail::conjuncts(object)) {
            const auto names = resolve_phrase(target, registry, true);
            if (names.empty())
                throw Error(ErrorCode::UnknownLandmark,
                            "no landmark matches '" + detail::unresolved_phrase(target) + "'",
                            detail::unresolved_phrase(target));
            for (const auto& n : names) {
                if (verb == detail::ConstraintVerb::Avoid) push_unique(AvoidAreas{n});
                else push_unique(PreferAreas{n});
            }
        }
    }

    if (!parts.task.empty()) {
        const std::string phrase = detail::goal_phrase(parts.task);
        if (auto cell = detail::parse_coordinate_phrase(phrase)) {
            goal = SetGoal{*cell};
        } else {
            const auto names = resolve_phrase(phrase, registry, false);
            if (names.empty())
                throw Error(ErrorCode::UnknownLandmark,
                            "no landmark matches '" + detail::unresolved_phrase(phrase) + "'",
                            detail::unresolved_phrase(phrase));
            goal = SetGoal{names.front()};
        }
    }

    out.actions = std::move(resets);
    out.actions.insert(out.actions.end(), costs.begin(), costs.end());
    if (goal) out.actions.push_back(*goal);
    out.parts = std::move(parts);
    return out;
}

/// Request handed to an NLU backend.
struct NluRequest {
    std::string instruction;
    std::vector<std::pair<std::string, LandmarkKind>> landmarks;
    std::string schema;
    std::string diagnostic;  // previous SchemaViolation, set on the retry
};

inline constexpr std::string_view kPayloadSchema =
    R"(A JSON array of action objects. Each object has an "action" field, one of
"RESET_MAP", "MODIFY_COST", "AVOID_AREAS", "PREFER_AREAS", "SET_GOAL", plus only these fields:
  RESET_MAP:    no other fields
  MODIFY_COST:  "region": <landmark name> | {"rect":[x0,y0,x1,y1]}, "value": <number> | "BLOCKED", "mode": "set" | "add"
  AVOID_AREAS:  "region": <landmark name> | {"rect":[x0,y0,x1,y1]}
  PREFER_AREAS: "region": <landmark name> | {"rect":[x0,y0,x1,y1]}
  SET_GOAL:     "target": <landmark name> | [x, y]
Unknown fields are rejected.)";

/// Turns an instruction into action payload text. Output is never trusted:
/// parse_instruction decodes and validates whatever comes back.
class NluBackend {
public:
    virtual ~NluBackend() = default;
    [[nodiscard]] virtual std::string label() const = 0;
    virtual std::string complete(const NluRequest& request) = 0;
};

class RuleBasedBackend final : public NluBackend {
public:
    [[nodiscard]] std::string label() const override { return "rule"; }
    std::string complete(const NluRequest& request) override {
        LandmarkRegistry names;
        for (const auto& [name, kind] : request.landmarks) names.put(Landmark{name, Region{}, std::nullopt, kind});
        return encode_payload(rule_parse(request.instruction, names).actions);
    }
};

/// Fixture-backed backend: `instruction TAB payload` lines.
class ReplayBackend final : public NluBackend {
public:
    ReplayBackend(std::string label, std::map<std::string, std::string> recorded)
        : label_(std::move(label)), recorded_(std::move(recorded)) {}

    static ReplayBackend from_text(std::string label, std::string_view text) {
        std::map<std::string, std::string> recorded;
        for (const auto& [instruction, payload] : parse_fixture_lines(text))
            recorded.insert_or_assign(instruction, payload);
        return ReplayBackend(std::move(label), std::move(recorded));
    }

    [[nodiscard]] std::string label() const override { return label_; }
    std::string complete(const NluRequest& request) override {
        auto it = recorded_.find(std::string(detail::trim(request.instruction)));
        if (it == recorded_.end())
            throw Error(ErrorCode::BackendUnavailable, "no recorded payload for instruction",
                        request.instruction);
        return it->second;
    }

    /// Parses `instruction TAB payload` lines; blank lines and '#' comments are skipped.
    static std::vector<std::pair<std::string, std::string>> parse_fixture_lines(std::string_view text) {
        std::vector<std::pair<std::string, std::string>> out;
        std::size_t pos = 0;
        std::size_t line = 0;
        while (pos < text.size()) {
            std::size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            std::string_view row = text.substr(pos, nl - pos);
            pos = nl + 1;
            ++line;
            if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
            if (detail::trim(row).empty() || detail::trim(row).front() == '#') continue;
            const auto tab = row.find('\t');
            if (tab == std::string_view::npos)
                throw Error(ErrorCode::InvalidArgument, "fixture line lacks a TAB", "line " + std::to_string(line));
            out.emplace_back(std::string(detail::trim(row.substr(0, tab))),
                             std::string(detail::trim(row.substr(tab + 1))));
        }
        return out;
    }

private:
    std::string label_;
    std::map<std::string, std::string> recorded_;
};

inline NluRequest make_request(std::string_view text, const LandmarkRegistry& registry) {
    NluRequest req;
    req.instruction = std::string(text);
    for (const auto& [name, lm] : registry.entries()) req.landmarks.emplace_back(name, lm.kind);
    req.schema = std::string(kPayloadSchema);
    return req;
}

/// Prompt for text-generation backends: landmark names, the payload schema
/// verbatim, a payload-only request and, on retry, the previous diagnostic.
inline std::string build_prompt(const NluRequest& req) {
    std::string p;
    p += "You convert robot navigation instructions into an action payload.\n";
    p += "Known landmarks:";
    for (const auto& [name, kind] : req.landmarks) p += " " + name + " (" + std::string(to_string(kind)) + ")";
    p += "\nPayload schema:\n";
    p += req.schema;
    p += "\nReply with the JSON payload only, no prose and no code fences.\n";
    if (!req.diagnostic.empty())
        p += "Your previous reply was rejected: " + req.diagnostic + "\nReturn a corrected payload.\n";
    p += "Instruction: " + req.instruction + "\n";
    return p;
}

/// Fixed emission order: resets, preferences, other cost modifications, goals.
/// With last-write-wins costs an avoided cell stays avoided where a preferred
/// region overlaps it.
inline ActionSequence canonical_order(const ActionSequence& seq) {
    auto rank = [](const Action& a) {
        if (std::holds_alternative<ResetMap>(a)) return 0;
        if (std::holds_alternative<PreferAreas>(a)) return 1;
        if (std::holds_alternative<SetGoal>(a)) return 3;
        return 2;
    };
    ActionSequence out = seq;
    std::stable_sort(out.begin(), out.end(), [&](const Action& a, const Action& b) { return rank(a) < rank(b); });
    return out;
}

/// Checks landmark references and cost floors of a decoded sequence.
inline void validate_references(const ActionSequence& seq, const LandmarkRegistry& registry) {
    auto check_name = [&](const std::string& name) {
        if (!registry.contains(name))
            throw Error(ErrorCode::UnknownLandmark, "no landmark named '" + name + "'", name);
    };
    for (const Action& a : seq) {
        std::visit(overloaded{
                       [](const ResetMap&) {},
                       [&](const ModifyCost& m) {
                           if (const auto* n = std::get_if<std::string>(&m.region)) check_name(*n);
                           if (m.mode == CostMode::Set && m.value < kCostFloor)
                               throw Error(ErrorCode::ValueBelowFloor, "cost below floor -0.5", format_cost(m.value));
                       },
                       [&](const AvoidAreas& v) {
                           if (const auto* n = std::get_if<std::string>(&v.region)) check_name(*n);
                       },
                       [&](const PreferAreas& v) {
                           if (const auto* n = std::get_if<std::string>(&v.region)) check_name(*n);
                       },
                       [&](const SetGoal& g) {
                           if (const auto* n = std::get_if<std::string>(&g.target)) check_name(*n);
                       },
                   },
                   a);
    }
}

/// Instruction -> validated ActionSequence through the given backend. One
/// retry is made when the backend's payload violates the schema.
inline ParsedInstruction parse_instruction(std::string_view text, const LandmarkRegistry& registry,
                                           NluBackend& backend) {
    if (detail::trim(text).empty()) throw Error(ErrorCode::NoTaskFound, "instruction is empty");
    NluRequest req = make_request(text, registry);
    ActionSequence seq;
    try {
        seq = decode_action_payload(backend.complete(req));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SchemaViolation) throw;
        req.diagnostic = e.message();
        seq = decode_action_payload(backend.complete(req));
    }
    validate_references(seq, registry);

    ParsedInstruction out;
    out.actions = canonical_order(seq);
    try {
        InstructionParts parts = dissect(text);
        for (const auto& c : parts.semantic_constraints)
            if (detail::names_pedestrians(detail::words_of(detail::split_constraint(c).second)))
                out.pedestrian_safety = true;
        out.parts = std::move(parts);
    } catch (const Error&) {
        // free-form text the rule grammar cannot segment; the backend handled it
    }
    return out;
}

} // namespace gridpilot
