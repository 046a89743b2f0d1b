#pragma once

#include "gridpilot/gridcore.hpp"
#include "gridpilot/landmarks.hpp"
#include "gridpilot/profile.hpp"

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace gridpilot {

/// A region reference: a landmark name resolved at application time, or an
/// inline region.
using RegionRef = std::variant<std::string, Region>;
/// A goal reference: a landmark name (goal = its access cell) or a cell.
using GoalTarget = std::variant<std::string, Cell>;

struct ResetMap {
    friend bool operator==(const ResetMap&, const ResetMap&) = default;
};
struct ModifyCost {
    RegionRef region;
    double value = 0.0;
    CostMode mode = CostMode::Set;
    friend bool operator==(const ModifyCost&, const ModifyCost&) = default;
};
struct AvoidAreas {
    RegionRef region;
    friend bool operator==(const AvoidAreas&, const AvoidAreas&) = default;
};
struct PreferAreas {
    RegionRef region;
    friend bool operator==(const PreferAreas&, const PreferAreas&) = default;
};
struct SetGoal {
    GoalTarget target;
    friend bool operator==(const SetGoal&, const SetGoal&) = default;
};

using Action = std::variant<ResetMap, ModifyCost, AvoidAreas, PreferAreas, SetGoal>;
using ActionSequence = std::vector<Action>;

/// Error raised by apply_sequence; carries the index of the failing action.
class SequenceError : public Error {
public:
    SequenceError(const Error& cause, std::size_t index)
        : Error(cause.code(), "action " + std::to_string(index) + ": " + cause.message(),
                cause.detail()),
          index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

struct Diagnostic {
    ErrorCode code;
    std::string message;
    std::string detail;
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::string format_cost(double v) {
    if (is_blocked(v)) return "BLOCKED";
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

inline std::string describe(const RegionRef& r) {
    if (const auto* name = std::get_if<std::string>(&r)) return *name;
    const Region& region = std::get<Region>(r);
    if (region.is_rect()) {
        const Rect& q = region.rect();
        return "rect[" + std::to_string(q.x0) + "," + std::to_string(q.y0) + "," +
               std::to_string(q.x1) + "," + std::to_string(q.y1) + "]";
    }
    return "cells[" + std::to_string(region.cells().size()) + "]";
}

inline std::string describe(const Action& a) {
    return std::visit(
        overloaded{
            [](const ResetMap&) -> std::string { return "RESET_MAP"; },
            [](const ModifyCost& m) -> std::string {
                return "MODIFY_COST " + describe(m.region) + " " + format_cost(m.value) +
                       (m.mode == CostMode::Set ? " set" : " add");
            },
            [](const AvoidAreas& m) -> std::string { return "AVOID_AREAS " + describe(m.region); },
            [](const PreferAreas& m) -> std::string { return "PREFER_AREAS " + describe(m.region); },
            [](const SetGoal& g) -> std::string {
                if (const auto* n = std::get_if<std::string>(&g.target)) return "SET_GOAL " + *n;
                return "SET_GOAL " + to_string(std::get<Cell>(g.target));
            },
        },
        a);
}

inline Region resolve_region(const RegionRef& ref, const LandmarkRegistry& registry) {
    if (const auto* name = std::get_if<std::string>(&ref)) return registry.at(*name).region;
    return std::get<Region>(ref);
}

inline Cell resolve_goal(const GoalTarget& target, const GridState& state,
                         const LandmarkRegistry& registry) {
    if (const auto* name = std::get_if<std::string>(&target))
        return landmark_access_cell(registry.at(*name), state);
    return std::get<Cell>(target);
}

/// Rewrites AvoidAreas / PreferAreas into the ModifyCost they stand for.
inline Action lower(const Action& action, const StrategyProfile& profile) {
    return std::visit(
        overloaded{
            [&](const AvoidAreas& a) -> Action {
                return ModifyCost{a.region, profile.avoid_cost, CostMode::Set};
            },
            [&](const PreferAreas& a) -> Action {
                return ModifyCost{a.region, profile.prefer_discount, CostMode::Set};
            },
            [](const auto& other) -> Action { return other; },
        },
        action);
}

inline GridState apply_action(const GridState& state, const Action& action,
                              const LandmarkRegistry& registry, const StrategyProfile& profile) {
    return std::visit(
        overloaded{
            [&](const ResetMap&) { return reset_map(state); },
            [&](const ModifyCost& m) {
                return modify_cost(state, resolve_region(m.region, registry), m.value, m.mode);
            },
            [&](const AvoidAreas& a) {
                return modify_cost(state, resolve_region(a.region, registry), profile.avoid_cost,
                                   CostMode::Set);
            },
            [&](const PreferAreas& a) {
                return modify_cost(state, resolve_region(a.region, registry),
                                   profile.prefer_discount, CostMode::Set);
            },
            [&](const SetGoal& g) {
                return set_goal(state, resolve_goal(g.target, state, registry));
            },
        },
        action);
}

/// Left fold of apply_action. All-or-nothing: on failure the input state is
/// untouched and a SequenceError names the failing index.
inline GridState apply_sequence(const GridState& state, const ActionSequence& seq,
                                const LandmarkRegistry& registry, const StrategyProfile& profile) {
    GridState cur = state;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        try {
            cur = apply_action(cur, seq[i], registry, profile);
        } catch (const Error& e) {
            throw SequenceError(e, i);
        }
    }
    return cur;
}

/// Checks an action against a state without mutating anything.
inline std::vector<Diagnostic> validate_action(const Action& action, const GridState& state,
                                               const LandmarkRegistry& registry) {
    std::vector<Diagnostic> out;
    auto check_region_ref = [&](const RegionRef& ref) {
        if (const auto* name = std::get_if<std::string>(&ref)) {
            const Landmark* lm = registry.find(*name);
            if (!lm) {
                out.push_back({ErrorCode::UnknownLandmark, "no landmark named '" + *name + "'", *name});
                return;
            }
            if (!lm->region.within(state.width(), state.height()))
                out.push_back({ErrorCode::RegionOutOfBounds, "landmark region exceeds grid", *name});
            return;
        }
        const Region& r = std::get<Region>(ref);
        if (!r.within(state.width(), state.height()))
            out.push_back({ErrorCode::RegionOutOfBounds, "region exceeds grid bounds", describe(ref)});
    };
    std::visit(overloaded{
                   [](const ResetMap&) {},
                   [&](const ModifyCost& m) {
                       check_region_ref(m.region);
                       if (std::isnan(m.value))
                           out.push_back({ErrorCode::InvalidArgument, "cost value is NaN", ""});
                       else if (m.value == -kBlocked ||
                                (m.mode == CostMode::Set && m.value < kCostFloor))
                           out.push_back({ErrorCode::ValueBelowFloor,
                                          "cost below floor -0.5", format_cost(m.value)});
                   },
                   [&](const AvoidAreas& a) { check_region_ref(a.region); },
                   [&](const PreferAreas& a) { check_region_ref(a.region); },
                   [&](const SetGoal& g) {
                       Cell cell{};
                       if (const auto* name = std::get_if<std::string>(&g.target)) {
                           const Landmark* lm = registry.find(*name);
                           if (!lm) {
                               out.push_back({ErrorCode::UnknownLandmark,
                                              "no landmark named '" + *name + "'", *name});
                               return;
                           }
                           try {
                               cell = landmark_access_cell(*lm, state);
                           } catch (const Error& e) {
                               out.push_back({e.code(), e.message(), e.detail()});
                               return;
                           }
                       } else {
                           cell = std::get<Cell>(g.target);
                       }
                       if (!state.in_bounds(cell))
                           out.push_back({ErrorCode::OutOfBounds, "goal outside grid", to_string(cell)});
                       else if (state.blocked(cell))
                           out.push_back({ErrorCode::GoalOccupied, "goal cell is occupied or blocked",
                                          to_string(cell)});
                   },
               },
               action);
    return out;
}

} // namespace gridpilot
