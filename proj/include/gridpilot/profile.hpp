#pragma once

#include "gridpilot/gridcore.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace gridpilot {

/// Named parameter bundle for one navigation strategy. Every magnitude used
/// by the avoid/prefer sugar and by the search lives here.
struct StrategyProfile {
    std::string name = "custom";
    double avoid_cost = kBlocked;
    double prefer_discount = -0.25;  // in [-0.5, 0)
    double turn_penalty = 0.0;       // added per direction change during search
    int safety_inflation = 0;        // radius in cells around pedestrians
    bool honor_zones_in_search = true;
    double inflation_cost = 1.0;     // add-mode cost inside the inflation ring
    double pedestrian_cost = 25.0;   // add-mode cost on the pedestrian's own cell

    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

inline constexpr std::string_view kNavigateQuickly = "Navigate Quickly";
inline constexpr std::string_view kMaximizeSafety = "Maximize Safety";
inline constexpr std::string_view kBalance = "Balance Efficiency and Safety";

inline void check_profile(const StrategyProfile& p) {
    if (!(p.prefer_discount >= kCostFloor && p.prefer_discount < 0.0))
        throw Error(ErrorCode::InvalidArgument, "prefer_discount must lie in [-0.5, 0)", p.name);
    if (!(p.turn_penalty >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "turn_penalty must be >= 0", p.name);
    if (p.safety_inflation < 0)
        throw Error(ErrorCode::InvalidArgument, "safety_inflation must be >= 0", p.name);
    if (!(p.avoid_cost >= kCostFloor))
        throw Error(ErrorCode::ValueBelowFloor, "avoid_cost below floor", p.name);
}

namespace detail {
inline std::string squash(std::string_view s) {
    std::string out;
    for (char c : s)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}
} // namespace detail

inline StrategyProfile select_profile(std::string_view name) {
    const std::string key = detail::squash(name);
    StrategyProfile p;
    if (key == "navigatequickly" || key == "quick") {
        p.name = std::string(kNavigateQuickly);
        p.honor_zones_in_search = false;
        p.turn_penalty = 0.8;
        p.safety_inflation = 0;
        p.avoid_cost = 10.0;
        p.prefer_discount = -0.25;
    } else if (key == "maximizesafety" || key == "safety") {
        p.name = std::string(kMaximizeSafety);
        p.honor_zones_in_search = true;
        p.avoid_cost = kBlocked;
        p.safety_inflation = 1;
        p.prefer_discount = -0.25;
        p.turn_penalty = 0.2;
    } else if (key == "balanceefficiencyandsafety" || key == "balanceefficiency" ||
               key == "balance") {
        p.name = std::string(kBalance);
        p.honor_zones_in_search = true;
        p.avoid_cost = kBlocked;
        p.prefer_discount = -0.5;
        p.safety_inflation = 1;
        p.turn_penalty = 0.5;
    } else {
        throw Error(ErrorCode::UnknownStrategy, "unknown strategy '" + std::string(name) + "'",
                    std::string(name));
    }
    return p;
}

/// Plain shortest-path settings used by the A* baseline: zone layer is zero,
/// no turn penalty, no inflation.
inline StrategyProfile baseline_profile() {
    StrategyProfile p;
    p.name = "baseline";
    p.honor_zones_in_search = true;
    p.turn_penalty = 0.0;
    p.safety_inflation = 0;
    return p;
}

} // namespace gridpilot
