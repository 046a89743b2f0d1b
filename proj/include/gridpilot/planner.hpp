#pragma once

#include "gridpilot/gridcore.hpp"
#include "gridpilot/profile.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

namespace gridpilot {

using Path = std::vector<Cell>;

struct PlanResult {
    Path path;
    std::size_t nodes_expanded = 0;
    double search_time = 0.0;  // seconds, wall clock
    double path_cost = 0.0;    // unit step + zone cost per entered cell
    std::size_t path_length = 0;
    std::size_t turns = 0;
    double search_cost = 0.0;  // objective the search minimised (zones as configured + turn penalties)
};

inline std::size_t path_length(const Path& path) {
    if (path.empty()) throw Error(ErrorCode::InvalidPath, "path has no cells");
    return path.size() - 1;
}

inline std::size_t count_turns(const Path& path) {
    std::size_t turns = 0;
    for (std::size_t i = 2; i < path.size(); ++i) {
        const int dx0 = path[i - 1].x - path[i - 2].x;
        const int dy0 = path[i - 1].y - path[i - 2].y;
        const int dx1 = path[i].x - path[i - 1].x;
        const int dy1 = path[i].y - path[i - 1].y;
        if (dx0 != dx1 || dy0 != dy1) ++turns;
    }
    return turns;
}

/// Sum over entered cells of (1 + layer cost); the start cell contributes 0.
inline double path_cost(const Path& path, const GridState& state) {
    if (path.empty()) throw Error(ErrorCode::InvalidPath, "path has no cells");
    double total = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Cell c = path[i];
        if (!state.in_bounds(c)) throw Error(ErrorCode::InvalidPath, "path leaves the grid", to_string(c));
        if (state.blocked(c))
            throw Error(ErrorCode::BlockedCellOnPath, "path crosses a blocked cell", to_string(c));
        if (i == 0) continue;
        if (!direction_between(path[i - 1], c))
            throw Error(ErrorCode::InvalidPath, "consecutive path cells are not adjacent", to_string(c));
        total += 1.0 + state.layer_value(c);
    }
    return total;
}

struct PlanOptions {
    /// Heading the robot already has at the start; the first move pays the
    /// turn penalty if it differs.
    std::optional<Direction> initial_heading;
};

namespace detail {

inline double step_cost(const GridState& state, Cell to, bool turned,
                        const StrategyProfile& profile) {
    double cost = 1.0;
    if (profile.honor_zones_in_search) cost += std::max(state.layer_value(to), kCostFloor);
    if (turned) cost += profile.turn_penalty;
    return cost;
}

/// Lower bound on the cost of any single step: 1 when zones are ignored,
/// otherwise 1 plus the cost floor.
inline double min_step_cost(const StrategyProfile& profile) {
    return profile.honor_zones_in_search ? 1.0 + kCostFloor : 1.0;
}

} // namespace detail

/// Fewest heading changes that can still reach a goal offset (dx, dy) when
/// currently heading `dir` (4 = no heading yet).
inline int min_turns(int dir, int dx, int dy) {
    if (dx == 0 && dy == 0) return 0;
    const int hdir = dx > 0 ? static_cast<int>(Direction::East) : static_cast<int>(Direction::West);
    const int vdir = dy > 0 ? static_cast<int>(Direction::South) : static_cast<int>(Direction::North);
    if (dir == 4) return dx != 0 && dy != 0 ? 1 : 0;
    if (dy == 0) return dir == hdir ? 0 : 1;  // reversing is a single direction change
    if (dx == 0) return dir == vdir ? 0 : 1;
    return dir == hdir || dir == vdir ? 1 : 2;
}

/// Scaled Manhattan distance plus the turn penalty of the turns still
/// unavoidable. Consistent: every step costs at least `weight`, a straight
/// step never lowers min_turns and a turning step lowers it by at most one.
struct ManhattanHeuristic {
    Cell goal;
    double weight = 0.5;
    double turn_penalty = 0.0;
    [[nodiscard]] double operator()(Cell c, int dir = 4) const {
        const double base = weight * manhattan(c, goal);
        if (turn_penalty == 0.0) return base;
        return base + turn_penalty * min_turns(dir, goal.x - c.x, goal.y - c.y);
    }
};

inline ManhattanHeuristic heuristic_for(const GridState& state, const StrategyProfile& profile) {
    if (!state.goal()) throw Error(ErrorCode::NoGoalSet, "no goal set");
    return {*state.goal(), detail::min_step_cost(profile), profile.turn_penalty};
}

/// Weighted best-first (A*) search on the 4-connected grid.
///
/// Search states are (cell, incoming direction) so that turn penalties stay
/// exact. Open list order is (f, path cost, h, y, x, direction); neighbours
/// expand E, S, W, N. Among routes with equal objective the one with the lower
/// path cost wins. Occupied and BLOCKED cells are never entered.
inline PlanResult plan(const GridState& state, Cell start, const StrategyProfile& profile,
                       const PlanOptions& options = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!state.goal()) throw Error(ErrorCode::NoGoalSet, "no goal set");
    const Cell goal = *state.goal();
    if (!state.in_bounds(start) || state.blocked(start))
        throw Error(ErrorCode::StartBlocked, "start is outside the grid or blocked", to_string(start));
    if (!state.in_bounds(goal) || state.blocked(goal))
        throw Error(ErrorCode::NoPath, "goal is outside the grid or blocked", to_string(goal));

    const ManhattanHeuristic h = heuristic_for(state, profile);
    constexpr int kDirs = 5;  // four headings plus "none" at the start
    constexpr int kNone = 4;
    const std::size_t ncells = state.occupancy().size();
    const std::size_t nstates = ncells * kDirs;
    std::vector<double> g(nstates, kBlocked);
    std::vector<double> pc(nstates, kBlocked);  // unit step + zone cost along the stored parent chain
    std::vector<std::uint32_t> parent(nstates, UINT32_MAX);
    std::vector<std::uint8_t> closed(nstates, 0);
    std::vector<std::uint8_t> cell_seen(ncells, 0);

    // Objective values compare on a 1e-6 lattice.
    auto key = [](double v) { return std::llround(v * 1e6); };
    struct Entry {
        long long f;
        double pc;
        double h;
        int y;
        int x;
        int dir;
        std::uint32_t id;
        bool operator>(const Entry& o) const {
            if (f != o.f) return f > o.f;
            if (pc != o.pc) return pc > o.pc;
            if (h != o.h) return h > o.h;
            if (y != o.y) return y > o.y;
            if (x != o.x) return x > o.x;
            return dir > o.dir;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    const int start_dir = options.initial_heading ? static_cast<int>(*options.initial_heading) : kNone;
    const auto start_id = static_cast<std::uint32_t>(state.index(start) * kDirs + start_dir);
    g[start_id] = 0.0;
    pc[start_id] = 0.0;
    const double h0 = h(start, start_dir);
    open.push({key(h0), 0.0, h0, start.y, start.x, start_dir, start_id});

    std::size_t expanded = 0;
    std::optional<std::uint32_t> found;
    while (!open.empty()) {
        const Entry e = open.top();
        open.pop();
        if (closed[e.id]) continue;
        closed[e.id] = 1;
        const std::size_t cidx = e.id / kDirs;
        if (!cell_seen[cidx]) {
            cell_seen[cidx] = 1;
            ++expanded;
        }
        const Cell c{e.x, e.y};
        if (c == goal) {
            found = e.id;
            break;
        }
        for (Direction d : kExpansionOrder) {
            const Cell n = neighbor(c, d);
            if (!state.in_bounds(n) || state.blocked(n)) continue;
            const bool turned = e.dir != kNone && e.dir != static_cast<int>(d);
            const double ng = g[e.id] + detail::step_cost(state, n, turned, profile);
            const double npc = pc[e.id] + 1.0 + state.layer_value(n);
            const auto nid = static_cast<std::uint32_t>(state.index(n) * kDirs + static_cast<int>(d));
            if (closed[nid]) continue;
            if (g[nid] != kBlocked) {
                const long long a = key(ng), b = key(g[nid]);
                if (a > b || (a == b && npc >= pc[nid])) continue;
            }
            g[nid] = ng;
            pc[nid] = npc;
            parent[nid] = e.id;
            const double hn = h(n, static_cast<int>(d));
            open.push({key(ng + hn), npc, hn, n.y, n.x, static_cast<int>(d), nid});
        }
    }

    PlanResult result;
    result.nodes_expanded = expanded;
    if (!found) {
        throw Error(ErrorCode::NoPath, "goal unreachable from " + to_string(start),
                    std::to_string(expanded) + " nodes expanded");
    }
    for (std::uint32_t id = *found; id != UINT32_MAX; id = parent[id])
        result.path.push_back(state.occupancy().cell_at(id / kDirs));
    std::reverse(result.path.begin(), result.path.end());
    result.search_cost = g[*found];
    result.search_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.path_length = path_length(result.path);
    result.turns = count_turns(result.path);
    result.path_cost = path_cost(result.path, state);
    return result;
}

} // namespace gridpilot
