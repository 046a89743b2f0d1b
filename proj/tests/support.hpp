#pragma once

#include "gridpilot/dcip.hpp"
#include "gridpilot/harness.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <queue>
#include <random>
#include <sstream>
#include <string>

#ifndef GRIDPILOT_SOURCE_DIR
#define GRIDPILOT_SOURCE_DIR "."
#endif

namespace gptest {

using namespace gridpilot;

inline std::string source_path(const std::string& rel) { return std::string(GRIDPILOT_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) {
    std::ifstream in(source_path(rel), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline WorldState scenario(const std::string& name) { return load_scenario(slurp("scenarios/" + name)); }

// Bit-level equality, so that -0.0 vs 0.0 or NaN payloads are not glossed over.
inline bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

inline bool bit_equal(const GridState& a, const GridState& b) {
    return a.base() == b.base() && a.occupancy() == b.occupancy() && bit_equal(a.costs().values(), b.costs().values()) &&
           a.goal() == b.goal() && a.suggested_start() == b.suggested_start();
}

inline Cell random_cell(std::mt19937_64& rng, int w, int h) {
    return {std::uniform_int_distribution<int>(0, w - 1)(rng), std::uniform_int_distribution<int>(0, h - 1)(rng)};
}

// Dyadic layer values keep every path sum exact in binary floating point.
inline double random_dyadic_cost(std::mt19937_64& rng) {
    static constexpr double kValues[] = {0.0, 0.0, 0.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 3.75, kBlocked};
    return kValues[std::uniform_int_distribution<std::size_t>(0, std::size(kValues) - 1)(rng)];
}

inline GridState random_grid(std::mt19937_64& rng, int w, int h, double density, bool with_costs) {
    OccupancyGrid g(w, h);
    std::bernoulli_distribution occ(density);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) g.set({x, y}, occ(rng));
    GridState s(g);
    if (with_costs)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (std::bernoulli_distribution(0.4)(rng)) s.set_layer_value({x, y}, random_dyadic_cost(rng));
    return s;
}

inline Region random_region(std::mt19937_64& rng, int w, int h) {
    if (std::bernoulli_distribution(0.5)(rng)) {
        const Cell a = random_cell(rng, w, h);
        const Cell b = random_cell(rng, w, h);
        return Region(Rect{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)});
    }
    std::vector<Cell> cells;
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < n; ++i) cells.push_back(random_cell(rng, w, h));
    return Region(std::move(cells));
}

/// Registry with a few random landmarks named lm0..lm3 inside a w x h grid.
inline LandmarkRegistry random_registry(std::mt19937_64& rng, int w, int h) {
    LandmarkRegistry reg;
    for (int i = 0; i < 4; ++i) {
        Landmark lm;
        lm.name = "lm" + std::to_string(i);
        lm.region = random_region(rng, w, h);
        lm.kind = static_cast<LandmarkKind>(i % 4);
        reg.put(std::move(lm));
    }
    return reg;
}

/// A random action; about a third of them are invalid for the state
/// (unknown landmark, out-of-bounds region, sub-floor value, bad goal).
inline Action random_action(std::mt19937_64& rng, const GridState& s) {
    const int w = s.width();
    const int h = s.height();
    auto region_ref = [&]() -> RegionRef {
        switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return std::string("lm" + std::to_string(std::uniform_int_distribution<int>(0, 3)(rng)));
        case 1: return std::string("nowhere");
        case 2: return Region(Rect{0, 0, w, h});  // one past the edge
        default: return random_region(rng, w, h);
        }
    };
    auto value = [&]() {
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0: return -3.0;
        case 1: return kBlocked;
        default: {
            const double v = random_dyadic_cost(rng);
            return is_blocked(v) ? 1.5 : v;
        }
        }
    };
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0: return ResetMap{};
    case 1: return ModifyCost{region_ref(), value(), CostMode::Set};
    case 2: return ModifyCost{region_ref(), value(), CostMode::Add};
    case 3: return AvoidAreas{region_ref()};
    case 4: return PreferAreas{region_ref()};
    default:
        if (std::bernoulli_distribution(0.2)(rng)) return SetGoal{std::string("lm0")};
        if (std::bernoulli_distribution(0.1)(rng)) return SetGoal{Cell{w + 1, 0}};
        return SetGoal{random_cell(rng, w, h)};
    }
}

/// Uniform-cost search over (cell, heading) states with no heuristic and no
/// tie-breaking rules: the optimality oracle for the planner.
inline std::optional<double> ucs_cost(const GridState& s, Cell start, const StrategyProfile& p,
                                      std::optional<Direction> heading) {
    const Cell goal = *s.goal();
    if (s.blocked(start) || s.blocked(goal)) return std::nullopt;
    const int w = s.width();
    const int h = s.height();
    auto id = [&](Cell c, int d) { return (c.y * w + c.x) * 5 + d; };
    std::vector<double> dist(static_cast<std::size_t>(w * h * 5), kBlocked);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const int d0 = heading ? static_cast<int>(*heading) : 4;
    dist[id(start, d0)] = 0.0;
    pq.push({0.0, id(start, d0)});
    static constexpr int dx[] = {1, 0, -1, 0};
    static constexpr int dy[] = {0, 1, 0, -1};
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        const int dir = u % 5;
        const int cell = u / 5;
        const Cell c{cell % w, cell / w};
        if (c == goal) return d;
        for (int nd = 0; nd < 4; ++nd) {
            const Cell n{c.x + dx[nd], c.y + dy[nd]};
            if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= h || s.blocked(n)) continue;
            double step = 1.0;
            if (p.honor_zones_in_search) step += std::max(s.layer_value(n), -0.5);
            if (dir != 4 && dir != nd) step += p.turn_penalty;
            const int v = id(n, nd);
            if (d + step < dist[v]) {
                dist[v] = d + step;
                pq.push({dist[v], v});
            }
        }
    }
    return std::nullopt;
}

/// Dijkstra on (objective, path cost) pairs compared lexicographically. Exact
/// for dyadic step costs.
inline std::optional<std::pair<double, double>> ucs_lexicographic(const GridState& s, Cell start,
                                                                  const StrategyProfile& p,
                                                                  std::optional<Direction> heading) {
    using Label = std::pair<double, double>;
    const Cell goal = *s.goal();
    if (s.blocked(start) || s.blocked(goal)) return std::nullopt;
    const int w = s.width();
    auto id = [&](Cell c, int d) { return (c.y * w + c.x) * 5 + d; };
    std::vector<Label> dist(static_cast<std::size_t>(w * s.height() * 5), {kBlocked, kBlocked});
    using Item = std::pair<Label, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const int d0 = heading ? static_cast<int>(*heading) : 4;
    dist[id(start, d0)] = {0.0, 0.0};
    pq.push({{0.0, 0.0}, id(start, d0)});
    static constexpr int dx[] = {1, 0, -1, 0};
    static constexpr int dy[] = {0, 1, 0, -1};
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        const int dir = u % 5;
        const Cell c{(u / 5) % w, (u / 5) / w};
        if (c == goal) return d;
        for (int nd = 0; nd < 4; ++nd) {
            const Cell n{c.x + dx[nd], c.y + dy[nd]};
            if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= s.height() || s.blocked(n)) continue;
            double step = 1.0;
            if (p.honor_zones_in_search) step += std::max(s.layer_value(n), -0.5);
            if (dir != 4 && dir != nd) step += p.turn_penalty;
            const Label next{d.first + step, d.second + 1.0 + s.layer_value(n)};
            const int v = id(n, nd);
            if (next < dist[v]) {
                dist[v] = next;
                pq.push({next, v});
            }
        }
    }
    return std::nullopt;
}

/// Search objective of a concrete path, evaluated from scratch.
inline double evaluate_search_cost(const Path& path, const GridState& s, const StrategyProfile& p,
                                   std::optional<Direction> heading) {
    double total = 0.0;
    std::optional<std::pair<int, int>> prev;
    if (heading) {
        static constexpr int dx[] = {1, 0, -1, 0};
        static constexpr int dy[] = {0, 1, 0, -1};
        prev = std::pair(dx[static_cast<int>(*heading)], dy[static_cast<int>(*heading)]);
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
        const std::pair v(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
        total += 1.0;
        if (p.honor_zones_in_search) total += std::max(s.layer_value(path[i]), -0.5);
        if (prev && *prev != v) total += p.turn_penalty;
        prev = v;
    }
    return total;
}

inline bool path_is_valid(const Path& path, const GridState& s, Cell start) {
    if (path.empty() || path.front() != start || path.back() != *s.goal()) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!s.in_bounds(path[i]) || s.blocked(path[i])) return false;
        if (i > 0 && std::abs(path[i].x - path[i - 1].x) + std::abs(path[i].y - path[i - 1].y) != 1) return false;
    }
    return true;
}

/// Profiles whose turn penalties are dyadic so oracle comparisons are exact.
inline std::vector<StrategyProfile> oracle_profiles() {
    StrategyProfile plain = baseline_profile();
    StrategyProfile quick = select_profile("Navigate Quickly");
    quick.turn_penalty = 0.75;
    StrategyProfile safety = select_profile("Maximize Safety");
    safety.turn_penalty = 0.25;
    return {plain, quick, safety, select_profile("Balance")};
}

struct OracleReport {
    int grids = 0;
    int agree_cost = 0;
    int agree_nopath = 0;
    int nopath_cases = 0;
    int valid_paths = 0;
    std::vector<std::string> failures;
};

/// Plans on `n` seeded random 8x8 weighted grids and compares with ucs_cost.
inline OracleReport run_planner_oracle(int n, std::uint64_t seed) {
    OracleReport r;
    std::mt19937_64 rng(seed);
    const auto profiles = oracle_profiles();
    for (int i = 0; i < n; ++i) {
        GridState s = random_grid(rng, 8, 8, 0.25, true);
        Cell start = random_cell(rng, 8, 8);
        Cell goal = random_cell(rng, 8, 8);
        s.set_occupied(start, false);
        s.set_layer_value(start, 0.0);
        s.set_occupied(goal, false);
        if (is_blocked(s.layer_value(goal))) s.set_layer_value(goal, 0.0);
        s.assign_goal(goal);
        const StrategyProfile& p = profiles[static_cast<std::size_t>(i) % profiles.size()];
        std::optional<Direction> heading;
        if (std::bernoulli_distribution(0.5)(rng)) heading = static_cast<Direction>(std::uniform_int_distribution<int>(0, 3)(rng));
        ++r.grids;
        const auto expected = ucs_cost(s, start, p, heading);
        std::optional<PlanResult> got;
        try {
            got = plan(s, start, p, PlanOptions{heading});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoPath) {
                r.failures.push_back("grid " + std::to_string(i) + ": " + e.what());
                continue;
            }
        }
        if (!expected) ++r.nopath_cases;
        if (expected.has_value() == got.has_value()) {
            ++r.agree_nopath;
        } else {
            r.failures.push_back("grid " + std::to_string(i) + ": NoPath disagreement");
            continue;
        }
        if (!expected) {
            ++r.agree_cost;
            ++r.valid_paths;
            continue;
        }
        if (got->search_cost == *expected) ++r.agree_cost;
        else
            r.failures.push_back("grid " + std::to_string(i) + ": cost " + std::to_string(got->search_cost) +
                                 " vs oracle " + std::to_string(*expected));
        if (path_is_valid(got->path, s, start) && evaluate_search_cost(got->path, s, p, heading) == got->search_cost)
            ++r.valid_paths;
        else
            r.failures.push_back("grid " + std::to_string(i) + ": returned path invalid or mis-costed");
    }
    return r;
}

/// Malformed payload corpus: truncations, random bytes, type confusions,
/// unknown keys and action names, missing required fields.
inline std::vector<std::string> malformed_payloads(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> valid = {
        R"([{"action":"AVOID_AREAS","region":"repair_area"},{"action":"SET_GOAL","target":"shelf3"}])",
        R"([{"action":"MODIFY_COST","region":{"rect":[1,2,3,4]},"value":2.5,"mode":"add"}])",
        R"([{"action":"RESET_MAP"},{"action":"PREFER_AREAS","region":"open_lanes"},{"action":"SET_GOAL","target":[4,2]}])",
    };
    const std::vector<std::string> templates = {
        R"([{"action":"FLY_TO","target":[1,1]}])",
        R"([{"action":"MODIFY_COST","value":3,"mode":"set"}])",
        R"([{"action":"MODIFY_COST","region":"repair_area","mode":"set"}])",
        R"([{"action":"MODIFY_COST","region":"repair_area","value":"HIGH","mode":"set"}])",
        R"([{"action":"MODIFY_COST","region":"repair_area","value":1,"mode":"mul"}])",
        R"([{"action":"MODIFY_COST","region":"repair_area","value":[1],"mode":"set"}])",
        R"([{"action":"SET_GOAL"}])",
        R"([{"action":"SET_GOAL","target":[1]}])",
        R"([{"action":"SET_GOAL","target":[1,2,3]}])",
        R"([{"action":"SET_GOAL","target":[1.5,2]}])",
        R"([{"action":"SET_GOAL","target":{"x":1,"y":2}}])",
        R"([{"action":"SET_GOAL","target":""}])",
        R"([{"action":"SET_GOAL","target":null}])",
        R"([{"action":"AVOID_AREAS"}])",
        R"([{"action":"AVOID_AREAS","region":{"rect":[1,2,3]}}])",
        R"([{"action":"AVOID_AREAS","region":{"rect":[3,3,1,1]}}])",
        R"([{"action":"AVOID_AREAS","region":{"circle":[1,2,3]}}])",
        R"([{"action":"AVOID_AREAS","region":42}])",
        R"([{"action":"AVOID_AREAS","region":"repair_area","value":1}])",
        R"([{"action":"RESET_MAP","force":true}])",
        R"([{"action":"reset_map"}])",
        R"([{"act":"RESET_MAP"}])",
        R"([{"action":7}])",
        R"({"action":"RESET_MAP"})",
        R"("RESET_MAP")",
        R"([["RESET_MAP"]])",
        R"([null])",
        R"(null)",
        R"(42)",
        R"()",
        R"([)",
        R"([{"action":"RESET_MAP"},])",
        R"(Sure! Here is the payload: [{"action":"RESET_MAP"}])",
    };
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& t : templates) out.push_back(t);
    std::uniform_int_distribution<int> kind(0, 3);
    while (static_cast<int>(out.size()) < n) {
        const std::string& base = valid[std::uniform_int_distribution<std::size_t>(0, valid.size() - 1)(rng)];
        std::string p;
        switch (kind(rng)) {
        case 0:  // strict prefix: always an unterminated document
            p = base.substr(0, std::uniform_int_distribution<std::size_t>(0, base.size() - 1)(rng));
            break;
        case 1: {  // random bytes
            const int len = std::uniform_int_distribution<int>(0, 64)(rng);
            for (int i = 0; i < len; ++i) p.push_back(static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng)));
            if (!p.empty() && p.front() == '[') p.front() = '{';
            break;
        }
        case 2: {  // splice an unknown key into the first object
            p = base;
            p.insert(2, "\"k" + std::to_string(rng() % 1000) + "\":1,");
            break;
        }
        default: {  // corrupt the first action name
            p = base;
            const auto at = p.find("\"action\":\"") + 10;
            p[at + std::uniform_int_distribution<std::size_t>(0, 2)(rng)] = static_cast<char>('a' + rng() % 26);
            break;
        }
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Backend that returns a fixed payload, standing in for a remote model.
class CannedBackend final : public NluBackend {
public:
    explicit CannedBackend(std::string payload) : payload_(std::move(payload)) {}
    [[nodiscard]] std::string label() const override { return "canned"; }
    std::string complete(const NluRequest&) override {
        ++calls;
        return payload_;
    }
    int calls = 0;

private:
    std::string payload_;
};

/// The corridor-blocking reference episode.
inline EpisodeLog event_episode(bool literal) {
    EpisodeOptions o;
    o.literal_loop = literal;
    return run_episode("go to the loading bay", scenario("warehouse_event.scn"), select_profile("Balance"),
                       std::make_shared<RuleBasedBackend>(), o);
}

inline std::size_t cells_inside(const Path& path, const Region& r) {
    return static_cast<std::size_t>(std::count_if(path.begin(), path.end(), [&](Cell c) { return r.contains(c); }));
}

// ------------------------------------------------------- property runners

struct PropertyReport {
    int cases = 0;
    int failures = 0;
    int accepted = 0;  // validation soundness: pairs that passed validation
    std::string first_failure;

    void fail(int i, const std::string& what) {
        if (failures++ == 0) first_failure = "case " + std::to_string(i) + ": " + what;
    }
    [[nodiscard]] bool ok() const { return failures == 0; }
};

/// Keeps drawing random actions, retaining those that apply cleanly.
inline ActionSequence applicable_sequence(std::mt19937_64& rng, const GridState& s, const LandmarkRegistry& reg,
                                          const StrategyProfile& p, std::size_t len) {
    ActionSequence out;
    GridState cur = s;
    while (out.size() < len) {
        const Action a = random_action(rng, s);
        try {
            cur = apply_action(cur, a, reg, p);
            out.push_back(a);
        } catch (const Error&) {
        }
    }
    return out;
}

inline PropertyReport reset_erases_history(int n, std::uint64_t seed) {
    PropertyReport r;
    std::mt19937_64 rng(seed);
    const auto profiles = oracle_profiles();
    for (int i = 0; i < n; ++i, ++r.cases) {
        const GridState s = random_grid(rng, 7, 6, 0.2, true);
        const LandmarkRegistry reg = random_registry(rng, 7, 6);
        const auto& p = profiles[static_cast<std::size_t>(i) % profiles.size()];
        const ActionSequence seq = applicable_sequence(rng, s, reg, p, 1 + static_cast<std::size_t>(rng() % 6));
        const GridState after = apply_sequence(s, seq, reg, p);
        if (!bit_equal(reset_map(after), reset_map(s))) r.fail(i, "reset state differs");
    }
    return r;
}

inline PropertyReport sequences_are_atomic(int n, std::uint64_t seed) {
    PropertyReport r;
    std::mt19937_64 rng(seed);
    const auto p = select_profile("Balance");
    for (int i = 0; i < n; ++i, ++r.cases) {
        const GridState s = random_grid(rng, 6, 6, 0.2, true);
        const LandmarkRegistry reg = random_registry(rng, 6, 6);
        ActionSequence seq = applicable_sequence(rng, s, reg, p, 1 + static_cast<std::size_t>(rng() % 5));
        const std::size_t bad_at = static_cast<std::size_t>(rng() % (seq.size() + 1));
        seq.insert(seq.begin() + static_cast<long>(bad_at), AvoidAreas{std::string("nowhere")});
        const GridState snapshot = s;
        try {
            (void)apply_sequence(s, seq, reg, p);
            r.fail(i, "sequence with an unknown landmark succeeded");
        } catch (const SequenceError& e) {
            if (e.index() != bad_at) r.fail(i, "failure index " + std::to_string(e.index()));
        }
        if (!bit_equal(s, snapshot)) r.fail(i, "input state changed");
    }
    return r;
}

inline PropertyReport validation_is_sound(int n, std::uint64_t seed) {
    PropertyReport r;
    std::mt19937_64 rng(seed);
    const auto profiles = oracle_profiles();
    for (int i = 0; i < n; ++i, ++r.cases) {
        const GridState s = random_grid(rng, 6, 5, 0.25, true);
        const LandmarkRegistry reg = random_registry(rng, 6, 5);
        const Action a = random_action(rng, s);
        if (!validate_action(a, s, reg).empty()) continue;
        ++r.accepted;
        const auto& p = profiles[static_cast<std::size_t>(i) % profiles.size()];
        try {
            (void)apply_action(s, a, reg, p);
        } catch (const Error& e) {
            r.fail(i, describe(a) + " validated but failed: " + e.what());
        }
    }
    return r;
}

inline PropertyReport modify_cost_is_piecewise(int n, std::uint64_t seed) {
    PropertyReport r;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i, ++r.cases) {
        const int w = 3 + static_cast<int>(rng() % 8);
        const int h = 3 + static_cast<int>(rng() % 8);
        const GridState s = random_grid(rng, w, h, 0.2, true);
        const Region region = random_region(rng, w, h);
        const double v = random_dyadic_cost(rng);
        const CostMode mode = rng() % 2 ? CostMode::Set : CostMode::Add;
        const GridState m = modify_cost(s, region, v, mode);
        bool good = m.occupancy() == s.occupancy() && m.goal() == s.goal();
        for (int y = 0; y < h && good; ++y)
            for (int x = 0; x < w; ++x) {
                const Cell c{x, y};
                const double before = s.layer_value(c);
                const double after = m.layer_value(c);
                if (!region.contains(c)) {
                    good &= std::memcmp(&before, &after, sizeof(double)) == 0;
                } else {
                    const double expect = mode == CostMode::Set ? v : std::max(kCostFloor, before + v);
                    good &= after == expect;
                }
            }
        if (!good) r.fail(i, "cell outside the region changed or inside value wrong");
    }
    return r;
}

/// Rule-parser exact-match count over the bundled fixture corpus.
inline std::pair<int, int> fixture_corpus_matches(std::vector<std::string>* mismatches = nullptr) {
    const auto reg = scenario("warehouse.scn").registry;
    RuleBasedBackend rb;
    int hit = 0, total = 0;
    for (const auto& [instruction, expected] : ReplayBackend::parse_fixture_lines(slurp("data/fixtures/instructions.tsv"))) {
        ++total;
        const std::string canonical = encode_payload(decode_action_payload(expected));
        std::string got;
        try {
            got = encode_payload(parse_instruction(instruction, reg, rb).actions);
        } catch (const Error& e) {
            got = e.what();
        }
        if (got == canonical) ++hit;
        else if (mismatches) mismatches->push_back(instruction + " -> " + got);
    }
    return {hit, total};
}

/// Number of malformed payloads rejected with a structured error, and the
/// ones that were not.
inline std::pair<int, std::vector<std::string>> fuzz_rejections(int n, std::uint64_t seed) {
    const auto reg = scenario("warehouse.scn").registry;
    int rejected = 0;
    std::vector<std::string> escaped;
    for (const auto& payload : malformed_payloads(n, seed)) {
        CannedBackend backend(payload);
        try {
            (void)parse_instruction("navigate to shelf 3", reg, backend);
            escaped.push_back("accepted: " + payload);
        } catch (const Error& e) {
            if (e.message().empty()) escaped.push_back("empty message: " + payload);
            else ++rejected;
        } catch (const std::exception& e) {
            escaped.push_back(std::string("unstructured ") + e.what() + ": " + payload);
        }
    }
    return {rejected, escaped};
}

} // namespace gptest
