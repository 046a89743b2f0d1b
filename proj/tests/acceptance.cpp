// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace gptest;

namespace {

constexpr double kOracleBudgetS = 10.0;
constexpr double kComparisonBudgetS = 30.0;
constexpr double kScalingBudgetS = 300.0;
constexpr double kScalingGrowth = 10.0;
constexpr int kMaxInversions = 1;
constexpr double kLiteralCostSlack = 0.05;
constexpr double kRealTolerance = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

template <typename Fn>
void criterion(const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(name, false, std::string("threw ") + e.what());
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void oracle_optimality() {
    const auto t0 = Clock::now();
    const OracleReport r = run_planner_oracle(200, 42);
    const double t = seconds_since(t0);
    const bool pass = r.grids == 200 && r.agree_cost == r.grids && r.agree_nopath == r.grids &&
                      r.valid_paths == r.grids && r.failures.empty() && t < kOracleBudgetS;
    std::string detail = std::to_string(r.agree_cost) + "/" + std::to_string(r.grids) + " exact cost, " +
                         std::to_string(r.agree_nopath) + "/" + std::to_string(r.grids) + " NoPath agreement (" +
                         std::to_string(r.nopath_cases) + " unreachable), " + fmt(t) + " s";
    if (!r.failures.empty()) detail += "; first: " + r.failures.front();
    report("oracle optimality", pass, detail);
}

void metric_suite() {
    int bad = 0;
    std::string first;
    auto check = [&](bool ok, const char* what) {
        if (!ok && bad++ == 0) first = what;
    };
    Path long_path;
    for (int x = 0; x <= 177; ++x) long_path.push_back({x, 0});
    check(path_length({{0, 0}}) == 0, "length of a single cell");
    check(path_length({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}) == 4, "length of 5 cells");
    check(path_length(long_path) == 177, "length of 178 cells");
    check(count_turns({{0, 0}, {1, 0}, {2, 0}}) == 0, "collinear turns");
    check(count_turns({{0, 0}, {1, 0}, {1, 1}}) == 1, "single corner");
    check(count_turns({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}}) == 3, "staircase");

    const Path straight = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    GridState s{OccupancyGrid(4, 1)};
    check(path_cost(straight, s) == 3.0, "unit steps");
    s.set_layer_value({2, 0}, 2.0);
    check(std::abs(path_cost(straight, s) - 5.0) <= kRealTolerance, "zone term");
    s.set_layer_value({2, 0}, 0.0);
    s.set_layer_value({1, 0}, -0.5);
    s.set_layer_value({3, 0}, -0.5);
    check(std::abs(path_cost(straight, s) - 2.0) <= kRealTolerance, "discounts");

    GridState open{OccupancyGrid(3, 3)};
    open.assign_goal(Cell{2, 2});
    const PlanResult p = plan(open, {0, 0}, baseline_profile());
    check(p.path_length == 4 && p.path_cost == 4.0 && p.turns >= 1, "3x3 open plan");

    GridState walled{OccupancyGrid(5, 5)};
    for (int y = 0; y <= 3; ++y) walled.set_occupied({2, y}, true);
    walled.assign_goal(Cell{4, 0});
    const PlanResult w = plan(walled, {0, 0}, baseline_profile());
    const auto oracle = ucs_cost(walled, {0, 0}, baseline_profile(), std::nullopt);
    check(oracle && w.search_cost == *oracle && w.path_length == 12, "walled 5x5 plan");

    GridState enclosed{OccupancyGrid(5, 5)};
    for (Cell c : {Cell{1, 2}, Cell{3, 2}, Cell{2, 1}, Cell{2, 3}}) enclosed.set_occupied(c, true);
    enclosed.assign_goal(Cell{2, 2});
    bool nopath = false;
    try {
        (void)plan(enclosed, {0, 0}, baseline_profile());
    } catch (const Error& e) {
        nopath = e.code() == ErrorCode::NoPath;
    }
    check(nopath, "enclosed goal");

    report("metric unit suite", bad == 0, bad == 0 ? "14 tagged examples exact" : std::to_string(bad) + " wrong, first: " + first);
}

void strategy_comparison() {
    const auto t0 = Clock::now();
    const std::string pick = "navigate to shelf 3 while avoiding the repair area and using the open lanes";
    const std::vector<StrategyProfile> strategies = {select_profile(kNavigateQuickly), select_profile(kMaximizeSafety),
                                                     select_profile(kBalance)};
    const std::vector<NamedBackend> rule = {{"rule", std::make_shared<RuleBasedBackend>()}};
    const WorldState w = scenario("warehouse.scn");
    const auto rows = run_comparison(w, pick, strategies, rule);
    auto find = [](const std::vector<ComparisonRow>& rs, std::string_view strategy) -> const ComparisonRow& {
        for (const auto& r : rs)
            if (r.strategy == strategy) return r;
        throw std::runtime_error("missing row " + std::string(strategy));
    };
    const ComparisonRow& base = rows.front();
    const ComparisonRow& bal = find(rows, kBalance);
    const ComparisonRow& quick = find(rows, kNavigateQuickly);

    RuleBasedBackend rb;
    const auto safety = detail::run_pipeline(w, pick, select_profile(kMaximizeSafety), rb);
    const std::size_t repair_cells = cells_inside(safety.plan.path, w.registry.at("repair_area").region);

    const WorldState hazard = scenario("warehouse_hazard.scn");
    const auto hz = run_comparison(hazard, "navigate to Shelf 3, avoid the repair area", {select_profile(kNavigateQuickly)}, rule, 1);
    const ComparisonRow& hq = find(hz, kNavigateQuickly);
    const double t = seconds_since(t0);

    const bool a = base.ok() && bal.ok() && base.path_length == 177 && bal.path_cost < base.path_cost && bal.turns < base.turns;
    const bool b = !safety.plan.path.empty() && repair_cells == 0;
    const bool c = quick.ok() && hq.ok() && quick.nodes_expanded < base.nodes_expanded && hq.path_cost >= hz.front().path_cost;
    const bool timely = t < kComparisonBudgetS;
    report("strategy comparison", a && b && c && timely,
           "(a) balance cost " + fmt(bal.path_cost) + " < " + fmt(base.path_cost) + ", turns " + std::to_string(bal.turns) +
               " < " + std::to_string(base.turns) + (a ? " ok" : " NO") + "; (b) safety repair cells " +
               std::to_string(repair_cells) + (b ? " ok" : " NO") + "; (c) quick nodes " + std::to_string(quick.nodes_expanded) +
               " < " + std::to_string(base.nodes_expanded) + ", hazard cost " + fmt(hq.path_cost) + " >= " +
               fmt(hz.front().path_cost) + (c ? " ok" : " NO") + "; " + fmt(t) + " s");
}

std::string non_timing(const std::string& csv) {
    std::string out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
}

void scaling() {
    const auto t0 = Clock::now();
    const WorldState w = scenario("warehouse.scn");
    const ScalingReport first = scaling_study(w, 10, 10, 42);
    const ScalingReport second = scaling_study(w, 10, 10, 42);
    const double t = seconds_since(t0);
    const auto* k1 = first.find(1, "baseline");
    const auto* k10 = first.find(10, "baseline");
    const double growth = k1 && k10 && k1->mean_nodes > 0 ? k10->mean_nodes / k1->mean_nodes : 0.0;
    const int inversions = baseline_inversions(first);
    const bool identical = non_timing(scaling_csv(first)) == non_timing(scaling_csv(second));
    const bool pass = growth >= kScalingGrowth && inversions <= kMaxInversions && identical && t < kScalingBudgetS;
    report("scaling study", pass,
           "baseline mean nodes k=1 " + fmt(k1 ? k1->mean_nodes : 0) + ", k=10 " + fmt(k10 ? k10->mean_nodes : 0) +
               " (x" + fmt(growth) + "), inversions " + std::to_string(inversions) + ", rerun " +
               (identical ? "identical" : "DIFFERS") + ", " + fmt(t) + " s for two runs");
}

void event_conformance() {
    const EpisodeLog normal = event_episode(false);
    const EpisodeLog literal = event_episode(true);
    const WorldState w = scenario("warehouse_event.scn");
    std::size_t obstacle_cells = 0;
    for (const auto& ev : w.pending_events)
        if (const auto* add = std::get_if<AddObstacle>(&ev.kind)) obstacle_cells += cells_inside(normal.trajectory, add->region);
    const bool pass = normal.outcome == Outcome::GoalReached && normal.replans == 1 && obstacle_cells == 0 &&
                      literal.outcome == Outcome::GoalReached &&
                      literal.executed_cost <= normal.executed_cost * (1.0 + kLiteralCostSlack);
    report("event-driven replanning", pass,
           "default " + std::string(to_string(normal.outcome)) + " with " + std::to_string(normal.replans) +
               " replan(s), " + std::to_string(obstacle_cells) + " obstacle cells, cost " + fmt(normal.executed_cost) +
               "; literal loop " + std::string(to_string(literal.outcome)) + " cost " + fmt(literal.executed_cost) +
               " after " + std::to_string(literal.replans) + " replans");
}

void action_algebra() {
    const auto reset = reset_erases_history(1000, 20240501);
    const auto atomic = sequences_are_atomic(1000, 99);
    const auto sound = validation_is_sound(1000, 4242);
    const auto piecewise = modify_cost_is_piecewise(1000, 5150);
    const bool pass = reset.ok() && atomic.ok() && sound.ok() && piecewise.ok() && sound.accepted > 0;
    std::string detail = "reset " + std::to_string(reset.cases - reset.failures) + "/" + std::to_string(reset.cases) +
                         ", atomicity " + std::to_string(atomic.cases - atomic.failures) + "/" + std::to_string(atomic.cases) +
                         ", validation " + std::to_string(sound.cases - sound.failures) + "/" + std::to_string(sound.cases) +
                         " (" + std::to_string(sound.accepted) + " validated), piecewise " +
                         std::to_string(piecewise.cases - piecewise.failures) + "/" + std::to_string(piecewise.cases);
    for (const auto* r : {&reset, &atomic, &sound, &piecewise})
        if (!r->ok()) detail += "; " + r->first_failure;
    report("action algebra", pass, detail);
}

void parser() {
    std::vector<std::string> misses;
    const auto [hit, total] = fixture_corpus_matches(&misses);
    const auto [rejected, escaped] = fuzz_rejections(1000, 1234);
    const bool pass = total == 20 && hit == total && rejected == 1000 && escaped.empty();
    std::string detail = "corpus " + std::to_string(hit) + "/" + std::to_string(total) + " exact, fuzz " +
                         std::to_string(rejected) + "/1000 rejected";
    if (!misses.empty()) detail += "; first miss: " + misses.front();
    if (!escaped.empty()) detail += "; first escape: " + escaped.front();
    report("parser corpus and fuzz", pass, detail);
}

} // namespace

int main() {
    criterion("oracle optimality", oracle_optimality);
    criterion("metric unit suite", metric_suite);
    criterion("strategy comparison", strategy_comparison);
    criterion("scaling study", scaling);
    criterion("event-driven replanning", event_conformance);
    criterion("action algebra", action_algebra);
    criterion("parser corpus and fuzz", parser);
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << "(" << failures << " failing)" << std::endl;
    return failures ? 1 : 0;
}
