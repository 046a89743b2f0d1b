#include "support.hpp"

#include <gtest/gtest.h>

using namespace gptest;

namespace {

const char* kPick = "navigate to shelf 3 while avoiding the repair area and using the open lanes";

std::vector<StrategyProfile> all_strategies() {
    return {select_profile("Navigate Quickly"), select_profile("Maximize Safety"), select_profile("Balance")};
}

std::vector<NamedBackend> rule_only() { return {{"rule", std::make_shared<RuleBasedBackend>()}}; }

const ComparisonRow& row(const std::vector<ComparisonRow>& rows, std::string_view strategy) {
    for (const auto& r : rows)
        if (r.strategy == strategy) return r;
    throw std::runtime_error("row missing");
}

std::string drop_timing(const std::string& csv, std::size_t timing_column) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cols.push_back(c);
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (i != timing_column) out += cols[i] + ",";
        out += "\n";
    }
    return out;
}

} // namespace

TEST(Comparison, RowsAndOrderings) {
    const auto rows = run_comparison(scenario("warehouse.scn"), kPick, all_strategies(), rule_only());
    ASSERT_EQ(rows.size(), 4u);
    const auto& base = rows.front();
    EXPECT_EQ(base.algorithm, "baseline");
    EXPECT_EQ(base.path_length, 177u);
    EXPECT_EQ(base.path_cost, 177.0);
    for (const auto& r : rows) EXPECT_TRUE(r.ok()) << r.strategy << ": " << r.error;
    const auto& bal = row(rows, kBalance);
    EXPECT_LT(bal.path_cost, base.path_cost);
    EXPECT_LT(bal.turns, base.turns);
    EXPECT_LT(row(rows, kNavigateQuickly).nodes_expanded, base.nodes_expanded);
}

TEST(Comparison, QuickPaysForCrossingAnAvoidZone) {
    const auto rows = run_comparison(scenario("warehouse_hazard.scn"), "navigate to Shelf 3, avoid the repair area",
                                     all_strategies(), rule_only());
    const auto& quick = row(rows, kNavigateQuickly);
    ASSERT_TRUE(quick.ok());
    EXPECT_GE(quick.path_cost, rows.front().path_cost);
    EXPECT_FALSE(row(rows, kMaximizeSafety).ok());
    EXPECT_NE(row(rows, kMaximizeSafety).error.find("NoPath"), std::string::npos);
}

TEST(Comparison, ReplayBackendsProduceRows) {
    std::vector<NamedBackend> backends;
    for (const char* label : {"mistral", "llama3", "llama3.1"})
        backends.push_back({label, std::make_shared<ReplayBackend>(ReplayBackend::from_text(
                                       label, slurp(std::string("data/fixtures/") + label + ".tsv")))});
    const auto rows = run_comparison(scenario("warehouse.scn"), kPick, all_strategies(), backends);
    ASSERT_EQ(rows.size(), 10u);
    for (const auto& r : rows) EXPECT_TRUE(r.ok()) << r.backend << " " << r.strategy << ": " << r.error;
}

TEST(Comparison, FailuresBecomeRowsAndEmptyConfigThrows) {
    const auto rows = run_comparison(scenario("warehouse.scn"), "go to the loading dock", all_strategies(), rule_only());
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) EXPECT_FALSE(r.ok());
    EXPECT_THROW((void)run_comparison(scenario("warehouse.scn"), kPick, {}, rule_only()), Error);
    EXPECT_THROW((void)run_comparison(scenario("warehouse.scn"), kPick, all_strategies(), {}), Error);
}

TEST(Comparison, CsvAndMarkdownLayout) {
    const auto rows = run_comparison(scenario("warehouse.scn"), kPick, {select_profile("Balance")}, rule_only(), 2);
    const std::string csv = comparison_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "backend,strategy,algorithm,nodes_expanded,search_time_s,path_cost,path_length,turns");
    EXPECT_NE(csv.find("-,-,baseline,"), std::string::npos);
    EXPECT_NE(csv.find("rule,Balance Efficiency and Safety,dcip,"), std::string::npos);
    const std::string md = comparison_markdown(rows);
    EXPECT_NE(md.find("Baseline (avg. 2 runs)"), std::string::npos);
    EXPECT_NE(md.find("| rule | Balance Efficiency and Safety | DCIP |"), std::string::npos);
}

TEST(Tiling, ReplicatesObstaclesAndLandmarks) {
    const WorldState w = scenario("warehouse_event.scn");
    const WorldState t = tile_world(w, 3);
    EXPECT_EQ(t.grid_state.width(), 3 * w.grid_state.width());
    EXPECT_EQ(t.grid_state.height(), 3 * w.grid_state.height());
    for (int y = 0; y < t.grid_state.height(); ++y)
        for (int x = 0; x < t.grid_state.width(); ++x)
            ASSERT_EQ(t.grid_state.base().occupied({x, y}),
                      w.grid_state.base().occupied({x % w.grid_state.width(), y % w.grid_state.height()}));
    EXPECT_EQ(t.registry.size(), 9 * w.registry.size());
    EXPECT_TRUE(t.registry.contains("loading_bay"));
    EXPECT_TRUE(t.registry.contains("loading_bay@2,1"));
    EXPECT_EQ(t.registry.at("loading_bay@2,1").region.cells().front(),
              (Cell{21 + 2 * 22, 3 + 9}));
    EXPECT_THROW((void)tile_world(w, 0), Error);
}

TEST(Scaling, DeterministicAndPaired) {
    const WorldState w = scenario("warehouse_event.scn");
    const auto a = scaling_study(w, 3, 4, 42);
    const auto b = scaling_study(w, 3, 4, 42);
    EXPECT_EQ(drop_timing(scaling_csv(a), 4), drop_timing(scaling_csv(b), 4));
    EXPECT_EQ(scaling_csv(a).substr(0, scaling_csv(a).find('\n')), "scale,trial,algorithm,nodes_expanded,search_time_s");
    ASSERT_EQ(a.samples.size() % 2, 0u);
    for (std::size_t i = 0; i < a.samples.size(); i += 2) {
        const auto& x = a.samples[i];
        const auto& y = a.samples[i + 1];
        EXPECT_EQ(x.algorithm, "baseline");
        EXPECT_EQ(y.algorithm, "dcip");
        EXPECT_EQ(std::tie(x.scale, x.trial, x.start, x.goal), std::tie(y.scale, y.trial, y.start, y.goal));
        EXPECT_NE(x.start, x.goal);
        EXPECT_GT(x.nodes_expanded, 0u);
    }
    EXPECT_EQ(a.stats.size(), 6u);
    const auto c = scaling_study(w, 3, 4, 43);
    EXPECT_NE(drop_timing(scaling_csv(a), 4), drop_timing(scaling_csv(c), 4));
    EXPECT_THROW((void)scaling_study(w, 0, 1, 1), Error);
}
