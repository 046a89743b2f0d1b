#pragma once

#include "gridpilot/dcip.hpp"
#include "gridpilot/instruct.hpp"
#include "gridpilot/planner.hpp"
#include "gridpilot/world.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gridpilot {

struct NamedBackend {
    std::string label;
    std::shared_ptr<NluBackend> backend;
};

struct ComparisonRow {
    std::string backend;
    std::string strategy;
    std::string algorithm;  // "baseline" or "dcip"
    std::size_t nodes_expanded = 0;
    double search_time_s = 0.0;
    double path_cost = 0.0;
    std::size_t path_length = 0;
    std::size_t turns = 0;
    std::string error;  // set when the pipeline failed for this row
    int runs = 1;

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

namespace detail {

inline ComparisonRow row_from(const PlanResult& p, std::string backend, std::string strategy,
                              std::string algorithm) {
    ComparisonRow r;
    r.backend = std::move(backend);
    r.strategy = std::move(strategy);
    r.algorithm = std::move(algorithm);
    r.nodes_expanded = p.nodes_expanded;
    r.search_time_s = p.search_time;
    r.path_cost = p.path_cost;
    r.path_length = p.path_length;
    r.turns = p.turns;
    return r;
}

/// Goal, cost layer and plan of one parse→apply→plan pass on a static world.
struct PipelineRun {
    GridState state;
    PlanResult plan;
};

inline PipelineRun run_pipeline(const WorldState& world, const std::string& instruction,
                                const StrategyProfile& profile, NluBackend& backend) {
    ParsedInstruction parsed = parse_instruction(instruction, world.registry, backend);
    const Grounding g = ground(world, parsed, profile);
    GridState state = apply_sequence(prepared_state(world.grid_state), g.applied, world.registry, profile);
    if (!state.goal()) throw Error(ErrorCode::NoGoalSet, "instruction sets no goal");
    PlanResult p = plan(state, world.pose.cell, profile);
    return {std::move(state), std::move(p)};
}

} // namespace detail

/// Table-2 style comparison: one baseline row (plain search on a zero layer,
/// timing averaged over `baseline_runs`) followed by one dcip row per
/// (backend, strategy). Failed pipelines become rows with `error` set.
inline std::vector<ComparisonRow> run_comparison(const WorldState& world, const std::string& instruction,
                                                 const std::vector<StrategyProfile>& strategies,
                                                 const std::vector<NamedBackend>& backends,
                                                 int baseline_runs = 10) {
    if (strategies.empty()) throw Error(ErrorCode::EmptyConfig, "no strategies given");
    if (backends.empty()) throw Error(ErrorCode::EmptyConfig, "no backends given");
    if (baseline_runs < 1) throw Error(ErrorCode::InvalidArgument, "baseline_runs must be >= 1");

    std::vector<ComparisonRow> rows;

    // The baseline goal comes from the first backend that parses the instruction.
    std::optional<Cell> goal;
    std::string goal_error = "no backend produced a goal";
    for (const NamedBackend& nb : backends) {
        try {
            ParsedInstruction parsed = parse_instruction(instruction, world.registry, *nb.backend);
            GridState s = apply_sequence(world.grid_state, parsed.actions, world.registry, baseline_profile());
            goal = s.goal();
            if (goal) break;
        } catch (const Error& e) {
            goal_error = e.what();
        }
    }
    ComparisonRow base;
    base.backend = "-";
    base.strategy = "-";
    base.algorithm = "baseline";
    base.runs = baseline_runs;
    if (goal) {
        GridState plain = reset_map(world.grid_state);
        plain.assign_goal(goal);
        try {
            double total_time = 0.0;
            PlanResult p;
            for (int i = 0; i < baseline_runs; ++i) {
                p = plan(plain, world.pose.cell, baseline_profile());
                total_time += p.search_time;
            }
            base = detail::row_from(p, "-", "-", "baseline");
            base.search_time_s = total_time / baseline_runs;
            base.runs = baseline_runs;
        } catch (const Error& e) {
            base.error = e.what();
        }
    } else {
        base.error = goal_error;
    }
    rows.push_back(base);

    for (const NamedBackend& nb : backends) {
        for (const StrategyProfile& profile : strategies) {
            try {
                auto run = detail::run_pipeline(world, instruction, profile, *nb.backend);
                rows.push_back(detail::row_from(run.plan, nb.label, profile.name, "dcip"));
            } catch (const Error& e) {
                ComparisonRow r;
                r.backend = nb.label;
                r.strategy = profile.name;
                r.algorithm = "dcip";
                r.error = e.what();
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string fmt_double(double v, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

} // namespace detail

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "backend,strategy,algorithm,nodes_expanded,search_time_s,path_cost,path_length,turns\n";
    for (const auto& r : rows) {
        out += detail::csv_field(r.backend) + "," + detail::csv_field(r.strategy) + "," + r.algorithm + ",";
        if (!r.ok()) {
            out += ",,,,\n";
            continue;
        }
        out += std::to_string(r.nodes_expanded) + "," + detail::fmt_double(r.search_time_s, 6) + "," +
               detail::fmt_double(r.path_cost, 2) + "," + std::to_string(r.path_length) + "," +
               std::to_string(r.turns) + "\n";
    }
    return out;
}

/// Markdown metrics table with the baseline row first.
inline std::string comparison_markdown(const std::vector<ComparisonRow>& rows) {
    std::string out = "| Model | Strategy | Algorithm | Nodes Expanded | Search Time (s) | Path Cost | Path Length | Turns |\n"
                      "|---|---|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : rows) {
        const std::string algo = r.algorithm == "baseline" ? "Baseline (avg. " + std::to_string(r.runs) + " runs)" : "DCIP";
        out += "| " + r.backend + " | " + r.strategy + " | " + algo + " | ";
        if (!r.ok()) {
            out += "error: " + r.error + " | | | | |\n";
            continue;
        }
        out += std::to_string(r.nodes_expanded) + " | " + detail::fmt_double(r.search_time_s, 6) + " | " +
               detail::fmt_double(r.path_cost, 1) + " | " + std::to_string(r.path_length) + " | " +
               std::to_string(r.turns) + " |\n";
    }
    return out;
}

// ---------------------------------------------------------------- scaling

/// Replicates the map k times in both directions. Landmarks are copied into
/// every tile; copies other than the original get a "@tx,ty" suffix.
inline WorldState tile_world(const WorldState& world, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "scale must be >= 1");
    const OccupancyGrid& src = world.grid_state.occupancy();
    const int w = src.width();
    const int h = src.height();
    OccupancyGrid big(w * k, h * k);
    for (int ty = 0; ty < k; ++ty)
        for (int tx = 0; tx < k; ++tx)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    if (src.occupied({x, y})) big.set({tx * w + x, ty * h + y}, true);

    WorldState out;
    out.name = world.name + "@" + std::to_string(k);
    out.grid_state = GridState(std::move(big));
    out.pose = world.pose;
    out.seed = world.seed;
    out.rng.seed(world.seed);
    for (const auto& [name, lm] : world.registry.entries()) {
        for (int ty = 0; ty < k; ++ty)
            for (int tx = 0; tx < k; ++tx) {
                const Cell off{tx * w, ty * h};
                Landmark copy = lm;
                if (tx != 0 || ty != 0) copy.name = name + "@" + std::to_string(tx) + "," + std::to_string(ty);
                if (lm.region.is_rect()) {
                    const Rect& r = lm.region.rect();
                    copy.region = Region(Rect{r.x0 + off.x, r.y0 + off.y, r.x1 + off.x, r.y1 + off.y}, copy.name);
                } else {
                    std::vector<Cell> cells;
                    for (Cell c : lm.region.cells()) cells.push_back({c.x + off.x, c.y + off.y});
                    copy.region = Region(std::move(cells), copy.name);
                }
                if (lm.access) copy.access = Cell{lm.access->x + off.x, lm.access->y + off.y};
                out.registry.put(std::move(copy));
            }
    }
    return out;
}

/// Cost layer used for the dcip side of the scaling study: repair zones are
/// avoided and lanes preferred under the given profile.
inline GridState scaling_layer(const WorldState& world, const StrategyProfile& profile) {
    GridState s = world.grid_state;
    for (const Landmark* lm : world.registry.of_kind(LandmarkKind::Lane))
        s = apply_action(s, PreferAreas{lm->name}, world.registry, profile);
    for (const Landmark* lm : world.registry.of_kind(LandmarkKind::Repair))
        s = apply_action(s, AvoidAreas{lm->name}, world.registry, profile);
    return s;
}

struct ScalingSample {
    int scale = 0;
    int trial = 0;
    std::string algorithm;
    std::size_t nodes_expanded = 0;
    double search_time_s = 0.0;
    Cell start;
    Cell goal;
};

struct ScalingStats {
    int scale = 0;
    std::string algorithm;
    int trials = 0;
    double mean_nodes = 0.0;
    double stddev_nodes = 0.0;
    double mean_time_s = 0.0;
    double stddev_time_s = 0.0;
};

struct ScalingReport {
    std::uint64_t seed = 0;
    int max_scale = 0;
    int trials = 0;
    std::vector<ScalingSample> samples;
    std::vector<ScalingStats> stats;
    std::vector<std::string> notes;

    [[nodiscard]] const ScalingStats* find(int scale, std::string_view algorithm) const {
        for (const auto& s : stats)
            if (s.scale == scale && s.algorithm == algorithm) return &s;
        return nullptr;
    }
};

namespace detail {

inline std::pair<double, double> mean_stddev(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

} // namespace detail

/// Grid-scaling study: for k = 1..K the map is tiled k×k; per trial a start
/// and goal are drawn uniformly from free cells and both algorithms plan on
/// the same pair. Unreachable pairs are redrawn up to 10 times, then the
/// trial is skipped with a note.
inline ScalingReport scaling_study(const WorldState& base, int max_scale, int trials, std::uint64_t seed,
                                   const StrategyProfile& profile = select_profile(kBalance)) {
    if (max_scale < 1) throw Error(ErrorCode::InvalidArgument, "max_scale must be >= 1");
    if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    ScalingReport report;
    report.seed = seed;
    report.max_scale = max_scale;
    report.trials = trials;
    std::mt19937_64 rng(seed);

    for (int k = 1; k <= max_scale; ++k) {
        const WorldState world = tile_world(base, k);
        const GridState plain = world.grid_state;
        const GridState layered = scaling_layer(world, profile);
        std::vector<Cell> free;
        for (int y = 0; y < layered.height(); ++y)
            for (int x = 0; x < layered.width(); ++x)
                if (!layered.blocked({x, y})) free.push_back({x, y});
        if (free.size() < 2) throw Error(ErrorCode::InvalidArgument, "scaled map has fewer than two free cells");
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);

        std::vector<double> nodes[2], times[2];
        for (int t = 0; t < trials; ++t) {
            bool done = false;
            for (int attempt = 0; attempt < 10 && !done; ++attempt) {
                const Cell start = free[pick(rng)];
                Cell goal = free[pick(rng)];
                if (goal == start) continue;
                GridState a = plain;
                a.assign_goal(goal);
                GridState b = layered;
                b.assign_goal(goal);
                try {
                    const PlanResult pa = plan(a, start, baseline_profile());
                    const PlanResult pb = plan(b, start, profile);
                    report.samples.push_back({k, t, "baseline", pa.nodes_expanded, pa.search_time, start, goal});
                    report.samples.push_back({k, t, "dcip", pb.nodes_expanded, pb.search_time, start, goal});
                    nodes[0].push_back(static_cast<double>(pa.nodes_expanded));
                    times[0].push_back(pa.search_time);
                    nodes[1].push_back(static_cast<double>(pb.nodes_expanded));
                    times[1].push_back(pb.search_time);
                    done = true;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NoPath) throw;
                }
            }
            if (!done)
                report.notes.push_back("scale " + std::to_string(k) + " trial " + std::to_string(t) +
                                       ": no reachable sample after 10 draws, skipped");
        }
        const char* names[2] = {"baseline", "dcip"};
        for (int i = 0; i < 2; ++i) {
            ScalingStats st;
            st.scale = k;
            st.algorithm = names[i];
            st.trials = static_cast<int>(nodes[i].size());
            std::tie(st.mean_nodes, st.stddev_nodes) = detail::mean_stddev(nodes[i]);
            std::tie(st.mean_time_s, st.stddev_time_s) = detail::mean_stddev(times[i]);
            report.stats.push_back(st);
        }
    }
    return report;
}

inline std::string scaling_csv(const ScalingReport& r) {
    std::string out = "scale,trial,algorithm,nodes_expanded,search_time_s\n";
    for (const auto& s : r.samples)
        out += std::to_string(s.scale) + "," + std::to_string(s.trial) + "," + s.algorithm + "," +
               std::to_string(s.nodes_expanded) + "," + detail::fmt_double(s.search_time_s, 6) + "\n";
    return out;
}

/// Per-scale means and standard deviations.
inline std::string scaling_summary_csv(const ScalingReport& r) {
    std::string out = "scale,algorithm,trials,mean_nodes_expanded,stddev_nodes_expanded,mean_search_time_s,stddev_search_time_s\n";
    for (const auto& s : r.stats)
        out += std::to_string(s.scale) + "," + s.algorithm + "," + std::to_string(s.trials) + "," +
               detail::fmt_double(s.mean_nodes, 2) + "," + detail::fmt_double(s.stddev_nodes, 2) + "," +
               detail::fmt_double(s.mean_time_s, 6) + "," + detail::fmt_double(s.stddev_time_s, 6) + "\n";
    return out;
}

/// Number of k where the baseline mean drops below the previous scale.
inline int baseline_inversions(const ScalingReport& r) {
    int inversions = 0;
    double prev = -1.0;
    for (int k = 1; k <= r.max_scale; ++k) {
        const ScalingStats* s = r.find(k, "baseline");
        if (!s) continue;
        if (prev >= 0.0 && s->mean_nodes < prev) ++inversions;
        prev = s->mean_nodes;
    }
    return inversions;
}

} // namespace gridpilot
