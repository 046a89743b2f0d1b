#include "gridpilot/dcip.hpp"
#include "gridpilot/gateway.hpp"
#include "gridpilot/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifndef GRIDPILOT_DATA_DIR
#define GRIDPILOT_DATA_DIR "."
#endif

namespace fs = std::filesystem;
using namespace gridpilot;

namespace {

fs::path data_dir() {
    if (const char* env = std::getenv("GRIDPILOT_DATA_DIR")) return env;
    return GRIDPILOT_DATA_DIR;
}

/// A path as given, or a bare name looked up under the bundled scenarios.
fs::path scenario_path(const std::string& arg) {
    fs::path p(arg);
    if (fs::exists(p)) return p;
    if (!p.has_parent_path()) {
        fs::path bundled = data_dir() / "scenarios" / p;
        if (fs::exists(bundled)) return bundled;
    }
    throw Error(ErrorCode::FileNotFound, "scenario not found", arg);
}

WorldState load(const std::string& arg) { return load_scenario(read_file(scenario_path(arg))); }

std::shared_ptr<NluBackend> backend_for(const std::string& spec) {
    fs::path fixtures = data_dir() / "data" / "fixtures";
    if (spec.rfind("replay:", 0) == 0 && fs::exists(spec.substr(7))) return make_backend(spec);
    return make_backend(spec, fixtures);
}

void print_plan(const PlanResult& p, const GridState& state, bool as_json) {
    if (as_json) {
        std::cout << plan_to_json(p).dump() << '\n';
        return;
    }
    std::cout << "path:";
    for (Cell c : p.path) std::cout << ' ' << c.x << ',' << c.y;
    std::cout << "\nnodes_expanded: " << p.nodes_expanded << "\nsearch_time_s: " << p.search_time
              << "\npath_cost: " << p.path_cost << "\npath_length: " << p.path_length << "\nturns: " << p.turns
              << "\ngoal: " << to_string(*state.goal()) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridpilot: instruction-driven grid navigation"};
    app.require_subcommand(1);

    std::string scenario, instruction, strategy = std::string(kBalance), backend = "rule";
    bool as_json = false;

    auto* plan_cmd = app.add_subcommand("plan", "parse, apply and plan once on a static world");
    plan_cmd->add_option("scenario", scenario, "scenario file or bundled name")->required();
    plan_cmd->add_option("-i,--instruction", instruction)->required();
    plan_cmd->add_option("-s,--strategy", strategy);
    plan_cmd->add_option("-b,--backend", backend, "rule | remote | replay:<file>");
    plan_cmd->add_flag("--json", as_json);

    bool literal = false;
    long step_limit = 0;
    std::string log_file;
    auto* sim_cmd = app.add_subcommand("simulate", "run a closed-loop episode");
    sim_cmd->add_option("scenario", scenario)->required();
    sim_cmd->add_option("-i,--instruction", instruction)->required();
    sim_cmd->add_option("-s,--strategy", strategy);
    sim_cmd->add_option("-b,--backend", backend);
    sim_cmd->add_flag("--literal-loop", literal, "regenerate and replan every tick");
    sim_cmd->add_option("--step-limit", step_limit);
    sim_cmd->add_option("-o,--log", log_file, "write the episode log (JSONL) here instead of stdout");

    auto* bench = app.add_subcommand("bench", "benchmarks");
    bench->require_subcommand(1);
    std::vector<std::string> strategies, backends;
    bool markdown = false;
    int baseline_runs = 10;
    auto* cmp = bench->add_subcommand("compare", "baseline vs dcip metrics table");
    cmp->add_option("scenario", scenario)->required();
    cmp->add_option("-i,--instruction", instruction)->required();
    cmp->add_option("--strategies", strategies)->default_str("all three");
    cmp->add_option("--backends", backends)->default_str("rule");
    cmp->add_option("--baseline-runs", baseline_runs);
    cmp->add_flag("--markdown", markdown);

    int max_scale = 10, trials = 10;
    std::uint64_t seed = 42;
    bool summary = false;
    std::string scale_scenario = "warehouse.scn";
    auto* scale = bench->add_subcommand("scale", "grid-scaling study");
    scale->add_option("scenario", scale_scenario);
    scale->add_option("--max-scale", max_scale);
    scale->add_option("--trials", trials);
    scale->add_option("--seed", seed);
    scale->add_flag("--summary", summary, "print per-scale means instead of per-trial rows");

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string state_dir, scenario_dir, fixtures_dir, static_dir;
    auto* serve = app.add_subcommand("serve", "HTTP session service");
    serve->add_option("-p,--port", port);
    serve->add_option("--host", host);
    serve->add_option("--state-dir", state_dir)->envname("GRIDPILOT_STATE_DIR");
    serve->add_option("--scenario-dir", scenario_dir);
    serve->add_option("--fixtures-dir", fixtures_dir);
    serve->add_option("--static-dir", static_dir);

    std::vector<std::string> to_validate;
    auto* validate = app.add_subcommand("validate", "check scenario files");
    validate->add_option("scenarios", to_validate)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*plan_cmd) {
            const WorldState world = load(scenario);
            const auto run = detail::run_pipeline(world, instruction, select_profile(strategy), *backend_for(backend));
            print_plan(run.plan, run.state, as_json);
            return 0;
        }
        if (*sim_cmd) {
            EpisodeOptions opts;
            opts.literal_loop = literal;
            if (step_limit > 0) opts.step_limit = step_limit;
            const EpisodeLog log = run_episode(instruction, load(scenario), select_profile(strategy),
                                               backend_for(backend), opts);
            const std::string text = serialize_log(log);
            if (log_file.empty()) {
                std::cout << text;
            } else {
                std::ofstream(log_file) << text;
                std::cout << "outcome: " << to_string(log.outcome) << "\nticks: " << log.ticks
                          << "\nreplans: " << log.replans << "\nexecuted_cost: " << log.executed_cost << '\n';
            }
            if (log.outcome != Outcome::GoalReached) {
                std::cerr << "episode ended with " << to_string(log.outcome) << ": " << log.outcome_detail << '\n';
                return 1;
            }
            return 0;
        }
        if (*cmp) {
            std::vector<StrategyProfile> profiles;
            if (strategies.empty()) strategies = {std::string(kNavigateQuickly), std::string(kMaximizeSafety), std::string(kBalance)};
            for (const auto& s : strategies) profiles.push_back(select_profile(s));
            if (backends.empty()) backends = {"rule"};
            std::vector<NamedBackend> named;
            for (const auto& b : backends) {
                auto be = backend_for(b);
                named.push_back({be->label(), be});
            }
            const auto rows = run_comparison(load(scenario), instruction, profiles, named, baseline_runs);
            std::cout << (markdown ? comparison_markdown(rows) : comparison_csv(rows));
            return 0;
        }
        if (*scale) {
            const ScalingReport r = scaling_study(load(scale_scenario), max_scale, trials, seed);
            std::cout << (summary ? scaling_summary_csv(r) : scaling_csv(r));
            for (const auto& n : r.notes) std::cerr << "note: " << n << '\n';
            return 0;
        }
        if (*serve) {
            GatewayConfig cfg;
            cfg.scenario_dir = scenario_dir.empty() ? data_dir() / "scenarios" : fs::path(scenario_dir);
            cfg.fixtures_dir = fixtures_dir.empty() ? data_dir() / "data" / "fixtures" : fs::path(fixtures_dir);
            cfg.state_dir = state_dir;
            cfg.static_dir = static_dir;
            SessionManager sessions(cfg);
            httplib::Server server;
            install_routes(server, sessions);
            std::cerr << "listening on " << host << ':' << port << '\n';
            if (!server.listen(host, port)) {
                std::cerr << "error: cannot bind " << host << ':' << port << '\n';
                return 1;
            }
            return 0;
        }
        if (*validate) {
            int failures = 0;
            for (const auto& s : to_validate) {
                try {
                    const WorldState w = load(s);
                    std::cout << s << ": ok (" << w.grid_state.width() << "x" << w.grid_state.height() << ", "
                              << w.registry.entries().size() << " landmarks, " << w.pedestrians.size()
                              << " pedestrians, " << w.pending_events.size() << " events)\n";
                } catch (const Error& e) {
                    std::cerr << s << ": " << e.what() << '\n';
                    ++failures;
                }
            }
            return failures ? 1 : 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << (e.detail().empty() ? "" : " [" + e.detail() + "]") << '\n';
        return 1;
    }
    return 2;
}
