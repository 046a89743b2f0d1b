#pragma once

#include "gridpilot/action.hpp"
#include "gridpilot/instruct.hpp"
#include "gridpilot/payload.hpp"
#include "gridpilot/planner.hpp"
#include "gridpilot/world.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gridpilot {

enum class Outcome { Running, GoalReached, NoPath, StepLimit, InstructionError };

constexpr std::string_view to_string(Outcome o) noexcept {
    switch (o) {
    case Outcome::Running: return "Running";
    case Outcome::GoalReached: return "GoalReached";
    case Outcome::NoPath: return "NoPath";
    case Outcome::StepLimit: return "StepLimit";
    case Outcome::InstructionError: return "InstructionError";
    }
    return "Running";
}

struct TraceRecord {
    long tick = 0;
    Pose pose;
    std::vector<std::string> events;
    bool replanned = false;
    std::string note;  // IllegalMove diagnostics and the like
};

struct EpisodeLog {
    std::string instruction;
    std::vector<ActionSequence> action_sequences;  // A_0, A_1, ... as grounded (incl. plan-time overlays)
    std::vector<ActionSequence> lowered_sequences; // same with avoid/prefer sugar lowered
    std::vector<PlanResult> plans;
    std::vector<TraceRecord> trace;
    Path trajectory;  // executed cells, starting at the initial pose
    Outcome outcome = Outcome::Running;
    std::string outcome_detail;
    long ticks = 0;
    std::size_t replans = 0;
    double executed_cost = 0.0;
};

struct EpisodeOptions {
    bool literal_loop = false;      // regenerate actions and replan every tick
    std::optional<long> step_limit; // default 4 * (width + height)
    const std::atomic<bool>* cancel = nullptr;
};

/// What the active plan was grounded against; needs_replan compares new
/// observations with it.
struct ReplanContext {
    std::set<std::string> known_landmarks;
    std::set<LandmarkKind> constrained_kinds;
    std::optional<Cell> goal;
};

/// Manhattan radius around the robot inside which pedestrians enter the plan.
inline constexpr int kPedestrianSensingRange = 6;

inline std::vector<Pedestrian> pedestrians_near(const std::vector<Pedestrian>& all, Cell robot) {
    std::vector<Pedestrian> out;
    for (const Pedestrian& p : all)
        if (manhattan(p.position, robot) <= kPedestrianSensingRange) out.push_back(p);
    return out;
}

/// Event-driven replanning trigger: a remaining path cell became occupied or
/// BLOCKED or holds a pedestrian, the goal became invalid, or a landmark of a
/// constrained kind appeared.
inline bool needs_replan(const Observation& obs, const Path& remaining, const ReplanContext& ctx) {
    for (std::size_t i = 1; i < remaining.size(); ++i) {
        const Cell c = remaining[i];
        if (!obs.grid.in_bounds(c) || obs.grid.blocked(c)) return true;
        for (const Pedestrian& p : obs.pedestrians)
            if (p.position == c) return true;
    }
    if (ctx.goal && (!obs.grid.in_bounds(*ctx.goal) || obs.grid.blocked(*ctx.goal))) return true;
    for (const auto& [name, lm] : obs.landmarks.entries())
        if (!ctx.known_landmarks.contains(name) && ctx.constrained_kinds.contains(lm.kind)) return true;
    return false;
}

/// Cells within Manhattan distance `radius` of `center` (center excluded).
inline std::vector<Cell> ring_cells(Cell center, int radius, int width, int height) {
    std::vector<Cell> out;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            if ((dx == 0 && dy == 0) || std::abs(dx) + std::abs(dy) > radius) continue;
            const Cell c{center.x + dx, center.y + dy};
            if (c.x >= 0 && c.y >= 0 && c.x < width && c.y < height) out.push_back(c);
        }
    return out;
}

/// Plan-time pedestrian overlay: add-mode cost on the cell of each pedestrian
/// within sensing range and, when an inflation radius is active, on the ring
/// around it.
inline ActionSequence pedestrian_overlay(const WorldState& world, const StrategyProfile& profile,
                                         bool safety_requested) {
    ActionSequence out;
    const int radius = safety_requested ? std::max(1, profile.safety_inflation) : profile.safety_inflation;
    for (const Pedestrian& p : pedestrians_near(world.pedestrians, world.pose.cell)) {
        out.emplace_back(ModifyCost{Region(std::vector<Cell>{p.position}, p.id), profile.pedestrian_cost, CostMode::Add});
        if (radius > 0) {
            auto ring = ring_cells(p.position, radius, world.grid_state.width(), world.grid_state.height());
            if (!ring.empty())
                out.emplace_back(ModifyCost{Region(std::move(ring), p.id + "_ring"), profile.inflation_cost, CostMode::Add});
        }
    }
    return out;
}

struct Grounding {
    ActionSequence logged;   // parsed actions with the overlay spliced in before the goal
    ActionSequence applied;  // what is folded onto the prepared state (no RESET_MAP)
};

/// Splices the pedestrian overlay in before SET_GOAL so goal validity is
/// checked last. RESET_MAP is dropped from the applied sequence: the layer is
/// always rebuilt from zero on the current occupancy.
inline Grounding ground(const WorldState& world, const ParsedInstruction& parsed, const StrategyProfile& profile) {
    const ActionSequence overlay = pedestrian_overlay(world, profile, parsed.pedestrian_safety);
    auto is_goal = [](const Action& a) { return std::holds_alternative<SetGoal>(a); };
    Grounding g;
    g.logged = parsed.actions;
    g.logged.insert(std::find_if(g.logged.begin(), g.logged.end(), is_goal), overlay.begin(), overlay.end());
    for (const Action& a : g.logged)
        if (!std::holds_alternative<ResetMap>(a)) g.applied.push_back(a);
    return g;
}

/// Current occupancy with an empty cost layer and no goal.
inline GridState prepared_state(const GridState& s) {
    GridState out = s;
    out.clear_costs();
    out.assign_goal(std::nullopt);
    return out;
}

/// One instruction-driven episode: parse, ground, plan, then advance the
/// world tick by tick, regenerating actions and the plan when needed.
class Episode {
public:
    Episode(WorldState world, StrategyProfile profile, std::shared_ptr<NluBackend> backend,
            EpisodeOptions options = {})
        : world_(std::move(world)), profile_(std::move(profile)), backend_(std::move(backend)),
          options_(options) {
        step_limit_ = options_.step_limit.value_or(4L * (world_.grid_state.width() + world_.grid_state.height()));
        if (step_limit_ < 1) throw Error(ErrorCode::InvalidArgument, "step_limit must be >= 1");
        log_.trajectory.push_back(world_.pose.cell);
    }

    /// Parses the instruction, executes A_0 and plans. Returns false when the
    /// episode already ended (bad instruction, no path, start == goal).
    bool start(std::string instruction) {
        started_ = true;
        log_.instruction = std::move(instruction);
        log_.outcome = Outcome::Running;
        log_.outcome_detail.clear();
        if (!regenerate()) return false;
        if (world_.pose.cell == log_.plans.back().path.back()) finish(Outcome::GoalReached, "start is the goal");
        return !finished();
    }

    [[nodiscard]] bool finished() const noexcept { return log_.outcome != Outcome::Running; }
    [[nodiscard]] bool started() const noexcept { return started_; }
    [[nodiscard]] bool active() const noexcept { return started_ && !finished(); }

    /// One iteration of the adaptation loop.
    void tick() {
        if (!active()) return;
        if (options_.cancel && options_.cancel->load()) {
            finish(Outcome::StepLimit, "cancelled");
            return;
        }
        std::optional<Direction> move;
        if (remaining_.size() >= 2) move = direction_between(remaining_[0], remaining_[1]);

        StepResult r = step(world_, move);
        world_ = std::move(r.world);
        ++log_.ticks;
        TraceRecord rec;
        rec.tick = world_.tick;
        for (const auto& ev : r.applied_events) rec.events.push_back(describe(ev));
        if (r.rejected) {
            rec.note = r.rejected->what();
        } else if (move) {
            const Cell entered = world_.pose.cell;
            log_.executed_cost += 1.0 + world_.grid_state.layer_value(entered);
            log_.trajectory.push_back(entered);
            remaining_.erase(remaining_.begin());
            moved_ = true;
        }

        const bool at_goal = world_.grid_state.goal() && world_.pose.cell == *world_.grid_state.goal();
        if (!at_goal) {
            const bool replan = options_.literal_loop || r.rejected.has_value() ||
                                needs_replan(r.observation, remaining_, context_);
            if (replan) {
                rec.replanned = true;
                ++log_.replans;
                rec.pose = world_.pose;
                log_.trace.push_back(rec);
                regenerate();
                if (finished()) return;
                check_limit();
                return;
            }
        }
        rec.pose = world_.pose;
        log_.trace.push_back(std::move(rec));
        if (at_goal) {
            finish(Outcome::GoalReached, "");
            return;
        }
        check_limit();
    }

    /// Injects an event immediately (operator or UI path) and replans if the
    /// current plan is affected.
    bool inject(const EventKind& event) {
        world_ = apply_event(world_, event);
        if (!active()) return false;
        if (needs_replan(observe(world_), remaining_, context_)) {
            ++log_.replans;
            if (!log_.trace.empty()) log_.trace.back().replanned = true;
            regenerate();
            return true;
        }
        return false;
    }

    /// Advances the world without an instruction (robot stays put).
    void idle_tick() {
        StepResult r = step(world_, std::nullopt);
        world_ = std::move(r.world);
        TraceRecord rec;
        rec.tick = world_.tick;
        rec.pose = world_.pose;
        for (const auto& ev : r.applied_events) rec.events.push_back(describe(ev));
        log_.trace.push_back(std::move(rec));
    }

    void run() {
        while (active()) tick();
    }

    [[nodiscard]] const EpisodeLog& log() const noexcept { return log_; }
    [[nodiscard]] const WorldState& world() const noexcept { return world_; }
    [[nodiscard]] const Path& remaining_path() const noexcept { return remaining_; }
    [[nodiscard]] const StrategyProfile& profile() const noexcept { return profile_; }
    [[nodiscard]] long step_limit() const noexcept { return step_limit_; }
    [[nodiscard]] const std::optional<PlanResult>& current_plan() const noexcept { return plan_; }
    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
    /// Actions of the latest parse, before grounding.
    [[nodiscard]] const ActionSequence& parsed_actions() const noexcept { return parsed_actions_; }

private:
    void finish(Outcome o, std::string detail) {
        log_.outcome = o;
        log_.outcome_detail = std::move(detail);
    }

    void check_limit() {
        if (!finished() && log_.ticks >= step_limit_)
            finish(Outcome::StepLimit, "step limit " + std::to_string(step_limit_) + " reached");
    }

    /// Parse I against the current landmarks, rebuild the cost layer on the
    /// current occupancy, apply, plan from the current pose.
    bool regenerate() {
        diagnostics_.clear();
        ParsedInstruction parsed;
        try {
            parsed = parse_instruction(log_.instruction, world_.registry, *backend_);
        } catch (const Error& e) {
            diagnostics_.push_back({e.code(), e.message(), e.detail()});
            finish(Outcome::InstructionError, e.what());
            return false;
        }

        parsed_actions_ = parsed.actions;
        const Grounding grounding = ground(world_, parsed, profile_);
        const std::optional<Cell> previous_goal = world_.grid_state.goal();
        GridState prepared = prepared_state(world_.grid_state);
        log_.action_sequences.push_back(grounding.logged);
        ActionSequence lowered;
        for (const Action& a : grounding.logged) lowered.push_back(lower(a, profile_));
        log_.lowered_sequences.push_back(std::move(lowered));

        try {
            prepared = apply_sequence(prepared, grounding.applied, world_.registry, profile_);
        } catch (const Error& e) {
            diagnostics_.push_back({e.code(), e.message(), e.detail()});
            finish(e.code() == ErrorCode::GoalOccupied ? Outcome::NoPath : Outcome::InstructionError, e.what());
            return false;
        }
        if (!prepared.goal()) prepared.assign_goal(previous_goal);
        world_.grid_state = prepared;

        context_ = ReplanContext{};
        for (const auto& [name, _] : world_.registry.entries()) context_.known_landmarks.insert(name);
        for (const Action& a : parsed.actions) {
            const RegionRef* ref = std::visit(overloaded{
                                                  [](const ModifyCost& m) -> const RegionRef* { return &m.region; },
                                                  [](const AvoidAreas& m) -> const RegionRef* { return &m.region; },
                                                  [](const PreferAreas& m) -> const RegionRef* { return &m.region; },
                                                  [](const auto&) -> const RegionRef* { return nullptr; },
                                              },
                                              a);
            if (ref)
                if (const auto* name = std::get_if<std::string>(ref))
                    if (const Landmark* lm = world_.registry.find(*name)) context_.constrained_kinds.insert(lm->kind);
        }
        context_.goal = prepared.goal();

        if (!prepared.goal()) {
            diagnostics_.push_back({ErrorCode::NoGoalSet, "instruction sets no goal", ""});
            finish(Outcome::InstructionError, "instruction sets no goal");
            return false;
        }
        try {
            PlanOptions po;
            if (moved_) po.initial_heading = world_.pose.theta;
            plan_ = plan(world_.grid_state, world_.pose.cell, profile_, po);
        } catch (const Error& e) {
            diagnostics_.push_back({e.code(), e.message(), e.detail()});
            plan_.reset();
            remaining_.clear();
            finish(Outcome::NoPath, e.what());
            return false;
        }
        log_.plans.push_back(*plan_);
        remaining_ = plan_->path;
        return true;
    }

    WorldState world_;
    StrategyProfile profile_;
    std::shared_ptr<NluBackend> backend_;
    EpisodeOptions options_;
    long step_limit_ = 0;
    EpisodeLog log_;
    ReplanContext context_;
    std::optional<PlanResult> plan_;
    Path remaining_;
    std::vector<Diagnostic> diagnostics_;
    ActionSequence parsed_actions_;
    bool moved_ = false;
    bool started_ = false;
};

/// Runs a full episode to GoalReached, NoPath, StepLimit or InstructionError.
inline EpisodeLog run_episode(const std::string& instruction, const WorldState& world,
                              const StrategyProfile& profile, std::shared_ptr<NluBackend> backend,
                              EpisodeOptions options = {}) {
    Episode ep(world, profile, std::move(backend), options);
    ep.start(instruction);
    ep.run();
    return ep.log();
}

inline nlohmann::json plan_to_json(const PlanResult& p, bool include_path = true) {
    nlohmann::json j = {{"nodes_expanded", p.nodes_expanded}, {"search_time_s", p.search_time},
                        {"path_cost", p.path_cost},           {"path_length", p.path_length},
                        {"turns", p.turns},                   {"search_cost", p.search_cost}};
    if (include_path) {
        nlohmann::json path = nlohmann::json::array();
        for (const Cell& c : p.path) path.push_back({c.x, c.y});
        j["path"] = std::move(path);
    }
    return j;
}

/// Line-delimited records: one {"type":"tick"} per tick, then one {"type":"summary"}.
inline std::string serialize_log(const EpisodeLog& log) {
    std::string out;
    for (const TraceRecord& r : log.trace) {
        nlohmann::json j = {{"type", "tick"},
                            {"tick", r.tick},
                            {"x", r.pose.cell.x},
                            {"y", r.pose.cell.y},
                            {"theta", std::string(1, direction_letter(r.pose.theta))},
                            {"events", r.events},
                            {"replan", r.replanned}};
        if (!r.note.empty()) j["note"] = r.note;
        out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
        out.push_back('\n');
    }
    nlohmann::json seqs = nlohmann::json::array();
    for (const auto& s : log.action_sequences) seqs.push_back(encode_sequence(s));
    nlohmann::json lowered = nlohmann::json::array();
    for (const auto& s : log.lowered_sequences) lowered.push_back(encode_sequence(s));
    nlohmann::json plans = nlohmann::json::array();
    for (const auto& p : log.plans) plans.push_back(plan_to_json(p, false));
    nlohmann::json traj = nlohmann::json::array();
    for (const Cell& c : log.trajectory) traj.push_back({c.x, c.y});
    nlohmann::json summary = {{"type", "summary"},
                              {"instruction", log.instruction},
                              {"outcome", std::string(to_string(log.outcome))},
                              {"outcome_detail", log.outcome_detail},
                              {"ticks", log.ticks},
                              {"replans", log.replans},
                              {"executed_cost", log.executed_cost},
                              {"action_sequences", seqs},
                              {"lowered_sequences", lowered},
                              {"plans", plans},
                              {"trajectory", traj}};
    out += summary.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out.push_back('\n');
    return out;
}

} // namespace gridpilot
