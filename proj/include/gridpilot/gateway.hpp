#pragma once

#include "gridpilot/dcip.hpp"
#include "gridpilot/nlu_remote.hpp"
#include "gridpilot/payload.hpp"
#include "gridpilot/world.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

namespace gridpilot {

using nlohmann::json;

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open file", p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Backend selector: "rule", "remote", "replay:<file>" or a bare fixture label
/// such as "mistral" (`<fixtures_dir>/<label>.tsv`). Replay files are resolved
/// against `fixtures_dir` when relative.
inline std::shared_ptr<NluBackend> make_backend(const std::string& spec,
                                                const std::filesystem::path& fixtures_dir = {}) {
    if (spec.empty() || spec == "rule") return std::make_shared<RuleBasedBackend>();
    if (spec == "remote") return std::make_shared<RemoteBackend>(RemoteConfig::from_env());
    if (spec.rfind("replay:", 0) == 0) {
        std::filesystem::path file = spec.substr(7);
        if (file.empty()) throw Error(ErrorCode::InvalidArgument, "replay backend needs a file", spec);
        if (file.is_relative() && !fixtures_dir.empty()) {
            for (const auto& part : file)
                if (part == "..") throw Error(ErrorCode::InvalidArgument, "replay path escapes fixture dir", spec);
            file = fixtures_dir / file;
        }
        return std::make_shared<ReplayBackend>(ReplayBackend::from_text(file.stem().string(), read_file(file)));
    }
    if (!fixtures_dir.empty() && spec.find_first_of("/\\") == std::string::npos && spec != "." && spec != "..") {
        const auto file = fixtures_dir / (spec + ".tsv");
        if (std::filesystem::exists(file))
            return std::make_shared<ReplayBackend>(ReplayBackend::from_text(spec, read_file(file)));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown backend", spec);
}

// ------------------------------------------------------------ serialization

/// Run-length encoding as [[value, count], ...].
template <typename T, typename Encode>
json rle_encode(const std::vector<T>& values, Encode encode) {
    json out = json::array();
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        while (j < values.size() && values[j] == values[i]) ++j;
        out.push_back(json::array({encode(values[i]), j - i}));
        i = j;
    }
    return out;
}

template <typename T, typename Decode>
std::vector<T> rle_decode(const json& runs, std::size_t expected, Decode decode) {
    std::vector<T> out;
    out.reserve(expected);
    if (!runs.is_array()) throw Error(ErrorCode::InvalidArgument, "run-length array expected");
    for (const json& run : runs) {
        if (!run.is_array() || run.size() != 2 || !run[1].is_number_unsigned())
            throw Error(ErrorCode::InvalidArgument, "malformed run");
        const T v = decode(run[0]);
        const std::size_t n = run[1].get<std::size_t>();
        if (out.size() + n > expected) throw Error(ErrorCode::InvalidArgument, "runs exceed grid size");
        out.insert(out.end(), n, v);
    }
    if (out.size() != expected) throw Error(ErrorCode::InvalidArgument, "runs do not cover the grid");
    return out;
}

inline json cost_json(double v) { return is_blocked(v) ? json("BLOCKED") : json(v); }

inline double cost_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "BLOCKED") return kBlocked;
    if (j.is_number()) return j.get<double>();
    throw Error(ErrorCode::InvalidArgument, "cost must be a number or \"BLOCKED\"");
}

inline json cell_json(Cell c) { return json::array({c.x, c.y}); }

inline json grid_json(const GridState& s) {
    auto u8 = [](std::uint8_t v) { return static_cast<int>(v); };
    json j = {{"width", s.width()},
              {"height", s.height()},
              {"base_occupancy", rle_encode(s.base().cells(), u8)},
              {"occupancy", rle_encode(s.occupancy().cells(), u8)},
              {"cost_layer", rle_encode(s.costs().values(), cost_json)},
              {"goal", s.goal() ? cell_json(*s.goal()) : json(nullptr)},
              {"suggested_start", s.suggested_start() ? cell_json(*s.suggested_start()) : json(nullptr)}};
    return j;
}

/// Inverse of grid_json.
inline GridState grid_from_json(const json& j) {
    const int w = j.at("width").get<int>();
    const int h = j.at("height").get<int>();
    if (w <= 0 || h <= 0) throw Error(ErrorCode::InvalidArgument, "bad grid size");
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    auto u8 = [](const json& v) { return static_cast<std::uint8_t>(v.get<int>()); };
    const auto base = rle_decode<std::uint8_t>(j.at("base_occupancy"), n, u8);
    const auto occ = rle_decode<std::uint8_t>(j.at("occupancy"), n, u8);
    const auto costs = rle_decode<double>(j.at("cost_layer"), n, cost_from_json);
    auto opt_cell = [](const json& v) -> std::optional<Cell> {
        if (v.is_null()) return std::nullopt;
        return Cell{v.at(0).get<int>(), v.at(1).get<int>()};
    };
    OccupancyGrid base_grid(w, h);
    for (std::size_t i = 0; i < n; ++i)
        if (base[i]) base_grid.set({static_cast<int>(i % w), static_cast<int>(i / w)}, true);
    GridState s(base_grid, opt_cell(j.at("goal")), opt_cell(j.at("suggested_start")));
    for (std::size_t i = 0; i < n; ++i) {
        const Cell c{static_cast<int>(i % w), static_cast<int>(i / w)};
        s.set_occupied(c, occ[i] != 0);
        s.set_layer_value(c, costs[i]);
    }
    return s;
}

inline json landmark_json(const Landmark& lm) {
    json j = {{"name", lm.name}, {"kind", std::string(to_string(lm.kind))}};
    j["region"] = detail::encode_region(RegionRef{lm.region});
    json cells = json::array();
    for (Cell c : lm.region.cells()) cells.push_back(cell_json(c));
    j["cells"] = std::move(cells);
    j["access"] = lm.access ? cell_json(*lm.access) : json(nullptr);
    return j;
}

inline json state_json(const Episode& ep) {
    const WorldState& w = ep.world();
    json j = {{"tick", w.tick},
              {"pose", {{"x", w.pose.cell.x}, {"y", w.pose.cell.y}, {"theta", std::string(1, direction_letter(w.pose.theta))}}}};
    j.update(grid_json(w.grid_state));
    json lms = json::array();
    for (const auto& [_, lm] : w.registry.entries()) lms.push_back(landmark_json(lm));
    j["landmarks"] = std::move(lms);
    json peds = json::array();
    for (const Pedestrian& p : w.pedestrians) peds.push_back({{"id", p.id}, {"x", p.position.x}, {"y", p.position.y}});
    j["pedestrians"] = std::move(peds);
    json path = json::array();
    if (ep.active())
        for (Cell c : ep.remaining_path()) path.push_back(cell_json(c));
    j["current_path"] = std::move(path);
    j["metrics"] = ep.current_plan() ? plan_to_json(*ep.current_plan(), false) : json(nullptr);
    j["strategy"] = ep.profile().name;
    j["instruction"] = ep.log().instruction;
    j["status"] = ep.started() ? std::string(to_string(ep.log().outcome)) : std::string("Idle");
    j["replans"] = ep.log().replans;
    j["executed_cost"] = ep.log().executed_cost;
    return j;
}

inline json diagnostics_json(const std::vector<Diagnostic>& ds) {
    json out = json::array();
    for (const auto& d : ds)
        out.push_back({{"code", std::string(to_string(d.code))}, {"message", d.message}, {"detail", d.detail}});
    return out;
}

/// Event body: {"type": "add_obstacle"|"remove_obstacle", "region": ...},
/// {"type": "add_landmark", "name", "kind", "region", "access"?} or
/// {"type": "move_pedestrian", "id", "to": [x, y]}. Regions use the payload
/// region forms; a landmark name resolves to its cells.
inline EventKind event_from_json(const json& j, const LandmarkRegistry& registry) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw Error(ErrorCode::InvalidArgument, "event needs a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    auto region = [&]() {
        if (!j.contains("region")) throw Error(ErrorCode::InvalidArgument, "event needs \"region\"");
        return resolve_region(detail::decode_region(j["region"], "$.region"), registry);
    };
    if (type == "add_obstacle") return AddObstacle{region()};
    if (type == "remove_obstacle") return RemoveObstacle{region()};
    if (type == "add_landmark") {
        Landmark lm;
        lm.name = j.value("name", "");
        if (lm.name.empty()) throw Error(ErrorCode::InvalidArgument, "add_landmark needs \"name\"");
        const auto kind = parse_landmark_kind(j.value("kind", "custom"));
        if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown landmark kind", j.value("kind", ""));
        lm.kind = *kind;
        lm.region = region();
        if (j.contains("access") && !j["access"].is_null()) lm.access = detail::json_cell(j["access"], "$.access");
        return AddLandmark{std::move(lm)};
    }
    if (type == "move_pedestrian") {
        if (!j.contains("id") || !j.contains("to")) throw Error(ErrorCode::InvalidArgument, "move_pedestrian needs \"id\" and \"to\"");
        return MovePedestrian{j["id"].get<std::string>(), detail::json_cell(j["to"], "$.to")};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown event type", type);
}

// ----------------------------------------------------------------- sessions

struct SessionSettings {
    std::string scenario_text;
    std::string strategy;
    std::string backend;
};

class Session {
public:
    Session(std::string id, SessionSettings settings, const std::filesystem::path& fixtures_dir)
        : id_(std::move(id)), settings_(std::move(settings)),
          backend_(make_backend(settings_.backend, fixtures_dir)),
          episode_(std::make_unique<Episode>(load_scenario(settings_.scenario_text),
                                             select_profile(settings_.strategy.empty() ? std::string(kBalance)
                                                                                       : settings_.strategy),
                                             backend_)) {}

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const SessionSettings& settings() const noexcept { return settings_; }
    std::mutex& mutex() noexcept { return mu_; }

    [[nodiscard]] json state() const { return state_json(*episode_); }

    /// Starts a new episode from the current world. On failure the previous
    /// episode is kept and the error is rethrown with its diagnostics.
    json instruction(const std::string& text) {
        auto next = std::make_unique<Episode>(episode_->world(), episode_->profile(), backend_);
        next->start(text);
        const Outcome o = next->log().outcome;
        if (o == Outcome::InstructionError || o == Outcome::NoPath) {
            const auto& ds = next->diagnostics();
            if (!ds.empty()) throw Error(ds.front().code, ds.front().message, ds.front().detail);
            throw Error(ErrorCode::NoPath, next->log().outcome_detail);
        }
        episode_ = std::move(next);
        json text_actions = json::array();
        for (const Action& a : episode_->parsed_actions()) text_actions.push_back(describe(a));
        json grounded = json::array();
        json lowered = json::array();
        if (!episode_->log().action_sequences.empty()) {
            grounded = encode_sequence(episode_->log().action_sequences.back());
            lowered = encode_sequence(episode_->log().lowered_sequences.back());
        }
        json out = {{"actions", encode_sequence(episode_->parsed_actions())},
                    {"actions_text", text_actions},
                    {"grounded_actions", grounded},
                    {"lowered_actions", lowered},
                    {"plan", episode_->current_plan() ? plan_to_json(*episode_->current_plan()) : json(nullptr)},
                    {"diagnostics", diagnostics_json(episode_->diagnostics())},
                    {"status", std::string(to_string(episode_->log().outcome))}};
        return out;
    }

    json step(long ticks) {
        if (ticks < 1) throw Error(ErrorCode::InvalidArgument, "ticks must be >= 1");
        const std::size_t first = episode_->log().trace.size();
        for (long i = 0; i < ticks; ++i) {
            if (episode_->active())
                episode_->tick();
            else
                episode_->idle_tick();
        }
        json records = json::array();
        const auto& trace = episode_->log().trace;
        for (std::size_t i = first; i < trace.size(); ++i) {
            const TraceRecord& r = trace[i];
            json rec = {{"tick", r.tick}, {"x", r.pose.cell.x}, {"y", r.pose.cell.y},
                        {"events", r.events}, {"replan", r.replanned}};
            if (!r.note.empty()) rec["note"] = r.note;
            records.push_back(std::move(rec));
        }
        json out = state();
        out["trace"] = std::move(records);
        return out;
    }

    json event(const json& body) {
        const EventKind ev = event_from_json(body, episode_->world().registry);
        const bool replanned = episode_->inject(ev);
        return {{"ack", true}, {"replanned", replanned}};
    }

private:
    std::string id_;
    SessionSettings settings_;
    std::shared_ptr<NluBackend> backend_;
    std::unique_ptr<Episode> episode_;
    std::mutex mu_;
};

struct GatewayConfig {
    std::filesystem::path scenario_dir = "scenarios";
    std::filesystem::path fixtures_dir = "data/fixtures";
    std::filesystem::path state_dir;   // empty: no persistence
    std::filesystem::path static_dir;  // served under "/" when it exists
};

class Busy : public std::runtime_error {
public:
    Busy() : std::runtime_error("session is busy with another request") {}
};

class NotFound : public std::runtime_error {
public:
    explicit NotFound(const std::string& id) : std::runtime_error("unknown session " + id) {}
};

/// Session registry with optional journal persistence: each session is a
/// JSONL file whose first line holds the settings and whose further lines
/// are the mutations in arrival order.
class SessionManager {
public:
    explicit SessionManager(GatewayConfig config = {}) : config_(std::move(config)) {
        std::random_device rd;
        salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        if (!config_.state_dir.empty()) {
            std::filesystem::create_directories(config_.state_dir);
            restore();
        }
    }

    [[nodiscard]] const GatewayConfig& config() const noexcept { return config_; }

    std::string create(const json& body) {
        SessionSettings s;
        if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "body must be a JSON object");
        if (body.contains("scenario_text")) {
            s.scenario_text = body["scenario_text"].get<std::string>();
        } else if (body.contains("scenario_name")) {
            std::string name = body["scenario_name"].get<std::string>();
            if (name.find('/') != std::string::npos || name.find("..") != std::string::npos)
                throw Error(ErrorCode::InvalidArgument, "scenario_name must be a bare file name", name);
            if (std::filesystem::path(name).extension().empty()) name += ".scn";
            s.scenario_text = read_file(config_.scenario_dir / name);
        } else {
            throw Error(ErrorCode::InvalidArgument, "scenario_name or scenario_text required");
        }
        s.strategy = body.value("strategy", std::string(kBalance));
        s.backend = body.value("backend", "rule");
        std::string id;
        {
            std::lock_guard lk(mu_);
            id = next_id();
        }
        auto session = std::make_shared<Session>(id, s, config_.fixtures_dir);
        journal(id, {{"scenario_text", s.scenario_text}, {"strategy", s.strategy}, {"backend", s.backend}}, true);
        std::lock_guard lk(mu_);
        sessions_[id] = std::move(session);
        return id;
    }

    std::shared_ptr<Session> get(const std::string& id) {
        std::lock_guard lk(mu_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw NotFound(id);
        return it->second;
    }

    void remove(const std::string& id) {
        std::shared_ptr<Session> s;
        {
            std::lock_guard lk(mu_);
            auto it = sessions_.find(id);
            if (it == sessions_.end()) throw NotFound(id);
            s = it->second;
            sessions_.erase(it);
        }
        std::lock_guard lk(s->mutex());  // let an in-flight writer finish
        if (!config_.state_dir.empty()) std::filesystem::remove(journal_path(id));
    }

    [[nodiscard]] std::size_t size() {
        std::lock_guard lk(mu_);
        return sessions_.size();
    }

    json snapshot(const std::string& id) {
        auto s = get(id);
        std::lock_guard lk(s->mutex());
        return s->state();
    }

    /// Runs a mutation under the session's exclusive lock; a concurrent
    /// mutation gets Busy instead of waiting.
    template <typename Fn>
    json mutate(const std::string& id, const json& record, Fn&& fn) {
        auto s = get(id);
        std::unique_lock lk(s->mutex(), std::try_to_lock);
        if (!lk.owns_lock()) throw Busy();
        json out = fn(*s);
        journal(id, record, false);
        return out;
    }

private:
    std::string next_id() {
        ++counter_;
        std::mt19937_64 mix(salt_ ^ counter_);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%08llx%04llx", static_cast<unsigned long long>(mix() & 0xffffffffULL),
                      static_cast<unsigned long long>(counter_ & 0xffffULL));
        return buf;
    }

    [[nodiscard]] std::filesystem::path journal_path(const std::string& id) const {
        return config_.state_dir / (id + ".jsonl");
    }

    void journal(const std::string& id, const json& record, bool truncate) {
        if (config_.state_dir.empty() || replaying_) return;
        std::ofstream out(journal_path(id), truncate ? std::ios::trunc : std::ios::app);
        out << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }

    void restore() {
        replaying_ = true;
        for (const auto& entry : std::filesystem::directory_iterator(config_.state_dir)) {
            if (entry.path().extension() != ".jsonl") continue;
            const std::string id = entry.path().stem().string();
            std::ifstream in(entry.path());
            std::string line;
            if (!std::getline(in, line)) continue;
            try {
                const json head = json::parse(line);
                SessionSettings s{head.at("scenario_text").get<std::string>(), head.value("strategy", ""),
                                  head.value("backend", "rule")};
                auto session = std::make_shared<Session>(id, s, config_.fixtures_dir);
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    const json rec = json::parse(line);
                    const std::string op = rec.value("op", "");
                    try {
                        if (op == "instruction") session->instruction(rec.at("text").get<std::string>());
                        else if (op == "step") session->step(rec.at("ticks").get<long>());
                        else if (op == "event") session->event(rec.at("event"));
                    } catch (const Error&) {
                        // the original request failed the same way
                    }
                }
                sessions_[id] = std::move(session);
            } catch (const std::exception&) {
                // unreadable journal: leave the file for inspection
            }
        }
        replaying_ = false;
    }

    GatewayConfig config_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex mu_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_ = 0;
    bool replaying_ = false;
};

// --------------------------------------------------------------------- HTTP

inline json error_body(std::string_view code, const std::string& message, const std::string& detail) {
    return {{"error", {{"code", code}, {"message", message}, {"detail", detail}}}};
}

inline int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ScenarioParse:
    case ErrorCode::MalformedMap:
    case ErrorCode::InvalidEventTime:
    case ErrorCode::LandmarkOverlapsStart:
    case ErrorCode::SchemaViolation:
    case ErrorCode::UnknownStrategy: return 400;
    case ErrorCode::FileNotFound: return 404;
    case ErrorCode::BackendUnavailable: return 503;
    default: return 422;
    }
}

/// Registers the session API on `server`.
inline void install_routes(httplib::Server& server, SessionManager& sessions) {
    auto reply = [](httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace), "application/json");
    };
    auto guarded = [reply](auto&& fn) {
        return [fn, reply](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const NotFound& e) {
                reply(res, 404, error_body("NotFound", e.what(), ""));
            } catch (const Busy& e) {
                reply(res, 409, error_body("Conflict", e.what(), ""));
            } catch (const Error& e) {
                reply(res, status_for(e.code()), error_body(to_string(e.code()), e.message(), e.detail()));
            } catch (const json::exception& e) {
                reply(res, 400, error_body("BadRequest", e.what(), ""));
            }
        };
    };
    auto body_of = [](const httplib::Request& req) {
        if (req.body.empty()) return json::object();
        return json::parse(req.body);
    };

    server.Post("/sessions", guarded([&sessions, reply, body_of](const httplib::Request& req, httplib::Response& res) {
        const std::string id = sessions.create(body_of(req));
        reply(res, 201, {{"session_id", id}});
    }));
    server.Get(R"(/sessions/([^/]+)/state)", guarded([&sessions, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, sessions.snapshot(req.matches[1]));
    }));
    server.Post(R"(/sessions/([^/]+)/instruction)",
                guarded([&sessions, reply, body_of](const httplib::Request& req, httplib::Response& res) {
                    const json body = body_of(req);
                    const std::string text = body.at("text").get<std::string>();
                    reply(res, 200, sessions.mutate(req.matches[1], {{"op", "instruction"}, {"text", text}},
                                                    [&](Session& s) { return s.instruction(text); }));
                }));
    server.Post(R"(/sessions/([^/]+)/step)",
                guarded([&sessions, reply, body_of](const httplib::Request& req, httplib::Response& res) {
                    const json body = body_of(req);
                    const long ticks = body.value("ticks", 1L);
                    reply(res, 200, sessions.mutate(req.matches[1], {{"op", "step"}, {"ticks", ticks}},
                                                    [&](Session& s) { return s.step(ticks); }));
                }));
    server.Post(R"(/sessions/([^/]+)/event)",
                guarded([&sessions, reply, body_of](const httplib::Request& req, httplib::Response& res) {
                    const json body = body_of(req);
                    const json ev = body.contains("event") ? body["event"] : body;
                    reply(res, 200, sessions.mutate(req.matches[1], {{"op", "event"}, {"event", ev}},
                                                    [&](Session& s) { return s.event(ev); }));
                }));
    server.Delete(R"(/sessions/([^/]+))", guarded([&sessions, reply](const httplib::Request& req, httplib::Response& res) {
        sessions.remove(req.matches[1]);
        reply(res, 200, {{"deleted", true}});
    }));
    if (!sessions.config().static_dir.empty() && std::filesystem::is_directory(sessions.config().static_dir))
        server.set_mount_point("/", sessions.config().static_dir.string());
}

} // namespace gridpilot
