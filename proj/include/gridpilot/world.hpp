#pragma once

// Discrete-time world simulator and the scenario document format.
//
// Scenario grammar (one item per line, ';' starts a comment line):
//
//   name: <text>                      optional
//   start: x,y                        optional when the map holds an 'S'
//   heading: E|S|W|N                  optional, default E
//   pedestrian_mode: waypoints|random_walk
//   seed: <unsigned>                  random-walk seed, default 1
//   map:
//     <indented map rows>
//   landmarks:
//     <name> <kind> <region> [access x,y]
//   pedestrians:
//     <id> at x,y [waypoints x,y x,y ...]
//   events:
//     <tick> add_obstacle <region>
//     <tick> remove_obstacle <region>
//     <tick> add_landmark <name> <kind> <region> [access x,y]
//     <tick> move_pedestrian <id> x,y
//
// <region> is one or more "rect x0,y0,x1,y1" groups and/or "cells x,y x,y ...".

#include "gridpilot/gridcore.hpp"
#include "gridpilot/landmarks.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gridpilot {

struct Pose {
    Cell cell;
    Direction theta = Direction::East;
    friend bool operator==(const Pose&, const Pose&) = default;
};

struct Pedestrian {
    std::string id;
    Cell position;
    std::vector<Cell> waypoints;  // cyclic schedule
    std::size_t next_waypoint = 0;
    friend bool operator==(const Pedestrian&, const Pedestrian&) = default;
};

struct AddObstacle {
    Region region;
    friend bool operator==(const AddObstacle&, const AddObstacle&) = default;
};
struct RemoveObstacle {
    Region region;
    friend bool operator==(const RemoveObstacle&, const RemoveObstacle&) = default;
};
struct AddLandmark {
    Landmark landmark;
    friend bool operator==(const AddLandmark&, const AddLandmark&) = default;
};
struct MovePedestrian {
    std::string id;
    Cell waypoint;
    friend bool operator==(const MovePedestrian&, const MovePedestrian&) = default;
};

using EventKind = std::variant<AddObstacle, RemoveObstacle, AddLandmark, MovePedestrian>;

struct ScenarioEvent {
    long at_time = 0;
    EventKind kind;
    friend bool operator==(const ScenarioEvent&, const ScenarioEvent&) = default;
};

enum class PedestrianMode : std::uint8_t { Waypoints, RandomWalk };

struct WorldState {
    std::string name;
    long tick = 0;
    GridState grid_state;
    Pose pose;
    LandmarkRegistry registry;
    std::vector<Pedestrian> pedestrians;
    std::vector<ScenarioEvent> pending_events;  // sorted by at_time
    PedestrianMode pedestrian_mode = PedestrianMode::Waypoints;
    std::uint64_t seed = 1;
    std::mt19937_64 rng{1};

    [[nodiscard]] bool pedestrian_at(Cell c) const {
        return std::any_of(pedestrians.begin(), pedestrians.end(),
                           [&](const Pedestrian& p) { return p.position == c; });
    }
};

/// Consistent snapshot of one tick.
struct Observation {
    long tick = 0;
    GridState grid;
    Pose pose;
    LandmarkRegistry landmarks;
    std::vector<Pedestrian> pedestrians;
};

inline std::string describe(const ScenarioEvent& ev) {
    const std::string prefix = "t=" + std::to_string(ev.at_time) + " ";
    return prefix +
           std::visit(overloaded{
                          [](const AddObstacle& e) {
                              return "add_obstacle " + std::to_string(e.region.cells().size()) + " cells";
                          },
                          [](const RemoveObstacle& e) {
                              return "remove_obstacle " + std::to_string(e.region.cells().size()) + " cells";
                          },
                          [](const AddLandmark& e) {
                              return "add_landmark " + e.landmark.name + " " +
                                     std::string(to_string(e.landmark.kind));
                          },
                          [](const MovePedestrian& e) {
                              return "move_pedestrian " + e.id + " " + to_string(e.waypoint);
                          },
                      },
                      ev.kind);
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] inline void scenario_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ScenarioParse, "line " + std::to_string(line) + ": " + what,
                "line " + std::to_string(line));
}

inline std::optional<long> parse_long(std::string_view s) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<Cell> parse_cell(std::string_view s) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    auto x = parse_long(s.substr(0, comma));
    auto y = parse_long(s.substr(comma + 1));
    if (!x || !y) return std::nullopt;
    return Cell{static_cast<int>(*x), static_cast<int>(*y)};
}

/// Parses "<region> [access x,y]" starting at tokens[pos]; advances pos.
inline Region parse_region_tokens(const std::vector<std::string>& tok, std::size_t& pos,
                                  std::size_t line) {
    std::vector<Rect> rects;
    std::vector<Cell> cells;
    bool saw_cells = false;
    while (pos < tok.size() && tok[pos] != "access") {
        if (tok[pos] == "rect") {
            if (pos + 1 >= tok.size()) scenario_fail(line, "rect needs x0,y0,x1,y1");
            const std::string& spec = tok[pos + 1];
            std::vector<long> v;
            std::size_t start = 0;
            while (start <= spec.size()) {
                std::size_t comma = spec.find(',', start);
                if (comma == std::string::npos) comma = spec.size();
                auto n = parse_long(std::string_view(spec).substr(start, comma - start));
                if (!n) scenario_fail(line, "bad rect '" + spec + "'");
                v.push_back(*n);
                start = comma + 1;
            }
            if (v.size() != 4) scenario_fail(line, "rect needs four numbers");
            Rect r{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                   static_cast<int>(v[3])};
            if (r.x0 > r.x1 || r.y0 > r.y1) scenario_fail(line, "rect corners out of order");
            rects.push_back(r);
            pos += 2;
        } else if (tok[pos] == "cells") {
            saw_cells = true;
            ++pos;
            while (pos < tok.size() && tok[pos] != "rect" && tok[pos] != "cells" && tok[pos] != "access") {
                auto c = parse_cell(tok[pos]);
                if (!c) scenario_fail(line, "bad cell '" + tok[pos] + "'");
                cells.push_back(*c);
                ++pos;
            }
        } else {
            scenario_fail(line, "expected 'rect' or 'cells', got '" + tok[pos] + "'");
        }
    }
    if (rects.empty() && cells.empty()) scenario_fail(line, "empty region");
    if (rects.size() == 1 && !saw_cells) return Region(rects.front());
    for (const Rect& r : rects) {
        const auto rc = Region(r).cells();
        cells.insert(cells.end(), rc.begin(), rc.end());
    }
    return Region(std::move(cells));
}

inline Landmark parse_landmark_tokens(const std::vector<std::string>& tok, std::size_t pos,
                                      std::size_t line) {
    if (tok.size() < pos + 3) scenario_fail(line, "landmark needs: name kind region");
    Landmark lm;
    lm.name = tok[pos];
    auto kind = parse_landmark_kind(tok[pos + 1]);
    if (!kind) scenario_fail(line, "unknown landmark kind '" + tok[pos + 1] + "'");
    lm.kind = *kind;
    pos += 2;
    lm.region = parse_region_tokens(tok, pos, line);
    if (pos < tok.size()) {
        if (pos + 2 != tok.size()) scenario_fail(line, "access takes exactly one x,y");
        auto c = parse_cell(tok[pos + 1]);
        if (!c) scenario_fail(line, "bad access cell '" + tok[pos + 1] + "'");
        lm.access = *c;
    }
    return lm;
}

inline void check_landmark(const Landmark& lm, const GridState& grid, std::size_t line) {
    if (!lm.region.within(grid.width(), grid.height()))
        scenario_fail(line, "landmark '" + lm.name + "' region out of bounds");
    if (lm.access && (!grid.in_bounds(*lm.access) || grid.base().occupied(*lm.access)))
        scenario_fail(line, "landmark '" + lm.name + "' access cell is not free");
}

/// Cells visited walking from a to b: x first, then y.
inline std::vector<Cell> leg_cells(Cell a, Cell b) {
    std::vector<Cell> out;
    Cell c = a;
    while (c.x != b.x) {
        c.x += b.x > c.x ? 1 : -1;
        out.push_back(c);
    }
    while (c.y != b.y) {
        c.y += b.y > c.y ? 1 : -1;
        out.push_back(c);
    }
    return out;
}

} // namespace detail

inline Observation observe(const WorldState& world) {
    return Observation{world.tick, world.grid_state, world.pose, world.registry, world.pedestrians};
}

namespace detail {

inline bool pedestrian_can_enter(const WorldState& w, Cell c, std::size_t self) {
    if (!w.grid_state.in_bounds(c) || w.grid_state.occupancy().occupied(c)) return false;
    if (c == w.pose.cell) return false;
    for (std::size_t i = 0; i < w.pedestrians.size(); ++i)
        if (i != self && w.pedestrians[i].position == c) return false;
    return true;
}

/// Moves any pedestrian standing on an occupied cell to the nearest free cell.
inline void evict_pedestrians(WorldState& w) {
    for (std::size_t i = 0; i < w.pedestrians.size(); ++i) {
        Pedestrian& p = w.pedestrians[i];
        if (!w.grid_state.occupancy().occupied(p.position)) continue;
        std::vector<std::uint8_t> seen(w.grid_state.occupancy().size(), 0);
        std::deque<Cell> q{p.position};
        seen[w.grid_state.index(p.position)] = 1;
        while (!q.empty()) {
            const Cell c = q.front();
            q.pop_front();
            if (pedestrian_can_enter(w, c, i)) {
                p.position = c;
                break;
            }
            for (Direction d : kExpansionOrder) {
                const Cell n = neighbor(c, d);
                if (!w.grid_state.in_bounds(n) || seen[w.grid_state.index(n)]) continue;
                seen[w.grid_state.index(n)] = 1;
                q.push_back(n);
            }
        }
    }
}

inline void apply_event_in_place(WorldState& w, const EventKind& event) {
    std::visit(
        overloaded{
            [&](const AddObstacle& e) {
                if (!e.region.within(w.grid_state.width(), w.grid_state.height()))
                    throw Error(ErrorCode::OutOfBounds, "obstacle region outside grid");
                for (const Cell& c : e.region.cells()) {
                    if (c == w.pose.cell) continue;  // the robot stands there
                    w.grid_state.set_occupied(c, true);
                    w.grid_state.set_layer_value(c, 0.0);
                }
                evict_pedestrians(w);
            },
            [&](const RemoveObstacle& e) {
                if (!e.region.within(w.grid_state.width(), w.grid_state.height()))
                    throw Error(ErrorCode::OutOfBounds, "obstacle region outside grid");
                for (const Cell& c : e.region.cells())
                    w.grid_state.set_occupied(c, w.grid_state.base().occupied(c));
            },
            [&](const AddLandmark& e) {
                if (!e.landmark.region.within(w.grid_state.width(), w.grid_state.height()))
                    throw Error(ErrorCode::OutOfBounds, "landmark region outside grid", e.landmark.name);
                if (e.landmark.access && !w.grid_state.in_bounds(*e.landmark.access))
                    throw Error(ErrorCode::OutOfBounds, "landmark access cell outside grid", e.landmark.name);
                w.registry.put(e.landmark);
            },
            [&](const MovePedestrian& e) {
                if (!w.grid_state.in_bounds(e.waypoint))
                    throw Error(ErrorCode::OutOfBounds, "waypoint outside grid", to_string(e.waypoint));
                auto it = std::find_if(w.pedestrians.begin(), w.pedestrians.end(),
                                       [&](const Pedestrian& p) { return p.id == e.id; });
                if (it == w.pedestrians.end())
                    throw Error(ErrorCode::UnknownPedestrian, "no pedestrian '" + e.id + "'", e.id);
                it->waypoints = {e.waypoint};
                it->next_waypoint = 0;
            },
        },
        event);
}

inline void advance_pedestrians(WorldState& w) {
    for (std::size_t i = 0; i < w.pedestrians.size(); ++i) {
        Pedestrian& p = w.pedestrians[i];
        if (w.pedestrian_mode == PedestrianMode::RandomWalk) {
            const auto pick = static_cast<int>(w.rng() % 5);  // 4 = stay
            if (pick == 4) continue;
            const Cell n = neighbor(p.position, kExpansionOrder[static_cast<std::size_t>(pick)]);
            if (pedestrian_can_enter(w, n, i)) p.position = n;
            continue;
        }
        if (p.waypoints.empty()) continue;
        if (p.position == p.waypoints[p.next_waypoint])
            p.next_waypoint = (p.next_waypoint + 1) % p.waypoints.size();
        const Cell target = p.waypoints[p.next_waypoint];
        if (target == p.position) continue;
        Cell n = p.position;
        if (n.x != target.x) n.x += target.x > n.x ? 1 : -1;
        else n.y += target.y > n.y ? 1 : -1;
        if (pedestrian_can_enter(w, n, i)) p.position = n;
    }
}

} // namespace detail

/// Immediately applies an event regardless of its time stamp.
inline WorldState apply_event(const WorldState& world, const EventKind& event) {
    WorldState out = world;
    detail::apply_event_in_place(out, event);
    return out;
}

struct StepResult {
    WorldState world;
    Observation observation;
    std::vector<ScenarioEvent> applied_events;
    /// Set when the requested move was rejected (IllegalMove); the tick still advanced.
    std::optional<Error> rejected;
};

/// Advances one tick: due events fire, pedestrians advance one step, then the
/// robot performs `move` if the target cell is free.
inline StepResult step(const WorldState& world, std::optional<Direction> move) {
    StepResult r{world, {}, {}, std::nullopt};
    WorldState& w = r.world;
    ++w.tick;
    while (!w.pending_events.empty() && w.pending_events.front().at_time <= w.tick) {
        detail::apply_event_in_place(w, w.pending_events.front().kind);
        r.applied_events.push_back(w.pending_events.front());
        w.pending_events.erase(w.pending_events.begin());
    }
    detail::advance_pedestrians(w);
    if (move) {
        const Cell target = neighbor(w.pose.cell, *move);
        if (!w.grid_state.in_bounds(target) || w.grid_state.blocked(target) || w.pedestrian_at(target)) {
            r.rejected = Error(ErrorCode::IllegalMove, "cannot move " + std::string(1, direction_letter(*move)) +
                                                           " from " + to_string(w.pose.cell),
                               to_string(target));
        } else {
            w.pose = Pose{target, *move};
        }
    }
    r.observation = observe(w);
    return r;
}

/// Parses a scenario document; tick = 0 and events stamped 0 are already applied.
inline WorldState load_scenario(std::string_view text) {
    using detail::scenario_fail;
    WorldState w;
    std::string map_text;
    std::optional<Cell> start;
    Direction heading = Direction::East;
    struct PendingLine {
        std::size_t line;
        std::vector<std::string> tokens;
    };
    std::vector<PendingLine> landmark_lines;
    std::vector<PendingLine> pedestrian_lines;
    std::vector<PendingLine> event_lines;
    enum class Section { None, Map, Landmarks, Pedestrians, Events } section = Section::None;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        const std::string_view body = detail::trim(raw);
        if (body.empty() || body.front() == ';') {
            if (nl == text.size()) break;
            continue;
        }
        const bool indented = std::isspace(static_cast<unsigned char>(raw.front())) != 0;
        if (indented) {
            switch (section) {
            case Section::Map:
                map_text.append(body);
                map_text.push_back('\n');
                break;
            case Section::Landmarks: landmark_lines.push_back({line_no, detail::split_ws(body)}); break;
            case Section::Pedestrians: pedestrian_lines.push_back({line_no, detail::split_ws(body)}); break;
            case Section::Events: event_lines.push_back({line_no, detail::split_ws(body)}); break;
            case Section::None: scenario_fail(line_no, "indented line outside a section");
            }
        } else {
            const auto colon = body.find(':');
            if (colon == std::string_view::npos) scenario_fail(line_no, "expected 'key:'");
            const std::string_view key = detail::trim(body.substr(0, colon));
            const std::string_view value = detail::trim(body.substr(colon + 1));
            section = Section::None;
            if (key == "map" || key == "landmarks" || key == "pedestrians" || key == "events") {
                if (!value.empty()) scenario_fail(line_no, "section header takes no value");
                if (key == "map") section = Section::Map;
                else if (key == "landmarks") section = Section::Landmarks;
                else if (key == "pedestrians") section = Section::Pedestrians;
                else section = Section::Events;
            } else if (key == "name") {
                w.name = std::string(value);
            } else if (key == "start") {
                start = detail::parse_cell(value);
                if (!start) scenario_fail(line_no, "bad start '" + std::string(value) + "'");
            } else if (key == "heading") {
                auto d = parse_direction(value);
                if (!d) scenario_fail(line_no, "bad heading '" + std::string(value) + "'");
                heading = *d;
            } else if (key == "pedestrian_mode") {
                if (value == "waypoints") w.pedestrian_mode = PedestrianMode::Waypoints;
                else if (value == "random_walk") w.pedestrian_mode = PedestrianMode::RandomWalk;
                else scenario_fail(line_no, "bad pedestrian_mode '" + std::string(value) + "'");
            } else if (key == "seed") {
                auto s = detail::parse_long(value);
                if (!s || *s < 0) scenario_fail(line_no, "bad seed");
                w.seed = static_cast<std::uint64_t>(*s);
            } else {
                scenario_fail(line_no, "unknown key '" + std::string(key) + "'");
            }
        }
        if (nl == text.size()) break;
    }

    if (map_text.empty()) throw Error(ErrorCode::ScenarioParse, "scenario has no map section");
    try {
        w.grid_state = parse_map(map_text);
    } catch (const Error& e) {
        throw Error(ErrorCode::ScenarioParse, "map: " + e.message(), e.detail());
    }
    if (!start) start = w.grid_state.suggested_start();
    if (!start) throw Error(ErrorCode::ScenarioParse, "no start pose (start: or 'S' cell)");
    if (!w.grid_state.in_bounds(*start) || w.grid_state.blocked(*start))
        throw Error(ErrorCode::ScenarioParse, "start pose is outside the grid or occupied", to_string(*start));
    w.pose = Pose{*start, heading};
    w.rng.seed(w.seed);

    for (const auto& [line, tok] : landmark_lines) {
        Landmark lm = detail::parse_landmark_tokens(tok, 0, line);
        detail::check_landmark(lm, w.grid_state, line);
        if (w.registry.contains(lm.name)) scenario_fail(line, "duplicate landmark '" + lm.name + "'");
        if (lm.region.contains(*start))
            throw Error(ErrorCode::LandmarkOverlapsStart,
                        "landmark '" + lm.name + "' overlaps the start pose", "line " + std::to_string(line));
        w.registry.put(std::move(lm));
    }

    for (const auto& [line, tok] : pedestrian_lines) {
        if (tok.size() < 3 || tok[1] != "at") scenario_fail(line, "pedestrian needs: id at x,y");
        Pedestrian p;
        p.id = tok[0];
        auto at = detail::parse_cell(tok[2]);
        if (!at) scenario_fail(line, "bad pedestrian position");
        p.position = *at;
        if (tok.size() > 3) {
            if (tok[3] != "waypoints") scenario_fail(line, "expected 'waypoints'");
            for (std::size_t i = 4; i < tok.size(); ++i) {
                auto c = detail::parse_cell(tok[i]);
                if (!c) scenario_fail(line, "bad waypoint '" + tok[i] + "'");
                p.waypoints.push_back(*c);
            }
        }
        auto free = [&](Cell c) { return w.grid_state.in_bounds(c) && !w.grid_state.base().occupied(c); };
        if (!free(p.position) || p.position == *start)
            scenario_fail(line, "pedestrian '" + p.id + "' must start on a free cell other than the robot's");
        if (w.pedestrian_at(p.position)) scenario_fail(line, "two pedestrians share a cell");
        Cell prev = p.position;
        for (std::size_t i = 0; i <= p.waypoints.size() && !p.waypoints.empty(); ++i) {
            const Cell next = p.waypoints[i % p.waypoints.size()];
            if (!free(next)) scenario_fail(line, "waypoint " + to_string(next) + " is not free");
            for (const Cell& c : detail::leg_cells(prev, next))
                if (!free(c)) scenario_fail(line, "waypoint route crosses occupied cell " + to_string(c));
            prev = next;
        }
        if (std::any_of(w.pedestrians.begin(), w.pedestrians.end(),
                        [&](const Pedestrian& o) { return o.id == p.id; }))
            scenario_fail(line, "duplicate pedestrian id '" + p.id + "'");
        w.pedestrians.push_back(std::move(p));
    }

    for (const auto& [line, tok] : event_lines) {
        if (tok.size() < 2) scenario_fail(line, "event needs: tick kind args");
        auto t = detail::parse_long(tok[0]);
        if (!t) scenario_fail(line, "bad event time '" + tok[0] + "'");
        if (*t < 0)
            throw Error(ErrorCode::InvalidEventTime, "event time must be >= 0", "line " + std::to_string(line));
        ScenarioEvent ev;
        ev.at_time = *t;
        const std::string& kind = tok[1];
        std::size_t p = 2;
        if (kind == "add_obstacle" || kind == "remove_obstacle") {
            Region r = detail::parse_region_tokens(tok, p, line);
            if (p != tok.size()) scenario_fail(line, "unexpected trailing tokens");
            if (!r.within(w.grid_state.width(), w.grid_state.height()))
                scenario_fail(line, "event region out of bounds");
            if (kind == "add_obstacle") ev.kind = AddObstacle{std::move(r)};
            else ev.kind = RemoveObstacle{std::move(r)};
        } else if (kind == "add_landmark") {
            Landmark lm = detail::parse_landmark_tokens(tok, 2, line);
            detail::check_landmark(lm, w.grid_state, line);
            ev.kind = AddLandmark{std::move(lm)};
        } else if (kind == "move_pedestrian") {
            if (tok.size() != 4) scenario_fail(line, "move_pedestrian needs: id x,y");
            auto c = detail::parse_cell(tok[3]);
            if (!c || !w.grid_state.in_bounds(*c) || w.grid_state.base().occupied(*c))
                scenario_fail(line, "bad waypoint '" + tok[3] + "'");
            if (std::none_of(w.pedestrians.begin(), w.pedestrians.end(),
                             [&](const Pedestrian& q) { return q.id == tok[2]; }))
                scenario_fail(line, "unknown pedestrian '" + tok[2] + "'");
            ev.kind = MovePedestrian{tok[2], *c};
        } else {
            scenario_fail(line, "unknown event kind '" + kind + "'");
        }
        w.pending_events.push_back(std::move(ev));
    }
    std::stable_sort(w.pending_events.begin(), w.pending_events.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.at_time < b.at_time; });
    while (!w.pending_events.empty() && w.pending_events.front().at_time <= 0) {
        detail::apply_event_in_place(w, w.pending_events.front().kind);
        w.pending_events.erase(w.pending_events.begin());
    }
    return w;
}

} // namespace gridpilot
