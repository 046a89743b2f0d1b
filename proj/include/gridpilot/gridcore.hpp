#pragma once

#include "gridpilot/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gridpilot {

namespace detail {
inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}
} // namespace detail

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Cell {
    int x = 0;
    int y = 0;
    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string to_string(Cell c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

constexpr int manhattan(Cell a, Cell b) noexcept {
    return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

// Row index grows downward (y = 0 is the first map line), so "South" is +y.
enum class Direction : std::uint8_t { East, South, West, North };

inline constexpr std::array<Direction, 4> kExpansionOrder{Direction::East, Direction::South,
                                                          Direction::West, Direction::North};

constexpr Cell offset(Direction d) noexcept {
    switch (d) {
    case Direction::East: return {1, 0};
    case Direction::South: return {0, 1};
    case Direction::West: return {-1, 0};
    case Direction::North: return {0, -1};
    }
    return {0, 0};
}

constexpr Cell neighbor(Cell c, Direction d) noexcept {
    const Cell o = offset(d);
    return {c.x + o.x, c.y + o.y};
}

/// Direction of the unit step a -> b, if the cells are 4-adjacent.
constexpr std::optional<Direction> direction_between(Cell a, Cell b) noexcept {
    const int dx = b.x - a.x;
    const int dy = b.y - a.y;
    if (dx == 1 && dy == 0) return Direction::East;
    if (dx == -1 && dy == 0) return Direction::West;
    if (dx == 0 && dy == 1) return Direction::South;
    if (dx == 0 && dy == -1) return Direction::North;
    return std::nullopt;
}

constexpr char direction_letter(Direction d) noexcept {
    switch (d) {
    case Direction::East: return 'E';
    case Direction::South: return 'S';
    case Direction::West: return 'W';
    case Direction::North: return 'N';
    }
    return '?';
}

inline std::optional<Direction> parse_direction(std::string_view s) noexcept {
    if (s == "E" || s == "e" || s == "east") return Direction::East;
    if (s == "S" || s == "s" || s == "south") return Direction::South;
    if (s == "W" || s == "w" || s == "west") return Direction::West;
    if (s == "N" || s == "n" || s == "north") return Direction::North;
    return std::nullopt;
}

// Binary occupancy, row-major, 0 = free and 1 = occupied.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height)
        : width_(width), height_(height),
          cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {
        if (width <= 0 || height <= 0)
            throw Error(ErrorCode::MalformedMap, "grid dimensions must be positive");
    }

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

    [[nodiscard]] bool in_bounds(Cell c) const noexcept {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }
    [[nodiscard]] std::size_t index(Cell c) const noexcept {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.x);
    }
    [[nodiscard]] Cell cell_at(std::size_t idx) const noexcept {
        return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
                static_cast<int>(idx / static_cast<std::size_t>(width_))};
    }

    [[nodiscard]] bool occupied(Cell c) const { return cells_[index(c)] != 0; }
    void set(Cell c, bool occupied) { cells_[index(c)] = occupied ? 1 : 0; }

    [[nodiscard]] const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> cells_;
};

struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

/// A named set of cells, given either as an inclusive rectangle or an explicit
/// cell list. cells() is row-major in both forms.
class Region {
public:
    Region() = default;
    explicit Region(Rect r, std::string id = {}) : id_(std::move(id)), shape_(r) {
        if (r.x0 > r.x1 || r.y0 > r.y1)
            throw Error(ErrorCode::InvalidRegion, "rectangle corners out of order");
    }
    explicit Region(std::vector<Cell> cells, std::string id = {}) : id_(std::move(id)) {
        std::sort(cells.begin(), cells.end(), row_major);
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        shape_ = std::move(cells);
    }

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] bool is_rect() const noexcept { return std::holds_alternative<Rect>(shape_); }
    [[nodiscard]] const Rect& rect() const { return std::get<Rect>(shape_); }

    [[nodiscard]] std::vector<Cell> cells() const {
        if (const auto* r = std::get_if<Rect>(&shape_)) {
            std::vector<Cell> out;
            out.reserve(static_cast<std::size_t>(r->x1 - r->x0 + 1) *
                        static_cast<std::size_t>(r->y1 - r->y0 + 1));
            for (int y = r->y0; y <= r->y1; ++y)
                for (int x = r->x0; x <= r->x1; ++x) out.push_back({x, y});
            return out;
        }
        return std::get<std::vector<Cell>>(shape_);
    }

    [[nodiscard]] bool contains(Cell c) const {
        if (const auto* r = std::get_if<Rect>(&shape_))
            return c.x >= r->x0 && c.x <= r->x1 && c.y >= r->y0 && c.y <= r->y1;
        const auto& v = std::get<std::vector<Cell>>(shape_);
        return std::binary_search(v.begin(), v.end(), c, row_major);
    }

    [[nodiscard]] bool empty() const {
        if (is_rect()) return false;
        return std::get<std::vector<Cell>>(shape_).empty();
    }

    [[nodiscard]] bool within(int width, int height) const {
        if (const auto* r = std::get_if<Rect>(&shape_))
            return r->x0 >= 0 && r->y0 >= 0 && r->x1 < width && r->y1 < height;
        for (const Cell& c : std::get<std::vector<Cell>>(shape_))
            if (c.x < 0 || c.y < 0 || c.x >= width || c.y >= height) return false;
        return true;
    }

    friend bool operator==(const Region& a, const Region& b) { return a.shape_ == b.shape_; }

private:
    static bool row_major(Cell a, Cell b) noexcept { return a.y != b.y ? a.y < b.y : a.x < b.x; }

    std::string id_;
    std::variant<Rect, std::vector<Cell>> shape_{Rect{}};
};

inline constexpr double kBlocked = std::numeric_limits<double>::infinity();
inline constexpr double kCostFloor = -0.5;

constexpr bool is_blocked(double cost) noexcept { return cost == kBlocked; }

class CostLayer {
public:
    CostLayer() = default;
    CostLayer(int width, int height)
        : width_(width), height_(height),
          values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0) {}

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] double at(std::size_t idx) const { return values_[idx]; }
    void set(std::size_t idx, double v) { values_[idx] = v; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    [[nodiscard]] bool all_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }

    friend bool operator==(const CostLayer&, const CostLayer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

enum class CostMode : std::uint8_t { Set, Add };

/// The mutable world representation: immutable base map, current occupancy
/// (base plus dynamic obstacles), additive cost layer and optional goal.
class GridState {
public:
    GridState() = default;
    explicit GridState(OccupancyGrid base, std::optional<Cell> goal = std::nullopt,
                       std::optional<Cell> suggested_start = std::nullopt)
        : base_(std::make_shared<const OccupancyGrid>(base)), occupancy_(std::move(base)),
          costs_(occupancy_.width(), occupancy_.height()), goal_(goal),
          suggested_start_(suggested_start) {}

    [[nodiscard]] int width() const noexcept { return occupancy_.width(); }
    [[nodiscard]] int height() const noexcept { return occupancy_.height(); }
    [[nodiscard]] bool in_bounds(Cell c) const noexcept { return occupancy_.in_bounds(c); }
    [[nodiscard]] std::size_t index(Cell c) const noexcept { return occupancy_.index(c); }

    [[nodiscard]] const OccupancyGrid& base() const { return *base_; }
    [[nodiscard]] const OccupancyGrid& occupancy() const noexcept { return occupancy_; }
    [[nodiscard]] const CostLayer& costs() const noexcept { return costs_; }
    [[nodiscard]] const std::optional<Cell>& goal() const noexcept { return goal_; }
    [[nodiscard]] const std::optional<Cell>& suggested_start() const noexcept {
        return suggested_start_;
    }

    [[nodiscard]] double layer_value(Cell c) const { return costs_.at(index(c)); }

    /// True when the cell is occupied or carries a BLOCKED cost.
    [[nodiscard]] bool blocked(Cell c) const {
        const std::size_t i = index(c);
        return occupancy_.cells()[i] != 0 || is_blocked(costs_.at(i));
    }

    friend bool operator==(const GridState& a, const GridState& b) {
        return *a.base_ == *b.base_ && a.occupancy_ == b.occupancy_ && a.costs_ == b.costs_ &&
               a.goal_ == b.goal_ && a.suggested_start_ == b.suggested_start_;
    }

    // Low-level mutators for the transformations below and for the world
    // simulator; they do not enforce cross-field invariants.
    void set_occupied(Cell c, bool occ) { occupancy_.set(c, occ); }
    void set_layer_value(Cell c, double v) { costs_.set(index(c), v); }
    void clear_costs() { costs_ = CostLayer(width(), height()); }
    void assign_goal(std::optional<Cell> g) { goal_ = g; }
    void restore_base_occupancy() { occupancy_ = *base_; }

private:
    std::shared_ptr<const OccupancyGrid> base_ = std::make_shared<const OccupancyGrid>();
    OccupancyGrid occupancy_;
    CostLayer costs_;
    std::optional<Cell> goal_;
    std::optional<Cell> suggested_start_;
};

/// Parses the map text format: equal-length rows of '.', '#', 'G', 'S'.
inline GridState parse_map(std::string_view text) {
    std::vector<std::string_view> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view row = text.substr(pos, nl - pos);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        rows.push_back(row);
        pos = nl + 1;
    }
    if (rows.empty() || rows.front().empty())
        throw Error(ErrorCode::MalformedMap, "map is empty");

    const int width = static_cast<int>(rows.front().size());
    const int height = static_cast<int>(rows.size());
    OccupancyGrid grid(width, height);
    std::optional<Cell> goal;
    std::optional<Cell> start;
    for (int y = 0; y < height; ++y) {
        const auto row = rows[static_cast<std::size_t>(y)];
        if (static_cast<int>(row.size()) != width)
            throw Error(ErrorCode::MalformedMap, "row length differs from first row",
                        "row " + std::to_string(y));
        for (int x = 0; x < width; ++x) {
            const char ch = row[static_cast<std::size_t>(x)];
            switch (ch) {
            case '.': break;
            case '#': grid.set({x, y}, true); break;
            case 'G':
                if (goal)
                    throw Error(ErrorCode::MalformedMap, "multiple goal cells", to_string(Cell{x, y}));
                goal = Cell{x, y};
                break;
            case 'S':
                if (start)
                    throw Error(ErrorCode::MalformedMap, "multiple start cells", to_string(Cell{x, y}));
                start = Cell{x, y};
                break;
            default:
                throw Error(ErrorCode::MalformedMap, std::string("unknown map character '") + ch + "'",
                            to_string(Cell{x, y}));
            }
        }
    }
    return GridState(std::move(grid), goal, start);
}

/// Renders occupancy back to map text ('#'/'.'), marking goal and suggested start.
inline std::string to_map_text(const GridState& s, bool base_only = false) {
    const OccupancyGrid& g = base_only ? s.base() : s.occupancy();
    std::string out;
    out.reserve(static_cast<std::size_t>((g.width() + 1) * g.height()));
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const Cell c{x, y};
            if (g.occupied(c)) out.push_back('#');
            else if (s.goal() == c) out.push_back('G');
            else if (s.suggested_start() == c) out.push_back('S');
            else out.push_back('.');
        }
        out.push_back('\n');
    }
    return out;
}

inline GridState reset_map(const GridState& state) {
    GridState out = state;
    out.restore_base_occupancy();
    out.clear_costs();
    out.assign_goal(std::nullopt);
    return out;
}

inline void check_region(const GridState& state, const Region& region) {
    if (!region.within(state.width(), state.height()))
        throw Error(ErrorCode::RegionOutOfBounds, "region exceeds grid bounds", region.id());
}

/// Writes `value` into every cell of `region` (set) or adds it, clamping at the
/// floor (add). Cells outside the region are untouched.
inline GridState modify_cost(const GridState& state, const Region& region, double value,
                             CostMode mode = CostMode::Set) {
    if (std::isnan(value)) throw Error(ErrorCode::InvalidArgument, "cost value is NaN");
    if (value == -kBlocked) throw Error(ErrorCode::ValueBelowFloor, "cost value is -infinity");
    if (mode == CostMode::Set && value < kCostFloor)
        throw Error(ErrorCode::ValueBelowFloor,
                    "cost " + std::to_string(value) + " is below the floor -0.5");
    check_region(state, region);
    GridState out = state;
    for (const Cell& c : region.cells()) {
        if (mode == CostMode::Set) {
            out.set_layer_value(c, value);
        } else {
            const double cur = out.layer_value(c);
            out.set_layer_value(c, std::max(kCostFloor, cur + value));
        }
    }
    return out;
}

inline GridState set_goal(const GridState& state, Cell cell) {
    if (!state.in_bounds(cell))
        throw Error(ErrorCode::OutOfBounds, "goal outside grid", to_string(cell));
    if (state.blocked(cell))
        throw Error(ErrorCode::GoalOccupied, "goal cell is occupied or blocked", to_string(cell));
    GridState out = state;
    out.assign_goal(cell);
    return out;
}

/// Layer value of a cell, or BLOCKED when the cell is occupied.
inline double traversal_cost(const GridState& state, Cell cell) {
    if (!state.in_bounds(cell))
        throw Error(ErrorCode::OutOfBounds, "cell outside grid", to_string(cell));
    if (state.occupancy().occupied(cell)) return kBlocked;
    return state.layer_value(cell);
}

} // namespace gridpilot
