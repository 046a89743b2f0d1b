#pragma once

#include "gridpilot/gridcore.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridpilot {

enum class LandmarkKind : std::uint8_t { Shelf, Storage, Repair, Lane, PedestrianZone, Custom };

constexpr std::string_view to_string(LandmarkKind k) noexcept {
    switch (k) {
    case LandmarkKind::Shelf: return "shelf";
    case LandmarkKind::Storage: return "storage";
    case LandmarkKind::Repair: return "repair";
    case LandmarkKind::Lane: return "lane";
    case LandmarkKind::PedestrianZone: return "pedestrian_zone";
    case LandmarkKind::Custom: return "custom";
    }
    return "custom";
}

inline std::optional<LandmarkKind> parse_landmark_kind(std::string_view s) noexcept {
    if (s == "shelf") return LandmarkKind::Shelf;
    if (s == "storage") return LandmarkKind::Storage;
    if (s == "repair") return LandmarkKind::Repair;
    if (s == "lane") return LandmarkKind::Lane;
    if (s == "pedestrian_zone") return LandmarkKind::PedestrianZone;
    if (s == "custom") return LandmarkKind::Custom;
    return std::nullopt;
}

struct Landmark {
    std::string name;
    Region region;
    std::optional<Cell> access;
    LandmarkKind kind = LandmarkKind::Custom;

    friend bool operator==(const Landmark&, const Landmark&) = default;
};

/// Named semantic landmarks, ordered by name.
class LandmarkRegistry {
public:
    /// Adds or replaces a landmark.
    void put(Landmark lm) {
        std::string key = lm.name;
        entries_.insert_or_assign(std::move(key), std::move(lm));
    }

    [[nodiscard]] const Landmark* find(std::string_view name) const {
        auto it = entries_.find(std::string(name));
        return it == entries_.end() ? nullptr : &it->second;
    }

    [[nodiscard]] const Landmark& at(std::string_view name) const {
        if (const auto* lm = find(name)) return *lm;
        throw Error(ErrorCode::UnknownLandmark, "no landmark named '" + std::string(name) + "'",
                    std::string(name));
    }

    [[nodiscard]] bool contains(std::string_view name) const { return find(name) != nullptr; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    [[nodiscard]] std::vector<const Landmark*> of_kind(LandmarkKind k) const {
        std::vector<const Landmark*> out;
        for (const auto& [_, lm] : entries_)
            if (lm.kind == k) out.push_back(&lm);
        return out;
    }

    [[nodiscard]] const std::map<std::string, Landmark>& entries() const noexcept {
        return entries_;
    }

    friend bool operator==(const LandmarkRegistry&, const LandmarkRegistry&) = default;

private:
    std::map<std::string, Landmark> entries_;
};

/// Goal cell for a landmark: its declared access cell, otherwise the free
/// cell in or 4-adjacent to the region closest to the region centroid
/// (ties broken by row, then column).
inline Cell landmark_access_cell(const Landmark& lm, const GridState& state) {
    if (lm.access) return *lm.access;
    const auto cells = lm.region.cells();
    if (cells.empty())
        throw Error(ErrorCode::InvalidRegion, "landmark region is empty", lm.name);
    double cx = 0.0;
    double cy = 0.0;
    for (const Cell& c : cells) {
        cx += c.x;
        cy += c.y;
    }
    cx /= static_cast<double>(cells.size());
    cy /= static_cast<double>(cells.size());

    std::optional<Cell> best;
    double best_d = 0.0;
    auto consider = [&](Cell c) {
        if (!state.in_bounds(c) || state.blocked(c)) return;
        const double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
        if (!best || d < best_d || (d == best_d && std::pair(c.y, c.x) < std::pair(best->y, best->x))) {
            best = c;
            best_d = d;
        }
    };
    for (const Cell& c : cells) {
        consider(c);
        for (Direction d : kExpansionOrder) consider(neighbor(c, d));
    }
    if (!best)
        throw Error(ErrorCode::GoalOccupied, "landmark has no free access cell", lm.name);
    return *best;
}

} // namespace gridpilot
