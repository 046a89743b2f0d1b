#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridpilot {

enum class ErrorCode {
    MalformedMap,
    OutOfBounds,
    RegionOutOfBounds,
    InvalidRegion,
    ValueBelowFloor,
    GoalOccupied,
    UnknownLandmark,
    UnsupportedConstraint,
    NoTaskFound,
    SchemaViolation,
    BackendUnavailable,
    UnknownStrategy,
    NoPath,
    NoGoalSet,
    StartBlocked,
    BlockedCellOnPath,
    InvalidPath,
    ScenarioParse,
    InvalidEventTime,
    LandmarkOverlapsStart,
    IllegalMove,
    UnknownPedestrian,
    EmptyConfig,
    InvalidArgument,
    FileNotFound,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedMap: return "MalformedMap";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::InvalidRegion: return "InvalidRegion";
    case ErrorCode::ValueBelowFloor: return "ValueBelowFloor";
    case ErrorCode::GoalOccupied: return "GoalOccupied";
    case ErrorCode::UnknownLandmark: return "UnknownLandmark";
    case ErrorCode::UnsupportedConstraint: return "UnsupportedConstraint";
    case ErrorCode::NoTaskFound: return "NoTaskFound";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::UnknownStrategy: return "UnknownStrategy";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::NoGoalSet: return "NoGoalSet";
    case ErrorCode::StartBlocked: return "StartBlocked";
    case ErrorCode::BlockedCellOnPath: return "BlockedCellOnPath";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::ScenarioParse: return "ScenarioParse";
    case ErrorCode::InvalidEventTime: return "InvalidEventTime";
    case ErrorCode::LandmarkOverlapsStart: return "LandmarkOverlapsStart";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::UnknownPedestrian: return "UnknownPedestrian";
    case ErrorCode::EmptyConfig: return "EmptyConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FileNotFound: return "FileNotFound";
    }
    return "Unknown";
}

/// Domain error carrying a machine-readable code plus an optional detail
/// string (offending phrase, JSON path, line number, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), message_(message), detail_(std::move(detail)) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string message_;
    std::string detail_;
};

} // namespace gridpilot
