#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

namespace taunav {

inline constexpr double kSingularTol = 1e-9;
inline constexpr double kAdmissibleMargin = 0.02;

enum class Error : std::uint8_t {
    None = 0,
    BehindPinhole,
    OutOfFov,
    Singular,
    ZeroSpeed,
    UndefinedAtFoE,
    StationaryImage,
    OutsideAdmissibleRegion,
    DomainEscape,
    EmptyField,
    WallStarvedLeft,
    WallStarvedRight,
};

std::string to_string(Error e);

/// Value-or-error carrier used by every fallible geometric operation.
/// Operations never return NaN; near-singular denominators map to Error.
template <typename T>
class Result {
  public:
    Result(T v) : value_(std::move(v)), error_(Error::None) {}
    Result(Error e) : error_(e) {}

    bool ok() const { return error_ == Error::None; }
    explicit operator bool() const { return ok(); }
    Error error() const { return error_; }
    const T& value() const { return *value_; }
    T& value() { return *value_; }
    const T& operator*() const { return *value_; }
    const T* operator->() const { return &*value_; }

  private:
    std::optional<T> value_;
    Error error_;
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

struct Pose {
    double x = 0.0;      // corridor lateral position
    double y = 0.0;      // along-corridor position
    double theta = 0.0;  // heading, world frame, (-pi, pi]
};

struct CorridorWorld {
    double half_width = 1.0;  // walls at x = +-half_width
};

struct CameraModel {
    double focal_length = 1.0;
    double receptor_left = 1.0;   // delta; receptor sits at image -delta
    double receptor_right = 1.0;  // epsilon; receptor sits at image +epsilon
    double max_image_coord = 10.0;

    /// Camera half-angle (the admissible heading cone is
    /// half_angle < theta < pi - half_angle).
    double half_angle() const { return std::atan(focal_length); }
};

enum class WallSide : std::uint8_t { Left, Right, Free };

struct FeaturePoint {
    double xf = 0.0;
    double yf = 0.0;
    WallSide wall_side = WallSide::Free;
};

struct BodyFrameCoords {
    double d_fwd = 0.0;  // along body x-axis (direction of travel)
    double d_lat = 0.0;  // body y-axis, positive = vehicle-left
};

enum class TauKind : std::uint8_t { Geometric, Perceived, QuasiLinear, FiniteDifference };

struct TauReading {
    double value = 0.0;  // seconds; negative for features already passed
    TauKind kind = TauKind::Geometric;
    int feature_id = -1;
};

}  // namespace taunav
