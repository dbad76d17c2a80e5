#include "taunav/geometry.hpp"

namespace taunav {

std::string to_string(Error e) {
    switch (e) {
        case Error::None: return "none";
        case Error::BehindPinhole: return "behind_pinhole";
        case Error::OutOfFov: return "out_of_fov";
        case Error::Singular: return "singular";
        case Error::ZeroSpeed: return "zero_speed";
        case Error::UndefinedAtFoE: return "undefined_at_foe";
        case Error::StationaryImage: return "stationary_image";
        case Error::OutsideAdmissibleRegion: return "outside_admissible_region";
        case Error::DomainEscape: return "domain_escape";
        case Error::EmptyField: return "empty_field";
        case Error::WallStarvedLeft: return "wall_starved_left";
        case Error::WallStarvedRight: return "wall_starved_right";
    }
    return "unknown";
}

BodyFrameCoords to_body_frame(const Pose& pose, const FeaturePoint& feat) {
    const double dx = feat.xf - pose.x;
    const double dy = feat.yf - pose.y;
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    return {c * dx + s * dy, -s * dx + c * dy};
}

Result<double> project(const CameraModel& cam, const BodyFrameCoords& bc) {
    const double depth = bc.d_fwd - cam.focal_length;
    if (depth < kSingularTol) return Error::BehindPinhole;
    const double s = -cam.focal_length * bc.d_lat / depth;
    if (std::abs(s) > cam.max_image_coord) return Error::OutOfFov;
    return s;
}

Result<double> image_velocity(const CameraModel& cam, const BodyFrameCoords& bc, double v,
                              double u) {
    // d/dt of project() under d_fwd' = u*d_lat - v, d_lat' = -u*d_fwd.
    const double f = cam.focal_length;
    const double depth = bc.d_fwd - f;
    if (depth < kSingularTol) return Error::BehindPinhole;
    const double num = u * (bc.d_fwd * bc.d_fwd - f * bc.d_fwd + bc.d_lat * bc.d_lat) -
                       v * bc.d_lat;
    return f * num / (depth * depth);
}

Result<FeaturePoint> inverse_project_left(const Pose& pose, const CameraModel& cam,
                                          const CorridorWorld& world) {
    const double f = cam.focal_length;
    const double delta = cam.receptor_left;
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    const double den = delta * s - f * c;
    if (std::abs(den) < kSingularTol) return Error::Singular;
    const double R = world.half_width;
    const double yl = pose.y + f * s + (R + pose.x + f * c) * (delta * c + f * s) / den;
    // No ahead-of-pinhole guard: the closed form is the analytic
    // continuation the steering laws use throughout the admissible cone.
    return FeaturePoint{-R, yl, WallSide::Left};
}

Result<FeaturePoint> inverse_project_right(const Pose& pose, const CameraModel& cam,
                                           const CorridorWorld& world) {
    const double f = cam.focal_length;
    const double eps = cam.receptor_right;
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    const double den = f * c + eps * s;
    if (std::abs(den) < kSingularTol) return Error::Singular;
    const double R = world.half_width;
    const double yr = pose.y + f * s + (R - pose.x - f * c) * (f * s - eps * c) / den;
    return FeaturePoint{R, yr, WallSide::Right};
}

bool in_admissible_region(const Pose& pose, const CameraModel& cam, const CorridorWorld& world) {
    if (std::abs(pose.x) >= world.half_width) return false;
    const double cone = std::numbers::pi / 2.0 - cam.half_angle() - kAdmissibleMargin;
    return std::abs(wrap_angle(pose.theta - std::numbers::pi / 2.0)) < cone;
}

}  // namespace taunav
