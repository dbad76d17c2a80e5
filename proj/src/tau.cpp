#include "taunav/tau.hpp"

namespace taunav {

Result<TauReading> geometric_tau(const Pose& pose, double v, const FeaturePoint& feat) {
    if (v <= 0.0) return Error::ZeroSpeed;
    const BodyFrameCoords bc = to_body_frame(pose, feat);
    return TauReading{bc.d_fwd / v, TauKind::Geometric};
}

Result<TauReading> perceived_tau(const CameraModel& cam, const Pose& pose, double v, double u,
                                 const FeaturePoint& feat) {
    const BodyFrameCoords bc = to_body_frame(pose, feat);
    const auto s = project(cam, bc);
    if (!s) return s.error();
    const auto sdot = image_velocity(cam, bc, v, u);
    if (!sdot) return sdot.error();
    if (std::abs(*sdot) < kSingularTol) {
        return std::abs(*s) < kSingularTol ? Error::UndefinedAtFoE : Error::StationaryImage;
    }
    return TauReading{*s / *sdot, TauKind::Perceived};
}

Result<ImagePositionPartials> image_position_partials(const CameraModel& cam, const Pose& pose,
                                                      const FeaturePoint& feat) {
    const double f = cam.focal_length;
    const BodyFrameCoords bc = to_body_frame(pose, feat);
    const double depth = bc.d_fwd - f;
    if (depth < kSingularTol) return Error::BehindPinhole;
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    // s(x, y) = -f*d_lat/(d_fwd - f) with d(d_fwd)/dx = -cos, d(d_lat)/dx = sin,
    // d(d_fwd)/dy = -sin, d(d_lat)/dy = -cos.
    const double inv2 = 1.0 / (depth * depth);
    return ImagePositionPartials{
        -f * (s * depth + bc.d_lat * c) * inv2,
        -f * (-c * depth + bc.d_lat * s) * inv2,
    };
}

Result<TauReading> quasilinear_tau_star(const CameraModel& cam, const Pose& pose, double v,
                                        const FeaturePoint& feat) {
    const BodyFrameCoords bc = to_body_frame(pose, feat);
    const auto s = project(cam, bc);
    if (!s) return s.error();
    if (std::abs(bc.d_lat) < kSingularTol) return Error::UndefinedAtFoE;
    const auto partials = image_position_partials(cam, pose, feat);
    if (!partials) return partials.error();
    const double sdot_trans =
        partials->ds_dx * v * std::cos(pose.theta) + partials->ds_dy * v * std::sin(pose.theta);
    return TauReading{*s / sdot_trans, TauKind::QuasiLinear};
}

Result<TauReading> finite_difference_tau(double s_prev, double s_curr, double dt) {
    if (dt <= 0.0) return Error::Singular;
    const double ds = s_curr - s_prev;
    if (std::abs(ds) < kSingularTol) return Error::StationaryImage;
    return TauReading{s_curr * dt / ds, TauKind::FiniteDifference};
}

}  // namespace taunav
