#pragma once

#include "taunav/geometry.hpp"

namespace taunav {

// The four notions of time-to-transit.
//
// Geometric tau is ground truth: the time to cross the line through the
// feature perpendicular to the current heading, at the current speed.
// Perceived tau is what the image plane offers (s / sdot) and equals a
// transit time only while speed and heading are constant; it measures
// transit of the pinhole point (f, 0), hence a constant -f/v offset
// against geometric tau on straight segments. The offset cancels in
// every differencing steering law. Quasi-linear tau* keeps only the
// translational part of the image velocity and recovers the same
// (d_fwd - f)/v value regardless of turn rate.

Result<TauReading> geometric_tau(const Pose& pose, double v, const FeaturePoint& feat);

Result<TauReading> perceived_tau(const CameraModel& cam, const Pose& pose, double v, double u,
                                 const FeaturePoint& feat);

Result<TauReading> quasilinear_tau_star(const CameraModel& cam, const Pose& pose, double v,
                                        const FeaturePoint& feat);

/// Backward-difference estimate from two consecutive image samples.
Result<TauReading> finite_difference_tau(double s_prev, double s_curr, double dt);

/// Partial derivatives of the image coordinate with respect to the
/// vehicle's world position, heading frozen. Exposed for the
/// finite-difference verification of tau*.
struct ImagePositionPartials {
    double ds_dx;
    double ds_dy;
};
Result<ImagePositionPartials> image_position_partials(const CameraModel& cam, const Pose& pose,
                                                      const FeaturePoint& feat);

}  // namespace taunav
