#pragma once

#include "taunav/types.hpp"

namespace taunav {

// Coordinate transforms and the 1-D pinhole camera.
//
// The pinhole sits at body point (f, 0) and the image plane is the body
// y-axis through the vehicle origin. A feature at body coordinates
// (d_fwd, d_lat) with d_fwd > f projects to image coordinate
//   s = -f * d_lat / (d_fwd - f),
// so left-wall features land at negative s and right-wall features at
// positive s.

/// World feature -> body frame (body x = direction of travel,
/// body y = vehicle-left).
BodyFrameCoords to_body_frame(const Pose& pose, const FeaturePoint& feat);

Result<double> project(const CameraModel& cam, const BodyFrameCoords& bc);

/// Image-plane velocity of a fixed world feature under unicycle motion
/// (forward speed v, turn rate u), evaluated at body coordinates bc.
Result<double> image_velocity(const CameraModel& cam, const BodyFrameCoords& bc, double v,
                              double u);

/// Feature point on the left wall (x = -R) whose image falls exactly on
/// the left receptor -delta.
Result<FeaturePoint> inverse_project_left(const Pose& pose, const CameraModel& cam,
                                          const CorridorWorld& world);

/// Right-wall counterpart; image falls on the right receptor +epsilon.
Result<FeaturePoint> inverse_project_right(const Pose& pose, const CameraModel& cam,
                                           const CorridorWorld& world);

/// True iff the pose is inside the region where the steering laws are
/// defined: |x| < R and half_angle < theta < pi - half_angle, shrunk by
/// kAdmissibleMargin on the heading cone.
bool in_admissible_region(const Pose& pose, const CameraModel& cam, const CorridorWorld& world);

}  // namespace taunav
