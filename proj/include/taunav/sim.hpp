#pragma once

#include <string>
#include <vector>

#include "taunav/eulerian.hpp"
#include "taunav/lagrangian.hpp"
#include "taunav/sampled.hpp"

namespace taunav {

// Closed-loop integration of the unicycle kinematics
//   xdot = v cos(theta), ydot = v sin(theta), thetadot = u
// under any of the steering laws. Fixed-step RK4; hold intervals must be
// integer multiples of the step so sample instants land exactly on the
// grid, which keeps every run bit-reproducible.

enum class ControllerKind : std::uint8_t {
    ContinuousBalance,
    ContinuousWeighted,
    Sampled,
    Spa,
};

struct SimConfig {
    double dt = 1e-3;
    double horizon = 50.0;  // T
    double v = 1.0;
    ControllerKind controller = ControllerKind::ContinuousBalance;
    CorridorWorld world;
    CameraModel camera;
    SteeringLawConfig law;
    SampledConfig sampled;       // used when controller == Sampled
    SpaSchedule spa;             // used when controller == Spa
    FeatureFieldConfig field;    // used when controller == Spa
    double noise_sigma = 0.0;    // image noise for SPA observations
    Aggregation aggregation = Aggregation::NearestReceptor;
    Pose initial{0.0, 0.0, std::numbers::pi / 2.0};
    std::uint64_t seed = 0;
};

enum class SegmentKind : std::uint8_t { Continuous, Hold, Sense, Act };

struct TrajectoryRow {
    double t;
    double x;
    double y;
    double theta;
    double u;
    double tau_left;   // NaN when no reading was available this step
    double tau_right;
    TauKind tau_kind;
    SegmentKind segment;
};

enum class EventKind : std::uint8_t { Enter, Exit };

struct FeatureEvent {
    double t;
    int feature_id;
    EventKind kind;
};

struct TrajectoryRecord {
    std::vector<TrajectoryRow> rows;
    std::vector<FeatureEvent> events;
    bool aborted = false;
    Error abort_reason = Error::None;
    double abort_time = 0.0;

    const TrajectoryRow& back() const { return rows.back(); }
};

/// One RK4 step of the unicycle with u, v held over the step.
Pose rk4_step(const Pose& state, double u, double v, double dt);

/// Validates cross-field constraints (positive steps, hold intervals on
/// the dt grid, receptor bounds). Returns an explanation on failure.
std::string validate(const SimConfig& config);

TrajectoryRecord run(const SimConfig& config);

struct ConvergenceMetrics {
    double final_err_x;
    double final_err_theta;
    double settling_time;  // first entry into the 1e-2 band that is never left; -1 if none
};

ConvergenceMetrics convergence_metrics(const TrajectoryRecord& record, double x_target,
                                       double theta_target);

}  // namespace taunav
