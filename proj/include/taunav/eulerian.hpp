#pragma once

#include <optional>
#include <utility>

#include "taunav/tau.hpp"

namespace taunav {

// Instantaneous tau-balance steering. Features are sensed at the two
// fixed receptors (-delta, +epsilon), their times-to-transit read off,
// and the readings discarded; nothing is tracked between instants.

struct SteeringLawConfig {
    double gain = 0.5;       // k > 0
    bool weighted = false;   // k(delta*tau_l - eps*tau_r) instead of k(tau_l - tau_r)
    std::optional<double> u_max;  // optional actuator saturation
};

struct TauPair {
    TauReading left;
    TauReading right;
};

/// Geometric tau of the features currently imaged at the two receptors.
Result<TauPair> tau_pair_eulerian(const Pose& pose, const CameraModel& cam,
                                  const CorridorWorld& world, double v);

double steering_balance(double tau_left, double tau_right, double k);

double steering_weighted(double tau_left, double tau_right, double k, double delta, double eps);

/// Turn rate for the configured law at the given pose, with the
/// admissible-region guard applied.
Result<double> steering_command(const Pose& pose, const CameraModel& cam,
                                const CorridorWorld& world, double v,
                                const SteeringLawConfig& law);

/// Closed-form asymptotic limit (x_inf, theta_inf) for the configured law.
std::pair<double, double> predicted_limits(const CorridorWorld& world, const CameraModel& cam,
                                           const SteeringLawConfig& law);

}  // namespace taunav
