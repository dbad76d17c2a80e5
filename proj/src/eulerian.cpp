#include "taunav/eulerian.hpp"

#include <algorithm>

namespace taunav {

Result<TauPair> tau_pair_eulerian(const Pose& pose, const CameraModel& cam,
                                  const CorridorWorld& world, double v) {
    if (!in_admissible_region(pose, cam, world)) return Error::OutsideAdmissibleRegion;
    const auto left = inverse_project_left(pose, cam, world);
    if (!left) return left.error();
    const auto right = inverse_project_right(pose, cam, world);
    if (!right) return right.error();
    const auto tau_l = geometric_tau(pose, v, *left);
    if (!tau_l) return tau_l.error();
    const auto tau_r = geometric_tau(pose, v, *right);
    if (!tau_r) return tau_r.error();
    return TauPair{*tau_l, *tau_r};
}

double steering_balance(double tau_left, double tau_right, double k) {
    return k * (tau_left - tau_right);
}

double steering_weighted(double tau_left, double tau_right, double k, double delta, double eps) {
    return k * (delta * tau_left - eps * tau_right);
}

Result<double> steering_command(const Pose& pose, const CameraModel& cam,
                                const CorridorWorld& world, double v,
                                const SteeringLawConfig& law) {
    const auto taus = tau_pair_eulerian(pose, cam, world, v);
    if (!taus) return taus.error();
    double u = law.weighted
                   ? steering_weighted(taus->left.value, taus->right.value, law.gain,
                                       cam.receptor_left, cam.receptor_right)
                   : steering_balance(taus->left.value, taus->right.value, law.gain);
    if (law.u_max) u = std::clamp(u, -*law.u_max, *law.u_max);
    return u;
}

std::pair<double, double> predicted_limits(const CorridorWorld& world, const CameraModel& cam,
                                           const SteeringLawConfig& law) {
    const double delta = cam.receptor_left;
    const double eps = cam.receptor_right;
    const double x_inf = law.weighted ? (eps - delta) / 2.0
                                      : world.half_width * (delta - eps) / (delta + eps);
    return {x_inf, std::numbers::pi / 2.0};
}

}  // namespace taunav
