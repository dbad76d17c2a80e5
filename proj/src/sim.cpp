#include "taunav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace taunav {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Derivative {
    double dx, dy, dtheta;
};

Derivative flow(double theta, double u, double v) {
    return {v * std::cos(theta), v * std::sin(theta), u};
}

long long steps_on_grid(double interval, double dt) {
    return std::llround(interval / dt);
}

bool divides(double interval, double dt) {
    const long long n = steps_on_grid(interval, dt);
    return n > 0 && std::abs(n * dt - interval) < 1e-9;
}

}  // namespace

Pose rk4_step(const Pose& state, double u, double v, double dt) {
    const Derivative k1 = flow(state.theta, u, v);
    const Derivative k2 = flow(state.theta + 0.5 * dt * k1.dtheta, u, v);
    const Derivative k3 = flow(state.theta + 0.5 * dt * k2.dtheta, u, v);
    const Derivative k4 = flow(state.theta + dt * k3.dtheta, u, v);
    Pose next;
    next.x = state.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    next.y = state.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    next.theta =
        wrap_angle(state.theta + dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta +
                                             k4.dtheta));
    return next;
}

std::string validate(const SimConfig& config) {
    if (config.dt <= 0.0) return "sim.dt must be positive";
    if (config.horizon <= 0.0) return "sim.T must be positive";
    if (config.v <= 0.0) return "sim.v must be positive";
    if (config.law.gain <= 0.0) return "law.k must be positive";
    if (config.camera.focal_length <= 0.0) return "camera.f must be positive";
    if (config.camera.receptor_left <= 0.0 || config.camera.receptor_right <= 0.0)
        return "receptors must be positive";
    if (config.camera.max_image_coord <
        std::max(config.camera.receptor_left, config.camera.receptor_right))
        return "camera.rmax must cover both receptors";
    if (config.world.half_width <= 0.0) return "world.R must be positive";
    if (config.controller == ControllerKind::Sampled) {
        if (config.sampled.h <= 0.0) return "sampled.h must be positive";
        if (!divides(config.sampled.h, config.dt))
            return "sampled.h must be an integer multiple of sim.dt";
        if (config.dt > config.sampled.h / 10.0 + 1e-12)
            return "sim.dt must be at most sampled.h/10";
    }
    if (config.controller == ControllerKind::Spa) {
        if (config.spa.h <= 0.0) return "spa.h must be positive";
        if (config.spa.straight_fraction <= 0.0 || config.spa.straight_fraction >= 1.0)
            return "spa.straight_fraction must lie in (0, 1)";
        if (!divides(config.spa.h, config.dt))
            return "spa.h must be an integer multiple of sim.dt";
        if (config.dt > config.spa.h / 10.0 + 1e-12)
            return "sim.dt must be at most spa.h/10";
    }
    return {};
}

TrajectoryRecord run(const SimConfig& config) {
    TrajectoryRecord record;
    const long long n_steps = steps_on_grid(config.horizon, config.dt);
    record.rows.reserve(static_cast<std::size_t>(n_steps) + 1);

    Pose state = config.initial;
    state.theta = wrap_angle(state.theta);

    // SPA machinery (unused for the other controllers).
    FeatureField field;
    TrackSet tracks;
    std::mt19937_64 noise_rng(config.seed);
    std::set<int> visible;
    const bool spa = config.controller == ControllerKind::Spa;
    if (spa) {
        auto generated = generate_features(config.world, config.field);
        if (!generated) {
            record.aborted = true;
            record.abort_reason = generated.error();
            return record;
        }
        field = std::move(generated.value());
    }
    const long long hold_steps = config.controller == ControllerKind::Sampled
                                     ? steps_on_grid(config.sampled.h, config.dt)
                                     : 0;
    const long long spa_steps = spa ? steps_on_grid(config.spa.h, config.dt) : 0;
    const long long straight_steps =
        spa ? std::max<long long>(
                  2, std::llround(config.spa.straight_fraction * config.spa.h / config.dt))
            : 0;

    double held_u = 0.0;
    double held_tau_l = kNan;
    double held_tau_r = kNan;
    double interval_start = 0.0;

    for (long long i = 0; i <= n_steps; ++i) {
        const double t = i * config.dt;
        double u = held_u;
        double tau_l = held_tau_l;
        double tau_r = held_tau_r;
        TauKind kind = TauKind::Geometric;
        SegmentKind segment = SegmentKind::Continuous;

        switch (config.controller) {
            case ControllerKind::ContinuousBalance:
            case ControllerKind::ContinuousWeighted: {
                const auto taus =
                    tau_pair_eulerian(state, config.camera, config.world, config.v);
                if (!taus) {
                    record.aborted = true;
                    record.abort_reason = taus.error();
                    record.abort_time = t;
                    return record;
                }
                tau_l = taus->left.value;
                tau_r = taus->right.value;
                u = config.controller == ControllerKind::ContinuousWeighted
                        ? steering_weighted(tau_l, tau_r, config.law.gain,
                                            config.camera.receptor_left,
                                            config.camera.receptor_right)
                        : steering_balance(tau_l, tau_r, config.law.gain);
                if (config.law.u_max) u = std::clamp(u, -*config.law.u_max, *config.law.u_max);
                break;
            }
            case ControllerKind::Sampled: {
                segment = SegmentKind::Hold;
                if (i % hold_steps == 0) {
                    const auto taus =
                        tau_pair_eulerian(state, config.camera, config.world, config.v);
                    if (!taus) {
                        record.aborted = true;
                        record.abort_reason = taus.error();
                        record.abort_time = t;
                        return record;
                    }
                    tau_l = taus->left.value;
                    tau_r = taus->right.value;
                    u = steering_balance(tau_l, tau_r, config.law.gain);
                    if (config.law.u_max)
                        u = std::clamp(u, -*config.law.u_max, *config.law.u_max);
                }
                break;
            }
            case ControllerKind::Spa: {
                if (std::abs(state.x) >= config.world.half_width) {
                    record.aborted = true;
                    record.abort_reason = Error::OutsideAdmissibleRegion;
                    record.abort_time = t;
                    return record;
                }
                const long long phase = i % spa_steps;
                if (phase == 0) interval_start = t;
                const bool sensing = phase < straight_steps;
                segment = sensing ? SegmentKind::Sense : SegmentKind::Act;
                kind = TauKind::FiniteDifference;
                if (sensing) {
                    u = 0.0;
                    tau_l = kNan;
                    tau_r = kNan;
                }
                // Observe every step; only straight-segment samples feed tau.
                const FlowFrame frame = observe(state, config.camera, field, t,
                                                config.noise_sigma, &noise_rng);
                std::set<int> now;
                for (const Observation& obs : frame.observations) now.insert(obs.feature_id);
                for (int id : now)
                    if (!visible.contains(id)) record.events.push_back({t, id, EventKind::Enter});
                for (int id : visible)
                    if (!now.contains(id)) record.events.push_back({t, id, EventKind::Exit});
                visible = std::move(now);
                tracks.update(frame, field, state, config.camera, sensing);
                if (phase == straight_steps - 1) {
                    // End of the sense sub-segment: fix the turn rate for the
                    // upcoming act sub-segment.
                    const auto estimates = estimate_taus(tracks, interval_start);
                    const auto decision = segment_steering_decision(
                        estimates, config.camera, config.law.gain, config.aggregation);
                    if (decision) {
                        held_u = decision->u;
                        held_tau_l = decision->tau_left;
                        held_tau_r = decision->tau_right;
                    } else {
                        // Wall starved: stay straight for this act segment.
                        held_u = 0.0;
                        held_tau_l = kNan;
                        held_tau_r = kNan;
                    }
                }
                break;
            }
        }
        if (config.controller != ControllerKind::Spa) {
            held_u = u;
            held_tau_l = tau_l;
            held_tau_r = tau_r;
        } else if (segment == SegmentKind::Act) {
            u = held_u;
            tau_l = held_tau_l;
            tau_r = held_tau_r;
        }

        record.rows.push_back({t, state.x, state.y, state.theta, u, tau_l, tau_r, kind, segment});
        if (i < n_steps) state = rk4_step(state, u, config.v, config.dt);
    }
    return record;
}

ConvergenceMetrics convergence_metrics(const TrajectoryRecord& record, double x_target,
                                       double theta_target) {
    ConvergenceMetrics m{0.0, 0.0, -1.0};
    if (record.rows.empty()) return m;
    const TrajectoryRow& last = record.rows.back();
    m.final_err_x = std::abs(last.x - x_target);
    m.final_err_theta = std::abs(wrap_angle(last.theta - theta_target));
    constexpr double kBand = 1e-2;
    // First entry into the band after which the trajectory never leaves it.
    double settle = -1.0;
    for (const TrajectoryRow& row : record.rows) {
        const bool inside = std::abs(row.x - x_target) < kBand &&
                            std::abs(wrap_angle(row.theta - theta_target)) < kBand;
        if (inside && settle < 0.0) settle = row.t;
        if (!inside) settle = -1.0;
    }
    m.settling_time = settle;
    return m;
}

}  // namespace taunav
