#include "taunav/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace taunav {

Result<FeatureField> generate_features(const CorridorWorld& world,
                                       const FeatureFieldConfig& config) {
    if (config.density <= 0.0 || config.extent_max <= config.extent_min) {
        return Error::EmptyField;
    }
    const double length = config.extent_max - config.extent_min;
    if (length * config.density < 1.0) return Error::EmptyField;

    FeatureField field;
    const double R = world.half_width;
    if (config.placement == Placement::UniformGrid) {
        const double spacing = 1.0 / config.density;
        const int count = static_cast<int>(std::floor(length * config.density));
        for (WallSide side : {WallSide::Left, WallSide::Right}) {
            const double wall_x = side == WallSide::Left ? -R : R;
            for (int i = 0; i < count; ++i) {
                field.features.push_back(
                    {wall_x, config.extent_min + (i + 0.5) * spacing, side});
            }
        }
    } else {
        std::mt19937_64 rng(config.seed);
        std::exponential_distribution<double> gap(config.density);
        for (WallSide side : {WallSide::Left, WallSide::Right}) {
            const double wall_x = side == WallSide::Left ? -R : R;
            double y = config.extent_min + gap(rng);
            while (y < config.extent_max) {
                field.features.push_back({wall_x, y, side});
                y += gap(rng);
            }
        }
    }
    if (field.features.empty()) return Error::EmptyField;
    return field;
}

void save_features(std::ostream& os, const FeatureField& field) {
    for (std::size_t i = 0; i < field.features.size(); ++i) {
        const auto& f = field.features[i];
        os << i << ' ' << (f.wall_side == WallSide::Left ? "left" : "right") << ' ';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", f.yf);
        os << buf << '\n';
    }
}

Result<FeatureField> load_features(std::istream& is, const CorridorWorld& world) {
    FeatureField field;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int id;
        std::string side;
        double y;
        if (!(ss >> id >> side >> y)) return Error::EmptyField;
        const WallSide ws = side == "left" ? WallSide::Left : WallSide::Right;
        const double wall_x =
            ws == WallSide::Left ? -world.half_width : world.half_width;
        field.features.push_back({wall_x, y, ws});
    }
    if (field.features.empty()) return Error::EmptyField;
    return field;
}

FlowFrame observe(const Pose& pose, const CameraModel& cam, const FeatureField& field, double t,
                  double noise_sigma, std::mt19937_64* rng) {
    FlowFrame frame;
    frame.t = t;
    std::normal_distribution<double> noise(0.0, noise_sigma);
    const double c = std::cos(pose.theta);
    const double sn = std::sin(pose.theta);
    const double f = cam.focal_length;
    for (std::size_t i = 0; i < field.features.size(); ++i) {
        const double dx = field.features[i].xf - pose.x;
        const double dy = field.features[i].yf - pose.y;
        const double d_fwd = c * dx + sn * dy;
        const double depth = d_fwd - f;
        if (depth < kSingularTol) continue;
        const double s = -f * (-sn * dx + c * dy) / depth;
        if (std::abs(s) > cam.max_image_coord) continue;
        double value = s;
        if (noise_sigma > 0.0 && rng != nullptr) value += noise(*rng);
        frame.observations.push_back({static_cast<int>(i), value});
    }
    return frame;
}

void TrackSet::update(const FlowFrame& frame, const FeatureField& field, const Pose& pose,
                      const CameraModel& cam, bool straight) {
    // Close live tracks for features no longer observed.
    for (auto it = live_by_feature_.begin(); it != live_by_feature_.end();) {
        const bool seen = std::any_of(frame.observations.begin(), frame.observations.end(),
                                      [&](const Observation& o) { return o.feature_id == it->first; });
        if (!seen) {
            FeatureTrack& track = tracks_[it->second];
            const auto bc =
                to_body_frame(pose, field.features[static_cast<std::size_t>(it->first)]);
            track.status =
                bc.d_fwd <= cam.focal_length ? TrackStatus::Behind : TrackStatus::ExitedFov;
            it = live_by_feature_.erase(it);
        } else {
            ++it;
        }
    }
    for (const Observation& obs : frame.observations) {
        auto it = live_by_feature_.find(obs.feature_id);
        if (it == live_by_feature_.end()) {
            FeatureTrack track;
            track.track_id = next_track_id_++;
            track.feature_id = obs.feature_id;
            track.wall_side = field.features[static_cast<std::size_t>(obs.feature_id)].wall_side;
            tracks_.push_back(std::move(track));
            it = live_by_feature_.emplace(obs.feature_id, tracks_.size() - 1).first;
        }
        tracks_[it->second].samples.push_back({frame.t, obs.s, straight});
    }
}

std::vector<TauEstimate> estimate_taus(const TrackSet& tracks, double window_start) {
    std::vector<TauEstimate> estimates;
    for (const FeatureTrack& track : tracks.tracks()) {
        if (track.status != TrackStatus::Live) continue;
        // Last two straight samples inside the window.
        const TrackSample* prev = nullptr;
        const TrackSample* curr = nullptr;
        for (const TrackSample& sample : track.samples) {
            if (!sample.straight || sample.t < window_start) continue;
            prev = curr;
            curr = &sample;
        }
        if (prev == nullptr || curr == nullptr) continue;
        const auto tau = finite_difference_tau(prev->s, curr->s, curr->t - prev->t);
        if (!tau) continue;
        estimates.push_back({track.feature_id, track.wall_side, curr->s, tau->value});
    }
    return estimates;
}

Result<SteeringDecision> segment_steering_decision(const std::vector<TauEstimate>& estimates,
                                                   const CameraModel& cam, double k,
                                                   Aggregation aggregation) {
    std::vector<double> left_taus, right_taus;
    double best_left = 0.0, best_right = 0.0;
    double best_left_dist = 0.0, best_right_dist = 0.0;
    for (const TauEstimate& est : estimates) {
        if (est.wall_side == WallSide::Left) {
            const double dist = std::abs(est.s - (-cam.receptor_left));
            if (left_taus.empty() || dist < best_left_dist) {
                best_left_dist = dist;
                best_left = est.tau;
            }
            left_taus.push_back(est.tau);
        } else if (est.wall_side == WallSide::Right) {
            const double dist = std::abs(est.s - cam.receptor_right);
            if (right_taus.empty() || dist < best_right_dist) {
                best_right_dist = dist;
                best_right = est.tau;
            }
            right_taus.push_back(est.tau);
        }
    }
    if (left_taus.empty()) return Error::WallStarvedLeft;
    if (right_taus.empty()) return Error::WallStarvedRight;

    auto median = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    double tau_l = best_left;
    double tau_r = best_right;
    if (aggregation == Aggregation::MedianOfWall) {
        tau_l = median(left_taus);
        tau_r = median(right_taus);
    }
    return SteeringDecision{tau_l, tau_r, k * (tau_l - tau_r)};
}

Result<double> segment_steering_signal(const std::vector<TauEstimate>& estimates,
                                       const CameraModel& cam, double k,
                                       Aggregation aggregation) {
    const auto decision = segment_steering_decision(estimates, cam, k, aggregation);
    if (!decision) return decision.error();
    return decision->u;
}

}  // namespace taunav
