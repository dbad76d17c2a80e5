#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <vector>

#include "taunav/eulerian.hpp"

namespace taunav {

// Lagrangian sensing: discrete wall features tracked as moving image
// points, tau estimated by finite differences, and the sense-perceive-act
// segmentation that keeps those estimates valid (tau from image motion is
// only a transit time while the vehicle moves straight).

enum class Placement : std::uint8_t { UniformGrid, Poisson };

struct FeatureFieldConfig {
    double density = 10.0;     // features per unit length per wall
    double extent_min = 0.0;   // along-corridor range
    double extent_max = 100.0;
    std::uint64_t seed = 0;
    Placement placement = Placement::UniformGrid;
};

struct FeatureField {
    std::vector<FeaturePoint> features;  // index = feature id
};

Result<FeatureField> generate_features(const CorridorWorld& world,
                                       const FeatureFieldConfig& config);

/// Plain-text table, one feature per line: id side y.
void save_features(std::ostream& os, const FeatureField& field);
Result<FeatureField> load_features(std::istream& is, const CorridorWorld& world);

struct Observation {
    int feature_id;
    double s;  // image coordinate
};

struct FlowFrame {
    double t = 0.0;
    std::vector<Observation> observations;  // sorted by feature id
};

/// Image coordinates of every feature currently in front of the pinhole
/// and inside the field of view. noise_sigma > 0 adds Gaussian image
/// noise drawn from rng.
FlowFrame observe(const Pose& pose, const CameraModel& cam, const FeatureField& field, double t,
                  double noise_sigma = 0.0, std::mt19937_64* rng = nullptr);

enum class TrackStatus : std::uint8_t { Live, ExitedFov, Behind };

struct TrackSample {
    double t;
    double s;
    bool straight;  // taken while u == 0 (valid for finite-difference tau)
};

struct FeatureTrack {
    int track_id;
    int feature_id;
    WallSide wall_side;
    std::vector<TrackSample> samples;
    TrackStatus status = TrackStatus::Live;
};

class TrackSet {
  public:
    /// Folds one frame into the track set. Features absent from the frame
    /// have their live track closed (Behind if past the pinhole, ExitedFov
    /// otherwise); features re-entering the field of view get a fresh
    /// track id.
    void update(const FlowFrame& frame, const FeatureField& field, const Pose& pose,
                const CameraModel& cam, bool straight);

    const std::vector<FeatureTrack>& tracks() const { return tracks_; }

  private:
    std::vector<FeatureTrack> tracks_;
    std::map<int, std::size_t> live_by_feature_;  // feature id -> index into tracks_
    int next_track_id_ = 0;
};

struct TauEstimate {
    int feature_id;
    WallSide wall_side;
    double s;     // latest image location
    double tau;   // finite-difference estimate
};

/// Finite-difference tau for every live track with at least two straight
/// samples at or after window_start. Stationary-image tracks are skipped.
std::vector<TauEstimate> estimate_taus(const TrackSet& tracks, double window_start);

enum class Aggregation : std::uint8_t { NearestReceptor, MedianOfWall };

struct SteeringDecision {
    double tau_left;
    double tau_right;
    double u;
};

/// Steering signal from per-wall representative estimates:
/// u = k * (tau_l - tau_r). NearestReceptor picks, per wall, the estimate
/// whose image location is closest to that wall's receptor, which
/// degenerates to the two-pixel Eulerian model as the field densifies.
Result<SteeringDecision> segment_steering_decision(
    const std::vector<TauEstimate>& estimates, const CameraModel& cam, double k,
    Aggregation aggregation = Aggregation::NearestReceptor);

Result<double> segment_steering_signal(const std::vector<TauEstimate>& estimates,
                                       const CameraModel& cam, double k,
                                       Aggregation aggregation = Aggregation::NearestReceptor);

struct SpaSchedule {
    double h = 0.5;                 // segment interval
    double straight_fraction = 0.4; // leading portion of each interval driven straight
};

}  // namespace taunav
