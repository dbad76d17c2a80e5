#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "taunav/sim.hpp"

namespace taunav::harness {

// Experiment runner behind the CLI. Configs are flat key=value text with
// dotted section keys (camera.f=1.0); every acceptance scenario is a
// named preset. All CSV output uses a header row, a fixed column order
// and 17-significant-digit floats, so identical config + seed gives
// byte-identical files.

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitAborted = 3;

using KeyValues = std::map<std::string, std::string>;

/// Parses "key=value" lines; '#' starts a comment. Throws
/// std::runtime_error on malformed lines.
KeyValues parse_config_text(const std::string& text);
KeyValues parse_config_file(const std::filesystem::path& path);

std::vector<std::string> preset_names();
/// Throws std::runtime_error for unknown names.
KeyValues preset_config(const std::string& name);

/// Builds a validated SimConfig; throws std::runtime_error with an
/// explanation on bad keys or failed cross-field constraints.
SimConfig build_sim_config(const KeyValues& kv);

struct CommonOptions {
    std::string preset;
    std::string config_file;
    std::vector<std::string> overrides;  // repeated --set key=value
    std::string out_dir = "out";         // TAU_NAV_OUT wins over this default
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 1;
};

/// Resolves preset/config-file/overrides into one key-value map.
KeyValues resolve_config(const CommonOptions& opts);
std::filesystem::path resolve_out_dir(const CommonOptions& opts);

int cmd_simulate(const CommonOptions& opts);

struct MapOptions {
    double h = 0.1;
    double k = 0.5;
    double R = 1.0;
    double phi0 = 0.2;
    double x = 0.0;
    int n = 100;
    double phi_margin = 0.02;
};
int cmd_map(const CommonOptions& opts, const MapOptions& map_opts);

/// Each range is "key=lo:hi:count"; the sweep is the cartesian grid in
/// the order given. Rows are emitted in grid order regardless of --jobs.
int cmd_sweep(const CommonOptions& opts, const std::vector<std::string>& ranges);

struct TauCompareOptions {
    double feature_x = -0.5;
    double feature_y = 5.0;
    double arc_u = 0.01;
    double T = 2.0;
    double dt = 0.01;
};
int cmd_tau_compare(const CommonOptions& opts, const TauCompareOptions& tc);

}  // namespace taunav::harness
