#include <CLI11.hpp>

#include "taunav/harness.hpp"

namespace {

void add_common(CLI::App* cmd, taunav::harness::CommonOptions& opts, bool* seed_flag) {
    cmd->add_option("--preset", opts.preset, "Named scenario preset");
    cmd->add_option("--config", opts.config_file, "Flat key=value config file");
    cmd->add_option("--set", opts.overrides, "Override key=value (repeatable)");
    cmd->add_option("--out", opts.out_dir, "Output directory (TAU_NAV_OUT overrides)");
    cmd->add_option("--seed", opts.seed, "RNG seed")->each([seed_flag](const std::string&) {
        *seed_flag = true;
    });
    cmd->add_option("--jobs", opts.jobs, "Parallel runs for sweeps");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tau-based corridor navigation simulator"};
    app.require_subcommand(1);

    taunav::harness::CommonOptions opts;
    taunav::harness::MapOptions map_opts;
    taunav::harness::TauCompareOptions tc_opts;
    std::vector<std::string> ranges;

    auto* simulate = app.add_subcommand("simulate", "Run one closed-loop scenario");
    add_common(simulate, opts, &opts.seed_given);

    auto* map = app.add_subcommand("map", "Iterate the sampled heading map and scan g'");
    add_common(map, opts, &opts.seed_given);
    map->add_option("--hold", map_opts.h, "Sampling interval");
    map->add_option("--k", map_opts.k, "Gain");
    map->add_option("--R", map_opts.R, "Corridor half-width");
    map->add_option("--phi0", map_opts.phi0, "Initial heading offset");
    map->add_option("--x", map_opts.x, "Frozen lateral position");
    map->add_option("--n", map_opts.n, "Number of iterates");

    auto* sweep = app.add_subcommand("sweep", "Grid sweep over config parameters");
    add_common(sweep, opts, &opts.seed_given);
    sweep->add_option("--param", ranges, "Range key=lo:hi:count (repeatable)");

    auto* tau_compare =
        app.add_subcommand("tau-compare", "Geometric vs perceived vs tau* along straight and arc");
    add_common(tau_compare, opts, &opts.seed_given);
    tau_compare->add_option("--feature-x", tc_opts.feature_x, "Feature world x");
    tau_compare->add_option("--feature-y", tc_opts.feature_y, "Feature world y");
    tau_compare->add_option("--arc-u", tc_opts.arc_u, "Turn rate on the arc path");
    tau_compare->add_option("--T", tc_opts.T, "Segment duration");
    tau_compare->add_option("--dt", tc_opts.dt, "Sample step");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return taunav::harness::cmd_simulate(opts);
    if (map->parsed()) return taunav::harness::cmd_map(opts, map_opts);
    if (sweep->parsed()) return taunav::harness::cmd_sweep(opts, ranges);
    if (tau_compare->parsed()) return taunav::harness::cmd_tau_compare(opts, tc_opts);
    return taunav::harness::kExitConfigError;
}
