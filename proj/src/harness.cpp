#include "taunav/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace taunav::harness {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("invalid number for " + key + ": '" + value + "'");
    }
}

std::string segment_name(SegmentKind s) {
    switch (s) {
        case SegmentKind::Continuous: return "continuous";
        case SegmentKind::Hold: return "hold";
        case SegmentKind::Sense: return "sense";
        case SegmentKind::Act: return "act";
    }
    return "?";
}

std::string tau_kind_name(TauKind k) {
    switch (k) {
        case TauKind::Geometric: return "geometric";
        case TauKind::Perceived: return "perceived";
        case TauKind::QuasiLinear: return "quasi_linear";
        case TauKind::FiniteDifference: return "finite_difference";
    }
    return "?";
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& record) {
    std::ofstream os(path);
    os << "t,x,y,theta,u,tau_left,tau_right,tau_kind,segment\n";
    for (const TrajectoryRow& row : record.rows) {
        os << fmt(row.t) << ',' << fmt(row.x) << ',' << fmt(row.y) << ',' << fmt(row.theta)
           << ',' << fmt(row.u) << ',' << fmt(row.tau_left) << ',' << fmt(row.tau_right) << ','
           << tau_kind_name(row.tau_kind) << ',' << segment_name(row.segment) << '\n';
    }
}

void write_events_csv(const std::filesystem::path& path, const TrajectoryRecord& record) {
    std::ofstream os(path);
    os << "t,feature_id,event\n";
    for (const FeatureEvent& e : record.events) {
        os << fmt(e.t) << ',' << e.feature_id << ','
           << (e.kind == EventKind::Enter ? "enter" : "exit") << '\n';
    }
}

void write_gnuplot_script(const std::filesystem::path& path, double half_width) {
    std::ofstream os(path);
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'x'\nset ylabel 'y'\n"
       << "set arrow from " << fmt(-half_width) << ", graph 0 to " << fmt(-half_width)
       << ", graph 1 nohead\n"
       << "set arrow from " << fmt(half_width) << ", graph 0 to " << fmt(half_width)
       << ", graph 1 nohead\n"
       << "plot 'trajectory.csv' using 2:3 with lines\n";
}

}  // namespace

KeyValues parse_config_text(const std::string& text) {
    KeyValues kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues parse_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::string> preset_names() {
    return {"theorem1", "corollary1", "corollary2", "theorem2", "spa_reference"};
}

KeyValues preset_config(const std::string& name) {
    KeyValues kv{
        {"controller", "continuous_balance"},
        {"sim.dt", "0.001"},
        {"sim.T", "50"},
        {"sim.v", "1"},
        {"world.R", "1"},
        {"camera.f", "1"},
        {"camera.delta", "1"},
        {"camera.epsilon", "1"},
        {"camera.rmax", "10"},
        {"law.k", "0.5"},
        {"init.x", "0"},
        {"init.y", "0"},
        {"init.theta", "1.5707963267948966"},  // pi/2
        {"seed", "0"},
    };
    if (name == "theorem1") {
        kv["init.x"] = "0.5";
        kv["init.theta"] = "1.3707963267948966";  // pi/2 - 0.2
    } else if (name == "corollary1") {
        kv["camera.delta"] = "0.5";
        kv["sim.T"] = "100";
    } else if (name == "corollary2") {
        kv["controller"] = "continuous_weighted";
        kv["camera.delta"] = "0.5";
        kv["sim.T"] = "100";
    } else if (name == "theorem2") {
        kv["controller"] = "sampled";
        kv["sampled.h"] = "0.05";
        kv["law.k"] = "1";
        kv["init.x"] = "0.2";
        kv["init.theta"] = "1.6707963267948966";  // pi/2 + 0.1
    } else if (name == "spa_reference") {
        kv["controller"] = "spa";
        kv["spa.h"] = "0.5";
        kv["spa.straight_fraction"] = "0.4";
        kv["field.density"] = "10";
        kv["field.extent_min"] = "-5";
        kv["field.extent_max"] = "110";
        kv["field.placement"] = "uniform_grid";
        kv["init.x"] = "0.5";
        kv["sim.T"] = "100";
    } else {
        std::string known;
        for (const auto& p : preset_names()) known += " " + p;
        throw std::runtime_error("unknown preset '" + name + "'; available:" + known);
    }
    return kv;
}

SimConfig build_sim_config(const KeyValues& kv) {
    SimConfig config;
    for (const auto& [key, value] : kv) {
        if (key == "controller") {
            if (value == "continuous_balance") config.controller = ControllerKind::ContinuousBalance;
            else if (value == "continuous_weighted") {
                config.controller = ControllerKind::ContinuousWeighted;
                config.law.weighted = true;
            } else if (value == "sampled") config.controller = ControllerKind::Sampled;
            else if (value == "spa") config.controller = ControllerKind::Spa;
            else throw std::runtime_error("unknown controller '" + value + "'");
        } else if (key == "sim.dt") config.dt = parse_double(key, value);
        else if (key == "sim.T") config.horizon = parse_double(key, value);
        else if (key == "sim.v") config.v = parse_double(key, value);
        else if (key == "world.R") config.world.half_width = parse_double(key, value);
        else if (key == "camera.f") config.camera.focal_length = parse_double(key, value);
        else if (key == "camera.delta") config.camera.receptor_left = parse_double(key, value);
        else if (key == "camera.epsilon") config.camera.receptor_right = parse_double(key, value);
        else if (key == "camera.rmax") config.camera.max_image_coord = parse_double(key, value);
        else if (key == "law.k") config.law.gain = parse_double(key, value);
        else if (key == "law.u_max") config.law.u_max = parse_double(key, value);
        else if (key == "sampled.h") config.sampled.h = parse_double(key, value);
        else if (key == "spa.h") config.spa.h = parse_double(key, value);
        else if (key == "spa.straight_fraction")
            config.spa.straight_fraction = parse_double(key, value);
        else if (key == "spa.aggregation") {
            if (value == "nearest_receptor") config.aggregation = Aggregation::NearestReceptor;
            else if (value == "median_of_wall") config.aggregation = Aggregation::MedianOfWall;
            else throw std::runtime_error("unknown aggregation '" + value + "'");
        } else if (key == "field.density") config.field.density = parse_double(key, value);
        else if (key == "field.extent_min") config.field.extent_min = parse_double(key, value);
        else if (key == "field.extent_max") config.field.extent_max = parse_double(key, value);
        else if (key == "field.placement") {
            if (value == "uniform_grid") config.field.placement = Placement::UniformGrid;
            else if (value == "poisson") config.field.placement = Placement::Poisson;
            else throw std::runtime_error("unknown placement '" + value + "'");
        } else if (key == "field.noise_sigma") config.noise_sigma = parse_double(key, value);
        else if (key == "init.x") config.initial.x = parse_double(key, value);
        else if (key == "init.y") config.initial.y = parse_double(key, value);
        else if (key == "init.theta") config.initial.theta = parse_double(key, value);
        else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(std::stoull(value));
            config.field.seed = config.seed;
        } else {
            throw std::runtime_error("unknown config key '" + key + "'");
        }
    }
    config.sampled.k = config.law.gain;
    config.sampled.half_width = config.world.half_width;
    if (const std::string msg = validate(config); !msg.empty()) throw std::runtime_error(msg);
    return config;
}

KeyValues resolve_config(const CommonOptions& opts) {
    KeyValues kv;
    if (!opts.preset.empty()) kv = preset_config(opts.preset);
    if (!opts.config_file.empty()) {
        for (auto& [k, v] : parse_config_file(opts.config_file)) kv[k] = v;
    }
    if (kv.empty()) throw std::runtime_error("no configuration: pass --preset or --config");
    for (const std::string& s : opts.overrides) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error("--set expects key=value, got '" + s + "'");
        kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (opts.seed_given) {
        kv["seed"] = std::to_string(opts.seed);
    }
    return kv;
}

std::filesystem::path resolve_out_dir(const CommonOptions& opts) {
    if (const char* env = std::getenv("TAU_NAV_OUT"); env != nullptr && *env != '\0') return env;
    return opts.out_dir;
}

int cmd_simulate(const CommonOptions& opts) {
    SimConfig config;
    std::filesystem::path out;
    try {
        config = build_sim_config(resolve_config(opts));
        out = resolve_out_dir(opts);
        std::filesystem::create_directories(out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }

    const TrajectoryRecord record = run(config);
    write_trajectory_csv(out / "trajectory.csv", record);
    write_gnuplot_script(out / "trajectory.gp", config.world.half_width);
    if (config.controller == ControllerKind::Spa) write_events_csv(out / "events.csv", record);

    const auto [x_inf, theta_inf] = predicted_limits(config.world, config.camera, config.law);
    const ConvergenceMetrics metrics = convergence_metrics(record, x_inf, theta_inf);
    {
        std::ofstream os(out / "summary.txt");
        os << "rows " << record.rows.size() << '\n';
        os << "predicted_x_inf " << fmt(x_inf) << '\n';
        os << "predicted_theta_inf " << fmt(theta_inf) << '\n';
        if (!record.rows.empty()) {
            os << "final_x " << fmt(record.back().x) << '\n';
            os << "final_theta " << fmt(record.back().theta) << '\n';
        }
        os << "final_err_x " << fmt(metrics.final_err_x) << '\n';
        os << "final_err_theta " << fmt(metrics.final_err_theta) << '\n';
        os << "settling_time " << fmt(metrics.settling_time) << '\n';
        os << "aborted " << (record.aborted ? 1 : 0) << '\n';
        if (record.aborted) {
            os << "abort_reason " << to_string(record.abort_reason) << '\n';
            os << "abort_time " << fmt(record.abort_time) << '\n';
        }
    }
    if (record.aborted) {
        std::fprintf(stderr, "run aborted at t=%g: %s\n", record.abort_time,
                     to_string(record.abort_reason).c_str());
        return kExitAborted;
    }
    return kExitOk;
}

int cmd_map(const CommonOptions& opts, const MapOptions& mo) {
    std::filesystem::path out;
    try {
        if (mo.h <= 0.0 || mo.k <= 0.0 || mo.R <= 0.0 || mo.n < 0)
            throw std::runtime_error("map requires h > 0, k > 0, R > 0, n >= 0");
        if (std::abs(mo.phi0) > kPi / 4.0 - mo.phi_margin)
            throw std::runtime_error("phi0 outside the map domain |phi| < pi/4 - margin");
        out = resolve_out_dir(opts);
        std::filesystem::create_directories(out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }

    SampledConfig config{mo.h, mo.k, mo.R, mo.phi_margin};
    const IterationOutcome outcome = iterate_heading_map(mo.phi0, mo.x, config, mo.n);
    {
        std::ofstream os(out / "map_iterates.csv");
        os << "i,phi\n";
        if (mo.n > 0) {
            for (std::size_t i = 0; i < outcome.iterates.size(); ++i)
                os << i << ',' << fmt(outcome.iterates[i]) << '\n';
        }
    }
    const double phi_max = kPi / 4.0 - mo.phi_margin;
    {
        std::ofstream os(out / "gprime_grid.csv");
        os << "x,phi,g_prime\n";
        for (double x = -mo.R; x <= mo.R + 1e-12; x += 0.01) {
            for (double phi = -phi_max; phi <= phi_max + 1e-12; phi += 0.01) {
                const auto gp = g_prime(phi, x, mo.h, mo.k, mo.R);
                if (gp) os << fmt(x) << ',' << fmt(phi) << ',' << fmt(*gp) << '\n';
            }
        }
    }
    const double max_gp = grid_max_abs_g_prime(mo.h, mo.k, mo.R, mo.phi_margin);
    const double k_crit = estimate_k_crit(mo.h, mo.R, mo.phi_margin);
    {
        std::ofstream os(out / "map_summary.txt");
        os << "max_abs_g_prime " << fmt(max_gp) << '\n';
        os << "contractive " << (max_gp < 1.0 ? 1 : 0) << '\n';
        os << "k_crit " << fmt(k_crit) << '\n';
        os << "iterates " << outcome.iterates.size() << '\n';
        os << "escaped " << (outcome.error == Error::DomainEscape ? 1 : 0) << '\n';
    }
    std::printf("max|g'| = %.6f (%s), k_crit(h=%g) = %.4f\n", max_gp,
                max_gp < 1.0 ? "contractive" : "not contractive", mo.h, k_crit);
    return kExitOk;
}

namespace {

struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

SweepAxis parse_range(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw std::runtime_error("range must be key=lo:hi:count");
    SweepAxis axis;
    axis.key = spec.substr(0, eq);
    const std::string rest = spec.substr(eq + 1);
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(rest.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw std::runtime_error("bad range '" + spec + "' (want key=lo:hi:count)");
    for (int i = 0; i < count; ++i)
        axis.values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return axis;
}

}  // namespace

int cmd_sweep(const CommonOptions& opts, const std::vector<std::string>& ranges) {
    KeyValues base;
    std::vector<SweepAxis> axes;
    std::filesystem::path out;
    try {
        base = resolve_config(opts);
        if (ranges.empty()) throw std::runtime_error("sweep requires at least one --param range");
        for (const std::string& r : ranges) axes.push_back(parse_range(r));
        out = resolve_out_dir(opts);
        std::filesystem::create_directories(out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }

    std::size_t total = 1;
    for (const SweepAxis& axis : axes) total *= axis.values.size();

    struct Row {
        std::vector<double> params;
        double final_x = 0.0, final_theta = 0.0;
        double err_x = 0.0, err_theta = 0.0;
        double settling = -1.0;
        bool aborted = false;
        bool config_error = false;
    };
    std::vector<Row> rows(total);

#ifdef _OPENMP
    if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
#endif
#pragma omp parallel for schedule(dynamic) if (opts.jobs != 1)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        Row& row = rows[static_cast<std::size_t>(idx)];
        KeyValues kv = base;
        std::size_t rem = static_cast<std::size_t>(idx);
        for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            const std::size_t j = rem % it->values.size();
            rem /= it->values.size();
            kv[it->key] = fmt(it->values[j]);
        }
        // grid order: first axis slowest
        row.params.resize(axes.size());
        {
            std::size_t r = static_cast<std::size_t>(idx);
            for (std::size_t a = axes.size(); a-- > 0;) {
                row.params[a] = axes[a].values[r % axes[a].values.size()];
                r /= axes[a].values.size();
            }
        }
        SimConfig config;
        try {
            config = build_sim_config(kv);
        } catch (const std::exception&) {
            row.config_error = true;
            row.aborted = true;
            continue;
        }
        const TrajectoryRecord record = run(config);
        const auto [x_inf, theta_inf] = predicted_limits(config.world, config.camera, config.law);
        const ConvergenceMetrics m = convergence_metrics(record, x_inf, theta_inf);
        if (!record.rows.empty()) {
            row.final_x = record.back().x;
            row.final_theta = record.back().theta;
        }
        row.err_x = m.final_err_x;
        row.err_theta = m.final_err_theta;
        row.settling = m.settling_time;
        row.aborted = record.aborted;
    }

    std::ofstream os(out / "sweep.csv");
    os << "run_index";
    for (const SweepAxis& axis : axes) os << ',' << axis.key;
    os << ",final_x,final_theta,final_err_x,final_err_theta,settling_time,aborted\n";
    std::size_t failures = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const Row& row = rows[i];
        os << i;
        for (double p : row.params) os << ',' << fmt(p);
        os << ',' << fmt(row.final_x) << ',' << fmt(row.final_theta) << ',' << fmt(row.err_x)
           << ',' << fmt(row.err_theta) << ',' << fmt(row.settling) << ','
           << (row.aborted ? 1 : 0) << '\n';
        if (row.aborted) ++failures;
    }
    return failures == total ? kExitAborted : kExitOk;
}

int cmd_tau_compare(const CommonOptions& opts, const TauCompareOptions& tc) {
    std::filesystem::path out;
    try {
        if (tc.dt <= 0.0 || tc.T <= 0.0) throw std::runtime_error("tau-compare needs dt, T > 0");
        out = resolve_out_dir(opts);
        std::filesystem::create_directories(out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }

    const CameraModel cam;
    const FeaturePoint feat{tc.feature_x, tc.feature_y, WallSide::Free};
    const double v = 1.0;
    std::ofstream os(out / "tau_compare.csv");
    os << "t,path,s,tau_geometric,tau_perceived,tau_star,tau_fd\n";
    for (const double u : {0.0, tc.arc_u}) {
        const char* path_name = u == 0.0 ? "straight" : "arc";
        Pose pose{0.0, 0.0, kPi / 2.0};
        double s_prev = 0.0;
        bool have_prev = false;
        const long long n = std::llround(tc.T / tc.dt);
        for (long long i = 0; i <= n; ++i) {
            const double t = i * tc.dt;
            const auto s = project(cam, to_body_frame(pose, feat));
            const auto geom = geometric_tau(pose, v, feat);
            const auto perc = perceived_tau(cam, pose, v, u, feat);
            const auto star = quasilinear_tau_star(cam, pose, v, feat);
            if (!s || !geom || !perc || !star) {
                std::fprintf(stderr, "feature lost on %s path at t=%g\n", path_name, t);
                return kExitAborted;
            }
            double fd = std::numeric_limits<double>::quiet_NaN();
            if (have_prev) {
                if (const auto est = finite_difference_tau(s_prev, *s, tc.dt)) fd = est->value;
            }
            os << fmt(t) << ',' << path_name << ',' << fmt(*s) << ',' << fmt(geom->value) << ','
               << fmt(perc->value) << ',' << fmt(star->value) << ',' << fmt(fd) << '\n';
            s_prev = *s;
            have_prev = true;
            pose = rk4_step(pose, u, v, tc.dt);
        }
    }
    return kExitOk;
}

}  // namespace taunav::harness
