#include "fpt/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "fpt/bounds.hpp"
#include "fpt/bridge.hpp"
#include "fpt/error.hpp"
#include "fpt/io.hpp"
#include "fpt/kernels.hpp"
#include "fpt/montecarlo.hpp"
#include "fpt/pde.hpp"
#include "fpt/stats.hpp"
#include "fpt/validation.hpp"

namespace fpt::cli {

namespace {

using nlohmann::json;

void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
    if (config.output_path.empty()) out << content;
    else io::write_atomic(config.output_path, content);
}

std::size_t paths_or(const RunConfig& config, std::size_t fallback) {
    if (!config.n_paths) return fallback;
    if (*config.n_paths < 1) throw InvalidArgument("--paths must be at least 1");
    return static_cast<std::size_t>(*config.n_paths);
}

// Grid requested by --s (single point) or --t-max with --points.
std::vector<double> evaluation_grid(const RunConfig& config, int default_points) {
    if (config.s && config.t_max) throw InvalidArgument("--s and --t-max are exclusive");
    if (config.s) {
        if (!(*config.s > 0.0)) throw InvalidArgument("--s must be positive");
        return {*config.s};
    }
    if (!config.t_max) throw InvalidArgument("one of --s or --t-max is required");
    if (!(*config.t_max > 0.0)) throw InvalidArgument("--t-max must be positive");
    const int n = config.points > 0 ? config.points : default_points;
    std::vector<double> grid;
    for (int i = 1; i <= n; ++i) grid.push_back(*config.t_max * i / n);
    return grid;
}

Boundary load_boundary(const RunConfig& config) {
    if (config.boundary_path.empty()) throw InvalidArgument("--boundary is required");
    return io::read_boundary_file(config.boundary_path);
}

std::string render(const RunConfig& config, const DensityCurve& curve) {
    return config.format == OutputFormat::csv ? io::density_csv(curve) : io::dump(io::density_json(curve));
}

}  // namespace

int cmd_density(const RunConfig& config, std::ostream& out) {
    const Boundary boundary = load_boundary(config);
    const DensityMethod method = density_method_from_string(config.method);
    DensityCurve curve;
    switch (method) {
        case DensityMethod::closed_form: {
            curve.method = method;
            curve.boundary_digest = boundary_digest(boundary);
            for (double s : evaluation_grid(config, 50)) {
                curve.s_grid.push_back(s);
                curve.phi.push_back(closed_form_density(boundary, s));
            }
            break;
        }
        case DensityMethod::girsanov_mc:
            curve = girsanov_curve(boundary, evaluation_grid(config, 20), config.n_steps.value_or(256),
                                   paths_or(config, 100000), config.seed);
            break;
        case DensityMethod::direct_mc: {
            if (config.s) throw InvalidArgument("direct_mc produces a histogram; use --t-max");
            if (!config.t_max || !(*config.t_max > 0.0)) throw InvalidArgument("direct_mc needs a positive --t-max");
            DirectMcOptions opts;
            opts.bins = config.points > 0 ? config.points : 50;
            curve = fpt_direct_mc(boundary, *config.t_max, config.n_steps.value_or(1000), paths_or(config, 100000),
                                  config.seed, opts)
                        .density;
            break;
        }
        case DensityMethod::fk_pde:
            curve = fk_curve(boundary, evaluation_grid(config, 20), config.n_t, config.n_x);
            break;
        case DensityMethod::heat_pde: {
            const std::vector<double> grid = evaluation_grid(config, 50);
            const double t_max = grid.back();
            const DensityCurve full =
                solve_killed_heat(boundary, t_max, config.n_t, config.n_x, default_y_max(boundary, t_max));
            curve.method = method;
            curve.boundary_digest = full.boundary_digest;
            for (double s : grid) {
                if (s < full.s_grid.front()) throw InvalidArgument("requested s is below the first heat time step");
                curve.s_grid.push_back(s);
                curve.phi.push_back(full.at(s));
            }
            break;
        }
    }
    curve.validate();
    emit(config, render(config, curve), out);
    return 0;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
    const Boundary boundary = config.boundary_path.empty() ? make_boundary(BoundaryKind::linear, 1.0, {1.0})
                                                           : io::read_boundary_file(config.boundary_path);
    ValidationScale scale;
    if (config.scale == "full") scale = ValidationScale::full();
    else if (config.scale != "default") throw InvalidArgument("--scale must be default or full");
    if (config.n_paths) scale.girsanov_paths = paths_or(config, scale.girsanov_paths);
    if (config.n_steps) {
        if (*config.n_steps < 10) throw InvalidArgument("--steps must be at least 10");
        scale.girsanov_steps = *config.n_steps;
    }
    scale.pde_nt = config.n_t;
    scale.pde_nx = config.n_x;
    if (config.scale == "full") {
        scale.pde_nt = std::max(scale.pde_nt, 2000);
        scale.pde_nx = std::max(scale.pde_nx, 2000);
    }
    scale.seed = config.seed;
    const auto checks = run_validation_suite(boundary, scale);
    const json report = validation_report(boundary, scale, checks);
    emit(config, io::dump(report), out);
    return report.at("status") == "pass" ? 0 : 1;
}

int cmd_bridge(const RunConfig& config, std::ostream& out) {
    const BridgeSpec spec{config.a, config.s.value_or(1.0)};
    spec.validate();
    const BridgeScheme scheme = bridge_scheme_from_string(config.scheme);
    const int steps = config.n_steps.value_or(1000);
    const std::size_t paths = paths_or(config, 10000);

    if (config.mode == "paths") {
        const PathBatch batch = sample_bridge(spec, steps, paths, config.seed, scheme);
        if (config.format == OutputFormat::csv) {
            emit(config, io::paths_csv(batch), out);
        } else {
            json t = json::array(), rows = json::array();
            for (int k = 0; k <= steps; ++k) t.push_back(batch.time(k));
            for (Eigen::Index p = 0; p < batch.values.rows(); ++p) {
                json row = json::array();
                for (Eigen::Index k = 0; k < batch.values.cols(); ++k) row.push_back(batch.values(p, k));
                rows.push_back(row);
            }
            emit(config, io::dump({{"schema_version", io::kSchemaVersion}, {"t", t}, {"paths", rows}}), out);
        }
        return 0;
    }
    if (config.mode != "moments") throw InvalidArgument("--mode must be paths or moments");

    std::vector<double> us = config.u_values.empty() ? std::vector<double>{0.25, 0.5, 0.75} : config.u_values;
    std::vector<int> indices;
    for (double& u : us) {
        if (!(u > 0.0 && u < spec.s)) throw InvalidArgument("--u values must lie strictly inside (0, s)");
        indices.push_back(static_cast<int>(std::lround(u / spec.s * steps)));
        u = spec.s * indices.back() / steps;
    }
    const PathMatrix marginals = sample_marginals(spec, steps, paths, config.seed, scheme, indices);
    std::string csv = "u,mean,std_error,oracle_mean,ks_statistic,ks_p_value\n";
    json rows = json::array();
    for (std::size_t j = 0; j < us.size(); ++j) {
        std::vector<double> column(paths);
        RunningStats stats;
        for (std::size_t i = 0; i < paths; ++i) {
            column[i] = marginals(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            stats.push(column[i]);
        }
        const EstimateCI est = to_estimate(stats);
        const double u = us[j];
        const double oracle = bridge_mean(spec, u);
        const KsResult ks = ks_one_sample(column, [&](double y) { return bridge_marginal_cdf(spec, u, y); });
        csv += io::format_number(u) + "," + io::format_number(est.mean) + "," + io::format_number(est.std_error) + "," +
               io::format_number(oracle) + "," + io::format_number(ks.statistic) + "," +
               io::format_number(ks.p_value) + "\n";
        rows.push_back({{"u", u},
                        {"mean", est.mean},
                        {"std_error", est.std_error},
                        {"oracle_mean", oracle},
                        {"ks_statistic", ks.statistic},
                        {"ks_p_value", ks.p_value}});
    }
    emit(config,
         config.format == OutputFormat::csv
             ? csv
             : io::dump({{"schema_version", io::kSchemaVersion}, {"a", spec.a}, {"s", spec.s},
                         {"scheme", to_string(scheme)}, {"moments", rows}}),
         out);
    return 0;
}

int cmd_bounds(const RunConfig& config, std::ostream& out) {
    const Boundary boundary = load_boundary(config);
    std::optional<DensityCurve> check;
    if (!config.check_curve.empty()) check = io::read_density_file(config.check_curve);
    const std::vector<double> grid = check ? check->s_grid : evaluation_grid(config, 50);
    const BoundsEnvelope env = theorem_envelope(boundary, grid);
    emit(config, config.format == OutputFormat::csv ? io::envelope_csv(env) : io::dump(io::envelope_json(env)), out);
    if (!check) return 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phi = check->phi[i];
        const double low = check->ci_low ? std::min((*check->ci_low)[i], phi * (1.0 - config.tolerance))
                                         : phi * (1.0 - config.tolerance);
        const double high = check->ci_high ? std::max((*check->ci_high)[i], phi * (1.0 + config.tolerance))
                                           : phi * (1.0 + config.tolerance);
        if (high < env.lower[i] || low > env.upper[i]) return 1;
    }
    return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"First-passage densities of Brownian motion to convex boundaries"};
    app.require_subcommand(1);
    RunConfig config;
    std::string grid_text;
    std::string format_text = "csv";

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", config.output_path, "Output file (standard output when absent)");
        sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", config.seed, "Random seed");
        sub->add_option("--paths", config.n_paths, "Monte Carlo paths");
        sub->add_option("--steps", config.n_steps, "Time steps per path");
    };
    const auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--s", config.s, "Single evaluation time");
        sub->add_option("--t-max", config.t_max, "Largest evaluation time");
        sub->add_option("--points", config.points, "Number of evaluation points up to --t-max");
        sub->add_option("--grid", grid_text, "PDE grid NT,NX");
    };

    CLI::App* density = app.add_subcommand("density", "Density curve by one method");
    density->add_option("--boundary", config.boundary_path, "Boundary JSON file")->required();
    density->add_option("--method", config.method, "girsanov_mc, direct_mc, fk_pde, heat_pde or closed_form");
    add_common(density);
    add_grid(density);

    CLI::App* validate = app.add_subcommand("validate", "Cross-validation suite");
    validate->add_option("--boundary", config.boundary_path, "Boundary JSON file (default f = 1 + t)");
    validate->add_option("--scale", config.scale, "default or full");
    add_common(validate);
    validate->add_option("--grid", grid_text, "PDE grid NT,NX");

    CLI::App* bridge = app.add_subcommand("bridge", "Bessel bridge sampling diagnostics");
    bridge->add_option("--a", config.a, "Starting point");
    bridge->add_option("--s", config.s, "Pinning time");
    bridge->add_option("--mode", config.mode, "paths or moments")->check(CLI::IsMember({"paths", "moments"}));
    bridge->add_option("--scheme", config.scheme, "sde_euler or three_bridge");
    bridge->add_option("--u", config.u_values, "Marginal times for moments mode");
    add_common(bridge);

    CLI::App* bounds = app.add_subcommand("bounds", "Jensen envelope");
    bounds->add_option("--boundary", config.boundary_path, "Boundary JSON file")->required();
    bounds->add_option("--check-curve", config.check_curve, "Density CSV that must lie inside the envelope");
    bounds->add_option("--tolerance", config.tolerance, "Relative band for curves without confidence bands");
    bounds->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bounds->add_option("--out", config.output_path, "Output file (standard output when absent)");
    add_grid(bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "InvalidArgument: " << e.what() << "\n";
        return 2;
    }

    try {
        config.format = format_text == "json" ? OutputFormat::json : OutputFormat::csv;
        if (!grid_text.empty()) {
            const auto comma = grid_text.find(',');
            if (comma == std::string::npos) throw InvalidArgument("--grid expects NT,NX");
            try {
                config.n_t = std::stoi(grid_text.substr(0, comma));
                config.n_x = std::stoi(grid_text.substr(comma + 1));
            } catch (const std::logic_error&) {
                throw InvalidArgument("--grid expects two integers NT,NX");
            }
        }
        if (density->parsed()) return cmd_density(config, out);
        if (validate->parsed()) return cmd_validate(config, out);
        if (bridge->parsed()) return cmd_bridge(config, out);
        return cmd_bounds(config, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.is_input_error() ? 2 : 3;
    } catch (const std::exception& e) {
        err << "InvalidArgument: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace fpt::cli
