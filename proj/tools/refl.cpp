// Command-line front end: simulate reflectivity curves, fit measured data
// with differential evolution, sample parameter posteriors with Metropolis
// MCMC, and run the built-in demonstration problems.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "refl/config.hpp"
#include "refl/de.hpp"
#include "refl/io.hpp"
#include "refl/kernel.hpp"
#include "refl/mcmc.hpp"
#include "refl/report.hpp"
#include "refl/svg.hpp"
#include "refl/toys.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("REFL_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric REFL_SEED\n";
        }
    }
    return 42;
}

std::string read_text_file(const std::string& path) {
    std::ifstream file(path);
    std::ostringstream out;
    out << file.rdbuf();
    return out.str();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct SimulateArgs {
    std::string config_path, out_path, plot_path, method = "dynamical";
    double qmin = 0.005, qmax = 0.3;
    std::size_t points = 200;
    bool compare = false;
};

int cmd_simulate(const SimulateArgs& args) {
    const refl::ModelConfig config = refl::read_model_config(args.config_path);
    if (args.method != "dynamical" && args.method != "kinematic") {
        std::cerr << "error: unsupported method '" << args.method
                  << "' (use dynamical or kinematic)\n";
        return kExitUsage;
    }
    const auto grid = refl::WavevectorGrid::linspace(args.qmin, args.qmax, args.points);

    refl::ReflectivityCurve dynamical, kinematic;
    const bool want_dyn = args.compare || args.method == "dynamical";
    const bool want_kin = args.compare || args.method == "kinematic";
    if (want_dyn) dynamical = refl::dynamical_reflectivity(config.structure, grid);
    if (want_kin) kinematic = refl::kinematic_reflectivity(config.structure, grid);

    std::vector<std::string> headers;
    std::vector<const std::vector<double>*> columns;
    if (want_dyn) {
        headers.push_back("R_dynamical");
        columns.push_back(&dynamical.r);
    }
    if (want_kin) {
        headers.push_back("R_kinematic");
        columns.push_back(&kinematic.r);
    }
    refl::write_file_atomic(args.out_path, refl::curve_table(grid.q, headers, columns));
    std::cout << "wrote " << args.out_path << "\n";

    if (!args.plot_path.empty()) {
        refl::SvgPlot plot("Simulated reflectivity", "q / A^-1", "R(q)", /*log_y=*/true);
        if (want_dyn) plot.add_line(grid.q, dynamical.r, "green");
        if (want_kin) {
            plot.add_line(grid.q, kinematic.r, "blue");
            plot.add_hline(1.0, "orange");
        }
        plot.save(args.plot_path);
        std::cout << "wrote " << args.plot_path << "\n";
    }
    return 0;
}

struct FitArgs {
    std::string data_path, config_path, out_path, plot_path;
    std::uint64_t seed = 42;
};

int cmd_fit(const FitArgs& args) {
    const auto start_time = std::chrono::steady_clock::now();
    const refl::ModelConfig config = refl::read_model_config(args.config_path);
    if (config.fit.empty()) {
        std::cerr << "error: config declares no free parameters; add [[fit]] entries\n";
        return kExitUsage;
    }
    const refl::Dataset dataset = refl::read_dataset_file(args.data_path);
    const refl::Objective objective = refl::reflectivity_objective(config, dataset);

    refl::DEConfig de = config.de;
    de.seed = refl::derive_seed(args.seed, "de");
    const refl::DEResult result = refl::run_de(objective, objective.space, de);

    refl::FitReport report;
    report.parameter_names = objective.space.names;
    report.best_theta = result.best_theta;
    report.best_lnl = result.best_lnl;
    report.generations_run = result.generations_run;
    report.termination =
        result.termination == refl::DETermination::converged ? "converged" : "max_iterations";
    report.seed = args.seed;
    report.config_echo = read_text_file(args.config_path);
    report.wall_seconds = elapsed_seconds(start_time);
    report.save(args.out_path);
    std::cout << "wrote " << args.out_path << "\n";

    const std::vector<double> best_curve = objective.forward(result.best_theta);
    const std::string curve_path =
        std::filesystem::path(args.out_path).replace_extension(".fit.dat").string();
    refl::write_file_atomic(curve_path,
                            refl::curve_table(dataset.curve.q, {"R_fit"}, {&best_curve}));
    std::cout << "wrote " << curve_path << "\n";

    if (!args.plot_path.empty()) {
        refl::SvgPlot plot("Maximum-likelihood fit", "q / A^-1", "R(q)", /*log_y=*/true);
        plot.add_points(dataset.curve.q, dataset.curve.r, *dataset.curve.dr, "steelblue");
        plot.add_line(dataset.curve.q, best_curve, "orange");
        plot.save(args.plot_path);
        std::cout << "wrote " << args.plot_path << "\n";
    }

    for (std::size_t i = 0; i < report.parameter_names.size(); ++i)
        std::cout << "  " << report.parameter_names[i] << " = " << report.best_theta[i] << "\n";
    std::cout << "  lnL = " << report.best_lnl << "\n";
    return 0;
}

struct SampleArgs {
    std::string data_path, config_path, report_path, chains_path, plot_dir;
    std::vector<double> start;
    std::uint64_t seed = 42;
};

void write_posterior_plots(const std::string& dir, const refl::Objective& objective,
                           const std::vector<refl::Chain>& chains,
                           const std::vector<double>& optimum, refl::Rng& rng) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto pooled = refl::detail::pooled_samples(chains);
    const auto& names = objective.space.names;

    for (std::size_t i = 0; i < names.size(); ++i) {
        std::vector<double> column(pooled.size());
        for (std::size_t s = 0; s < pooled.size(); ++s) column[s] = pooled[s][i];
        refl::SvgPlot hist("Posterior: " + names[i], names[i], "count");
        hist.add_histogram(column, 40, "seagreen");
        hist.save((fs::path(dir) / ("posterior_" + std::to_string(i) + ".svg")).string());
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t k = i + 1; k < names.size(); ++k) {
            std::vector<double> xs, ys;
            const std::size_t stride = std::max<std::size_t>(1, pooled.size() / 2000);
            for (std::size_t s = 0; s < pooled.size(); s += stride) {
                xs.push_back(pooled[s][i]);
                ys.push_back(pooled[s][k]);
            }
            refl::SvgPlot scatter("Posterior: " + names[i] + " vs " + names[k], names[i],
                                  names[k]);
            scatter.add_points(xs, ys, {}, "seagreen");
            scatter.save((fs::path(dir) /
                          ("pair_" + std::to_string(i) + "_" + std::to_string(k) + ".svg"))
                             .string());
        }

    const std::size_t n_draws = std::min<std::size_t>(100, pooled.size());
    const auto curves = refl::posterior_predictive(objective.forward, chains, n_draws, rng);
    refl::SvgPlot overlay("Posterior predictive", "q", "R", /*log_y=*/false);
    for (const auto& curve : curves)
        overlay.add_line(objective.dataset.curve.q, curve, "seagreen", 0.6);
    overlay.add_line(objective.dataset.curve.q, objective.forward(optimum), "orange", 2.0);
    overlay.add_points(objective.dataset.curve.q, objective.dataset.curve.r,
                       *objective.dataset.curve.dr, "steelblue");
    overlay.save((fs::path(dir) / "predictive.svg").string());
}

int cmd_sample(const SampleArgs& args) {
    const refl::ModelConfig config = refl::read_model_config(args.config_path);
    if (config.fit.empty()) {
        std::cerr << "error: config declares no free parameters; add [[fit]] entries\n";
        return kExitUsage;
    }
    const refl::Dataset dataset = refl::read_dataset_file(args.data_path);
    const refl::Objective objective = refl::reflectivity_objective(config, dataset);

    std::vector<double> start = args.start;
    refl::FitReport report;
    bool have_report = false;
    if (start.empty()) {
        if (args.report_path.empty()) {
            std::cerr << "error: provide --report from a previous fit or --start values\n";
            return kExitUsage;
        }
        report = refl::FitReport::load(args.report_path);
        start = report.best_theta;
        have_report = true;
    }
    if (start.size() != objective.space.size()) {
        std::cerr << "error: start vector has " << start.size() << " values, expected "
                  << objective.space.size() << "\n";
        return kExitUsage;
    }

    refl::MCMCConfig mcmc = config.mcmc;
    mcmc.seed = refl::derive_seed(args.seed, "mcmc");
    const auto chains = refl::run_chains(objective, objective.space, start, mcmc);
    const auto summary = refl::summarize(chains, objective.space.names);

    refl::write_file_atomic(args.chains_path,
                            refl::chains_to_csv(chains, objective.space.names));
    std::cout << "wrote " << args.chains_path << "\n";

    if (have_report) {
        report.has_posterior = true;
        report.posterior = summary;
        report.save(args.report_path);
        std::cout << "updated " << args.report_path << "\n";
    }

    for (std::size_t i = 0; i < summary.mean.size(); ++i)
        std::cout << "  " << objective.space.names[i] << " = " << summary.mean[i] << " +/- "
                  << summary.stddev[i] << "  [" << summary.ci_lower[i] << ", "
                  << summary.ci_upper[i] << "]\n";

    if (!args.plot_dir.empty()) {
        refl::Rng rng(refl::derive_seed(args.seed, "predictive"));
        write_posterior_plots(args.plot_dir, objective, chains, start, rng);
        std::cout << "wrote plots to " << args.plot_dir << "\n";
    }
    return 0;
}

struct DemoArgs {
    std::string name, out_dir = ".";
    std::uint64_t seed = 42;
};

int demo_ackley(const DemoArgs& args) {
    namespace fs = std::filesystem;
    fs::create_directories(args.out_dir);

    refl::ParameterSpace space{{"x", "y"}, {-5.0, -5.0}, {5.0, 5.0}};
    refl::FunctionObjective objective{
        space, [](const std::vector<double>& t) { return refl::negative_ackley(t[0], t[1]); }};
    refl::DEConfig de;  // k_m = k_r = 0.5, population 20, 100 iterations
    de.seed = refl::derive_seed(args.seed, "de");
    const refl::DEResult result = refl::run_de(objective, space, de);

    // per-candidate lnL trajectories, one row per generation
    std::ostringstream traj;
    traj << "# generation";
    for (std::size_t j = 0; j < de.population_size; ++j) traj << " candidate" << j;
    traj << "\n";
    for (std::size_t g = 0; g < result.history.size(); ++g) {
        traj << g;
        for (double lnl : result.history[g].lnl) traj << " " << refl::format_number(lnl);
        traj << "\n";
    }
    refl::write_file_atomic((fs::path(args.out_dir) / "ackley_trajectories.dat").string(),
                            traj.str());

    nlohmann::json stats;
    stats["best_theta"] = result.best_theta;
    stats["best_value"] = result.best_lnl;
    stats["generations"] = result.generations_run;
    stats["seed"] = args.seed;
    refl::write_file_atomic((fs::path(args.out_dir) / "ackley_result.json").string(),
                            stats.dump(2) + "\n");

    refl::SvgPlot plot("Differential evolution on the negative Ackley function", "generation",
                       "objective value");
    std::vector<double> gen(result.history.size());
    for (std::size_t g = 0; g < gen.size(); ++g) gen[g] = static_cast<double>(g);
    for (std::size_t j = 0; j < de.population_size; ++j) {
        std::vector<double> lnl(result.history.size());
        for (std::size_t g = 0; g < lnl.size(); ++g) lnl[g] = result.history[g].lnl[j];
        plot.add_line(gen, lnl, "steelblue", 0.8);
    }
    plot.save((fs::path(args.out_dir) / "ackley_trajectories.svg").string());

    std::cout << "best point (" << result.best_theta[0] << ", " << result.best_theta[1]
              << "), value " << result.best_lnl << "\n";
    return 0;
}

int demo_gaussians(const DemoArgs& args) {
    namespace fs = std::filesystem;
    fs::create_directories(args.out_dir);

    // Demo truth; illustrative values, not taken from any measurement.
    refl::GaussianPairModel truth;
    std::vector<double> x(50);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(x.size() - 1);
    const refl::Dataset dataset = refl::synthesize_gaussian_pair_dataset(
        truth, x, 0.05, 0.01, refl::derive_seed(args.seed, "synth"));

    refl::ParameterSpace space{{"area1", "area2", "center1", "center2"},
                               {0.0, 0.0, -5.0, -5.0},
                               {20.0, 20.0, 5.0, 5.0}};
    const refl::Objective objective = refl::gaussian_pair_objective(dataset, truth.width, space);

    refl::DEConfig de;
    de.seed = refl::derive_seed(args.seed, "de");
    const refl::DEResult fit = refl::run_de(objective, space, de);

    refl::MCMCConfig mcmc;
    mcmc.seed = refl::derive_seed(args.seed, "mcmc");
    const auto chains = refl::run_chains(objective, space, fit.best_theta, mcmc);
    const auto summary = refl::summarize(chains, space.names);

    nlohmann::json out;
    out["note"] = "synthetic demo; truth values are tool defaults";
    out["truth"] = {truth.area1, truth.area2, truth.center1, truth.center2};
    out["best_theta"] = fit.best_theta;
    out["best_lnl"] = fit.best_lnl;
    out["posterior_mean"] = summary.mean;
    out["posterior_stddev"] = summary.stddev;
    out["seed"] = args.seed;
    refl::write_file_atomic((fs::path(args.out_dir) / "gaussians_result.json").string(),
                            out.dump(2) + "\n");
    refl::write_file_atomic((fs::path(args.out_dir) / "gaussians_chains.csv").string(),
                            refl::chains_to_csv(chains, space.names));

    refl::Rng rng(refl::derive_seed(args.seed, "predictive"));
    write_posterior_plots(args.out_dir, objective, chains, fit.best_theta, rng);

    for (std::size_t i = 0; i < space.names.size(); ++i)
        std::cout << "  " << space.names[i] << " = " << summary.mean[i] << " +/- "
                  << summary.stddev[i] << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"refl: layered-model neutron reflectivity simulation, fitting and sampling"};
    app.require_subcommand(1);
    const std::uint64_t seed_default = default_seed();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "compute a model reflectivity curve");
    simulate->add_option("--config", sim.config_path, "model config file")->required();
    simulate->add_option("--qmin", sim.qmin, "minimum q (A^-1)");
    simulate->add_option("--qmax", sim.qmax, "maximum q (A^-1)");
    simulate->add_option("--points", sim.points, "number of q points");
    simulate->add_option("--method", sim.method, "dynamical or kinematic");
    simulate->add_flag("--compare", sim.compare, "output both methods");
    simulate->add_option("--plot", sim.plot_path, "write an SVG plot");
    simulate->add_option("--out", sim.out_path, "output curve file")->required();

    FitArgs fit;
    fit.seed = seed_default;
    auto* fitcmd = app.add_subcommand("fit", "fit a model to measured data");
    fitcmd->add_option("--data", fit.data_path, "measured data file (q R dR)")->required();
    fitcmd->add_option("--config", fit.config_path, "model config file")->required();
    fitcmd->add_option("--seed", fit.seed, "master RNG seed");
    fitcmd->add_option("--out", fit.out_path, "output report (JSON)")->required();
    fitcmd->add_option("--plot", fit.plot_path, "write an SVG fit overlay");

    SampleArgs sample;
    sample.seed = seed_default;
    auto* samplecmd = app.add_subcommand("sample", "sample parameter posteriors with MCMC");
    samplecmd->add_option("--data", sample.data_path, "measured data file")->required();
    samplecmd->add_option("--config", sample.config_path, "model config file")->required();
    samplecmd->add_option("--report", sample.report_path, "fit report to start from and update");
    samplecmd->add_option("--start", sample.start, "explicit start values");
    samplecmd->add_option("--seed", sample.seed, "master RNG seed");
    samplecmd->add_option("--chains", sample.chains_path, "output chains CSV")->required();
    samplecmd->add_option("--plot-dir", sample.plot_dir, "directory for posterior SVGs");

    DemoArgs demo;
    demo.seed = seed_default;
    auto* democmd = app.add_subcommand("demo", "run a built-in demonstration");
    democmd->add_option("name", demo.name, "ackley or gaussians")->required();
    democmd->add_option("--seed", demo.seed, "master RNG seed");
    democmd->add_option("--out-dir", demo.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*fitcmd) return cmd_fit(fit);
        if (*samplecmd) return cmd_sample(sample);
        if (*democmd) {
            if (demo.name == "ackley") return demo_ackley(demo);
            if (demo.name == "gaussians") return demo_gaussians(demo);
            std::cerr << "error: unknown demo '" << demo.name
                      << "'; available demos: ackley, gaussians\n";
            return kExitUsage;
        }
    } catch (const refl::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitParse;
    } catch (const refl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
