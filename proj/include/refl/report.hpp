#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "refl/io.hpp"
#include "refl/mcmc.hpp"

namespace refl {

inline constexpr const char* kToolVersion = "0.1.0";

/// Machine-readable result of a fit (and, when sampling ran, of the
/// posterior summary). Serialized as JSON; round-trips losslessly.
struct FitReport {
    std::vector<std::string> parameter_names;
    std::vector<double> best_theta;
    double best_lnl = 0.0;
    std::size_t generations_run = 0;
    std::string termination;
    std::uint64_t seed = 0;
    std::string config_echo;
    std::string tool_version = kToolVersion;
    double wall_seconds = 0.0;  // excluded from reproducibility comparisons

    bool has_posterior = false;
    PosteriorSummary posterior;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool_version"] = tool_version;
        j["seed"] = seed;
        j["parameter_names"] = parameter_names;
        j["best_theta"] = best_theta;
        j["best_lnl"] = best_lnl;
        j["generations_run"] = generations_run;
        j["termination"] = termination;
        j["config_echo"] = config_echo;
        j["timings"] = {{"wall_seconds", wall_seconds}};
        if (has_posterior) {
            nlohmann::json p;
            p["mean"] = posterior.mean;
            p["stddev"] = posterior.stddev;
            p["ci_lower"] = posterior.ci_lower;
            p["ci_upper"] = posterior.ci_upper;
            p["correlation"] = posterior.correlation;
            p["degenerate"] = posterior.degenerate;
            p["n_samples"] = posterior.n_samples;
            j["posterior"] = p;
        }
        return j;
    }

    static FitReport from_json(const nlohmann::json& j) {
        FitReport report;
        report.tool_version = j.at("tool_version").get<std::string>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.parameter_names = j.at("parameter_names").get<std::vector<std::string>>();
        report.best_theta = j.at("best_theta").get<std::vector<double>>();
        report.best_lnl = j.at("best_lnl").get<double>();
        report.generations_run = j.at("generations_run").get<std::size_t>();
        report.termination = j.at("termination").get<std::string>();
        report.config_echo = j.at("config_echo").get<std::string>();
        report.wall_seconds = j.at("timings").at("wall_seconds").get<double>();
        if (j.contains("posterior")) {
            report.has_posterior = true;
            const auto& p = j.at("posterior");
            report.posterior.names = report.parameter_names;
            report.posterior.mean = p.at("mean").get<std::vector<double>>();
            report.posterior.stddev = p.at("stddev").get<std::vector<double>>();
            report.posterior.ci_lower = p.at("ci_lower").get<std::vector<double>>();
            report.posterior.ci_upper = p.at("ci_upper").get<std::vector<double>>();
            report.posterior.correlation =
                p.at("correlation").get<std::vector<std::vector<double>>>();
            report.posterior.degenerate = p.at("degenerate").get<bool>();
            report.posterior.n_samples = p.at("n_samples").get<std::size_t>();
        }
        return report;
    }

    void save(const std::string& path) const { write_file_atomic(path, to_json().dump(2) + "\n"); }

    static FitReport load(const std::string& path) {
        std::ifstream file(path);
        if (!file) throw std::runtime_error("cannot open report file: " + path);
        nlohmann::json j;
        file >> j;
        return from_json(j);
    }
};

/// Post-burn-in samples as CSV: one column per parameter plus lnL,
/// chains concatenated in index order with a chain id column.
inline std::string chains_to_csv(const std::vector<Chain>& chains,
                                 const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "chain";
    for (const auto& name : names) out << "," << name;
    out << ",lnl\n";
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const Chain trimmed = trim_burn_in(chains[c]);
        for (std::size_t s = 0; s < trimmed.samples.size(); ++s) {
            out << c;
            for (double value : trimmed.samples[s]) out << "," << format_number(value);
            out << "," << format_number(trimmed.lnl[s]) << "\n";
        }
    }
    return out.str();
}

}  // namespace refl
