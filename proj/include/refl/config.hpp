#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "refl/de.hpp"
#include "refl/inference.hpp"
#include "refl/kernel.hpp"
#include "refl/mcmc.hpp"
#include "refl/types.hpp"

namespace refl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A free parameter: which layer field varies and over what range.
struct FitEntry {
    std::string layer;
    std::string field;  // thickness | sld | roughness
    double lower = 0.0;
    double upper = 0.0;
};

/// Parsed model description: the layer stack, the free parameters, and
/// optimizer/sampler settings with defaults applied.
struct ModelConfig {
    LayeredStructure structure;
    std::vector<FitEntry> fit;
    DEConfig de;
    MCMCConfig mcmc;

    std::size_t layer_index(const std::string& name) const {
        for (std::size_t i = 0; i < structure.layers.size(); ++i)
            if (structure.layers[i].name == name) return i;
        throw ConfigError("fit entry references unknown layer '" + name + "'");
    }

    ParameterSpace parameter_space() const {
        ParameterSpace space;
        for (const auto& entry : fit) {
            space.names.push_back(entry.layer + "." + entry.field);
            space.lower.push_back(entry.lower);
            space.upper.push_back(entry.upper);
        }
        space.validate();
        return space;
    }

    /// Applies a parameter vector to a copy of the layer stack.
    LayeredStructure bind(const std::vector<double>& theta) const {
        if (theta.size() != fit.size())
            throw std::invalid_argument("bind: parameter count mismatch");
        LayeredStructure bound = structure;
        for (std::size_t i = 0; i < fit.size(); ++i) {
            Layer& layer = bound.layers[layer_index(fit[i].layer)];
            if (fit[i].field == "thickness")
                layer.thickness = theta[i];
            else if (fit[i].field == "sld")
                layer.sld = theta[i];
            else if (fit[i].field == "roughness")
                layer.roughness_top = theta[i];
            else
                throw ConfigError("unknown fit field '" + fit[i].field + "'");
        }
        return bound;
    }
};

namespace detail {

struct TomlLine {
    std::size_t number;
    std::string section;  // "" for top level
    bool section_is_array = false;
    std::string key;
    std::string value;
};

[[noreturn]] inline void config_fail(std::size_t line, const std::string& msg) {
    std::ostringstream out;
    out << "config line " << line << ": " << msg;
    throw ConfigError(out.str());
}

inline std::string strip(const std::string& text) {
    auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

inline double to_number(const std::string& value, std::size_t line) {
    std::size_t consumed = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != value.size()) config_fail(line, "expected a number, got '" + value + "'");
    return parsed;
}

inline std::string to_string_value(const std::string& value, std::size_t line) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        return value.substr(1, value.size() - 2);
    config_fail(line, "expected a quoted string, got '" + value + "'");
}

}  // namespace detail

/// Reads the TOML-style model config. Supported syntax: '#' comments,
/// [table] and [[array-of-tables]] headers, key = value with numbers,
/// quoted strings and booleans. Unknown keys and sections are errors.
inline ModelConfig read_model_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file: " + path);

    ModelConfig config;
    // Defaults: k_m = k_r = 0.5, population 20, 100 iterations,
    // mcmc 10000 samples with 2500 burn-in.
    config.de = DEConfig{};
    config.mcmc = MCMCConfig{};

    std::string section;
    Layer* current_layer = nullptr;
    FitEntry* current_fit = nullptr;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(file, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::strip(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            const bool is_array = line.rfind("[[", 0) == 0;
            const std::string close = is_array ? "]]" : "]";
            if (line.substr(line.size() - close.size()) != close)
                detail::config_fail(line_no, "malformed section header");
            const std::string name = detail::strip(
                line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1)));
            if (name == "layers" && is_array) {
                config.structure.layers.emplace_back();
                current_layer = &config.structure.layers.back();
                current_fit = nullptr;
            } else if (name == "fit" && is_array) {
                config.fit.emplace_back();
                current_fit = &config.fit.back();
                current_layer = nullptr;
            } else if ((name == "de" || name == "mcmc") && !is_array) {
                current_layer = nullptr;
                current_fit = nullptr;
            } else {
                detail::config_fail(line_no, "unknown section '" + name + "'");
            }
            section = name;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) detail::config_fail(line_no, "expected key = value");
        const std::string key = detail::strip(line.substr(0, eq));
        const std::string value = detail::strip(line.substr(eq + 1));
        if (key.empty() || value.empty()) detail::config_fail(line_no, "expected key = value");

        if (section == "layers") {
            if (key == "name")
                current_layer->name = detail::to_string_value(value, line_no);
            else if (key == "thickness")
                current_layer->thickness = detail::to_number(value, line_no);
            else if (key == "sld")
                current_layer->sld = detail::to_number(value, line_no);
            else if (key == "roughness")
                current_layer->roughness_top = detail::to_number(value, line_no);
            else
                detail::config_fail(line_no, "unknown layer key '" + key + "'");
        } else if (section == "fit") {
            if (key == "layer")
                current_fit->layer = detail::to_string_value(value, line_no);
            else if (key == "field")
                current_fit->field = detail::to_string_value(value, line_no);
            else if (key == "lower")
                current_fit->lower = detail::to_number(value, line_no);
            else if (key == "upper")
                current_fit->upper = detail::to_number(value, line_no);
            else
                detail::config_fail(line_no, "unknown fit key '" + key + "'");
        } else if (section == "de") {
            if (key == "k_m")
                config.de.mutation = detail::to_number(value, line_no);
            else if (key == "k_r")
                config.de.recombination = detail::to_number(value, line_no);
            else if (key == "population")
                config.de.population_size =
                    static_cast<std::size_t>(detail::to_number(value, line_no));
            else if (key == "iterations")
                config.de.max_iterations =
                    static_cast<std::size_t>(detail::to_number(value, line_no));
            else if (key == "tol")
                config.de.tol = detail::to_number(value, line_no);
            else
                detail::config_fail(line_no, "unknown de key '" + key + "'");
        } else if (section == "mcmc") {
            if (key == "n_samples")
                config.mcmc.n_samples =
                    static_cast<std::size_t>(detail::to_number(value, line_no));
            else if (key == "burn_in")
                config.mcmc.burn_in =
                    static_cast<std::size_t>(detail::to_number(value, line_no));
            else if (key == "n_chains")
                config.mcmc.n_chains =
                    static_cast<std::size_t>(detail::to_number(value, line_no));
            else if (key == "tune_steps")
                config.mcmc.tune_steps = (value == "true");
            else
                detail::config_fail(line_no, "unknown mcmc key '" + key + "'");
        } else {
            detail::config_fail(line_no, "key '" + key + "' outside any section");
        }
    }

    if (config.structure.layers.empty())
        throw ConfigError(path + ": missing [[layers]] section");
    try {
        config.structure.validate();
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    for (const auto& entry : config.fit) {
        config.layer_index(entry.layer);  // throws on unknown layer
        if (entry.field != "thickness" && entry.field != "sld" && entry.field != "roughness")
            throw ConfigError("fit entry for layer '" + entry.layer + "': unknown field '" +
                              entry.field + "'");
        if (!(entry.lower < entry.upper))
            throw ConfigError("fit entry " + entry.layer + "." + entry.field +
                              ": lower must be < upper");
    }
    try {
        config.de.validate();
        config.mcmc.validate();
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config;
}

/// Objective for fitting a layered model to measured reflectivity via the
/// dynamical kernel.
inline Objective reflectivity_objective(const ModelConfig& config, const Dataset& dataset) {
    dataset.validate();
    Objective objective;
    objective.dataset = dataset;
    objective.space = config.parameter_space();
    WavevectorGrid grid{dataset.curve.q};
    objective.forward = [config, grid](const std::vector<double>& theta) {
        return dynamical_reflectivity(config.bind(theta), grid).r;
    };
    return objective;
}

}  // namespace refl
