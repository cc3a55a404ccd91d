#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "refl/types.hpp"

namespace refl {

/// Named fit parameters with box bounds.
struct ParameterSpace {
    std::vector<std::string> names;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return names.size(); }

    void validate() const {
        if (lower.size() != names.size() || upper.size() != names.size())
            throw std::invalid_argument("parameter space: length mismatch");
        for (std::size_t i = 0; i < names.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument("parameter '" + names[i] + "': lower must be < upper");
    }

    bool contains(const std::vector<double>& theta) const {
        if (theta.size() != names.size()) return false;
        for (std::size_t i = 0; i < theta.size(); ++i)
            if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
        return true;
    }
};

/// Measured curve with mandatory per-point uncertainties.
struct Dataset {
    ReflectivityCurve curve;

    void validate() const {
        curve.validate();
        if (!curve.dr) throw std::invalid_argument("dataset requires uncertainties");
    }

    std::size_t size() const { return curve.q.size(); }
};

/// Forward model: parameter vector -> model values on a fixed x/q grid.
using ForwardModel =
    std::function<std::vector<double>(const std::vector<double>& theta)>;

/// Bundles data, bounded parameters and a forward model into the Gaussian
/// log-likelihood that DE and MCMC maximize/sample.
struct Objective {
    Dataset dataset;
    ParameterSpace space;
    ForwardModel forward;

    /// lnL(theta) = -0.5 * sum_q [ pull(q)^2 + ln(2 pi dR(q)^2) ].
    /// Out-of-bounds theta and non-finite model output both map to -inf,
    /// which doubles as a uniform prior on the box.
    double log_likelihood(const std::vector<double>& theta) const {
        if (!space.contains(theta)) return -std::numeric_limits<double>::infinity();
        const std::vector<double> model = forward(theta);
        const auto& r = dataset.curve.r;
        const auto& dr = *dataset.curve.dr;
        if (model.size() != r.size())
            throw std::logic_error("forward model returned wrong number of points");
        double lnl = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!std::isfinite(model[i])) return -std::numeric_limits<double>::infinity();
            const double pull = (r[i] - model[i]) / dr[i];
            lnl += pull * pull + std::log(2.0 * std::numbers::pi * dr[i] * dr[i]);
        }
        return -0.5 * lnl;
    }

    double operator()(const std::vector<double>& theta) const { return log_likelihood(theta); }
};

/// A plain bounded log-likelihood function, for objectives that are not
/// data fits (e.g. analytic test surfaces).
struct FunctionObjective {
    ParameterSpace space;
    std::function<double(const std::vector<double>&)> fn;

    double log_likelihood(const std::vector<double>& theta) const {
        if (!space.contains(theta)) return -std::numeric_limits<double>::infinity();
        return fn(theta);
    }

    double operator()(const std::vector<double>& theta) const { return log_likelihood(theta); }
};

}  // namespace refl
