#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "refl/inference.hpp"
#include "refl/rng.hpp"

namespace refl {

/// Negative of the standard 2-D Ackley function (a = 20, b = 0.2, c = 2 pi).
/// Global maximum 0 at the origin; many local maxima elsewhere, which is
/// what makes it a useful optimizer stress test.
inline double negative_ackley(double x, double y) {
    constexpr double a = 20.0;
    constexpr double b = 0.2;
    constexpr double c = 2.0 * std::numbers::pi;
    const double term1 = -a * std::exp(-b * std::sqrt(0.5 * (x * x + y * y)));
    const double term2 = -std::exp(0.5 * (std::cos(c * x) + std::cos(c * y)));
    const double ackley = term1 + term2 + a + std::numbers::e;
    return -ackley;
}

/// Two overlapping Gaussians parameterized by their areas (theta1, theta2)
/// and centers (theta3, theta4); the common width is fixed, not fitted.
struct GaussianPairModel {
    double area1 = 10.0;
    double area2 = 6.0;
    double center1 = -1.0;
    double center2 = 1.0;
    double width = 1.0;

    void validate() const {
        if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be > 0");
    }
};

/// y(x) = theta1 N(x; theta3, w) + theta2 N(x; theta4, w) with unit-area
/// normal densities, so the amplitudes are the integrals.
inline std::vector<double> gaussian_pair_curve(const GaussianPairModel& model,
                                               const std::vector<double>& x) {
    model.validate();
    const double norm = 1.0 / (model.width * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u1 = (x[i] - model.center1) / model.width;
        const double u2 = (x[i] - model.center2) / model.width;
        y[i] = model.area1 * norm * std::exp(-0.5 * u1 * u1) +
               model.area2 * norm * std::exp(-0.5 * u2 * u2);
    }
    return y;
}

/// Synthetic noisy dataset: y_obs = y + N(0, delta) with
/// delta = max(noise_fraction * |y|, floor), delta stored as the
/// per-point uncertainty.
inline Dataset synthesize_gaussian_pair_dataset(const GaussianPairModel& model,
                                                const std::vector<double>& x,
                                                double noise_fraction, double floor,
                                                std::uint64_t seed) {
    if (noise_fraction < 0.0) throw std::invalid_argument("noise_fraction must be >= 0");
    if (!(floor > 0.0)) throw std::invalid_argument("noise floor must be > 0");
    const std::vector<double> y = gaussian_pair_curve(model, x);
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Dataset dataset;
    dataset.curve.q = x;
    dataset.curve.r.resize(x.size());
    dataset.curve.dr = std::vector<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = std::max(noise_fraction * std::abs(y[i]), floor);
        dataset.curve.r[i] = y[i] + delta * gauss(rng);
        (*dataset.curve.dr)[i] = delta;
    }
    return dataset;
}

/// Objective for fitting the four free Gaussian-pair parameters
/// (area1, area2, center1, center2) to a dataset on its x grid.
inline Objective gaussian_pair_objective(const Dataset& dataset, double width,
                                         const ParameterSpace& space) {
    dataset.validate();
    space.validate();
    if (space.size() != 4)
        throw std::invalid_argument("gaussian pair fit has exactly 4 parameters");
    Objective objective;
    objective.dataset = dataset;
    objective.space = space;
    const std::vector<double> x = dataset.curve.q;
    objective.forward = [x, width](const std::vector<double>& theta) {
        GaussianPairModel m;
        m.area1 = theta[0];
        m.area2 = theta[1];
        m.center1 = theta[2];
        m.center2 = theta[3];
        m.width = width;
        return gaussian_pair_curve(m, x);
    };
    return objective;
}

}  // namespace refl
