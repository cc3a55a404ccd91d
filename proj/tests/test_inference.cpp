#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "refl/inference.hpp"

using namespace refl;
using Catch::Approx;

namespace {

// Identity forward model: theta directly gives the model values.
Objective make_objective(std::vector<double> r, std::vector<double> dr,
                         std::size_t n_params, double lo, double hi) {
    Objective objective;
    objective.dataset.curve.q.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) objective.dataset.curve.q[i] = 0.01 * (i + 1);
    objective.dataset.curve.r = std::move(r);
    objective.dataset.curve.dr = std::move(dr);
    objective.space.names.resize(n_params, "p");
    objective.space.lower.assign(n_params, lo);
    objective.space.upper.assign(n_params, hi);
    return objective;
}

double normalization(const std::vector<double>& dr) {
    double sum = 0.0;
    for (double d : dr) sum += std::log(2.0 * std::numbers::pi * d * d);
    return -0.5 * sum;
}

}  // namespace

TEST_CASE("log_likelihood values") {
    SECTION("perfect model leaves only the normalization term") {
        auto objective = make_objective({1.0, 0.5, 0.2}, {0.1, 0.05, 0.02}, 3, -10.0, 10.0);
        objective.forward = [](const std::vector<double>& t) { return t; };
        const double lnl = objective.log_likelihood({1.0, 0.5, 0.2});
        CHECK(lnl == Approx(normalization({0.1, 0.05, 0.02})));
    }
    SECTION("single point with dr = 1/sqrt(2 pi) cancels exactly") {
        const double dr = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        auto objective = make_objective({1.0}, {dr}, 1, -10.0, 10.0);
        objective.forward = [](const std::vector<double>& t) { return t; };
        CHECK(objective.log_likelihood({1.0}) == Approx(0.0).margin(1e-14));
    }
    SECTION("hand-set residuals of 1, 2 and 0 sigma") {
        const std::vector<double> dr{0.1, 0.2, 0.3};
        auto objective = make_objective({1.0, 1.0, 1.0}, dr, 3, -10.0, 10.0);
        objective.forward = [](const std::vector<double>& t) { return t; };
        // model offset by 1 sigma, 2 sigma, 0 sigma
        const double lnl = objective.log_likelihood({1.0 - 0.1, 1.0 - 0.4, 1.0});
        CHECK(lnl == Approx(-2.5 + normalization(dr)));
    }
    SECTION("out-of-bounds theta returns -inf") {
        auto objective = make_objective({1.0}, {0.1}, 1, 0.0, 1.0);
        objective.forward = [](const std::vector<double>& t) { return t; };
        CHECK(std::isinf(objective.log_likelihood({2.0})));
        CHECK(objective.log_likelihood({2.0}) < 0.0);
    }
    SECTION("non-finite model output returns -inf") {
        auto objective = make_objective({1.0}, {0.1}, 1, -10.0, 10.0);
        objective.forward = [](const std::vector<double>&) {
            return std::vector<double>{std::nan("")};
        };
        CHECK(std::isinf(objective.log_likelihood({0.5})));
    }
}

TEST_CASE("log_likelihood properties") {
    SECTION("scaling all dr shifts lnL by a constant, argmax unchanged") {
        const double c = 3.7;
        auto base = make_objective({0.3, 0.7}, {0.1, 0.1}, 2, -2.0, 2.0);
        base.forward = [](const std::vector<double>& t) { return t; };
        auto scaled = base;
        scaled.dataset.curve.dr = std::vector<double>{0.1 * c, 0.1 * c};

        double best_base = -1e300, best_scaled = -1e300;
        std::vector<double> arg_base, arg_scaled;
        const double n = static_cast<double>(base.dataset.size());
        for (double a = -2.0; a <= 2.0; a += 0.05)
            for (double b = -2.0; b <= 2.0; b += 0.05) {
                const std::vector<double> theta{a, b};
                const double l0 = base.log_likelihood(theta);
                const double l1 = scaled.log_likelihood(theta);
                if (l0 > best_base) {
                    best_base = l0;
                    arg_base = theta;
                }
                if (l1 > best_scaled) {
                    best_scaled = l1;
                    arg_scaled = theta;
                }
            }
        CHECK(arg_base == arg_scaled);
        // at zero residual only the normalization term remains, so the
        // shift is exactly -N ln c there
        const std::vector<double> exact{0.3, 0.7};
        CHECK(scaled.log_likelihood(exact) - base.log_likelihood(exact) ==
              Approx(-n * std::log(c)).margin(1e-12));
    }
    SECTION("increasing a single residual strictly decreases lnL") {
        auto objective = make_objective({1.0, 1.0, 1.0}, {0.1, 0.1, 0.1}, 3, -10.0, 10.0);
        objective.forward = [](const std::vector<double>& t) { return t; };
        double prev = objective.log_likelihood({1.0, 1.0, 1.0});
        for (double off : {0.05, 0.1, 0.2, 0.5}) {
            const double lnl = objective.log_likelihood({1.0, 1.0 + off, 1.0});
            CHECK(lnl < prev);
            prev = lnl;
        }
    }
    SECTION("repeated evaluation is bit-identical") {
        auto objective = make_objective({0.9, 0.4}, {0.03, 0.07}, 2, -10.0, 10.0);
        objective.forward = [](const std::vector<double>& t) { return t; };
        const std::vector<double> theta{0.8123456, 0.3987654};
        CHECK(objective.log_likelihood(theta) == objective.log_likelihood(theta));
    }
}
