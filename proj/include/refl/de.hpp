#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "refl/inference.hpp"
#include "refl/rng.hpp"

namespace refl {

/// Hyperparameters for classical differential evolution
/// (best/1 mutation, binomial recombination, elitist selection).
struct DEConfig {
    double mutation = 0.5;       // k_m
    double recombination = 0.5;  // k_r, in [0, 1]
    std::size_t population_size = 20;
    std::size_t max_iterations = 100;
    std::uint64_t seed = 42;
    double tol = 0.0;  // early stop when std(lnL) < tol; 0 disables

    void validate() const {
        if (!(mutation > 0.0)) throw std::invalid_argument("k_m must be > 0");
        if (recombination < 0.0 || recombination > 1.0)
            throw std::invalid_argument("k_r must be in [0, 1]");
        if (population_size < 4)
            throw std::invalid_argument("population size must be >= 4");
        if (tol < 0.0) throw std::invalid_argument("tol must be >= 0");
    }
};

/// Candidate solutions plus their log-likelihoods. Members are stored
/// column-wise: members[j] is candidate j, a vector of n_params values.
struct Population {
    std::vector<std::vector<double>> members;
    std::vector<double> lnl;
    std::size_t best_index = 0;

    void update_best() {
        best_index = static_cast<std::size_t>(
            std::max_element(lnl.begin(), lnl.end()) - lnl.begin());
    }

    const std::vector<double>& best() const { return members[best_index]; }
    double best_lnl() const { return lnl[best_index]; }
};

struct GenerationRecord {
    std::vector<double> lnl;          // all candidates, this generation
    std::vector<double> best_theta;
    double best_lnl = 0.0;
};

enum class DETermination { max_iterations, converged };

struct DEResult {
    std::vector<double> best_theta;
    double best_lnl = 0.0;
    std::vector<GenerationRecord> history;
    std::size_t generations_run = 0;
    DETermination termination = DETermination::max_iterations;
};

namespace detail {

inline void clip_to_bounds(std::vector<double>& theta, const ParameterSpace& space) {
    for (std::size_t i = 0; i < theta.size(); ++i)
        theta[i] = std::clamp(theta[i], space.lower[i], space.upper[i]);
}

inline double lnl_spread(const std::vector<double>& lnl) {
    double mean = 0.0;
    std::size_t n = 0;
    for (double v : lnl)
        if (std::isfinite(v)) {
            mean += v;
            ++n;
        }
    if (n < 2) return std::numeric_limits<double>::infinity();
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : lnl)
        if (std::isfinite(v)) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace detail

/// Uniform draws within bounds, evaluated through the objective.
template <typename ObjectiveT>
Population initialize_population(const ObjectiveT& objective, const ParameterSpace& space,
                                 const DEConfig& config, Rng& rng) {
    space.validate();
    config.validate();
    Population pop;
    pop.members.resize(config.population_size);
    pop.lnl.resize(config.population_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& member : pop.members) {
        member.resize(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            member[i] = space.lower[i] + (space.upper[i] - space.lower[i]) * unit(rng);
    }
    bool any_finite = false;
    for (std::size_t j = 0; j < pop.members.size(); ++j) {
        pop.lnl[j] = objective(pop.members[j]);
        any_finite = any_finite || std::isfinite(pop.lnl[j]);
    }
    if (!any_finite)
        throw std::runtime_error("initialize_population: objective is -inf everywhere");
    pop.update_best();
    return pop;
}

/// Best/1 mutation: m_j = b + k_m (p_R1 - p_R2) with R1 != R2 != j,
/// each coordinate clipped to bounds.
inline std::vector<std::vector<double>> mutate(const Population& parent,
                                               const ParameterSpace& space,
                                               const DEConfig& config, Rng& rng) {
    const std::size_t n = parent.members.size();
    if (n < 4) throw std::invalid_argument("mutate: need at least 4 candidates");
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const auto& best = parent.best();
    std::vector<std::vector<double>> mutants(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t r1 = pick(rng);
        while (r1 == j) r1 = pick(rng);
        std::size_t r2 = pick(rng);
        while (r2 == j || r2 == r1) r2 = pick(rng);
        auto& m = mutants[j];
        m.resize(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            m[i] = best[i] + config.mutation * (parent.members[r1][i] - parent.members[r2][i]);
        detail::clip_to_bounds(m, space);
    }
    return mutants;
}

/// Binomial crossover: take the mutant coordinate where X < k_r, the
/// parent coordinate otherwise, with one coordinate per candidate always
/// forced from the mutant so offspring can differ even at k_r = 0.
inline std::vector<std::vector<double>> recombine(const Population& parent,
                                                  const std::vector<std::vector<double>>& mutants,
                                                  const DEConfig& config, Rng& rng) {
    const std::size_t n = parent.members.size();
    const std::size_t dim = parent.members.front().size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_coord(0, dim - 1);
    std::vector<std::vector<double>> offspring(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t forced = pick_coord(rng);
        auto& o = offspring[j];
        o.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const bool take_mutant = unit(rng) < config.recombination || i == forced;
            o[i] = take_mutant ? mutants[j][i] : parent.members[j][i];
        }
    }
    return offspring;
}

/// Elitist per-slot selection: the offspring replaces its parent only on
/// strict lnL improvement.
inline Population select(const Population& parent, const Population& offspring) {
    if (parent.members.size() != offspring.members.size())
        throw std::invalid_argument("select: population size mismatch");
    Population next = parent;
    for (std::size_t j = 0; j < parent.members.size(); ++j) {
        if (offspring.lnl[j] > parent.lnl[j]) {
            next.members[j] = offspring.members[j];
            next.lnl[j] = offspring.lnl[j];
        }
    }
    next.update_best();
    return next;
}

template <typename ObjectiveT>
DEResult run_de(const ObjectiveT& objective, const ParameterSpace& space,
                const DEConfig& config) {
    space.validate();
    config.validate();
    Rng rng(config.seed);
    Population pop = initialize_population(objective, space, config, rng);

    DEResult result;
    auto record = [&result](const Population& p) {
        result.history.push_back({p.lnl, p.best(), p.best_lnl()});
    };
    record(pop);

    for (std::size_t gen = 0; gen < config.max_iterations; ++gen) {
        const auto mutants = mutate(pop, space, config, rng);
        const auto trial = recombine(pop, mutants, config, rng);
        Population offspring;
        offspring.members = trial;
        offspring.lnl.resize(trial.size());
        for (std::size_t j = 0; j < trial.size(); ++j)
            offspring.lnl[j] = objective(trial[j]);
        offspring.update_best();
        pop = select(pop, offspring);
        record(pop);
        ++result.generations_run;
        if (config.tol > 0.0 && detail::lnl_spread(pop.lnl) < config.tol) {
            result.termination = DETermination::converged;
            break;
        }
    }
    result.best_theta = pop.best();
    result.best_lnl = pop.best_lnl();
    return result;
}

}  // namespace refl
