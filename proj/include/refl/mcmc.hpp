#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "refl/inference.hpp"
#include "refl/rng.hpp"

namespace refl {

struct MCMCConfig {
    std::vector<double> step_scale;  // per-parameter; empty = 2% of bound width
    std::size_t n_samples = 10000;
    std::size_t burn_in = 2500;
    std::uint64_t seed = 42;
    std::size_t n_chains = 1;
    bool tune_steps = true;  // burn-in only; kernel is fixed afterwards

    void validate() const {
        if (burn_in >= n_samples)
            throw std::invalid_argument("burn_in must be < n_samples");
        if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
        for (double a : step_scale)
            if (!(a > 0.0)) throw std::invalid_argument("step scales must be > 0");
    }

    std::vector<double> resolved_steps(const ParameterSpace& space) const {
        if (!step_scale.empty()) {
            if (step_scale.size() != space.size())
                throw std::invalid_argument("step_scale length mismatch");
            return step_scale;
        }
        std::vector<double> steps(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            steps[i] = 0.02 * (space.upper[i] - space.lower[i]);
        return steps;
    }
};

struct Chain {
    std::vector<std::vector<double>> samples;  // n_samples x n_params
    std::vector<double> lnl;
    std::vector<bool> accepted;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;

    double acceptance_rate() const {
        if (accepted.empty()) return 0.0;
        return static_cast<double>(std::count(accepted.begin(), accepted.end(), true)) /
               static_cast<double>(accepted.size());
    }
};

struct PosteriorSummary {
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<double> ci_lower;  // 2.5% quantile
    std::vector<double> ci_upper;  // 97.5% quantile
    std::vector<std::vector<double>> correlation;
    bool degenerate = false;  // some parameter had zero variance
    std::size_t n_samples = 0;
};

/// One Metropolis update. Proposes theta + step .* N(0,1) and accepts with
/// probability min(1, exp(lnL' - lnL)); out-of-bounds proposals carry
/// lnL = -inf and are always rejected.
template <typename ObjectiveT>
std::tuple<std::vector<double>, double, bool> metropolis_step(
    const ObjectiveT& objective, const std::vector<double>& theta, double lnl_theta,
    const std::vector<double>& step, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> proposal(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
        proposal[i] = theta[i] + step[i] * gauss(rng);
    const double lnl_prop = objective(proposal);
    const double u = unit(rng);
    const bool accept = std::isfinite(lnl_prop) && u < std::exp(std::min(0.0, lnl_prop - lnl_theta));
    if (accept) return {std::move(proposal), lnl_prop, true};
    return {theta, lnl_theta, false};
}

/// Random-walk Metropolis chain. During burn-in, when tuning is enabled,
/// step sizes are rescaled by 1.1 / 0.9 every 100 steps to steer the
/// recent acceptance rate into [0.2, 0.5]; after burn-in the kernel is
/// fixed. Rejected steps repeat the current sample.
template <typename ObjectiveT>
Chain run_chain(const ObjectiveT& objective, const ParameterSpace& space,
                const std::vector<double>& start, const MCMCConfig& config,
                std::uint64_t chain_seed) {
    config.validate();
    if (!space.contains(start))
        throw std::domain_error("run_chain: start is outside the parameter bounds");

    Rng rng(chain_seed);
    std::vector<double> step = config.resolved_steps(space);
    std::vector<double> theta = start;
    double lnl = objective(theta);
    if (!std::isfinite(lnl))
        throw std::domain_error("run_chain: objective is -inf at the start point");

    Chain chain;
    chain.burn_in = config.burn_in;
    chain.seed = chain_seed;
    chain.samples.reserve(config.n_samples);
    chain.lnl.reserve(config.n_samples);
    chain.accepted.reserve(config.n_samples);

    std::size_t window_accepts = 0;
    for (std::size_t s = 0; s < config.n_samples; ++s) {
        auto [next, next_lnl, accepted] = metropolis_step(objective, theta, lnl, step, rng);
        theta = std::move(next);
        lnl = next_lnl;
        chain.samples.push_back(theta);
        chain.lnl.push_back(lnl);
        chain.accepted.push_back(accepted);

        if (config.tune_steps && s < config.burn_in) {
            if (accepted) ++window_accepts;
            if ((s + 1) % 100 == 0) {
                const double rate = static_cast<double>(window_accepts) / 100.0;
                if (rate < 0.2)
                    for (double& a : step) a *= 0.9;
                else if (rate > 0.5)
                    for (double& a : step) a *= 1.1;
                window_accepts = 0;
            }
        }
    }
    return chain;
}

/// Convenience: one sub-seeded chain per config.n_chains, starts jittered
/// from `start` by one step-size normal draw each (the first chain starts
/// exactly at `start`).
template <typename ObjectiveT>
std::vector<Chain> run_chains(const ObjectiveT& objective, const ParameterSpace& space,
                              const std::vector<double>& start, const MCMCConfig& config) {
    config.validate();
    std::vector<Chain> chains;
    const std::vector<double> step = config.resolved_steps(space);
    for (std::size_t c = 0; c < config.n_chains; ++c) {
        const std::uint64_t seed = derive_seed(config.seed, "mcmc/chain" + std::to_string(c));
        std::vector<double> chain_start = start;
        if (c > 0) {
            Rng jitter_rng(derive_seed(config.seed, "mcmc/jitter" + std::to_string(c)));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t i = 0; i < chain_start.size(); ++i) {
                chain_start[i] += step[i] * gauss(jitter_rng);
                chain_start[i] = std::clamp(chain_start[i], space.lower[i], space.upper[i]);
            }
        }
        chains.push_back(run_chain(objective, space, chain_start, config, seed));
    }
    return chains;
}

inline Chain trim_burn_in(const Chain& chain) {
    Chain trimmed;
    const std::size_t n = std::min(chain.burn_in, chain.samples.size());
    trimmed.samples.assign(chain.samples.begin() + n, chain.samples.end());
    trimmed.lnl.assign(chain.lnl.begin() + n, chain.lnl.end());
    trimmed.accepted.assign(chain.accepted.begin() + n, chain.accepted.end());
    trimmed.burn_in = 0;
    trimmed.seed = chain.seed;
    return trimmed;
}

namespace detail {

inline std::vector<std::vector<double>> pooled_samples(const std::vector<Chain>& chains) {
    std::vector<std::vector<double>> pooled;
    for (const auto& chain : chains) {
        const Chain trimmed = trim_burn_in(chain);
        pooled.insert(pooled.end(), trimmed.samples.begin(), trimmed.samples.end());
    }
    return pooled;
}

inline double quantile(std::vector<double> sorted, double p) {
    // sorted must be ascending; linear interpolation between order statistics
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace detail

/// Pooled post-burn-in moments, central 95% intervals and correlations.
/// Zero-variance parameters get correlation 0 and set the degeneracy flag.
inline PosteriorSummary summarize(const std::vector<Chain>& chains,
                                  const std::vector<std::string>& names = {}) {
    if (chains.empty()) throw std::domain_error("summarize: no chains");
    const auto pooled = detail::pooled_samples(chains);
    if (pooled.size() < 100)
        throw std::domain_error("summarize: need at least 100 post-burn-in samples");
    const std::size_t dim = pooled.front().size();
    const double n = static_cast<double>(pooled.size());

    PosteriorSummary summary;
    summary.names = names;
    summary.n_samples = pooled.size();
    summary.mean.assign(dim, 0.0);
    summary.stddev.assign(dim, 0.0);
    summary.ci_lower.resize(dim);
    summary.ci_upper.resize(dim);
    summary.correlation.assign(dim, std::vector<double>(dim, 0.0));

    for (const auto& s : pooled)
        for (std::size_t i = 0; i < dim; ++i) summary.mean[i] += s[i];
    for (double& m : summary.mean) m /= n;

    std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
    for (const auto& s : pooled)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = i; k < dim; ++k)
                cov[i][k] += (s[i] - summary.mean[i]) * (s[k] - summary.mean[k]);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = i; k < dim; ++k) {
            cov[i][k] /= n;
            cov[k][i] = cov[i][k];
        }

    for (std::size_t i = 0; i < dim; ++i) {
        summary.stddev[i] = std::sqrt(cov[i][i]);
        std::vector<double> column(pooled.size());
        for (std::size_t s = 0; s < pooled.size(); ++s) column[s] = pooled[s][i];
        std::sort(column.begin(), column.end());
        summary.ci_lower[i] = detail::quantile(column, 0.025);
        summary.ci_upper[i] = detail::quantile(column, 0.975);
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            if (i == k) {
                summary.correlation[i][k] = 1.0;
                continue;
            }
            const double denom = summary.stddev[i] * summary.stddev[k];
            if (denom == 0.0) {
                summary.correlation[i][k] = 0.0;
                summary.degenerate = true;
            } else {
                summary.correlation[i][k] = cov[i][k] / denom;
            }
        }
    return summary;
}

/// n_draws parameter vectors sampled uniformly without replacement from the
/// pooled post-burn-in samples, each pushed through the forward model.
template <typename ForwardT>
std::vector<std::vector<double>> posterior_predictive(const ForwardT& forward,
                                                      const std::vector<Chain>& chains,
                                                      std::size_t n_draws, Rng& rng) {
    const auto pooled = detail::pooled_samples(chains);
    if (n_draws > pooled.size())
        throw std::domain_error("posterior_predictive: not enough post-burn-in samples");
    std::vector<std::size_t> indices(pooled.size());
    std::iota(indices.begin(), indices.end(), 0u);
    // partial Fisher-Yates for the first n_draws slots
    std::vector<std::vector<double>> curves;
    curves.reserve(n_draws);
    for (std::size_t d = 0; d < n_draws; ++d) {
        std::uniform_int_distribution<std::size_t> pick(d, indices.size() - 1);
        std::swap(indices[d], indices[pick(rng)]);
        curves.push_back(forward(pooled[indices[d]]));
    }
    return curves;
}

}  // namespace refl
