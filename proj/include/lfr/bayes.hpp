#pragma once

#include "lfr/censoring.hpp"
#include "lfr/distribution.hpp"
#include "lfr/likelihood.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace lfr {

// Metropolis-Hastings-within-Gibbs sampler for the joint posterior under the
// independent Jeffreys-type prior pi(alpha, beta) ∝ 1/(alpha beta).

struct McmcConfig {
    int total_iterations = 11000;  // N, recorded draws
    int burn_in = 1000;            // M, dropped from posterior summaries
    // Normal random-walk proposal scales; values <= 0 mean "derive from the
    // asymptotic MLE standard errors of the supplied sample".
    double proposal_sd_alpha = 0.0;
    double proposal_sd_beta = 0.0;
    std::uint64_t seed = 1;
    std::optional<LfrParams> init;  // default: initialise at the MLE

    void validate() const;
};

struct PosteriorChain {
    std::vector<double> alpha_draws;  // length N, includes burn-in
    std::vector<double> beta_draws;
    int burn_in = 0;
    double acceptance_rate_alpha = 0.0;
    double acceptance_rate_beta = 0.0;
};

enum class Param { alpha, beta };

double log_posterior(const LfrParams& p, const MhcSample& s);

PosteriorChain run_mh_within_gibbs(const MhcSample& sample, const McmcConfig& config = {});

// Posterior mean under squared-error loss, burn-in removed.
LfrParams sel_estimate(const PosteriorChain& chain);

// Equal-tailed credible interval from the sorted retained draws; the order
// statistics picked are ceil(K*theta/2) and ceil(K*(1-theta/2)), 1-based.
ConfidenceInterval credible_interval(const PosteriorChain& chain, Param which, double level);

void chain_to_csv(const PosteriorChain& chain, std::ostream& out);

}  // namespace lfr
