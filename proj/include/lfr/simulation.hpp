#pragma once

#include "lfr/bayes.hpp"
#include "lfr/censoring.hpp"
#include "lfr/common.hpp"
#include "lfr/distribution.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lfr {

// Monte Carlo study: draw LFR samples, censor, fit by ML and MCMC, and
// aggregate MSE / average interval length / coverage at the 95% level.

struct StudyConfig {
    int n = 30;
    double T = 1.0;
    // sparse removal spec, 1-based: {index, count}, unlisted indices are 0
    std::vector<std::pair<int, int>> removal_spec;
    int a_r = 1;  // overall index of the r-th retained failure
    LfrParams true_params;
    int replications = 1000;
    std::uint64_t seed = 1;
    McmcConfig mcmc;

    void validate() const;
    // dense scheme implied by (n, T, removal_spec, a_r); throws if infeasible
    CensoringScheme scheme() const;
};

struct EstimatorStats {
    double mean_estimate = 0.0;
    double mse = 0.0;
    double mse_se = 0.0;  // Monte Carlo standard error of the MSE
    double acil = 0.0;    // average 95% interval length
    double cp = 0.0;      // fraction of intervals covering the true value
};

struct StudyResult {
    StudyConfig config;
    EstimatorStats mle_alpha, mle_beta;
    EstimatorStats bayes_alpha, bayes_beta;
    int replications_used = 0;
    int failures = 0;  // non-converged or degenerate fits, excluded above
    bool high_failure_warning = false;
};

StudyResult run_study(const StudyConfig& config, Exec exec = Exec::parallel);

// format: "csv" (default, also chosen by an empty string) or "table"
std::string emit_study_table(const std::vector<StudyResult>& results,
                             const std::string& format = "csv");

}  // namespace lfr
