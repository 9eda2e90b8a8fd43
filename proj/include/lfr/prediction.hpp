#pragma once

#include "lfr/bayes.hpp"
#include "lfr/common.hpp"
#include "lfr/distribution.hpp"

namespace lfr {

// Two-sample Bayesian prediction for the s-th order statistic Y_{s:m} of a
// future sample of size m, mixing the closed-form order-statistic density
// and CDF over a posterior chain.

struct PredictionRequest {
    int s = 1;         // 1-based rank of the future order statistic
    int m_future = 1;  // future sample size
    double level = 0.95;
    PosteriorChain chain;
};

struct PredictionResult {
    double point = 0.0;  // posterior-mean (squared-error-loss) predictor
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
};

// log of s*C(m,s)*F^{s-1}*(1-F)^{m-s}*f evaluated stably; -inf where the
// density vanishes.
double order_stat_log_density(const LfrParams& params, int s, int m_future, double y);
double order_stat_density(const LfrParams& params, int s, int m_future, double y);

// P(Y_{s:m} <= y) via the positive-term binomial tail sum.
double order_stat_cdf(const LfrParams& params, int s, int m_future, double y);

double predictive_density(const PosteriorChain& chain, int s, int m_future, double y,
                          Exec exec = Exec::parallel);
double predictive_cdf(const PosteriorChain& chain, int s, int m_future, double y,
                      Exec exec = Exec::parallel);
double point_predictor(const PosteriorChain& chain, int s, int m_future,
                       Exec exec = Exec::parallel);
PredictionResult prediction_interval(const PosteriorChain& chain, int s, int m_future,
                                     double level, Exec exec = Exec::parallel);

PredictionResult predict(const PredictionRequest& request, Exec exec = Exec::parallel);

}  // namespace lfr
