#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>

#include "lfr/censoring.hpp"
#include "lfr/distribution.hpp"

namespace lfr {

using Vec2 = std::array<double, 2>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

struct MleFit {
    LfrParams params{};
    double loglik = 0.0;
    double score_norm = 0.0;        // max-norm of the score at the solution
    Matrix2 observed_info{};        // negative Hessian at the solution
    Matrix2 cov{};                  // inverse of observed_info (NaN if singular and not converged)
    int iterations = 0;
    bool converged = false;
    bool boundary = false;          // optimizer terminated on the beta->0 ridge
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
};

struct SingularHessianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tied observations with a positive gap count between them put zero
// probability mass on an inter-observation interval; such samples are a
// data error under the model and are rejected up front.
struct DegenerateMassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Censored log-likelihood. Returns -inf when an inter-observation mass is
// zero or the parameters are outside the domain.
double log_likelihood(const LfrParams& p, const MhcSample& sample);

// Analytic gradient and Hessian of log_likelihood in (alpha, beta).
Vec2 score(const LfrParams& p, const MhcSample& sample);
Matrix2 hessian(const LfrParams& p, const MhcSample& sample);

struct FitOptions {
    std::optional<LfrParams> init;  // default: alpha0 = 1/mean, beta0 = 1e-3*alpha0/mean
    double tol = 1e-8;              // max-norm score tolerance
    int max_iter = 100;
};

// Newton-Raphson in log-parameter space with Hessian damping, Armijo line
// search, and a second start at a strong-beta initializer when the first
// run drifts onto the beta->0 boundary ridge. converged=false flags both
// non-convergence and boundary termination (see MleFit::boundary).
MleFit fit_mle(const MhcSample& sample, const FitOptions& options = {});

// Wald intervals at level 1-gamma, not truncated at zero.
std::pair<ConfidenceInterval, ConfidenceInterval> confidence_intervals(const MleFit& fit,
                                                                       double gamma);

}  // namespace lfr
