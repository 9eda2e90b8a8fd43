#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace lfr {

// Parameters of the linear failure rate (LFR) distribution.
// Hazard is alpha + beta*x, so the density is
//   f(x) = (alpha + beta*x) * exp(-(alpha*x + beta*x^2/2)),  x >= 0.
// Both parameters are strictly positive; the exponential sub-model is
// reached only as a numerical limit (beta -> 0+), never by beta == 0.
struct LfrParams {
    double alpha = 1.0;
    double beta = 1.0;

    // Throws std::domain_error unless both entries are positive and finite.
    void validate() const;
};

// Cumulative hazard Lambda(x) = alpha*x + beta*x^2/2.
double cum_hazard(const LfrParams& p, double x);

double pdf(const LfrParams& p, double x);
double cdf(const LfrParams& p, double x);
double survival(const LfrParams& p, double x);
double hazard(const LfrParams& p, double x);

// Inverse of cdf. Solves alpha*x + beta*x^2/2 = -ln(1-u) for the positive
// root; a stable form is used in the near-exponential regime where the
// textbook root (-alpha + sqrt(alpha^2 + 2*beta*t))/beta cancels.
double quantile(const LfrParams& p, double u);

using Rng = std::mt19937_64;

// Uniform in [0,1) from the generator's top 53 bits. The standard
// distribution objects are implementation-defined, which would break
// reproducibility of seeded streams across toolchains.
double uniform01(Rng& rng);

// Standard normal via Box-Muller (cosine branch only, stateless).
double normal01(Rng& rng);

// n i.i.d. draws by inversion, returned sorted ascending.
std::vector<double> sample(const LfrParams& p, Rng& rng, std::size_t n);

}  // namespace lfr
