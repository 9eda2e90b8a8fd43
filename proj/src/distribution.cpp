#include "lfr/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfr {

void LfrParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error("LfrParams: alpha must be positive and finite");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::domain_error("LfrParams: beta must be positive and finite");
}

namespace {
void check_x(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("LFR: x must be nonnegative and finite");
}
}  // namespace

double cum_hazard(const LfrParams& p, double x) {
    return p.alpha * x + 0.5 * p.beta * x * x;
}

double pdf(const LfrParams& p, double x) {
    p.validate();
    check_x(x);
    return (p.alpha + p.beta * x) * std::exp(-cum_hazard(p, x));
}

double cdf(const LfrParams& p, double x) {
    p.validate();
    check_x(x);
    return -std::expm1(-cum_hazard(p, x));
}

double survival(const LfrParams& p, double x) {
    p.validate();
    check_x(x);
    return std::exp(-cum_hazard(p, x));
}

double hazard(const LfrParams& p, double x) {
    p.validate();
    check_x(x);
    return p.alpha + p.beta * x;
}

double quantile(const LfrParams& p, double u) {
    p.validate();
    if (!(u >= 0.0) || u >= 1.0)
        throw std::domain_error("LFR quantile: u must lie in [0,1)");
    const double t = -std::log1p(-u);  // Lambda(x) = t
    const double a = p.alpha, b = p.beta;
    const double z = 2.0 * b * t / (a * a);
    if (z < 1e-8) {
        // near-exponential regime: the direct root cancels catastrophically,
        // expand sqrt(1+z) instead; relative error O(z^2)
        return (t / a) * (1.0 - 0.25 * z);
    }
    // rationalized root, no cancellation for any z
    return 2.0 * t / (a + std::sqrt(a * a + 2.0 * b * t));
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal01(Rng& rng) {
    const double u1 = 1.0 - uniform01(rng);  // (0,1]
    const double u2 = uniform01(rng);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::vector<double> sample(const LfrParams& p, Rng& rng, std::size_t n) {
    p.validate();
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    std::vector<double> out(n);
    for (auto& v : out) v = quantile(p, uniform01(rng));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace lfr
