#include "lfr/prediction.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lfr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rank(int s, int m) {
    if (m < 1) throw std::domain_error("order statistic: future sample size must be >= 1");
    if (s < 1 || s > m) throw std::domain_error("order statistic: rank must lie in [1, m]");
}

void check_y(double y) {
    if (!(y >= 0.0) || !std::isfinite(y))
        throw std::domain_error("order statistic: y must be finite and nonnegative");
}

void check_chain(const PosteriorChain& chain) {
    if (chain.alpha_draws.size() != chain.beta_draws.size())
        throw std::invalid_argument("prediction: alpha/beta draw lengths differ");
    if (chain.burn_in < 0 || static_cast<std::size_t>(chain.burn_in) >= chain.alpha_draws.size())
        throw std::invalid_argument("prediction: chain empty after burn-in");
}

double log_comb(int m, int j) {
    return std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0);
}

// Average per_draw over the retained chain: fill a per-index buffer (the
// parallel part), then reduce in index order so the serial and parallel
// execution paths return bitwise-identical sums.
template <typename F>
double chain_average(const PosteriorChain& chain, Exec exec, F&& per_draw) {
    check_chain(chain);
    const std::size_t k0 = static_cast<std::size_t>(chain.burn_in);
    const std::size_t K = chain.alpha_draws.size() - k0;
    std::vector<double> buf(K);
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long k = 0; k < static_cast<long long>(K); ++k)
            buf[k] = per_draw(LfrParams{chain.alpha_draws[k0 + k], chain.beta_draws[k0 + k]});
    } else {
        for (std::size_t k = 0; k < K; ++k)
            buf[k] = per_draw(LfrParams{chain.alpha_draws[k0 + k], chain.beta_draws[k0 + k]});
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) acc += buf[k];
    return acc / static_cast<double>(K);
}

double draw_mean(const LfrParams& p, int s, int m) {
    const double hi = quantile(p, 1.0 - 1e-9);
    const auto f = [&](double y) { return y * order_stat_density(p, s, m, y); };
    double err = 0.0;
    const double val =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, hi, 15, 1e-10, &err);
    if (!(err <= 1e-8 * (1.0 + std::abs(val))))
        throw std::runtime_error("point_predictor: quadrature did not reach tolerance");
    return val;
}

double solve_predictive_quantile(const PosteriorChain& chain, int s, int m, double target,
                                 double hi, Exec exec) {
    const auto g = [&](double y) { return predictive_cdf(chain, s, m, y, exec); };
    double a = 0.0, fa = -target;
    double b = hi, fb = g(hi) - target;
    if (fb < 0.0)
        throw std::runtime_error("prediction_interval: root not bracketed below the upper bound");
    double mid = a, fm = fa;
    for (int k = 0; k < 80 && b - a > 1e-15 * std::max(1.0, b); ++k) {
        mid = 0.5 * (a + b);
        fm = g(mid) - target;
        if (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    // secant polish on the final bracket
    double y = fb != fa ? (a * fb - b * fa) / (fb - fa) : 0.5 * (a + b);
    for (int k = 0; k < 8; ++k) {
        y = std::clamp(y, 0.0, hi);
        const double fy = g(y) - target;
        if (std::abs(fy) <= 1e-8) break;
        if (fy < 0.0) {
            a = y;
            fa = fy;
        } else {
            b = y;
            fb = fy;
        }
        y = fb != fa ? (a * fb - b * fa) / (fb - fa) : 0.5 * (a + b);
    }
    return std::max(0.0, y);
}

}  // namespace

double order_stat_log_density(const LfrParams& params, int s, int m_future, double y) {
    params.validate();
    check_rank(s, m_future);
    check_y(y);
    const double lam = cum_hazard(params, y);
    double ll = log_comb(m_future, s) + std::log(static_cast<double>(s));
    ll += std::log(params.alpha + params.beta * y) - lam;  // ln f(y)
    ll -= (m_future - s) * lam;                            // (m-s) ln S(y)
    if (s > 1) {
        if (lam <= 0.0) return -kInf;  // F(y)=0 kills the density for s>1
        ll += (s - 1) * std::log(-std::expm1(-lam));
    }
    return ll;
}

double order_stat_density(const LfrParams& params, int s, int m_future, double y) {
    return std::exp(order_stat_log_density(params, s, m_future, y));
}

double order_stat_cdf(const LfrParams& params, int s, int m_future, double y) {
    params.validate();
    check_rank(s, m_future);
    check_y(y);
    const double lam = cum_hazard(params, y);
    if (lam <= 0.0) return 0.0;
    const double log_f = std::log(-std::expm1(-lam));
    double sum = 0.0;
    for (int j = s; j <= m_future; ++j)
        sum += std::exp(log_comb(m_future, j) + j * log_f - (m_future - j) * lam);
    return std::clamp(sum, 0.0, 1.0);
}

double predictive_density(const PosteriorChain& chain, int s, int m_future, double y, Exec exec) {
    check_rank(s, m_future);
    check_y(y);
    return chain_average(chain, exec,
                         [&](const LfrParams& p) { return order_stat_density(p, s, m_future, y); });
}

double predictive_cdf(const PosteriorChain& chain, int s, int m_future, double y, Exec exec) {
    check_rank(s, m_future);
    check_y(y);
    return chain_average(chain, exec,
                         [&](const LfrParams& p) { return order_stat_cdf(p, s, m_future, y); });
}

double point_predictor(const PosteriorChain& chain, int s, int m_future, Exec exec) {
    check_rank(s, m_future);
    return chain_average(chain, exec,
                         [&](const LfrParams& p) { return draw_mean(p, s, m_future); });
}

PredictionResult prediction_interval(const PosteriorChain& chain, int s, int m_future,
                                     double level, Exec exec) {
    check_rank(s, m_future);
    check_chain(chain);
    if (!(level > 0.0) || !(level < 1.0))
        throw std::domain_error("prediction_interval: level must lie in (0,1)");
    const double gamma = 1.0 - level;

    // Upper search bound: past the 1-1e-9 parent quantile of every retained
    // draw the predictive CDF is numerically 1.
    double hi = 0.0;
    for (std::size_t k = static_cast<std::size_t>(chain.burn_in); k < chain.alpha_draws.size();
         ++k)
        hi = std::max(hi, quantile({chain.alpha_draws[k], chain.beta_draws[k]}, 1.0 - 1e-9));

    PredictionResult res;
    // Eq-style equal-tail assignment, oriented so L <= U.
    res.lower = solve_predictive_quantile(chain, s, m_future, gamma / 2.0, hi, exec);
    res.upper = solve_predictive_quantile(chain, s, m_future, 1.0 - gamma / 2.0, hi, exec);
    res.point = point_predictor(chain, s, m_future, exec);
    res.level = level;
    if (!(res.lower <= res.upper) || !(res.lower >= 0.0))
        throw std::runtime_error("prediction_interval: endpoints out of order");
    return res;
}

PredictionResult predict(const PredictionRequest& request, Exec exec) {
    return prediction_interval(request.chain, request.s, request.m_future, request.level, exec);
}

}  // namespace lfr
