#include "lfr/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lfr {

void McmcConfig::validate() const {
    if (total_iterations < 1)
        throw std::invalid_argument("McmcConfig: total_iterations must be >= 1");
    if (burn_in < 0 || burn_in >= total_iterations)
        throw std::invalid_argument("McmcConfig: burn_in must lie in [0, total_iterations)");
    if (init) init->validate();
}

double log_posterior(const LfrParams& p, const MhcSample& s) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        return -std::numeric_limits<double>::infinity();
    return log_likelihood(p, s) - std::log(p.alpha) - std::log(p.beta);
}

PosteriorChain run_mh_within_gibbs(const MhcSample& sample, const McmcConfig& config) {
    config.validate();

    double sd_a = config.proposal_sd_alpha;
    double sd_b = config.proposal_sd_beta;
    LfrParams cur;
    if (config.init && sd_a > 0.0 && sd_b > 0.0) {
        cur = *config.init;
    } else {
        const MleFit fit = fit_mle(sample);
        if (sd_a <= 0.0) sd_a = std::sqrt(fit.cov[0][0]);
        if (sd_b <= 0.0) sd_b = std::sqrt(fit.cov[1][1]);
        if (config.init) {
            cur = *config.init;
        } else {
            // A boundary fit leaves beta at the optimizer floor; nudge the
            // chain into the interior so the initial density is usable.
            cur = {fit.params.alpha, std::max(fit.params.beta, 1e-8)};
        }
    }
    if (!(sd_a > 0.0) || !(sd_b > 0.0) || !std::isfinite(sd_a) || !std::isfinite(sd_b))
        throw std::invalid_argument("run_mh_within_gibbs: proposal scales must be positive finite");

    double lp = log_posterior(cur, sample);
    if (!std::isfinite(lp))
        throw std::invalid_argument(
            "run_mh_within_gibbs: initial point has zero posterior density");

    const int N = config.total_iterations;
    PosteriorChain chain;
    chain.alpha_draws.resize(N);
    chain.beta_draws.resize(N);
    chain.burn_in = config.burn_in;

    Rng rng(config.seed);
    long acc_a = 0, acc_b = 0;
    for (int j = 0; j < N; ++j) {
        const double a_star = cur.alpha + sd_a * normal01(rng);
        if (a_star > 0.0) {
            const double lp_star = log_posterior({a_star, cur.beta}, sample);
            if (std::log(uniform01(rng)) < lp_star - lp) {
                cur.alpha = a_star;
                lp = lp_star;
                ++acc_a;
            }
        }
        const double b_star = cur.beta + sd_b * normal01(rng);
        if (b_star > 0.0) {
            const double lp_star = log_posterior({cur.alpha, b_star}, sample);
            if (std::log(uniform01(rng)) < lp_star - lp) {
                cur.beta = b_star;
                lp = lp_star;
                ++acc_b;
            }
        }
        chain.alpha_draws[j] = cur.alpha;
        chain.beta_draws[j] = cur.beta;
    }
    chain.acceptance_rate_alpha = static_cast<double>(acc_a) / N;
    chain.acceptance_rate_beta = static_cast<double>(acc_b) / N;
    return chain;
}

namespace {

void check_chain(const PosteriorChain& chain) {
    if (chain.alpha_draws.size() != chain.beta_draws.size())
        throw std::invalid_argument("posterior chain: alpha/beta draw lengths differ");
    if (chain.burn_in < 0 || static_cast<std::size_t>(chain.burn_in) >= chain.alpha_draws.size())
        throw std::invalid_argument("posterior chain: burn-in exceeds chain length");
}

}  // namespace

LfrParams sel_estimate(const PosteriorChain& chain) {
    check_chain(chain);
    const auto k0 = static_cast<std::size_t>(chain.burn_in);
    const double K = static_cast<double>(chain.alpha_draws.size() - k0);
    const double ma =
        std::accumulate(chain.alpha_draws.begin() + chain.burn_in, chain.alpha_draws.end(), 0.0) /
        K;
    const double mb =
        std::accumulate(chain.beta_draws.begin() + chain.burn_in, chain.beta_draws.end(), 0.0) / K;
    return {ma, mb};
}

ConfidenceInterval credible_interval(const PosteriorChain& chain, Param which, double level) {
    check_chain(chain);
    if (!(level > 0.0) || level > 1.0)
        throw std::invalid_argument("credible_interval: level must lie in (0,1]");
    const auto& src = which == Param::alpha ? chain.alpha_draws : chain.beta_draws;
    std::vector<double> v(src.begin() + chain.burn_in, src.end());
    std::sort(v.begin(), v.end());
    const auto K = static_cast<double>(v.size());
    const double theta = 1.0 - level;
    // ceil with a tiny slack so e.g. K*0.025 computed as 250.0000000000002
    // still lands on order statistic 250
    const auto pick = [&](double q) {
        auto idx = static_cast<long>(std::ceil(K * q - 1e-9));
        idx = std::clamp(idx, 1L, static_cast<long>(v.size()));
        return v[static_cast<std::size_t>(idx - 1)];
    };
    return {pick(theta / 2.0), pick(1.0 - theta / 2.0), level};
}

void chain_to_csv(const PosteriorChain& chain, std::ostream& out) {
    check_chain(chain);
    out << "iteration,alpha,beta\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t j = 0; j < chain.alpha_draws.size(); ++j)
        out << (j + 1) << ',' << chain.alpha_draws[j] << ',' << chain.beta_draws[j] << '\n';
}

}  // namespace lfr
