#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lfr/bayes.hpp"
#include "lfr/censoring.hpp"
#include "lfr/common.hpp"
#include "lfr/datasets.hpp"
#include "lfr/distribution.hpp"
#include "lfr/prediction.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace lfr;

namespace {

PosteriorChain constant_chain(double a, double b, int len = 40, int burn = 10) {
    PosteriorChain c;
    c.alpha_draws.assign(len, a);
    c.beta_draws.assign(len, b);
    c.burn_in = burn;
    return c;
}

double binom(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// alternating-sum expansion of the order-statistic density:
//   g(y) = m!/((s-1)!(m-s)!) f(y) sum_q (-1)^q C(m-s,q) F(y)^{s-1+q}
double os_density_alt(const LfrParams& p, int s, int m, double y) {
    const double F = cdf(p, y);
    double acc = 0.0;
    for (int q = 0; q <= m - s; ++q)
        acc += ((q % 2) ? -1.0 : 1.0) * binom(m - s, q) * std::pow(F, s - 1 + q);
    return s * binom(m, s) * pdf(p, y) * acc;
}

// alternating-sum expansion of the order-statistic CDF:
//   G(y) = s C(m,s) sum_q (-1)^q C(m-s,q) F(y)^{s+q} / (s+q)
double os_cdf_alt(const LfrParams& p, int s, int m, double y) {
    const double F = cdf(p, y);
    double acc = 0.0;
    for (int q = 0; q <= m - s; ++q)
        acc += ((q % 2) ? -1.0 : 1.0) * binom(m - s, q) * std::pow(F, s + q) / (s + q);
    return s * binom(m, s) * acc;
}

PosteriorChain leukemia_chain(int iters = 3000, int burn = 500, std::uint64_t seed = 5) {
    const auto s = apply_scheme(leukemia_times(), leukemia_scheme());
    McmcConfig cfg;
    cfg.total_iterations = iters;
    cfg.burn_in = burn;
    cfg.seed = seed;
    return run_mh_within_gibbs(s, cfg);
}

}  // namespace

TEST_CASE("rank one of one is the parent density") {
    const LfrParams p{0.7, 2.1};
    for (double y : {0.01, 0.2, 0.9, 2.5}) {
        CHECK(order_stat_density(p, 1, 1, y) == doctest::Approx(pdf(p, y)).epsilon(1e-14));
        CHECK(order_stat_cdf(p, 1, 1, y) == doctest::Approx(cdf(p, y)).epsilon(1e-14));
    }
}

TEST_CASE("order-statistic densities integrate to one") {
    const LfrParams p{2.0, 5.0};
    using boost::math::quadrature::gauss_kronrod;
    for (int s : {1, 3, 5}) {
        const auto f = [&](double y) { return order_stat_density(p, s, 5, y); };
        const double total = gauss_kronrod<double, 15>::integrate(f, 0.0, 10.0, 15, 1e-12);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("beta-form density and CDF match the alternating-sum expansions") {
    Rng rng(21);
    for (int k = 0; k < 40; ++k) {
        const LfrParams p{0.1 + 3.0 * uniform01(rng), 0.05 + 6.0 * uniform01(rng)};
        const int m = 1 + static_cast<int>(uniform01(rng) * 15.0);
        const int s = 1 + static_cast<int>(uniform01(rng) * m) % m;
        const double y = quantile(p, 0.05 + 0.9 * uniform01(rng));
        const double g = order_stat_density(p, s, m, y);
        const double G = order_stat_cdf(p, s, m, y);
        CHECK(g == doctest::Approx(os_density_alt(p, s, m, y)).epsilon(1e-8));
        CHECK(G == doctest::Approx(os_cdf_alt(p, s, m, y)).epsilon(1e-8));
    }
}

TEST_CASE("frozen order-statistic values") {
    const LfrParams p{2.0, 5.0};
    CHECK(order_stat_cdf(p, 3, 10, 0.3) ==
          doctest::Approx(0.97707100038223347322).epsilon(1e-13));
    CHECK(order_stat_density(p, 3, 10, 0.3) ==
          doctest::Approx(0.54092410026586248964).epsilon(1e-13));
    // E[Y_{3:10}] via a degenerate chain
    const PosteriorChain c = constant_chain(2.0, 5.0);
    CHECK(point_predictor(c, 3, 10) ==
          doctest::Approx(0.13825434053712417481).epsilon(1e-9));
}

TEST_CASE("degenerate chain reproduces the plug-in law") {
    const PosteriorChain c = constant_chain(0.8, 1.7);
    const LfrParams p{0.8, 1.7};
    for (double y : {0.05, 0.3, 1.1}) {
        CHECK(predictive_density(c, 2, 6, y) ==
              doctest::Approx(order_stat_density(p, 2, 6, y)).epsilon(1e-13));
        CHECK(predictive_cdf(c, 2, 6, y) ==
              doctest::Approx(order_stat_cdf(p, 2, 6, y)).epsilon(1e-13));
    }
}

TEST_CASE("two-point chain averages the two laws") {
    PosteriorChain c;
    c.burn_in = 0;
    for (int i = 0; i < 10; ++i) {
        c.alpha_draws.push_back(i % 2 ? 2.0 : 0.5);
        c.beta_draws.push_back(i % 2 ? 5.0 : 1.0);
    }
    const LfrParams p1{0.5, 1.0}, p2{2.0, 5.0};
    for (double y : {0.1, 0.6}) {
        const double want_f =
            0.5 * (order_stat_density(p1, 2, 4, y) + order_stat_density(p2, 2, 4, y));
        const double want_F =
            0.5 * (order_stat_cdf(p1, 2, 4, y) + order_stat_cdf(p2, 2, 4, y));
        CHECK(predictive_density(c, 2, 4, y) == doctest::Approx(want_f).epsilon(1e-14));
        CHECK(predictive_cdf(c, 2, 4, y) == doctest::Approx(want_F).epsilon(1e-14));
    }
}

TEST_CASE("near-exponential limit recovers closed forms") {
    // beta -> 0 at alpha = 1 is Exp(1): mean 1, quantiles -log(1-q)
    const PosteriorChain c = constant_chain(1.0, 1e-12);
    CHECK(point_predictor(c, 1, 1) == doctest::Approx(1.0).epsilon(1e-6));
    const PredictionResult r = prediction_interval(c, 1, 1, 0.95);
    CHECK(r.lower == doctest::Approx(-std::log1p(-0.025)).epsilon(1e-4));
    CHECK(r.upper == doctest::Approx(-std::log1p(-0.975)).epsilon(1e-4));
    CHECK(r.level == doctest::Approx(0.95));
}

TEST_CASE("interval endpoints are predictive quantiles") {
    const PosteriorChain chain = leukemia_chain();
    const PredictionResult r = prediction_interval(chain, 2, 8, 0.90);
    CHECK(predictive_cdf(chain, 2, 8, r.lower) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(predictive_cdf(chain, 2, 8, r.upper) == doctest::Approx(0.95).epsilon(1e-6));
    CHECK(r.point == doctest::Approx(point_predictor(chain, 2, 8)).epsilon(1e-15));
    CHECK(r.lower < r.point);
    CHECK(r.point < r.upper);
}

TEST_CASE("predictive cdf is the integral of the predictive density") {
    const PosteriorChain chain = leukemia_chain();
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [&](double y) { return predictive_density(chain, 3, 10, y); };
    for (double y : {0.2, 0.8, 1.6}) {
        const double by_quad = gauss_kronrod<double, 15>::integrate(f, 0.0, y, 15, 1e-12);
        CHECK(predictive_cdf(chain, 3, 10, y) == doctest::Approx(by_quad).epsilon(1e-5));
    }
}

TEST_CASE("predictions are stochastically ordered in the rank") {
    const PosteriorChain chain = leukemia_chain();
    double prev_point = 0.0, prev_lo = 0.0, prev_hi = 0.0;
    for (int s = 1; s <= 5; ++s) {
        const PredictionResult r = prediction_interval(chain, s, 5, 0.95);
        CHECK(r.point > prev_point);
        CHECK(r.lower > prev_lo);
        CHECK(r.upper > prev_hi);
        prev_point = r.point;
        prev_lo = r.lower;
        prev_hi = r.upper;
    }
}

TEST_CASE("point predictor agrees with brute-force Monte Carlo") {
    const LfrParams p{2.0, 5.0};
    const PosteriorChain c = constant_chain(p.alpha, p.beta);
    const double want = point_predictor(c, 2, 2);  // E[max of two draws]
    Rng rng(31);
    const long reps = 2000000;
    double sum = 0.0, sumsq = 0.0;
    for (long k = 0; k < reps; ++k) {
        const double y = std::max(quantile(p, uniform01(rng)), quantile(p, uniform01(rng)));
        sum += y;
        sumsq += y * y;
    }
    const double mc = sum / reps;
    const double se = std::sqrt((sumsq / reps - mc * mc) / reps);
    CHECK(std::abs(want - mc) < 3.0 * se);
}

TEST_CASE("serial and parallel execution agree bitwise") {
    const PosteriorChain chain = leukemia_chain();
    for (double y : {0.15, 0.7, 2.2}) {
        CHECK(predictive_density(chain, 3, 10, y, Exec::serial) ==
              predictive_density(chain, 3, 10, y, Exec::parallel));
        CHECK(predictive_cdf(chain, 3, 10, y, Exec::serial) ==
              predictive_cdf(chain, 3, 10, y, Exec::parallel));
    }
    CHECK(point_predictor(chain, 3, 10, Exec::serial) ==
          point_predictor(chain, 3, 10, Exec::parallel));
    const PredictionResult rs = prediction_interval(chain, 3, 10, 0.95, Exec::serial);
    const PredictionResult rp = prediction_interval(chain, 3, 10, 0.95, Exec::parallel);
    CHECK(rs.point == rp.point);
    CHECK(rs.lower == rp.lower);
    CHECK(rs.upper == rp.upper);
}

TEST_CASE("request bundling matches the direct call") {
    PredictionRequest req;
    req.s = 2;
    req.m_future = 8;
    req.level = 0.90;
    req.chain = leukemia_chain();
    const PredictionResult a = predict(req);
    const PredictionResult b = prediction_interval(req.chain, 2, 8, 0.90);
    CHECK(a.point == b.point);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.level == b.level);
}

TEST_CASE("domain errors") {
    const PosteriorChain c = constant_chain(1.0, 1.0);
    CHECK_THROWS_AS(order_stat_density({1.0, 1.0}, 0, 5, 0.3), std::domain_error);
    CHECK_THROWS_AS(order_stat_density({1.0, 1.0}, 6, 5, 0.3), std::domain_error);
    CHECK_THROWS_AS(order_stat_density({1.0, 1.0}, 1, 0, 0.3), std::domain_error);
    CHECK_THROWS_AS(order_stat_cdf({1.0, 1.0}, 1, 5, -0.1), std::domain_error);
    CHECK_THROWS_AS((order_stat_density({-1.0, 1.0}, 1, 5, 0.3)), std::domain_error);
    CHECK_THROWS_AS(prediction_interval(c, 1, 1, 0.0), std::domain_error);
    CHECK_THROWS_AS(prediction_interval(c, 1, 1, 1.0), std::domain_error);
    PosteriorChain bad;
    bad.alpha_draws = {1.0};
    bad.burn_in = 0;
    CHECK_THROWS_AS(predictive_density(bad, 1, 1, 0.5), std::invalid_argument);
    PosteriorChain burned = constant_chain(1.0, 1.0, 5, 5);
    CHECK_THROWS_AS(predictive_density(burned, 1, 1, 0.5), std::invalid_argument);
}

TEST_CASE("interval covers plug-in truth mass under a posterior fit") {
    // sample from the truth, fit a chain, and check the 95% interval for
    // Y_{3:10} traps about 95% of the true order-statistic law
    const LfrParams truth{2.0, 5.0};
    Rng rng(1234);
    MhcSample s;
    s.times = sample(truth, rng, 200);
    s.gaps.assign(200, 0);
    s.n = 200;
    s.case_count = 200;
    McmcConfig cfg;
    cfg.total_iterations = 3000;
    cfg.burn_in = 500;
    cfg.seed = 8;
    const PosteriorChain chain = run_mh_within_gibbs(s, cfg);
    const PredictionResult r = prediction_interval(chain, 3, 10, 0.95);
    const double mass =
        order_stat_cdf(truth, 3, 10, r.upper) - order_stat_cdf(truth, 3, 10, r.lower);
    CHECK(mass > 0.85);
    CHECK(mass <= 1.0);
}
