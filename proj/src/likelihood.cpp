#include "lfr/likelihood.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lfr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

}  // namespace

double log_likelihood(const LfrParams& p, const MhcSample& s) {
    const double a = p.alpha, b = p.beta;
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return -kInf;
    const auto& x = s.times;
    const auto& R = s.gaps;
    const int m = s.m();

    double ll = 0.0;
    double L_prev = 0.0;
    for (int i = 0; i < m; ++i) {
        const double L = a * x[i] + 0.5 * b * x[i] * x[i];
        ll += std::log(a + b * x[i]) - L;
        if (i == 0) {
            if (R[0] > 0) {
                if (!(L > 0.0)) return -kInf;
                ll += R[0] * std::log(-std::expm1(-L));
            }
        } else if (R[i] > 0) {
            const double delta = L - L_prev;  // mass on (x_{i-1}, x_i] is e^{-L_prev}(1-e^{-delta})
            if (!(delta > 0.0)) return -kInf;
            ll += R[i] * (-L_prev + std::log(-std::expm1(-delta)));
        }
        L_prev = L;
    }
    ll += (m - s.n) * L_prev;
    return ll;
}

Vec2 score(const LfrParams& p, const MhcSample& s) {
    const double a = p.alpha, b = p.beta;
    const auto& x = s.times;
    const auto& R = s.gaps;
    const int m = s.m();

    double ga = 0.0, gb = 0.0;
    for (int i = 0; i < m; ++i) {
        const double d = a + b * x[i];
        ga += 1.0 / d - x[i];
        gb += x[i] / d - 0.5 * x[i] * x[i];
    }
    if (R[0] > 0) {
        const double L0 = a * x[0] + 0.5 * b * x[0] * x[0];
        const double w = std::exp(-L0);
        const double A = -std::expm1(-L0);
        ga += R[0] * x[0] * w / A;
        gb += R[0] * 0.5 * x[0] * x[0] * w / A;
    }
    for (int i = 0; i + 1 < m; ++i) {
        if (R[i + 1] <= 0) continue;
        const double ui = x[i], vi = 0.5 * x[i] * x[i];
        const double uj = x[i + 1], vj = 0.5 * x[i + 1] * x[i + 1];
        const double delta = a * (x[i + 1] - x[i]) + 0.5 * b * (x[i + 1] * x[i + 1] - x[i] * x[i]);
        const double w = std::exp(-delta);
        const double A = -std::expm1(-delta);
        ga += R[i + 1] * (-ui + uj * w) / A;
        gb += R[i + 1] * (-vi + vj * w) / A;
    }
    ga += (m - s.n) * x[m - 1];
    gb += (m - s.n) * 0.5 * x[m - 1] * x[m - 1];
    return {ga, gb};
}

Matrix2 hessian(const LfrParams& p, const MhcSample& s) {
    const double a = p.alpha, b = p.beta;
    const auto& x = s.times;
    const auto& R = s.gaps;
    const int m = s.m();

    double h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (int i = 0; i < m; ++i) {
        const double d = a + b * x[i];
        h00 -= 1.0 / (d * d);
        h01 -= x[i] / (d * d);
        h11 -= x[i] * x[i] / (d * d);
    }
    if (R[0] > 0) {
        const double L0 = a * x[0] + 0.5 * b * x[0] * x[0];
        const double w = std::exp(-L0);
        const double A = -std::expm1(-L0);
        const double u = x[0], v = 0.5 * x[0] * x[0];
        const double c = -R[0] * w / (A * A);
        h00 += c * u * u;
        h01 += c * u * v;
        h11 += c * v * v;
    }
    for (int i = 0; i + 1 < m; ++i) {
        if (R[i + 1] <= 0) continue;
        const double ui = x[i], vi = 0.5 * x[i] * x[i];
        const double uj = x[i + 1], vj = 0.5 * x[i + 1] * x[i + 1];
        const double delta = a * (x[i + 1] - x[i]) + 0.5 * b * (x[i + 1] * x[i + 1] - x[i] * x[i]);
        const double w = std::exp(-delta);
        const double A = -std::expm1(-delta);
        const double g0 = -ui + uj * w, g1 = -vi + vj * w;
        const double v00 = ui * ui - uj * uj * w;
        const double v01 = ui * vi - uj * vj * w;
        const double v11 = vi * vi - vj * vj * w;
        h00 += R[i + 1] * (v00 * A - g0 * g0) / (A * A);
        h01 += R[i + 1] * (v01 * A - g0 * g1) / (A * A);
        h11 += R[i + 1] * (v11 * A - g1 * g1) / (A * A);
    }
    return {{{h00, h01}, {h01, h11}}};
}

namespace {

struct NewtonRun {
    Vec2 th{};  // (ln alpha, ln beta)
    int iterations = 0;
    bool converged = false;
    bool boundary = false;
};

LfrParams from_log(const Vec2& th) { return {std::exp(th[0]), std::exp(th[1])}; }

// Damped ascent-safeguarded Newton in log-parameter space. On a line-search
// stall near a stationary point, switches to undamped Newton polish steps
// accepted only while the score norm shrinks.
NewtonRun damped_newton(const MhcSample& s, Vec2 th, double tol, int max_iter) {
    NewtonRun run;
    bool stalled = false;
    int it = 0;
    for (it = 1; it <= max_iter; ++it) {
        const LfrParams p = from_log(th);
        const Vec2 g = score(p, s);
        if (max_abs(g) < tol) {
            run.th = th;
            run.iterations = it;
            run.converged = true;
            return run;
        }
        const Matrix2 H = hessian(p, s);
        const double gl0 = p.alpha * g[0], gl1 = p.beta * g[1];
        const double hl00 = p.alpha * p.alpha * H[0][0] + p.alpha * g[0];
        const double hl01 = p.alpha * p.beta * H[0][1];
        const double hl11 = p.beta * p.beta * H[1][1] + p.beta * g[1];

        Vec2 step{};
        bool have_step = false;
        double tau = 0.0;
        for (int k = 0; k < 60; ++k) {
            const double m00 = hl00 - tau, m11 = hl11 - tau;
            const double det = m00 * m11 - hl01 * hl01;
            if (m00 < 0.0 && det > 0.0) {
                step[0] = (-gl0 * m11 + gl1 * hl01) / det;
                step[1] = (-gl1 * m00 + gl0 * hl01) / det;
                if (step[0] * gl0 + step[1] * gl1 > 0.0) {
                    have_step = true;
                    break;
                }
            }
            tau = std::max(2.0 * tau, 1e-6 * (1.0 + std::abs(hl00) + std::abs(hl11)));
        }
        if (!have_step) {
            const double nrm = std::max(1e-12, std::hypot(gl0, gl1));
            step = {gl0 / nrm, gl1 / nrm};
        }
        const double sn = std::hypot(step[0], step[1]);
        if (sn > 4.0) {
            step[0] *= 4.0 / sn;
            step[1] *= 4.0 / sn;
        }

        const double f0 = log_likelihood(p, s);
        const double sg = step[0] * gl0 + step[1] * gl1;
        double t = 1.0;
        bool accepted = false;
        Vec2 thn{};
        for (int k = 0; k < 50; ++k) {
            thn = {th[0] + t * step[0], th[1] + t * step[1]};
            if (std::isfinite(thn[0]) && std::isfinite(thn[1]) && thn[1] > -80.0) {
                const double fn = log_likelihood(from_log(thn), s);
                if (std::isfinite(fn) && fn > f0 + 1e-4 * t * sg) {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) {
            stalled = true;
            break;
        }
        th = thn;
        if (th[1] <= -60.0) {  // beta->0 boundary ridge
            run.th = th;
            run.iterations = it;
            run.boundary = true;
            return run;
        }
    }

    // Polish: plain Newton, accepted while the score norm decreases.
    (void)stalled;
    for (int k = 0; k < 10; ++k) {
        const LfrParams p = from_log(th);
        const Vec2 g = score(p, s);
        const double gn = max_abs(g);
        if (gn < tol) break;
        const Matrix2 H = hessian(p, s);
        const double gl0 = p.alpha * g[0], gl1 = p.beta * g[1];
        const double hl00 = p.alpha * p.alpha * H[0][0] + p.alpha * g[0];
        const double hl01 = p.alpha * p.beta * H[0][1];
        const double hl11 = p.beta * p.beta * H[1][1] + p.beta * g[1];
        const double det = hl00 * hl11 - hl01 * hl01;
        if (!std::isfinite(det) || det == 0.0) break;
        const Vec2 thn = {th[0] + (-gl0 * hl11 + gl1 * hl01) / det,
                          th[1] + (-gl1 * hl00 + gl0 * hl01) / det};
        if (!std::isfinite(thn[0]) || !std::isfinite(thn[1]) || thn[1] <= -80.0) break;
        if (max_abs(score(from_log(thn), s)) >= gn) break;
        th = thn;
    }

    run.th = th;
    run.iterations = it > max_iter ? max_iter : it;
    run.converged = max_abs(score(from_log(th), s)) < tol;
    // A stalled, non-converged run far down the beta ridge is a boundary
    // solution even if it never hit the -60 box: Armijo gains fall below
    // machine epsilon long before then.
    run.boundary = th[1] <= -60.0 || (!run.converged && th[1] <= -35.0);
    return run;
}

}  // namespace

MleFit fit_mle(const MhcSample& sample, const FitOptions& options) {
    const auto checks = validate(sample);
    if (!all_ok(checks)) {
        for (const auto& c : checks)
            if (!c.ok) throw std::invalid_argument("fit_mle: invalid sample: " + c.detail);
    }
    for (int i = 1; i < sample.m(); ++i) {
        if (sample.gaps[i] > 0 && sample.times[i] == sample.times[i - 1])
            throw DegenerateMassError(
                "fit_mle: tied observations with a positive gap count place zero mass on an "
                "inter-observation interval");
    }

    const double xm = std::accumulate(sample.times.begin(), sample.times.end(), 0.0) /
                      static_cast<double>(sample.m());
    Vec2 th0;
    if (options.init) {
        options.init->validate();
        th0 = {std::log(options.init->alpha), std::log(options.init->beta)};
    } else {
        const double a0 = 1.0 / xm;
        th0 = {std::log(a0), std::log(1e-3 * a0 / xm)};
    }

    NewtonRun run = damped_newton(sample, th0, options.tol, options.max_iter);
    int total_iters = run.iterations;
    if (!options.init && run.boundary) {
        // The default near-exponential start sits in the boundary basin;
        // retry from a strong-beta start in case an interior optimum exists.
        const double a0 = 1.0 / xm;
        const Vec2 th1 = {std::log(a0), std::log(a0 / xm)};
        NewtonRun alt = damped_newton(sample, th1, options.tol, options.max_iter);
        total_iters += alt.iterations;
        const bool run_good = run.converged && !run.boundary;
        const bool alt_good = alt.converged && !alt.boundary;
        if (alt_good != run_good ? alt_good
                                 : log_likelihood(from_log(alt.th), sample) >
                                       log_likelihood(from_log(run.th), sample))
            run = alt;
    }

    MleFit fit;
    fit.params = from_log(run.th);
    fit.loglik = log_likelihood(fit.params, sample);
    fit.score_norm = max_abs(score(fit.params, sample));
    fit.iterations = total_iters;
    fit.converged = run.converged;
    fit.boundary = run.boundary;

    const Matrix2 H = hessian(fit.params, sample);
    fit.observed_info = {{{-H[0][0], -H[0][1]}, {-H[0][1], -H[1][1]}}};
    const double i00 = fit.observed_info[0][0], i01 = fit.observed_info[0][1],
                 i11 = fit.observed_info[1][1];
    const double det = i00 * i11 - i01 * i01;
    const double scale = std::max({std::abs(i00), std::abs(i11), std::abs(i01)});
    if (std::isfinite(det) && std::abs(det) > 1e-14 * scale * scale) {
        fit.cov = {{{i11 / det, -i01 / det}, {-i01 / det, i00 / det}}};
    } else if (fit.converged) {
        std::ostringstream msg;
        msg << "fit_mle: singular observed information (det=" << det
            << ", condition estimate=" << (det != 0.0 ? scale * scale / std::abs(det) : kInf)
            << ")";
        throw SingularHessianError(msg.str());
    } else {
        fit.cov = {{{kNaN, kNaN}, {kNaN, kNaN}}};
    }
    return fit;
}

std::pair<ConfidenceInterval, ConfidenceInterval> confidence_intervals(const MleFit& fit,
                                                                       double gamma) {
    if (!(gamma >= 0.0) || gamma > 1.0)
        throw std::domain_error("confidence_intervals: gamma must lie in [0,1]");
    const double va = fit.cov[0][0], vb = fit.cov[1][1];
    if (!(va >= 0.0) || !(vb >= 0.0))
        throw std::runtime_error(
            "confidence_intervals: negative variance estimate (covariance not positive-definite)");
    const boost::math::normal_distribution<double> nd;
    const double z = gamma >= 1.0 ? 0.0
                     : gamma <= 0.0 ? kInf
                                    : boost::math::quantile(nd, 1.0 - gamma / 2.0);
    const double level = 1.0 - gamma;
    const double sa = std::sqrt(va), sb = std::sqrt(vb);
    return {{fit.params.alpha - z * sa, fit.params.alpha + z * sa, level},
            {fit.params.beta - z * sb, fit.params.beta + z * sb, level}};
}

}  // namespace lfr
