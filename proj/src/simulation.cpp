#include "lfr/simulation.hpp"

#include "lfr/likelihood.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lfr {

void StudyConfig::validate() const {
    if (n < 2) throw std::invalid_argument("StudyConfig: n must be >= 2");
    if (!(T > 0.0)) throw std::invalid_argument("StudyConfig: T must be positive");
    if (a_r < 1) throw std::invalid_argument("StudyConfig: a_r must be >= 1");
    if (replications < 1) throw std::invalid_argument("StudyConfig: replications must be >= 1");
    for (const auto& [idx, count] : removal_spec) {
        if (idx < 1) throw std::invalid_argument("StudyConfig: removal index must be >= 1");
        if (count < 0) throw std::invalid_argument("StudyConfig: removal count must be >= 0");
    }
    true_params.validate();
    mcmc.validate();
}

CensoringScheme StudyConfig::scheme() const {
    validate();
    // walk r upward until r + sum_{i<=r} R_i hits a_r
    int r = 0, cum = 0;
    int max_idx = 0;
    for (const auto& [idx, count] : removal_spec) max_idx = std::max(max_idx, idx);
    std::vector<int> dense(static_cast<std::size_t>(std::max(max_idx, a_r)), 0);
    for (const auto& [idx, count] : removal_spec) dense[idx - 1] += count;
    while (r + cum < a_r) {
        ++r;
        cum += dense[r - 1];
    }
    if (r + cum != a_r)
        throw std::invalid_argument("StudyConfig: removal_spec cannot realize a_r");
    if (max_idx > r)
        throw std::invalid_argument("StudyConfig: removal index beyond the derived pattern");
    CensoringScheme scheme;
    scheme.n = n;
    scheme.r = r;
    scheme.T = T;
    scheme.removal_pattern.assign(dense.begin(), dense.begin() + r);
    scheme.validate();
    return scheme;
}

namespace {

struct RepRow {
    bool ok = false;
    double mle_a = 0.0, mle_b = 0.0, bayes_a = 0.0, bayes_b = 0.0;
    double aci_len_a = 0.0, aci_len_b = 0.0, cred_len_a = 0.0, cred_len_b = 0.0;
    bool aci_cov_a = false, aci_cov_b = false, cred_cov_a = false, cred_cov_b = false;
};

RepRow one_replication(const StudyConfig& config, const CensoringScheme& scheme, int rep) {
    RepRow row;
    try {
        const std::uint64_t data_seed =
            splitmix64(config.seed ^ splitmix64(2ULL * static_cast<std::uint64_t>(rep) + 1));
        const std::uint64_t chain_seed =
            splitmix64(config.seed ^ splitmix64(2ULL * static_cast<std::uint64_t>(rep) + 2));
        Rng rng(data_seed);
        const auto complete = sample(config.true_params, rng, static_cast<std::size_t>(config.n));
        const MhcSample mhc = apply_scheme(complete, scheme);

        const MleFit fit = fit_mle(mhc);
        if (!fit.converged) return row;
        const auto [cia, cib] = confidence_intervals(fit, 0.05);

        McmcConfig mc = config.mcmc;
        mc.seed = chain_seed;
        mc.proposal_sd_alpha = std::sqrt(fit.cov[0][0]);
        mc.proposal_sd_beta = std::sqrt(fit.cov[1][1]);
        mc.init = fit.params;
        const PosteriorChain chain = run_mh_within_gibbs(mhc, mc);
        const LfrParams sel = sel_estimate(chain);
        const ConfidenceInterval cra = credible_interval(chain, Param::alpha, 0.95);
        const ConfidenceInterval crb = credible_interval(chain, Param::beta, 0.95);

        const double ta = config.true_params.alpha, tb = config.true_params.beta;
        row.mle_a = fit.params.alpha;
        row.mle_b = fit.params.beta;
        row.bayes_a = sel.alpha;
        row.bayes_b = sel.beta;
        row.aci_len_a = cia.upper - cia.lower;
        row.aci_len_b = cib.upper - cib.lower;
        row.cred_len_a = cra.upper - cra.lower;
        row.cred_len_b = crb.upper - crb.lower;
        row.aci_cov_a = cia.lower <= ta && ta <= cia.upper;
        row.aci_cov_b = cib.lower <= tb && tb <= cib.upper;
        row.cred_cov_a = cra.lower <= ta && ta <= cra.upper;
        row.cred_cov_b = crb.lower <= tb && tb <= crb.upper;
        row.ok = true;
    } catch (const std::exception&) {
        row.ok = false;  // degenerate draw; counted as a failure
    }
    return row;
}

}  // namespace

StudyResult run_study(const StudyConfig& config, Exec exec) {
    const CensoringScheme scheme = config.scheme();
    const int reps = config.replications;
    std::vector<RepRow> rows(static_cast<std::size_t>(reps));

    const int chunk = std::max(1, reps / 10);
    std::atomic<int> done{0};
    const auto progress = [&] {
        const int d = ++done;
        if (d % chunk == 0 || d == reps)
            std::fprintf(stderr, "run_study n=%d T=%g a_r=%d: %d/%d replications\n", config.n,
                         config.T, config.a_r, d, reps);
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int rep = 0; rep < reps; ++rep) {
            rows[static_cast<std::size_t>(rep)] = one_replication(config, scheme, rep);
            progress();
        }
    } else {
        for (int rep = 0; rep < reps; ++rep) {
            rows[static_cast<std::size_t>(rep)] = one_replication(config, scheme, rep);
            progress();
        }
    }

    StudyResult out;
    out.config = config;
    // reduce in replication order so serial and parallel runs agree bitwise
    double sa = 0, sb = 0, sba = 0, sbb = 0;
    double e2a = 0, e2b = 0, e2ba = 0, e2bb = 0;
    double e4a = 0, e4b = 0, e4ba = 0, e4bb = 0;
    double la = 0, lb = 0, lca = 0, lcb = 0;
    long ca = 0, cb = 0, cca = 0, ccb = 0;
    int used = 0;
    const double ta = config.true_params.alpha, tb = config.true_params.beta;
    for (const auto& row : rows) {
        if (!row.ok) continue;
        ++used;
        sa += row.mle_a;
        sb += row.mle_b;
        sba += row.bayes_a;
        sbb += row.bayes_b;
        const double da = row.mle_a - ta, db = row.mle_b - tb;
        const double dba = row.bayes_a - ta, dbb = row.bayes_b - tb;
        e2a += da * da;
        e2b += db * db;
        e2ba += dba * dba;
        e2bb += dbb * dbb;
        e4a += da * da * da * da;
        e4b += db * db * db * db;
        e4ba += dba * dba * dba * dba;
        e4bb += dbb * dbb * dbb * dbb;
        la += row.aci_len_a;
        lb += row.aci_len_b;
        lca += row.cred_len_a;
        lcb += row.cred_len_b;
        ca += row.aci_cov_a;
        cb += row.aci_cov_b;
        cca += row.cred_cov_a;
        ccb += row.cred_cov_b;
    }
    out.replications_used = used;
    out.failures = reps - used;
    out.high_failure_warning = out.failures > reps / 5;
    if (out.high_failure_warning)
        std::fprintf(stderr, "run_study warning: %d of %d replications failed to converge\n",
                     out.failures, reps);
    if (used == 0) throw std::runtime_error("run_study: every replication failed");

    const double K = used;
    const auto stats = [&](double sum, double sq, double quart, double len, long cov) {
        EstimatorStats st;
        st.mean_estimate = sum / K;
        st.mse = sq / K;
        st.mse_se = used > 1 ? std::sqrt(std::max(0.0, quart / K - st.mse * st.mse) / K) : 0.0;
        st.acil = len / K;
        st.cp = static_cast<double>(cov) / K;
        return st;
    };
    out.mle_alpha = stats(sa, e2a, e4a, la, ca);
    out.mle_beta = stats(sb, e2b, e4b, lb, cb);
    out.bayes_alpha = stats(sba, e2ba, e4ba, lca, cca);
    out.bayes_beta = stats(sbb, e2bb, e4bb, lcb, ccb);
    return out;
}

namespace {

std::string scheme_label(const StudyConfig& config) {
    if (config.removal_spec.empty()) return "none";
    std::ostringstream ss;
    bool first = true;
    for (const auto& [idx, count] : config.removal_spec) {
        if (!first) ss << ';';
        ss << 'R' << idx << '=' << count;
        first = false;
    }
    return ss.str();
}

}  // namespace

std::string emit_study_table(const std::vector<StudyResult>& results, const std::string& format) {
    if (results.empty()) throw std::invalid_argument("emit_study_table: no results");
    const std::string fmt = format.empty() ? "csv" : format;

    static const char* kCols[] = {
        "mle_alpha_mean",  "mle_alpha_mse",  "bayes_alpha_mean", "bayes_alpha_mse",
        "mle_beta_mean",   "mle_beta_mse",   "bayes_beta_mean",  "bayes_beta_mse",
        "mle_alpha_acil",  "mle_alpha_cp",   "bayes_alpha_acil", "bayes_alpha_cp",
        "mle_beta_acil",   "mle_beta_cp",    "bayes_beta_acil",  "bayes_beta_cp"};
    const auto values = [](const StudyResult& r) {
        return std::array<double, 16>{
            r.mle_alpha.mean_estimate,  r.mle_alpha.mse,  r.bayes_alpha.mean_estimate,
            r.bayes_alpha.mse,          r.mle_beta.mean_estimate, r.mle_beta.mse,
            r.bayes_beta.mean_estimate, r.bayes_beta.mse, r.mle_alpha.acil,
            r.mle_alpha.cp,             r.bayes_alpha.acil, r.bayes_alpha.cp,
            r.mle_beta.acil,            r.mle_beta.cp,    r.bayes_beta.acil,
            r.bayes_beta.cp};
    };

    std::ostringstream out;
    if (fmt == "csv") {
        out << "n,T,scheme,a_r,replications_used,failures";
        for (const char* c : kCols) out << ',' << c;
        out << '\n';
        out << std::setprecision(std::numeric_limits<double>::max_digits10);
        for (const auto& r : results) {
            out << r.config.n << ',' << r.config.T << ',' << scheme_label(r.config) << ','
                << r.config.a_r << ',' << r.replications_used << ',' << r.failures;
            for (double v : values(r)) out << ',' << v;
            out << '\n';
        }
    } else if (fmt == "table") {
        out << std::left << std::setw(5) << "n" << std::setw(7) << "T" << std::setw(14) << "scheme"
            << std::setw(6) << "a_r" << std::setw(6) << "used" << std::setw(6) << "fail";
        for (const char* c : kCols) out << std::right << std::setw(18) << c;
        out << '\n';
        out << std::fixed << std::setprecision(4);
        for (const auto& r : results) {
            out << std::left << std::setw(5) << r.config.n << std::setw(7) << r.config.T
                << std::setw(14) << scheme_label(r.config) << std::setw(6) << r.config.a_r
                << std::setw(6) << r.replications_used << std::setw(6) << r.failures;
            for (double v : values(r)) out << std::right << std::setw(18) << v;
            out << '\n';
        }
    } else {
        throw std::invalid_argument("emit_study_table: unknown format '" + format + "'");
    }
    return out.str();
}

}  // namespace lfr
