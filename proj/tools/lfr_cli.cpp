#include "lfr/bayes.hpp"
#include "lfr/censoring.hpp"
#include "lfr/datasets.hpp"
#include "lfr/distribution.hpp"
#include "lfr/gof.hpp"
#include "lfr/io.hpp"
#include "lfr/likelihood.hpp"
#include "lfr/prediction.hpp"
#include "lfr/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using ojson = nlohmann::ordered_json;

namespace {

struct Options {
    std::string input;
    std::string scheme_path;
    std::string config_path;
    std::string format = "table";
    std::string output;
    std::string chain_out;
    std::string plot_out;
    std::uint64_t seed = 1;
    int iterations = 11000;
    int burn_in = 1000;
    double level = 0.95;
    int future_size = 0;
    int rank = 0;
    double alpha = 0.0;  // gof: tested params; simulate: true params
    double beta = 0.0;
    int sim_n = 0;
    double sim_T = 0.0;
    int sim_ar = 0;
    std::string removals;
    int replications = 1000;
    std::vector<std::pair<int, int>> removal_spec;
    bool removal_spec_set = false;
};

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::pair<int, int>> parse_removals(const std::string& spec) {
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw lfr::ParseError("--removals: expected i:count pairs, got '" + item + "'");
        try {
            out.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw lfr::ParseError("--removals: expected i:count pairs, got '" + item + "'");
        }
    }
    return out;
}

void apply_config(Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw lfr::IoError("cannot open '" + o.config_path + "'");
    ojson j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw lfr::ParseError(o.config_path + ": " + e.what());
    }
    if (!j.is_object()) throw lfr::ParseError(o.config_path + ": config must be a JSON object");
    try {
        if (j.contains("input")) o.input = j["input"].get<std::string>();
        if (j.contains("scheme")) o.scheme_path = j["scheme"].get<std::string>();
        if (j.contains("format")) o.format = j["format"].get<std::string>();
        if (j.contains("output")) o.output = j["output"].get<std::string>();
        if (j.contains("chain_out")) o.chain_out = j["chain_out"].get<std::string>();
        if (j.contains("plot_out")) o.plot_out = j["plot_out"].get<std::string>();
        if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("iterations")) o.iterations = j["iterations"].get<int>();
        if (j.contains("burn_in")) o.burn_in = j["burn_in"].get<int>();
        if (j.contains("level")) o.level = j["level"].get<double>();
        if (j.contains("future_size")) o.future_size = j["future_size"].get<int>();
        if (j.contains("rank")) o.rank = j["rank"].get<int>();
        if (j.contains("alpha")) o.alpha = j["alpha"].get<double>();
        if (j.contains("beta")) o.beta = j["beta"].get<double>();
        if (j.contains("n")) o.sim_n = j["n"].get<int>();
        if (j.contains("T")) o.sim_T = j["T"].get<double>();
        if (j.contains("a_r")) o.sim_ar = j["a_r"].get<int>();
        if (j.contains("replications")) o.replications = j["replications"].get<int>();
        if (j.contains("removals")) {
            o.removal_spec.clear();
            const auto& r = j["removals"];
            if (r.is_array()) {
                for (const auto& e : r)
                    o.removal_spec.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            } else if (r.is_object()) {
                for (const auto& [k, v] : r.items())
                    o.removal_spec.emplace_back(std::stoi(k), v.get<int>());
            } else {
                throw lfr::ParseError(o.config_path + ": removals must be pairs or an object");
            }
            o.removal_spec_set = true;
        }
    } catch (const nlohmann::json::exception& e) {
        throw lfr::ParseError(o.config_path + ": " + e.what());
    }
}

bool sniff_censored(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lfr::IoError("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        return line.find(',') != std::string::npos;
    }
    throw lfr::ParseError(path + ": no data rows");
}

lfr::MhcSample complete_sample(std::vector<double> data) {
    std::sort(data.begin(), data.end());
    lfr::MhcSample s;
    s.n = static_cast<int>(data.size());
    s.case_count = s.n;
    s.case_tag = lfr::CaseTag::case_i;
    s.gaps.assign(data.size(), 0);
    s.times = std::move(data);
    return s;
}

lfr::MhcSample load_sample(const Options& o) {
    if (o.input.empty()) throw lfr::ParseError("--input is required");
    std::optional<lfr::CensoringScheme> scheme;
    if (!o.scheme_path.empty()) scheme = lfr::read_scheme_json(o.scheme_path);
    if (sniff_censored(o.input)) {
        const auto csv = lfr::read_censored_csv(o.input);
        return lfr::sample_from_censored(csv, scheme ? scheme->n : 0);
    }
    auto data = lfr::read_time_csv(o.input);
    if (!scheme) return complete_sample(std::move(data));
    std::sort(data.begin(), data.end());
    try {
        scheme->validate();
        return lfr::apply_scheme(data, *scheme);
    } catch (const lfr::InfeasibleSchemeError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw lfr::InfeasibleSchemeError(e.what());
    }
}

void write_output(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output);
    if (!out) throw lfr::IoError("cannot open '" + o.output + "' for writing");
    out << text;
    out.flush();
    if (!out) throw lfr::IoError("write failure on '" + o.output + "'");
}

void check_format(const Options& o) {
    if (o.format != "table" && o.format != "json" && o.format != "csv")
        throw lfr::ParseError("unknown format '" + o.format + "' (expected table, json or csv)");
}

int cmd_fit(const Options& o) {
    const auto sample = load_sample(o);
    const lfr::MleFit fit = lfr::fit_mle(sample);
    const auto [cia, cib] = lfr::confidence_intervals(fit, 1.0 - o.level);

    std::ostringstream out;
    if (o.format == "json") {
        ojson j;
        j["alpha"] = fit.params.alpha;
        j["beta"] = fit.params.beta;
        j["loglik"] = fit.loglik;
        j["cov"] = {{fit.cov[0][0], fit.cov[0][1]}, {fit.cov[1][0], fit.cov[1][1]}};
        j["ci"] = {{"alpha", {cia.lower, cia.upper}}, {"beta", {cib.lower, cib.upper}}};
        j["converged"] = fit.converged;
        j["iterations"] = fit.iterations;
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << std::setprecision(std::numeric_limits<double>::max_digits10);
        out << "parameter,estimate,std_error,ci_lower,ci_upper,level\n";
        out << "alpha," << fit.params.alpha << ',' << std::sqrt(fit.cov[0][0]) << ',' << cia.lower
            << ',' << cia.upper << ',' << o.level << '\n';
        out << "beta," << fit.params.beta << ',' << std::sqrt(fit.cov[1][1]) << ',' << cib.lower
            << ',' << cib.upper << ',' << o.level << '\n';
    } else {
        out << "parameter   estimate     std.error    " << fmt6(o.level * 100).substr(0, 4)
            << "% confidence interval\n";
        out << "alpha       " << fmt6(fit.params.alpha) << "     " << fmt6(std::sqrt(fit.cov[0][0]))
            << "     [" << fmt6(cia.lower) << ", " << fmt6(cia.upper) << "]\n";
        out << "beta        " << fmt6(fit.params.beta) << "     " << fmt6(std::sqrt(fit.cov[1][1]))
            << "     [" << fmt6(cib.lower) << ", " << fmt6(cib.upper) << "]\n";
        out << "loglik      " << fmt6(fit.loglik) << '\n';
        out << "iterations  " << fit.iterations << '\n';
        out << "converged   " << (fit.converged ? "yes" : "no") << '\n';
    }
    write_output(o, out.str());
    if (!fit.converged) {
        std::fprintf(stderr, "fit did not converge (score norm %.3g%s)\n", fit.score_norm,
                     fit.boundary ? ", terminated on the beta->0 boundary" : "");
        return 4;
    }
    return 0;
}

lfr::PosteriorChain make_chain(const Options& o, const lfr::MhcSample& sample) {
    lfr::McmcConfig cfg;
    cfg.total_iterations = o.iterations;
    cfg.burn_in = o.burn_in;
    cfg.seed = o.seed;
    return lfr::run_mh_within_gibbs(sample, cfg);
}

int cmd_bayes(const Options& o) {
    const auto sample = load_sample(o);
    const auto chain = make_chain(o, sample);
    const lfr::LfrParams sel = lfr::sel_estimate(chain);
    const auto cia = lfr::credible_interval(chain, lfr::Param::alpha, o.level);
    const auto cib = lfr::credible_interval(chain, lfr::Param::beta, o.level);

    if (!o.chain_out.empty()) {
        std::ofstream f(o.chain_out);
        if (!f) throw lfr::IoError("cannot open '" + o.chain_out + "' for writing");
        lfr::chain_to_csv(chain, f);
        if (!f) throw lfr::IoError("write failure on '" + o.chain_out + "'");
    }

    std::ostringstream out;
    if (o.format == "json") {
        ojson j;
        j["sel"] = {{"alpha", sel.alpha}, {"beta", sel.beta}};
        j["ci"] = {{"alpha", {cia.lower, cia.upper}}, {"beta", {cib.lower, cib.upper}}};
        j["acceptance"] = {{"alpha", chain.acceptance_rate_alpha},
                           {"beta", chain.acceptance_rate_beta}};
        j["N"] = o.iterations;
        j["M"] = o.burn_in;
        j["seed"] = o.seed;
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << std::setprecision(std::numeric_limits<double>::max_digits10);
        out << "parameter,sel_estimate,ci_lower,ci_upper,level,acceptance\n";
        out << "alpha," << sel.alpha << ',' << cia.lower << ',' << cia.upper << ',' << o.level
            << ',' << chain.acceptance_rate_alpha << '\n';
        out << "beta," << sel.beta << ',' << cib.lower << ',' << cib.upper << ',' << o.level << ','
            << chain.acceptance_rate_beta << '\n';
    } else {
        out << "parameter   SEL estimate   credible interval (level " << fmt6(o.level) << ")\n";
        out << "alpha       " << fmt6(sel.alpha) << "       [" << fmt6(cia.lower) << ", "
            << fmt6(cia.upper) << "]\n";
        out << "beta        " << fmt6(sel.beta) << "       [" << fmt6(cib.lower) << ", "
            << fmt6(cib.upper) << "]\n";
        out << "acceptance  alpha " << fmt6(chain.acceptance_rate_alpha) << "  beta "
            << fmt6(chain.acceptance_rate_beta) << '\n';
        out << "iterations  " << o.iterations << "  burn-in " << o.burn_in << "  seed " << o.seed
            << '\n';
    }
    write_output(o, out.str());
    return 0;
}

int cmd_predict(const Options& o) {
    if (o.future_size < 1) throw lfr::ParseError("--future-size must be >= 1");
    if (o.rank < 0 || o.rank > o.future_size)
        throw lfr::ParseError("--rank must lie in [1, --future-size]");
    const auto sample = load_sample(o);
    const auto chain = make_chain(o, sample);

    std::vector<int> ranks;
    if (o.rank > 0)
        ranks.push_back(o.rank);
    else
        for (int s = 1; s <= o.future_size; ++s) ranks.push_back(s);

    std::vector<lfr::PredictionResult> rows;
    rows.reserve(ranks.size());
    for (int s : ranks)
        rows.push_back(lfr::prediction_interval(chain, s, o.future_size, o.level));

    std::ostringstream out;
    if (o.format == "json") {
        ojson j;
        j["m_future"] = o.future_size;
        j["level"] = o.level;
        j["rows"] = ojson::array();
        for (std::size_t i = 0; i < ranks.size(); ++i)
            j["rows"].push_back({{"s", ranks[i]},
                                 {"point", rows[i].point},
                                 {"lower", rows[i].lower},
                                 {"upper", rows[i].upper}});
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << std::setprecision(std::numeric_limits<double>::max_digits10);
        out << "s,point,lower,upper,level\n";
        for (std::size_t i = 0; i < ranks.size(); ++i)
            out << ranks[i] << ',' << rows[i].point << ',' << rows[i].lower << ',' << rows[i].upper
                << ',' << o.level << '\n';
    } else {
        out << "s     point        lower        upper        (level " << fmt6(o.level) << ")\n";
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%-5d %-12.6f %-12.6f %-12.6f\n", ranks[i],
                          rows[i].point, rows[i].lower, rows[i].upper);
            out << buf;
        }
    }
    write_output(o, out.str());
    return 0;
}

int cmd_gof(const Options& o) {
    if (o.input.empty()) throw lfr::ParseError("--input is required");
    if ((o.alpha > 0.0) != (o.beta > 0.0))
        throw lfr::ParseError("--alpha and --beta must be given together");
    const auto data = lfr::read_time_csv(o.input);

    lfr::LfrParams params;
    if (o.alpha > 0.0) {
        params = {o.alpha, o.beta};
    } else {
        const lfr::MleFit fit = lfr::fit_mle(complete_sample(data));
        if (!fit.converged) {
            std::fprintf(stderr,
                         "complete-data fit did not converge; pass --alpha/--beta explicitly\n");
            return 4;
        }
        params = fit.params;
    }
    const lfr::GofReport report = lfr::ks_test(data, params);

    if (!o.plot_out.empty()) {
        const lfr::Ecdf ecdf(data);
        std::ofstream f(o.plot_out);
        if (!f) throw lfr::IoError("cannot open '" + o.plot_out + "' for writing");
        f << std::setprecision(std::numeric_limits<double>::max_digits10);
        f << "x,ecdf,survival\n";
        for (double x : ecdf.points())
            f << x << ',' << ecdf(x) << ',' << lfr::survival(params, x) << '\n';
        if (!f) throw lfr::IoError("write failure on '" + o.plot_out + "'");
    }

    std::ostringstream out;
    if (o.format == "json") {
        ojson j;
        j["ks_distance"] = report.ks_distance;
        j["p_value"] = report.p_value;
        j["n"] = report.n;
        j["alpha"] = report.fitted.alpha;
        j["beta"] = report.fitted.beta;
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << std::setprecision(std::numeric_limits<double>::max_digits10);
        out << "ks_distance,p_value,n,alpha,beta\n";
        out << report.ks_distance << ',' << report.p_value << ',' << report.n << ','
            << report.fitted.alpha << ',' << report.fitted.beta << '\n';
    } else {
        out << "K-S distance  " << fmt6(report.ks_distance) << '\n';
        out << "p-value       " << fmt6(report.p_value) << '\n';
        out << "n             " << report.n << '\n';
        out << "alpha         " << fmt6(report.fitted.alpha) << '\n';
        out << "beta          " << fmt6(report.fitted.beta) << '\n';
    }
    write_output(o, out.str());
    return 0;
}

int cmd_simulate(const Options& o) {
    lfr::StudyConfig cfg;
    if (o.sim_n < 1 || !(o.sim_T > 0.0) || o.sim_ar < 1 || !(o.alpha > 0.0) || !(o.beta > 0.0))
        throw lfr::ParseError("simulate requires --n, --T, --a-r, --alpha and --beta");
    cfg.n = o.sim_n;
    cfg.T = o.sim_T;
    cfg.a_r = o.sim_ar;
    cfg.true_params = {o.alpha, o.beta};
    cfg.replications = o.replications;
    cfg.seed = o.seed;
    cfg.mcmc.total_iterations = o.iterations;
    cfg.mcmc.burn_in = o.burn_in;
    cfg.removal_spec = o.removal_spec_set ? o.removal_spec : parse_removals(o.removals);
    try {
        cfg.scheme();
    } catch (const std::invalid_argument& e) {
        throw lfr::InfeasibleSchemeError(e.what());
    }

    const lfr::StudyResult res = lfr::run_study(cfg);

    std::ostringstream out;
    if (o.format == "json") {
        ojson j;
        const auto stats = [](const lfr::EstimatorStats& st) {
            return ojson{{"mean_estimate", st.mean_estimate},
                         {"mse", st.mse},
                         {"mse_se", st.mse_se},
                         {"acil", st.acil},
                         {"cp", st.cp}};
        };
        j["n"] = cfg.n;
        j["T"] = cfg.T;
        j["a_r"] = cfg.a_r;
        j["replications_used"] = res.replications_used;
        j["failures"] = res.failures;
        j["mle"] = {{"alpha", stats(res.mle_alpha)}, {"beta", stats(res.mle_beta)}};
        j["bayes"] = {{"alpha", stats(res.bayes_alpha)}, {"beta", stats(res.bayes_beta)}};
        out << j.dump(2) << '\n';
    } else {
        out << lfr::emit_study_table({res}, o.format);
    }
    write_output(o, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear failure rate estimation, prediction and simulation under multiply "
                 "Type-II hybrid censoring"};
    app.require_subcommand(1);
    Options o;

    const auto add_io = [&](CLI::App* c, bool with_input) {
        if (with_input) c->add_option("--input", o.input, "data CSV (time, or time,gap columns)");
        c->add_option("--format", o.format, "output format: table, json or csv");
        c->add_option("--output", o.output, "write primary output to this file");
        c->add_option("--config", o.config_path, "JSON config file; overrides flags");
    };
    const auto add_mcmc = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "RNG seed");
        c->add_option("--iterations", o.iterations, "MCMC iterations (N)");
        c->add_option("--burn-in", o.burn_in, "MCMC burn-in (M)");
    };

    CLI::App* fit = app.add_subcommand("fit", "maximum likelihood fit with Wald intervals");
    add_io(fit, true);
    fit->add_option("--scheme", o.scheme_path, "censoring scheme JSON (n, r, T, removals)");
    fit->add_option("--level", o.level, "confidence level");

    CLI::App* bayes = app.add_subcommand("bayes", "posterior sampling and credible intervals");
    add_io(bayes, true);
    bayes->add_option("--scheme", o.scheme_path, "censoring scheme JSON");
    bayes->add_option("--level", o.level, "credible level");
    bayes->add_option("--chain-out", o.chain_out, "write the full chain CSV here");
    add_mcmc(bayes);

    CLI::App* predict = app.add_subcommand("predict", "two-sample prediction of future order "
                                                      "statistics");
    add_io(predict, true);
    predict->add_option("--scheme", o.scheme_path, "censoring scheme JSON");
    predict->add_option("--level", o.level, "prediction level");
    predict->add_option("--future-size", o.future_size, "future sample size m");
    predict->add_option("--rank", o.rank, "single rank s (default: all of 1..m)");
    add_mcmc(predict);

    CLI::App* gof = app.add_subcommand("gof", "Kolmogorov-Smirnov fit assessment");
    add_io(gof, true);
    gof->add_option("--alpha", o.alpha, "tested alpha (default: complete-data MLE)");
    gof->add_option("--beta", o.beta, "tested beta");
    gof->add_option("--plot-out", o.plot_out, "write x,ecdf,survival rows here");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimation study");
    add_io(simulate, false);
    simulate->add_option("--n", o.sim_n, "sample size per replication");
    simulate->add_option("--T", o.sim_T, "termination time");
    simulate->add_option("--a-r", o.sim_ar, "overall index of the r-th retained failure");
    simulate->add_option("--removals", o.removals, "sparse gaps, e.g. 2:2,5:1");
    simulate->add_option("--alpha", o.alpha, "true alpha");
    simulate->add_option("--beta", o.beta, "true beta");
    simulate->add_option("--replications", o.replications, "Monte Carlo replications");
    add_mcmc(simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (const char* threads = std::getenv("LFR_THREADS")) {
#ifdef _OPENMP
        const int k = std::atoi(threads);
        if (k > 0) omp_set_num_threads(k);
#endif
        (void)threads;
    }

    try {
        apply_config(o);
        check_format(o);
        if (fit->parsed()) return cmd_fit(o);
        if (bayes->parsed()) return cmd_bayes(o);
        if (predict->parsed()) return cmd_predict(o);
        if (gof->parsed()) return cmd_gof(o);
        if (simulate->parsed()) return cmd_simulate(o);
        return 2;
    } catch (const lfr::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const lfr::InfeasibleSchemeError& e) {
        std::fprintf(stderr, "error: infeasible scheme: %s\n", e.what());
        return 3;
    } catch (const lfr::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
