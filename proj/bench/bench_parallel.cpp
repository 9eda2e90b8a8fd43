// Compares the OpenMP kernels against the serial reference implementation.
// Both paths must agree bitwise; the table reports wall time and speedup.

#include "lfr/bayes.hpp"
#include "lfr/censoring.hpp"
#include "lfr/datasets.hpp"
#include "lfr/prediction.hpp"
#include "lfr/simulation.hpp"

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lfr;

namespace {

template <typename F>
double time_once(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, double serial, double parallel, bool identical) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name.c_str(), serial, parallel,
                serial / parallel, identical ? "bitwise-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both paths run serially\n");
#endif
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        StudyConfig cfg;
        cfg.n = 30;
        cfg.T = 3.0;
        cfg.removal_spec = {{2, 2}, {5, 1}};
        cfg.a_r = 10;
        cfg.true_params = {2.0, 5.0};
        cfg.replications = 200;
        cfg.seed = 99;
        cfg.mcmc.total_iterations = 2000;
        cfg.mcmc.burn_in = 500;
        StudyResult rs, rp;
        const double ts = time_once([&] { rs = run_study(cfg, Exec::serial); });
        const double tp = time_once([&] { rp = run_study(cfg, Exec::parallel); });
        const bool same = rs.mle_alpha.mean_estimate == rp.mle_alpha.mean_estimate &&
                          rs.mle_beta.mse == rp.mle_beta.mse &&
                          rs.bayes_alpha.cp == rp.bayes_alpha.cp &&
                          rs.bayes_beta.acil == rp.bayes_beta.acil;
        row("simulation replications", ts, tp, same);
    }

    {
        const auto leu = apply_scheme(leukemia_times(), leukemia_scheme());
        McmcConfig mc;
        mc.total_iterations = 20000;
        mc.burn_in = 1000;
        mc.seed = 3;
        const PosteriorChain chain = run_mh_within_gibbs(leu, mc);
        double ps = 0.0, pp = 0.0;
        const double ts = time_once([&] { ps = point_predictor(chain, 3, 10, Exec::serial); });
        const double tp = time_once([&] { pp = point_predictor(chain, 3, 10, Exec::parallel); });
        row("prediction chain average", ts, tp, ps == pp);
    }

    return 0;
}
