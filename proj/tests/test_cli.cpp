#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// exercises the installed binary end to end; paths are injected by the build
#ifndef LFR_CLI_PATH
#error "LFR_CLI_PATH must be defined"
#endif
#ifndef LFR_DATA_DIR
#error "LFR_DATA_DIR must be defined"
#endif

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + LFR_CLI_PATH + "' " + args + " 2>/dev/null";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string data_file(const std::string& name) {
    return std::string("'") + LFR_DATA_DIR + "/" + name + "'";
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

int line_count(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("fit on the leukemia subset converges and reports the interior optimum") {
    const RunResult r =
        run_cli("fit --input " + data_file("leukemia_censored.csv") + " --format json");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["converged"].get<bool>());
    CHECK(j["alpha"].get<double>() == doctest::Approx(0.2394).epsilon(0.03));
    CHECK(j["beta"].get<double>() > 0.0);
    CHECK(j["ci"]["alpha"][0].get<double>() < j["ci"]["alpha"][1].get<double>());
    CHECK(j["iterations"].get<int>() > 0);
}

TEST_CASE("fit on the aircraft subset exits 4 but still writes the report") {
    const RunResult r =
        run_cli("fit --input " + data_file("aircraft_censored.csv") + " --format json");
    CHECK(r.code == 4);
    const auto j = nlohmann::json::parse(r.out);
    CHECK_FALSE(j["converged"].get<bool>());
    CHECK(j["alpha"].get<double>() > 0.0);
}

TEST_CASE("fit accepts a complete-data CSV and the table format") {
    const RunResult r = run_cli("fit --input " + data_file("leukemia.csv"));
    CHECK(r.code == 0);
    CHECK(r.out.find("parameter") != std::string::npos);
    CHECK(r.out.find("alpha") != std::string::npos);
    CHECK(r.out.find("converged   yes") != std::string::npos);
}

TEST_CASE("complete aircraft fit escapes the boundary basin to the interior optimum") {
    // the default near-exponential start walks down the beta ridge; the
    // strong-beta restart must recover the interior stationary point
    const RunResult r = run_cli("fit --input " + data_file("aircraft.csv") + " --format json");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["converged"].get<bool>());
    CHECK(j["alpha"].get<double>() == doctest::Approx(0.2152924).epsilon(1e-4));
    CHECK(j["beta"].get<double>() == doctest::Approx(0.02445177).epsilon(1e-4));
}

TEST_CASE("time CSV plus scheme JSON reproduces the censored-input fit") {
    const RunResult a = run_cli("fit --input " + data_file("leukemia.csv") + " --scheme " +
                                data_file("leukemia_scheme.json") + " --format csv");
    const RunResult b =
        run_cli("fit --input " + data_file("leukemia_censored.csv") + " --format csv");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("error taxonomy maps to exit codes") {
    // missing file -> 5
    CHECK(run_cli("fit --input does_not_exist.csv").code == 5);
    // malformed CSV -> 2
    spit("cli_bad.csv", "time\n0.5\nnot-a-number\n");
    CHECK(run_cli("fit --input cli_bad.csv").code == 2);
    std::remove("cli_bad.csv");
    // infeasible scheme -> 3
    spit("cli_bad_scheme.json", "{\"n\": 29, \"r\": 28, \"T\": 13.0, \"removals\": [5]}\n");
    CHECK(run_cli("fit --input " + data_file("aircraft.csv") +
                  " --scheme cli_bad_scheme.json")
              .code == 3);
    std::remove("cli_bad_scheme.json");
    // scheme JSON with a missing key -> 2
    spit("cli_short_scheme.json", "{\"n\": 29}\n");
    CHECK(run_cli("fit --input " + data_file("aircraft.csv") +
                  " --scheme cli_short_scheme.json")
              .code == 2);
    std::remove("cli_short_scheme.json");
    // unknown output format -> 2
    CHECK(run_cli("fit --input " + data_file("leukemia.csv") + " --format yaml").code == 2);
    // missing subcommand / unknown flag -> 2
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("fit --no-such-flag").code == 2);
    // predict without --future-size -> 2
    CHECK(run_cli("predict --input " + data_file("leukemia_censored.csv")).code == 2);
    // gof with only one of --alpha/--beta -> 2
    CHECK(run_cli("gof --input " + data_file("leukemia.csv") + " --alpha 0.2").code == 2);
}

TEST_CASE("bayes runs are seed-deterministic") {
    const std::string common = "bayes --input " + data_file("leukemia_censored.csv") +
                               " --iterations 2000 --burn-in 200 --seed 11 --format json";
    const RunResult a = run_cli(common + " --output cli_bayes_a.json --chain-out cli_chain.csv");
    const RunResult b = run_cli(common + " --output cli_bayes_b.json");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    const std::string ja = slurp("cli_bayes_a.json");
    CHECK(ja == slurp("cli_bayes_b.json"));

    const auto j = nlohmann::json::parse(ja);
    CHECK(j["sel"]["alpha"].get<double>() > 0.0);
    CHECK(j["sel"]["beta"].get<double>() > 0.0);
    CHECK(j["acceptance"]["alpha"].get<double>() > 0.0);
    CHECK(j["N"].get<int>() == 2000);

    const std::string chain = slurp("cli_chain.csv");
    CHECK(chain.rfind("iteration,alpha,beta\n", 0) == 0);
    CHECK(line_count(chain) == 2001);  // header + one row per iteration

    const RunResult c = run_cli("bayes --input " + data_file("leukemia_censored.csv") +
                                " --iterations 2000 --burn-in 200 --seed 12 --format json");
    CHECK(c.code == 0);
    CHECK(c.out != ja);
    std::remove("cli_bayes_a.json");
    std::remove("cli_bayes_b.json");
    std::remove("cli_chain.csv");
}

TEST_CASE("config file settings override flags") {
    spit("cli_seed.json", "{\"seed\": 7}\n");
    const std::string base = "bayes --input " + data_file("leukemia_censored.csv") +
                             " --iterations 1200 --burn-in 200 --format csv";
    const RunResult with_config = run_cli(base + " --seed 99 --config cli_seed.json");
    const RunResult plain = run_cli(base + " --seed 7");
    CHECK(with_config.code == 0);
    CHECK(with_config.out == plain.out);
    std::remove("cli_seed.json");
}

TEST_CASE("gof at explicit parameters reproduces the frozen distances") {
    const RunResult r = run_cli("gof --input " + data_file("leukemia.csv") +
                                " --alpha 0.24474 --beta 0.075861 --format json");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["ks_distance"].get<double>() == doctest::Approx(0.080345990279808766).epsilon(1e-7));
    CHECK(j["p_value"].get<double>() == doctest::Approx(0.94412542631280538).epsilon(1e-7));
    CHECK(j["n"].get<int>() == 43);

    const RunResult a = run_cli("gof --input " + data_file("aircraft.csv") +
                                " --alpha 0.215785 --beta 0.0255161 --format json");
    CHECK(a.code == 0);
    const auto ja = nlohmann::json::parse(a.out);
    CHECK(ja["ks_distance"].get<double>() == doctest::Approx(0.10291809997459414).epsilon(1e-7));
    CHECK(ja["p_value"].get<double>() == doctest::Approx(0.91850446193643664).epsilon(1e-7));
}

TEST_CASE("gof default path fits the complete data and writes the plot file") {
    const RunResult r = run_cli("gof --input " + data_file("leukemia.csv") +
                                " --plot-out cli_plot.csv --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("ks_distance,p_value,n,alpha,beta\n", 0) == 0);
    const std::string plot = slurp("cli_plot.csv");
    CHECK(plot.rfind("x,ecdf,survival\n", 0) == 0);
    CHECK(line_count(plot) == 44);  // header + 43 points
    std::remove("cli_plot.csv");
}

TEST_CASE("predict emits one monotone row per future rank") {
    const RunResult r = run_cli("predict --input " + data_file("leukemia_censored.csv") +
                                " --iterations 1500 --burn-in 300 --future-size 3 --format csv");
    CHECK(r.code == 0);
    std::istringstream ss(r.out);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "s,point,lower,upper,level");
    double prev_point = 0.0;
    int rows = 0;
    for (std::string line; std::getline(ss, line) && !line.empty();) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        int s;
        double point, lower, upper, level;
        ls >> s >> point >> lower >> upper >> level;
        CHECK(s == rows + 1);
        CHECK(lower < upper);
        CHECK(point > prev_point);
        CHECK(level == 0.95);
        prev_point = point;
        ++rows;
    }
    CHECK(rows == 3);

    const RunResult one = run_cli("predict --input " + data_file("leukemia_censored.csv") +
                                  " --iterations 1500 --burn-in 300 --future-size 5 --rank 2 " +
                                  "--format csv");
    CHECK(one.code == 0);
    CHECK(line_count(one.out) == 2);
}

TEST_CASE("simulate smoke study emits a single summary row") {
    const RunResult r = run_cli(
        "simulate --n 20 --T 3 --a-r 8 --removals 2:2,5:1 --alpha 2 --beta 5 "
        "--replications 30 --iterations 400 --burn-in 100 --seed 5 --format csv");
    CHECK(r.code == 0);
    CHECK(line_count(r.out) == 2);
    CHECK(r.out.rfind("n,T,scheme,a_r,replications_used,failures", 0) == 0);
    CHECK(r.out.find("\n20,3,R2=2;R5=1,8,") != std::string::npos);

    // infeasible removal pattern -> 3
    const RunResult bad = run_cli(
        "simulate --n 20 --T 3 --a-r 2 --removals 1:5 --alpha 2 --beta 5 --replications 5");
    CHECK(bad.code == 3);
    // missing required option -> 2
    CHECK(run_cli("simulate --n 20 --T 3 --alpha 2 --beta 5").code == 2);
}
