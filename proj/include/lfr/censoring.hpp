#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lfr {

// Removal plan for a multiply Type-II hybrid censored experiment.
// n units go on test; R_i order statistics are skipped (fail unrecorded)
// immediately before the i-th retained failure; the test ends at
// T2 = max(x_{a_r:n}, T) where a_r is the index of the r-th retained
// failure. Entries beyond removal_pattern are zero.
struct CensoringScheme {
    int n = 0;
    int r = 0;
    double T = 0.0;
    std::vector<int> removal_pattern;

    // Throws std::invalid_argument on malformed fields; the infeasible
    // combination r + sum(R_i) > n raises InfeasibleSchemeError (a subtype).
    void validate() const;
};

enum class CaseTag {
    case_i,   // x_{a_r:n} < T: observe every retained failure up to T, m = d >= r
    case_ii,  // x_{a_r:n} >= T: stop at the r-th retained failure, m = r
};

// A multiply Type-II hybrid censored sample: the retained ordered failure
// times together with the gap counts R_i = a_i - a_{i-1} - 1 (a_0 = 0).
struct MhcSample {
    std::vector<double> times;
    std::vector<int> gaps;
    int n = 0;
    CaseTag case_tag = CaseTag::case_i;
    int case_count = 0;  // d for Case I, r for Case II

    int m() const { return static_cast<int>(times.size()); }
    int a_m() const;  // m + sum of gaps: index of the last retained failure
};

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct InfeasibleSchemeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Deterministically censor a complete ordered sample. Throws
// InfeasibleSchemeError when the removals exhaust the sample before r
// retained failures.
MhcSample apply_scheme(const std::vector<double>& complete, const CensoringScheme& scheme);

// Structural diagnostics, one entry per invariant; never mutates.
std::vector<CheckResult> validate(const MhcSample& sample);
bool all_ok(const std::vector<CheckResult>& checks);

}  // namespace lfr
