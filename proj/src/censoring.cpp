#include "lfr/censoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lfr {

void CensoringScheme::validate() const {
    if (r < 1 || r > n) throw std::invalid_argument("scheme: need 1 <= r <= n");
    if (!(T > 0.0)) throw std::invalid_argument("scheme: need T > 0");
    long total = 0;
    for (int g : removal_pattern) {
        if (g < 0) throw std::invalid_argument("scheme: negative gap count");
        total += g;
    }
    if (r + total > n)
        throw InfeasibleSchemeError("scheme: removals exhaust the sample before r retained "
                                    "failures (r + sum(R_i) exceeds n)");
}

int MhcSample::a_m() const {
    return m() + std::accumulate(gaps.begin(), gaps.end(), 0);
}

MhcSample apply_scheme(const std::vector<double>& complete, const CensoringScheme& scheme) {
    scheme.validate();
    if (static_cast<int>(complete.size()) != scheme.n)
        throw std::invalid_argument("apply_scheme: data length does not match scheme.n");
    if (!std::is_sorted(complete.begin(), complete.end()))
        throw std::invalid_argument("apply_scheme: complete sample must be sorted ascending");

    auto gap_at = [&](int i) {  // 1-based position among retained failures
        return i <= static_cast<int>(scheme.removal_pattern.size())
                   ? scheme.removal_pattern[i - 1]
                   : 0;
    };

    MhcSample out;
    out.n = scheme.n;
    int a = 0;  // index (1-based) of the current retained failure
    for (int i = 1; i <= scheme.r; ++i) {
        const int Ri = gap_at(i);
        a += 1 + Ri;
        if (a > scheme.n)
            throw InfeasibleSchemeError(
                "apply_scheme: removals exhaust the sample before r retained failures");
        out.times.push_back(complete[a - 1]);
        out.gaps.push_back(Ri);
    }

    if (out.times.back() >= scheme.T) {
        out.case_tag = CaseTag::case_ii;
        out.case_count = scheme.r;
        return out;
    }

    // Case I: keep retaining failures (pattern continues, default gap 0)
    // while they do not exceed T.
    int i = scheme.r;
    while (true) {
        const int Ri = gap_at(i + 1);
        const int next = a + 1 + Ri;
        if (next > scheme.n || complete[next - 1] > scheme.T) break;
        ++i;
        a = next;
        out.times.push_back(complete[a - 1]);
        out.gaps.push_back(Ri);
    }
    out.case_tag = CaseTag::case_i;
    out.case_count = out.m();
    return out;
}

std::vector<CheckResult> validate(const MhcSample& s) {
    std::vector<CheckResult> checks;
    auto add = [&](std::string name, bool ok, std::string detail = "") {
        checks.push_back({std::move(name), ok, std::move(detail)});
    };

    add("m_ge_2", s.m() >= 2, s.m() >= 2 ? "" : "m >= 2 required");
    add("lengths_match", s.times.size() == s.gaps.size(),
        s.times.size() == s.gaps.size() ? "" : "times and gaps lengths differ");

    bool sorted = std::is_sorted(s.times.begin(), s.times.end());
    add("times_sorted", sorted, sorted ? "" : "times must be non-decreasing");

    bool finite_pos = true;
    for (double t : s.times)
        if (!std::isfinite(t) || !(t > 0.0)) finite_pos = false;
    add("times_positive_finite", finite_pos, finite_pos ? "" : "times must be finite and > 0");

    bool gaps_ok = true;
    for (int g : s.gaps)
        if (g < 0) gaps_ok = false;
    add("gaps_nonnegative", gaps_ok, gaps_ok ? "" : "negative gap");

    bool within = s.times.size() == s.gaps.size() && s.a_m() <= s.n;
    add("a_m_le_n", within, within ? "" : "a_m = m + sum(R_i) exceeds n");

    return checks;
}

bool all_ok(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return true;
}

}  // namespace lfr
