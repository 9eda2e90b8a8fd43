#pragma once

#include "lfr/censoring.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace lfr {

// Exit-code-mapped error classes: ParseError -> 2, IoError -> 5.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complete data: a single `time` column (header optional).
std::vector<double> read_time_csv(const std::string& path);

// Pre-censored data: `time,gap` columns (header optional).
struct CensoredCsv {
    std::vector<double> times;
    std::vector<int> gaps;
};
CensoredCsv read_censored_csv(const std::string& path);

// Scheme file: JSON object with n, r, T and an optional removals array.
CensoringScheme read_scheme_json(const std::string& path);

// Build an MhcSample from a pre-censored CSV. With no explicit n the sample
// is assumed exhausted at the last retained failure (n = m + sum of gaps).
MhcSample sample_from_censored(const CensoredCsv& csv, int n = 0);

}  // namespace lfr
