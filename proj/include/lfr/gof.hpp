#pragma once

#include "lfr/distribution.hpp"

#include <cstddef>
#include <vector>

namespace lfr {

// Right-continuous empirical CDF; ties contribute jumps of multiplicity/n.
class Ecdf {
  public:
    explicit Ecdf(std::vector<double> data);

    double operator()(double x) const;
    const std::vector<double>& points() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

  private:
    std::vector<double> sorted_;
};

struct GofReport {
    double ks_distance = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
    LfrParams fitted;
};

// Two-sided Kolmogorov-Smirnov distance of data against LFR(params) with an
// asymptotic p-value P(sqrt(n) D > lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
GofReport ks_test(const std::vector<double>& data, const LfrParams& params);

double ks_asymptotic_p(double lambda);

}  // namespace lfr
