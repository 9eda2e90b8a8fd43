#include "lfr/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfr {

Ecdf::Ecdf(std::vector<double> data) : sorted_(std::move(data)) {
    if (sorted_.empty()) throw std::invalid_argument("Ecdf: empty data");
    std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
    const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double ks_asymptotic_p(double lambda) {
    if (!(lambda > 0.2)) return 1.0;  // series needs ~1/lambda^2 terms; p = 1 to 1e-12 here
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * p, 0.0, 1.0);
}

GofReport ks_test(const std::vector<double>& data, const LfrParams& params) {
    params.validate();
    if (data.empty()) throw std::invalid_argument("ks_test: empty data");
    std::vector<double> x = data;
    std::sort(x.begin(), x.end());
    const auto n = x.size();
    const double dn = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(params, x[i]);
        d = std::max({d, std::abs((i + 1) / dn - f), std::abs(i / dn - f)});
    }
    GofReport report;
    report.ks_distance = d;
    report.p_value = ks_asymptotic_p(std::sqrt(dn) * d);
    report.n = n;
    report.fitted = params;
    return report;
}

}  // namespace lfr
