// Error metrics for benchmark runs. The per-point error is relative where
// the exact solution is meaningfully away from zero and absolute below the
// |u| = 0.001 threshold, and the reported L2 figure is the root mean
// square of those per-point errors over the evaluation knots.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bkm {

// e_i = |c_i - u_i| / |u_i| when |u_i| >= 0.001, else |c_i - u_i|.
inline std::vector<double> pointwise_errors(const std::vector<double>& computed,
                                            const std::vector<double>& exact) {
    if (computed.size() != exact.size())
        throw std::invalid_argument("error metric: computed and exact lengths differ");
    if (computed.empty())
        throw std::invalid_argument("error metric: need at least one evaluation point");
    std::vector<double> e(computed.size());
    for (std::size_t i = 0; i < computed.size(); ++i) {
        const double diff = std::fabs(computed[i] - exact[i]);
        e[i] = std::fabs(exact[i]) >= 0.001 ? diff / std::fabs(exact[i]) : diff;
    }
    return e;
}

inline double l2_relative_error(const std::vector<double>& computed,
                                const std::vector<double>& exact) {
    const std::vector<double> e = pointwise_errors(computed, exact);
    double s = 0.0;
    for (double v : e) s += v * v;
    return std::sqrt(s / static_cast<double>(e.size()));
}

inline double max_error(const std::vector<double>& computed, const std::vector<double>& exact) {
    const std::vector<double> e = pointwise_errors(computed, exact);
    return *std::max_element(e.begin(), e.end());
}

}  // namespace bkm
