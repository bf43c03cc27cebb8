#include "pccc/bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pccc::bench {

namespace {

// type-7 quantile on sorted data
double quantile(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = (static_cast<double>(n) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

MetricsSummary summarize_errors(std::vector<double> errors_deg) {
    if (errors_deg.empty()) raise(ErrorCode::empty_split, "no errors to summarize");
    std::sort(errors_deg.begin(), errors_deg.end());
    const size_t n = errors_deg.size();

    MetricsSummary s;
    s.n = n;
    s.mean = std::accumulate(errors_deg.begin(), errors_deg.end(), 0.0) / static_cast<double>(n);
    s.median = n % 2 == 1 ? errors_deg[n / 2]
                          : 0.5 * (errors_deg[n / 2 - 1] + errors_deg[n / 2]);
    s.trimean = 0.25 * (quantile(errors_deg, 0.25) + 2.0 * quantile(errors_deg, 0.5) +
                        quantile(errors_deg, 0.75));

    const size_t k = (n + 3) / 4;  // ceil(n/4)
    s.best25 = std::accumulate(errors_deg.begin(), errors_deg.begin() + k, 0.0) /
               static_cast<double>(k);
    s.worst25 = std::accumulate(errors_deg.end() - k, errors_deg.end(), 0.0) /
                static_cast<double>(k);
    return s;
}

}  // namespace pccc::bench
