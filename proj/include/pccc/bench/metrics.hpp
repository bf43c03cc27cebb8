#pragma once

#include <vector>

#include "pccc/error.hpp"

namespace pccc::bench {

// Angular-error summary in degrees. best25/worst25 are the means of the
// lowest/highest ceil(n/4) values.
struct MetricsSummary {
    double mean = 0.0;
    double median = 0.0;
    double trimean = 0.0;
    double best25 = 0.0;
    double worst25 = 0.0;
    size_t n = 0;
};

// Quartiles by linear interpolation (type 7); trimean = (Q1 + 2*Q2 + Q3) / 4.
MetricsSummary summarize_errors(std::vector<double> errors_deg);

}  // namespace pccc::bench
