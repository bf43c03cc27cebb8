#pragma once

#include <functional>
#include <string>

#include "pccc/baselines.hpp"
#include "pccc/bench/manifest.hpp"
#include "pccc/bench/metrics.hpp"
#include "pccc/net/train.hpp"

namespace pccc::bench {

using Estimator = std::function<imaging::Illuminant(const LoadedSample&)>;

// Named baseline estimators: grayworld, whitepatch, sog, grayedge1, grayedge2.
Estimator make_baseline_estimator(const std::string& method,
                                  const baselines::BaselineConfig& cfg);

// Thumbnail pipeline: build cloud, stratified-sample n points, normalize, net.
Estimator make_pccc_estimator(const net::PcccModel<float>& model, int n_points,
                              geometry::DepthMode depth_mode, uint64_t seed);

struct SampleResult {
    std::string id;
    bool ok = false;
    double error_deg = 0.0;
    std::string failure;
};

struct EvalResult {
    MetricsSummary summary;  // over successful samples only
    std::vector<SampleResult> per_sample;
    size_t failures = 0;
};

// Runs the estimator over one split. Per-sample failures are recorded and
// excluded from the summary, never silently dropped.
EvalResult evaluate(const Estimator& estimator, const DatasetManifest& manifest, Split split);

// In-memory variant used by the synthetic benchmarks.
EvalResult evaluate_samples(const Estimator& estimator, const std::vector<LoadedSample>& samples);

void write_per_sample_csv(const std::string& path, const EvalResult& result,
                          const std::string& method);

std::string format_summary_table(const MetricsSummary& s, const std::string& method,
                                 size_t failures);

}  // namespace pccc::bench
