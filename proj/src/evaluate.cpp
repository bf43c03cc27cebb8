#include "pccc/bench/evaluate.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pccc::bench {

Estimator make_baseline_estimator(const std::string& method,
                                  const baselines::BaselineConfig& cfg) {
    if (method == "grayworld")
        return [cfg](const LoadedSample& s) { return baselines::gray_world(s.image, cfg); };
    if (method == "whitepatch")
        return [cfg](const LoadedSample& s) { return baselines::white_patch(s.image, cfg); };
    if (method == "sog")
        return [cfg](const LoadedSample& s) { return baselines::shades_of_gray(s.image, cfg); };
    if (method == "grayedge1" || method == "grayedge2") {
        baselines::BaselineConfig c = cfg;
        c.derivative_order = method == "grayedge1" ? 1 : 2;
        return [c](const LoadedSample& s) { return baselines::gray_edge(s.image, c); };
    }
    raise(ErrorCode::invalid_argument, "unknown baseline method '" + method + "'");
}

Estimator make_pccc_estimator(const net::PcccModel<float>& model, int n_points,
                              geometry::DepthMode depth_mode, uint64_t seed) {
    return [model, n_points, depth_mode, seed](const LoadedSample& s) {
        auto cloud = geometry::build_point_cloud(s.image, s.depth, s.intrinsics, depth_mode);
        auto thumb = geometry::sample_points(cloud, n_points, seed);
        return net::estimate_cloud(model, thumb);
    };
}

namespace {

EvalResult run(const Estimator& estimator,
               const std::function<LoadedSample(size_t)>& fetch, size_t count) {
    if (count == 0) raise(ErrorCode::empty_split, "no samples in the requested split");
    EvalResult out;
    std::vector<double> errors;
    errors.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        const LoadedSample s = fetch(i);
        SampleResult r;
        r.id = s.id;
        try {
            const imaging::Illuminant est = estimator(s);
            r.error_deg = imaging::angular_error_deg(est, s.gt);
            r.ok = true;
            errors.push_back(r.error_deg);
        } catch (const Error& e) {
            r.failure = e.what();
            ++out.failures;
        }
        out.per_sample.push_back(std::move(r));
    }
    if (errors.empty())
        raise(ErrorCode::empty_split, "estimator failed on every sample");
    out.summary = summarize_errors(std::move(errors));
    return out;
}

}  // namespace

EvalResult evaluate(const Estimator& estimator, const DatasetManifest& manifest, Split split) {
    const auto records = manifest.split_samples(split);
    return run(estimator, [&](size_t i) { return load_sample(*records[i]); }, records.size());
}

EvalResult evaluate_samples(const Estimator& estimator,
                            const std::vector<LoadedSample>& samples) {
    return run(estimator, [&](size_t i) { return samples[i]; }, samples.size());
}

void write_per_sample_csv(const std::string& path, const EvalResult& result,
                          const std::string& method) {
    std::ofstream os(path);
    if (!os) raise(ErrorCode::io_error, "cannot write " + path);
    os << "id,error_deg,method\n";
    for (const auto& r : result.per_sample) {
        if (r.ok)
            os << r.id << "," << r.error_deg << "," << method << "\n";
        else
            os << r.id << ",failed:" << r.failure << "," << method << "\n";
    }
}

std::string format_summary_table(const MetricsSummary& s, const std::string& method,
                                 size_t failures) {
    std::ostringstream oss;
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s %8s %8s %6s\n", "Method", "Mean",
                  "Med.", "Tri.", "B25%", "W25%", "n");
    oss << line;
    std::snprintf(line, sizeof(line), "%-12s %8.3f %8.3f %8.3f %8.3f %8.3f %6zu\n",
                  method.c_str(), s.mean, s.median, s.trimean, s.best25, s.worst25, s.n);
    oss << line;
    if (failures > 0) oss << "(" << failures << " sample(s) failed and were excluded)\n";
    return oss.str();
}

}  // namespace pccc::bench
