#include <doctest.h>

#include "pccc/bench/apps.hpp"
#include "pccc/bench/synth.hpp"

using namespace pccc;
using net::Architecture;

namespace {

bench::LoadedSample synthetic_sample(uint64_t seed) {
    bench::CorpusOptions opts;
    opts.count = 1;
    opts.width = opts.height = 32;
    opts.seed = seed;
    const auto spec = bench::make_corpus_specs(opts)[0];
    const auto scene = bench::synth_generate(spec);
    bench::LoadedSample s;
    s.id = "synthetic";
    s.image = scene.image;
    s.depth = scene.depth;
    s.intrinsics = spec.intrinsics;
    s.gt = scene.gt;
    return s;
}

// model whose head emits the same (illum, logit) for every point
net::PcccModel<float> constant_model(const Eigen::Vector3f& c) {
    auto model = net::make_model<float>(Architecture::tiny(), 17);
    model.head.back().weight.setZero();
    model.head.back().bias << c.x(), c.y(), c.z(), 0.0f;
    return model;
}

}  // namespace

TEST_CASE("constant predicted map collapses local awb to the global path") {
    const auto sample = synthetic_sample(3);
    const auto model = constant_model(Eigen::Vector3f(0.8f, 0.5f, 0.3f));
    bench::AppConfig cfg;
    cfg.n_points = 128;

    const auto local = bench::local_awb(model, sample, cfg);
    // the global estimate of the same model is the normalized constant
    const auto cloud =
        geometry::build_point_cloud(sample.image, sample.depth, sample.intrinsics);
    const auto thumb = geometry::sample_points(cloud, cfg.n_points, cfg.seed);
    const auto est = net::estimate_cloud(model, thumb);
    const auto global = imaging::apply_awb(sample.image, est);

    REQUIRE(local.corrected.data.size() == global.data.size());
    for (size_t i = 0; i < global.data.size(); ++i)
        CHECK(local.corrected.data[i] == global.data[i]);  // bit for bit
}

TEST_CASE("illumination map only contains predicted point values") {
    const auto sample = synthetic_sample(4);
    const auto model = net::make_model<float>(Architecture::tiny(9, 14, 20), 5);
    bench::AppConfig cfg;
    cfg.n_points = 64;
    const auto map = bench::illumination_map(model, sample, cfg);

    // collect the per-point estimates the net produced
    const auto cloud =
        geometry::build_point_cloud(sample.image, sample.depth, sample.intrinsics);
    const auto thumb = geometry::sample_points(cloud, cfg.n_points, cfg.seed);
    auto [norm, frame] = geometry::normalize_cloud(thumb);
    const auto res = net::forward(model, norm);

    for (size_t px = 0; px < map.pixel_count(); ++px) {
        const Eigen::Vector3d v = map.pixel(px);
        bool found = false;
        for (Eigen::Index i = 0; i < res.p_illum.cols() && !found; ++i)
            found = (res.p_illum.col(i) - v).norm() == 0.0;
        CHECK(found);
    }
}

TEST_CASE("relight identity, shift-map mean, and reconstruction") {
    const auto sample = synthetic_sample(8);
    const auto model = net::make_model<float>(Architecture::tiny(), 21);
    bench::AppConfig cfg;
    cfg.n_points = 96;

    // shift map construction
    const auto probe = bench::relight(model, sample, imaging::Illuminant(1.0, 1.0, 1.0), cfg);
    Eigen::Vector3d shift_mean = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < probe.shift_map.pixel_count(); ++i)
        shift_mean += probe.shift_map.pixel(i);
    shift_mean /= static_cast<double>(probe.shift_map.pixel_count());
    for (int c = 0; c < 3; ++c) CHECK(std::abs(shift_mean[c]) < 1e-9);

    // shift + original mean reconstructs the map exactly
    for (size_t i = 0; i < probe.illum_map.pixel_count(); ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(probe.shift_map.data[i * 3 + c] + probe.map_mean[c] ==
                  doctest::Approx(probe.illum_map.data[i * 3 + c]).epsilon(1e-12));

    // identity relight: new chromaticity equal to the map's mean chromaticity
    const auto identity =
        bench::relight(model, sample, imaging::Illuminant(probe.map_mean), cfg);
    for (size_t i = 0; i < identity.relit.data.size(); ++i)
        CHECK(std::abs(identity.relit.data[i] - sample.image.data[i]) < 1e-6);
}

TEST_CASE("relight preserves the mean term's channel sum") {
    const auto sample = synthetic_sample(12);
    const auto model = net::make_model<float>(Architecture::tiny(), 2);
    const auto res = bench::relight(model, sample, imaging::Illuminant(1.5, 1.0, 0.5));
    CHECK(res.new_mean.sum() == doctest::Approx(res.map_mean.sum()).epsilon(1e-12));
}
