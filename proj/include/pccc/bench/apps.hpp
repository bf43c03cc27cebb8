#pragma once

#include "pccc/bench/manifest.hpp"
#include "pccc/net/train.hpp"

namespace pccc::bench {

struct AppConfig {
    int n_points = 256;
    geometry::DepthMode depth_mode = geometry::DepthMode::real;
    uint64_t seed = 0;
};

// Per-pixel illumination map: per-point estimates splatted to their source
// pixels, holes filled from the nearest assigned point.
imaging::LinearImage illumination_map(const net::PcccModel<float>& model,
                                      const LoadedSample& sample, const AppConfig& cfg);

struct LocalAwbResult {
    imaging::LinearImage corrected;
    imaging::LinearImage illum_map;
};

// Spatially varying white balance: green-anchored gains per pixel from the
// illumination map. A constant map reproduces global apply_awb exactly.
LocalAwbResult local_awb(const net::PcccModel<float>& model, const LoadedSample& sample,
                         const AppConfig& cfg = AppConfig{});

struct RelightResult {
    imaging::LinearImage relit;
    imaging::LinearImage illum_map;
    imaging::LinearImage shift_map;      // illum_map minus its per-channel mean
    Eigen::Vector3d map_mean;
    Eigen::Vector3d new_mean;            // new chromaticity scaled to the old mean sum
};

// Swaps the mean term of the illumination map for the requested chromaticity
// (keeping the per-channel sum, so mean luminance is preserved) and re-renders
// by per-pixel ratio.
RelightResult relight(const net::PcccModel<float>& model, const LoadedSample& sample,
                      const imaging::Illuminant& new_chromaticity,
                      const AppConfig& cfg = AppConfig{});

}  // namespace pccc::bench
