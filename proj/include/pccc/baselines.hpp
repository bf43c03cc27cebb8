#pragma once

#include <limits>

#include "pccc/imaging.hpp"

namespace pccc::baselines {

// Shared knobs for the statistics-based estimators. saturation_threshold is a
// fraction of the full-scale linear value 1.0; pixels with any channel at or
// above it are excluded as clipped.
struct BaselineConfig {
    double minkowski_p = 6.0;
    double smoothing_sigma = 2.0;
    int derivative_order = 1;  // 0|1|2
    double saturation_threshold = 0.98;

    static constexpr double infinity_p = std::numeric_limits<double>::infinity();
};

imaging::Illuminant gray_world(const imaging::LinearImage& img,
                               const BaselineConfig& cfg = BaselineConfig{});

imaging::Illuminant white_patch(const imaging::LinearImage& img,
                                const BaselineConfig& cfg = BaselineConfig{});

// Per-channel Minkowski p-mean; p = 1 reduces to gray_world, p -> inf to white_patch.
imaging::Illuminant shades_of_gray(const imaging::LinearImage& img, const BaselineConfig& cfg);

// Gaussian smoothing, derivative magnitude of the configured order, Minkowski
// p-mean, normalize.
imaging::Illuminant gray_edge(const imaging::LinearImage& img, const BaselineConfig& cfg);

}  // namespace pccc::baselines
