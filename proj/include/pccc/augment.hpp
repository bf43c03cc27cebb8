#pragma once

#include <cstdint>
#include <random>

#include "pccc/geometry.hpp"
#include "pccc/imaging.hpp"

namespace pccc::augment {

struct AugmentConfig {
    bool enabled = true;
    double max_rotation_deg = 10.0;  // per Euler axis, in [0, 180)
    double intensity_mean = 1.0;
    double intensity_sigma = 0.15;
    double intensity_floor = 0.1;

    void validate() const {
        if (max_rotation_deg < 0.0 || max_rotation_deg >= 180.0)
            raise(ErrorCode::invalid_argument, "max_rotation_deg must be in [0, 180)");
        if (intensity_sigma < 0.0)
            raise(ErrorCode::invalid_argument, "intensity_sigma must be >= 0");
        if (!(intensity_floor > 0.0))
            raise(ErrorCode::invalid_argument, "intensity_floor must be > 0");
    }
};

using RngState = std::mt19937_64;

// Rotates xyz about the cloud centroid with independent per-axis Euler angles
// uniform in +-max_rotation_deg. Colors are untouched.
geometry::ColoredPointCloud camera_pose_aug(const geometry::ColoredPointCloud& pc,
                                            const AugmentConfig& cfg, RngState& rng);

// Scales all colors by one scalar drawn from N(mean, sigma^2), clamped below
// at intensity_floor. Coordinates are untouched.
geometry::ColoredPointCloud light_intensity_aug(const geometry::ColoredPointCloud& pc,
                                                const AugmentConfig& cfg, RngState& rng);

// Both augmentations composed. The label passes through unchanged.
std::pair<geometry::ColoredPointCloud, imaging::Illuminant> augment(
    const geometry::ColoredPointCloud& pc, const imaging::Illuminant& label,
    const AugmentConfig& cfg, RngState& rng);

// Stream for (global seed, sample index, epoch), for reproducible training.
RngState make_sample_rng(uint64_t seed, uint64_t sample_index, uint64_t epoch);

}  // namespace pccc::augment
