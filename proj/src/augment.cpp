#include "pccc/augment.hpp"

#include <cmath>

namespace pccc::augment {

namespace {

Eigen::Matrix3d euler_rotation(double rx, double ry, double rz) {
    return (Eigen::AngleAxisd(rz, Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(ry, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(rx, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

}  // namespace

geometry::ColoredPointCloud camera_pose_aug(const geometry::ColoredPointCloud& pc,
                                            const AugmentConfig& cfg, RngState& rng) {
    cfg.validate();
    const double lim = cfg.max_rotation_deg * M_PI / 180.0;
    std::uniform_real_distribution<double> angle(-lim, lim);
    const double rx = angle(rng), ry = angle(rng), rz = angle(rng);

    geometry::ColoredPointCloud out = pc;
    if (cfg.max_rotation_deg == 0.0) return out;

    const Eigen::Matrix3d r = euler_rotation(rx, ry, rz);
    const Eigen::Vector3d center = pc.points.topRows<3>().rowwise().mean();
    out.points.topRows<3>() =
        (r * (pc.points.topRows<3>().colwise() - center)).colwise() + center;
    return out;
}

geometry::ColoredPointCloud light_intensity_aug(const geometry::ColoredPointCloud& pc,
                                                const AugmentConfig& cfg, RngState& rng) {
    cfg.validate();
    std::normal_distribution<double> dist(cfg.intensity_mean, cfg.intensity_sigma);
    const double draw = cfg.intensity_sigma == 0.0 ? cfg.intensity_mean : dist(rng);
    const double scale = std::max(draw, cfg.intensity_floor);

    geometry::ColoredPointCloud out = pc;
    if (scale == 1.0) return out;
    out.points.bottomRows<3>() *= scale;
    return out;
}

std::pair<geometry::ColoredPointCloud, imaging::Illuminant> augment(
    const geometry::ColoredPointCloud& pc, const imaging::Illuminant& label,
    const AugmentConfig& cfg, RngState& rng) {
    if (!cfg.enabled) return {pc, label};
    geometry::ColoredPointCloud out = camera_pose_aug(pc, cfg, rng);
    out = light_intensity_aug(out, cfg, rng);
    return {std::move(out), label};
}

RngState make_sample_rng(uint64_t seed, uint64_t sample_index, uint64_t epoch) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(sample_index), static_cast<uint32_t>(epoch)};
    return RngState(seq);
}

}  // namespace pccc::augment
