#include "pccc/bench/apps.hpp"

#include <cstdio>
#include <deque>

namespace pccc::bench {

imaging::LinearImage illumination_map(const net::PcccModel<float>& model,
                                      const LoadedSample& sample, const AppConfig& cfg) {
    auto cloud = geometry::build_point_cloud(sample.image, sample.depth, sample.intrinsics,
                                             cfg.depth_mode);
    auto thumb = geometry::sample_points(cloud, cfg.n_points, cfg.seed);
    auto [norm, frame] = geometry::normalize_cloud(thumb);
    (void)frame;
    const auto res = net::forward(model, norm);

    if ((res.p_illum.array() - net::kIllumFloor).abs().maxCoeff() < 1e-9)
        std::fprintf(stderr,
                     "[pccc] illumination map is flat at the rectifier floor; "
                     "the model looks untrained\n");

    const int w = sample.image.width, h = sample.image.height;
    imaging::LinearImage map = imaging::LinearImage::zeros(w, h);
    std::vector<int32_t> owner(static_cast<size_t>(w) * h, -1);

    // Seed the grid with the sampled points, then flood outward so every hole
    // takes the value of its nearest assigned point.
    std::deque<int32_t> queue;
    for (Eigen::Index i = 0; i < norm.size(); ++i) {
        const int32_t px = norm.src[i];
        if (owner[px] != -1) continue;  // cyclic repeats land on the same pixel
        owner[px] = static_cast<int32_t>(i);
        queue.push_back(px);
    }
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const int32_t px = queue.front();
        queue.pop_front();
        const int x = px % w, y = px / w;
        for (int k = 0; k < 4; ++k) {
            const int nx = x + dx[k], ny = y + dy[k];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const int32_t np = ny * w + nx;
            if (owner[np] != -1) continue;
            owner[np] = owner[px];
            queue.push_back(np);
        }
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const Eigen::Vector3d v = res.p_illum.col(owner[static_cast<size_t>(y) * w + x]);
            for (int c = 0; c < 3; ++c) map.at(x, y, c) = v[c];
        }
    return map;
}

LocalAwbResult local_awb(const net::PcccModel<float>& model, const LoadedSample& sample,
                         const AppConfig& cfg) {
    LocalAwbResult out;
    out.illum_map = illumination_map(model, sample, cfg);
    out.corrected = imaging::LinearImage::zeros(sample.image.width, sample.image.height);
    const size_t n = sample.image.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        // Same gain construction as the global path, so a constant map
        // matches apply_awb bit for bit.
        const Eigen::Vector3d gains =
            imaging::awb_gains(imaging::Illuminant(out.illum_map.pixel(i)));
        for (int c = 0; c < 3; ++c)
            out.corrected.data[i * 3 + c] = sample.image.data[i * 3 + c] * gains[c];
    }
    return out;
}

RelightResult relight(const net::PcccModel<float>& model, const LoadedSample& sample,
                      const imaging::Illuminant& new_chromaticity, const AppConfig& cfg) {
    RelightResult out;
    out.illum_map = illumination_map(model, sample, cfg);
    const size_t n = out.illum_map.pixel_count();

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < n; ++i) mean += out.illum_map.pixel(i);
    mean /= static_cast<double>(n);
    out.map_mean = mean;

    // Keep the channel sum of the mean term, swap only its chromaticity.
    const Eigen::Vector3d target = new_chromaticity.vec();
    out.new_mean = target * (mean.sum() / target.sum());

    out.shift_map = imaging::LinearImage::zeros(out.illum_map.width, out.illum_map.height);
    out.relit = imaging::LinearImage::zeros(sample.image.width, sample.image.height);
    for (size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
            const double shift = out.illum_map.data[i * 3 + c] - mean[c];
            out.shift_map.data[i * 3 + c] = shift;
            const double old_v = std::max(out.illum_map.data[i * 3 + c], 1e-6);
            const double new_v = std::max(shift + out.new_mean[c], 0.0);
            out.relit.data[i * 3 + c] = sample.image.data[i * 3 + c] * (new_v / old_v);
        }
    }
    return out;
}

}  // namespace pccc::bench
