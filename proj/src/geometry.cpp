#include "pccc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace pccc::geometry {

Eigen::Vector3d backproject(double u, double v, double d, const CameraIntrinsics& k) {
    if (!(d > 0.0)) raise(ErrorCode::invalid_depth, "backproject requires d > 0");
    return Eigen::Vector3d((u - k.cx) * d / k.fx, (v - k.cy) * d / k.fy, d);
}

std::pair<double, double> project(const Eigen::Vector3d& p, const CameraIntrinsics& k) {
    if (!(p.z() > 0.0)) raise(ErrorCode::invalid_depth, "project requires z > 0");
    return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy};
}

DepthMap align_depth_to_rgb(const DepthMap& dm, const CameraIntrinsics& kd,
                            const CameraIntrinsics& kc, const RigidTransform& x) {
    x.validate();
    DepthMap out = DepthMap::zeros(dm.width, dm.height);
    for (int v = 0; v < dm.height; ++v) {
        for (int u = 0; u < dm.width; ++u) {
            const double d = dm.at(u, v);
            if (!(d > 0.0)) continue;
            const Eigen::Vector3d q = x.apply(backproject(u, v, d, kd));
            if (!(q.z() > 0.0)) continue;
            const auto [uc, vc] = project(q, kc);
            const int ui = static_cast<int>(std::lround(uc));
            const int vi = static_cast<int>(std::lround(vc));
            if (ui < 0 || ui >= out.width || vi < 0 || vi >= out.height) continue;
            double& cell = out.at(ui, vi);
            if (cell == 0.0 || q.z() < cell) cell = q.z();  // nearest z wins
        }
    }
    return out;
}

ColoredPointCloud build_point_cloud(const imaging::LinearImage& img, const DepthMap& dm,
                                    const CameraIntrinsics& k, DepthMode depth_mode) {
    if (img.width != dm.width || img.height != dm.height)
        raise(ErrorCode::shape_mismatch, "image and depth map dimensions differ");
    k.validate();

    std::vector<int32_t> src;
    src.reserve(img.pixel_count());
    for (int v = 0; v < img.height; ++v)
        for (int u = 0; u < img.width; ++u)
            if (depth_mode == DepthMode::uniform_one || dm.at(u, v) > 0.0)
                src.push_back(v * img.width + u);

    if (src.size() < 16)
        raise(ErrorCode::empty_cloud, "fewer than 16 valid pixels for point cloud");

    ColoredPointCloud pc;
    pc.points.resize(6, static_cast<Eigen::Index>(src.size()));
    pc.src = std::move(src);
    pc.src_width = img.width;
    pc.src_height = img.height;
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        const int u = pc.src[i] % img.width;
        const int v = pc.src[i] / img.width;
        const double d = depth_mode == DepthMode::uniform_one ? 1.0 : dm.at(u, v);
        pc.points.col(i).head<3>() = backproject(u, v, d, k);
        pc.points.col(i).tail<3>() =
            Eigen::Vector3d(img.at(u, v, 0), img.at(u, v, 1), img.at(u, v, 2));
    }
    return pc;
}

namespace {

ColoredPointCloud take_indices(const ColoredPointCloud& pc, const std::vector<int>& idx) {
    ColoredPointCloud out;
    out.points.resize(6, static_cast<Eigen::Index>(idx.size()));
    out.src_width = pc.src_width;
    out.src_height = pc.src_height;
    if (!pc.src.empty()) out.src.resize(idx.size());
    for (size_t j = 0; j < idx.size(); ++j) {
        out.points.col(static_cast<Eigen::Index>(j)) = pc.points.col(idx[j]);
        if (!pc.src.empty()) out.src[j] = pc.src[idx[j]];
    }
    return out;
}

}  // namespace

ColoredPointCloud sample_points(const ColoredPointCloud& pc, int n, uint64_t seed) {
    if (n < 1) raise(ErrorCode::invalid_argument, "sample size must be >= 1");
    const int total = static_cast<int>(pc.size());
    if (total < 1) raise(ErrorCode::empty_cloud, "cannot sample from an empty cloud");

    if (n >= total) {
        if (n > total)
            std::fprintf(stderr, "[pccc] sample_points: n=%d exceeds cloud size %d, repeating\n",
                         n, total);
        std::vector<int> idx(n);
        for (int j = 0; j < n; ++j) idx[j] = j % total;
        return take_indices(pc, idx);
    }

    std::mt19937_64 rng(seed);
    std::vector<int> chosen;
    chosen.reserve(n);
    std::vector<char> taken(total, 0);

    const bool have_grid = !pc.src.empty() && pc.src_width > 0 && pc.src_height > 0;
    if (have_grid) {
        // Grid with gx*gy <= n cells, roughly square in pixel space.
        int gy = std::max(1, static_cast<int>(std::floor(
                                 std::sqrt(static_cast<double>(n) * pc.src_height / pc.src_width))));
        gy = std::min(gy, pc.src_height);
        int gx = std::min({n / gy, pc.src_width, n});
        gx = std::max(gx, 1);

        std::vector<std::vector<int>> cells(static_cast<size_t>(gx) * gy);
        for (int i = 0; i < total; ++i) {
            const int u = pc.src[i] % pc.src_width;
            const int v = pc.src[i] / pc.src_width;
            const int cx = std::min(gx - 1, u * gx / pc.src_width);
            const int cy = std::min(gy - 1, v * gy / pc.src_height);
            cells[static_cast<size_t>(cy) * gx + cx].push_back(i);
        }
        for (const auto& cell : cells) {
            if (cell.empty() || static_cast<int>(chosen.size()) >= n) continue;
            std::uniform_int_distribution<size_t> pick(0, cell.size() - 1);
            const int i = cell[pick(rng)];
            chosen.push_back(i);
            taken[i] = 1;
        }
    }

    // Fill the remainder uniformly from the untaken points.
    if (static_cast<int>(chosen.size()) < n) {
        std::vector<int> rest;
        rest.reserve(total - chosen.size());
        for (int i = 0; i < total; ++i)
            if (!taken[i]) rest.push_back(i);
        std::shuffle(rest.begin(), rest.end(), rng);
        for (size_t j = 0; static_cast<int>(chosen.size()) < n; ++j) chosen.push_back(rest[j]);
    }
    return take_indices(pc, chosen);
}

std::pair<ColoredPointCloud, CloudFrame> normalize_cloud(const ColoredPointCloud& pc) {
    if (pc.size() < 1) raise(ErrorCode::empty_cloud, "cannot normalize an empty cloud");
    CloudFrame frame;
    frame.center = pc.points.topRows<3>().rowwise().mean();

    double radius = 0.0;
    for (Eigen::Index i = 0; i < pc.size(); ++i)
        radius = std::max(radius, (pc.xyz(i) - frame.center).norm());
    frame.scale = radius < 1e-9 ? 1.0 : radius;

    ColoredPointCloud out = pc;
    out.points.topRows<3>() = (pc.points.topRows<3>().colwise() - frame.center) / frame.scale;
    return {std::move(out), frame};
}

}  // namespace pccc::geometry
