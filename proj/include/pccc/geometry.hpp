#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <tuple>
#include <vector>

#include "pccc/error.hpp"
#include "pccc/imaging.hpp"

namespace pccc::geometry {

struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    void validate() const {
        if (!(fx > 0.0) || !(fy > 0.0))
            raise(ErrorCode::invalid_argument, "focal lengths must be positive");
    }
};

// Sensor-to-sensor pose. r must be a proper rotation.
struct RigidTransform {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    void validate() const {
        if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
            std::abs(r.determinant() - 1.0) > 1e-9)
            raise(ErrorCode::invalid_argument, "r is not a proper rotation");
    }
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return r * p + t; }
};

// Depths in meters; 0 encodes an invalid measurement.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> d;  // row-major

    static DepthMap zeros(int w, int h) {
        DepthMap dm;
        dm.width = w;
        dm.height = h;
        dm.d.assign(static_cast<size_t>(w) * h, 0.0);
        return dm;
    }
    static DepthMap constant(int w, int h, double depth) {
        DepthMap dm = zeros(w, h);
        std::fill(dm.d.begin(), dm.d.end(), depth);
        return dm;
    }
    double& at(int x, int y) { return d[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return d[static_cast<size_t>(y) * width + x]; }
};

// Columns are points: rows 0..2 = xyz (meters), rows 3..5 = rgb (linear).
// src maps each point back to its source pixel (v * src_width + u) when the
// cloud came from an image; empty otherwise.
struct ColoredPointCloud {
    Eigen::Matrix<double, 6, Eigen::Dynamic> points;
    std::vector<int32_t> src;
    int src_width = 0;
    int src_height = 0;

    Eigen::Index size() const { return points.cols(); }
    Eigen::Vector3d xyz(Eigen::Index i) const { return points.col(i).head<3>(); }
    Eigen::Vector3d rgb(Eigen::Index i) const { return points.col(i).tail<3>(); }
};

enum class DepthMode { real, uniform_one };

// Pinhole back-projection of pixel (u, v) at depth d.
Eigen::Vector3d backproject(double u, double v, double d, const CameraIntrinsics& k);

// Pinhole projection; requires p.z > 0.
std::pair<double, double> project(const Eigen::Vector3d& p, const CameraIntrinsics& k);

// Forward-warps a depth map from the depth-sensor frame into the RGB frame.
// Nearest z wins on pixel collisions; unhit pixels stay 0.
DepthMap align_depth_to_rgb(const DepthMap& dm, const CameraIntrinsics& kd,
                            const CameraIntrinsics& kc, const RigidTransform& x);

// One point per valid pixel. In uniform_one mode every pixel is kept at d = 1.
ColoredPointCloud build_point_cloud(const imaging::LinearImage& img, const DepthMap& dm,
                                    const CameraIntrinsics& k,
                                    DepthMode depth_mode = DepthMode::real);

// Seed-deterministic stratified sample of n points over the source pixel grid.
// If n exceeds the cloud size, points repeat cyclically (with a warning).
ColoredPointCloud sample_points(const ColoredPointCloud& pc, int n, uint64_t seed);

struct CloudFrame {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double scale = 1.0;
};

// Centers xyz at the centroid and divides by the max point radius.
// Colors are untouched. Returns the applied frame for inversion.
std::pair<ColoredPointCloud, CloudFrame> normalize_cloud(const ColoredPointCloud& pc);

}  // namespace pccc::geometry
