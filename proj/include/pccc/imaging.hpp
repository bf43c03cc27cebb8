#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pccc/error.hpp"

namespace pccc::imaging {

// Interleaved H x W x 3 image, row-major, gamma-encoded values in [0,1].
struct SrgbImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // size width*height*3

    double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Linear-light counterpart; values are non-negative and unbounded above.
struct LinearImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    static LinearImage zeros(int w, int h) {
        LinearImage img;
        img.width = w;
        img.height = h;
        img.data.assign(static_cast<size_t>(w) * h * 3, 0.0);
        return img;
    }
    double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    Eigen::Vector3d pixel(size_t i) const {
        return Eigen::Vector3d(data[i * 3], data[i * 3 + 1], data[i * 3 + 2]);
    }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Unit-norm non-negative RGB chromaticity.
class Illuminant {
  public:
    Illuminant() : e_(Eigen::Vector3d::Constant(1.0 / std::sqrt(3.0))) {}

    // Normalizes on construction. Components must be >= 0 with at least one > 0.
    explicit Illuminant(const Eigen::Vector3d& v) {
        if (!v.allFinite())
            raise(ErrorCode::invalid_argument, "illuminant has non-finite components");
        if (v.minCoeff() < 0.0)
            raise(ErrorCode::invalid_argument, "illuminant has negative components");
        const double n = v.norm();
        if (n <= 0.0)
            raise(ErrorCode::zero_vector, "illuminant is the zero vector");
        e_ = v / n;
    }
    Illuminant(double r, double g, double b) : Illuminant(Eigen::Vector3d(r, g, b)) {}

    const Eigen::Vector3d& vec() const { return e_; }
    double r() const { return e_.x(); }
    double g() const { return e_.y(); }
    double b() const { return e_.z(); }

    static Illuminant neutral() { return Illuminant(); }

  private:
    Eigen::Vector3d e_;
};

// 3x3 camera rendering transform; must be invertible.
struct TuningMatrix {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
};

struct NeutralMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> mask;  // nonzero = neutral pixel

    bool at(int x, int y) const { return mask[static_cast<size_t>(y) * width + x] != 0; }
};

enum class MaskStatistic { mean, median };

// Piecewise sRGB electro-optical transfer function, per channel.
double srgb_to_linear(double v);
LinearImage srgb_to_linear(const SrgbImage& img);

// Applies m^-1 to every pixel; negative results are clamped to zero and a
// warning with the clamp count is emitted on stderr.
LinearImage remove_tuning(const LinearImage& img, const TuningMatrix& m);

// Mean (or median) RGB over the masked pixels, normalized.
Illuminant label_illuminant(const LinearImage& img, const NeutralMask& mask,
                            MaskStatistic stat = MaskStatistic::mean);

// Green-anchored von Kries gains (e_g/e_r, 1, e_g/e_b) for a given illuminant.
Eigen::Vector3d awb_gains(const Illuminant& e);

// Per-channel von Kries correction with green-anchored gains.
LinearImage apply_awb(const LinearImage& img, const Illuminant& e);

// arccos of the dot product, in degrees.
double angular_error_deg(const Illuminant& a, const Illuminant& b);

}  // namespace pccc::imaging
