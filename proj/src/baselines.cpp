#include "pccc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pccc::baselines {

namespace {

using imaging::Illuminant;
using imaging::LinearImage;

std::vector<char> unsaturated_mask(const LinearImage& img, double threshold) {
    const size_t n = img.pixel_count();
    std::vector<char> ok(n, 1);
    size_t kept = 0;
    for (size_t i = 0; i < n; ++i) {
        const double m = std::max({img.data[i * 3], img.data[i * 3 + 1], img.data[i * 3 + 2]});
        ok[i] = m < threshold ? 1 : 0;
        kept += ok[i];
    }
    if (kept == 0) raise(ErrorCode::all_saturated, "every pixel is saturated");
    return ok;
}

Illuminant normalize_or_throw(const Eigen::Vector3d& v, const char* what) {
    if (v.norm() <= 0.0) raise(ErrorCode::zero_mean, what);
    return Illuminant(v);
}

// Minkowski p-mean per channel over selected pixels, rescaled by the channel
// max for numerical range. Exactly 1-homogeneous in the image values.
Eigen::Vector3d minkowski_mean(const std::vector<double>& values, const std::vector<char>& ok,
                               double p) {
    Eigen::Vector3d peak = Eigen::Vector3d::Zero();
    size_t count = 0;
    const size_t n = ok.size();
    for (size_t i = 0; i < n; ++i) {
        if (!ok[i]) continue;
        ++count;
        for (int c = 0; c < 3; ++c) peak[c] = std::max(peak[c], values[i * 3 + c]);
    }
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < n; ++i) {
        if (!ok[i]) continue;
        for (int c = 0; c < 3; ++c)
            if (peak[c] > 0.0) acc[c] += std::pow(values[i * 3 + c] / peak[c], p);
    }
    Eigen::Vector3d out;
    for (int c = 0; c < 3; ++c)
        out[c] = peak[c] > 0.0 ? peak[c] * std::pow(acc[c] / static_cast<double>(count), 1.0 / p)
                               : 0.0;
    return out;
}

std::vector<double> gaussian_smooth(const std::vector<double>& in, int w, int h, double sigma) {
    if (sigma <= 0.0) return in;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        ksum += kernel[i + radius];
    }
    for (double& k : kernel) k /= ksum;

    auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - 1 - i;
        return i;
    };
    std::vector<double> tmp(in.size()), out(in.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i)
                    acc += kernel[i + radius] *
                           in[(static_cast<size_t>(y) * w + reflect(x + i, w)) * 3 + c];
                tmp[(static_cast<size_t>(y) * w + x) * 3 + c] = acc;
            }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i)
                    acc += kernel[i + radius] *
                           tmp[(static_cast<size_t>(reflect(y + i, h)) * w + x) * 3 + c];
                out[(static_cast<size_t>(y) * w + x) * 3 + c] = acc;
            }
    return out;
}

}  // namespace

Illuminant gray_world(const LinearImage& img, const BaselineConfig& cfg) {
    const auto ok = unsaturated_mask(img, cfg.saturation_threshold);
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    size_t count = 0;
    for (size_t i = 0; i < ok.size(); ++i) {
        if (!ok[i]) continue;
        sum += img.pixel(i);
        ++count;
    }
    return normalize_or_throw(sum / static_cast<double>(count), "image mean is black");
}

Illuminant white_patch(const LinearImage& img, const BaselineConfig& cfg) {
    const auto ok = unsaturated_mask(img, cfg.saturation_threshold);
    Eigen::Vector3d peak = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < ok.size(); ++i) {
        if (!ok[i]) continue;
        peak = peak.cwiseMax(img.pixel(i));
    }
    return normalize_or_throw(peak, "channel maxima are all zero");
}

Illuminant shades_of_gray(const LinearImage& img, const BaselineConfig& cfg) {
    if (std::isinf(cfg.minkowski_p)) return white_patch(img, cfg);
    if (!(cfg.minkowski_p >= 1.0))
        raise(ErrorCode::invalid_argument, "minkowski_p must be >= 1");
    const auto ok = unsaturated_mask(img, cfg.saturation_threshold);
    return normalize_or_throw(minkowski_mean(img.data, ok, cfg.minkowski_p),
                              "image p-mean is black");
}

Illuminant gray_edge(const LinearImage& img, const BaselineConfig& cfg) {
    if (cfg.derivative_order != 1 && cfg.derivative_order != 2)
        raise(ErrorCode::invalid_argument, "derivative_order must be 1 or 2");
    if (cfg.smoothing_sigma < 0.0)
        raise(ErrorCode::invalid_argument, "smoothing_sigma must be >= 0");
    if (!(cfg.minkowski_p >= 1.0) || std::isinf(cfg.minkowski_p))
        raise(ErrorCode::invalid_argument, "minkowski_p must be finite and >= 1");

    // Saturation is judged on original values, before smoothing.
    const auto ok = unsaturated_mask(img, cfg.saturation_threshold);
    const int w = img.width, h = img.height;
    const auto smooth = gaussian_smooth(img.data, w, h, cfg.smoothing_sigma);

    auto value = [&](int x, int y, int c) {
        x = std::clamp(x, 0, w - 1);  // symmetric reflection collapses to clamp at +-1
        y = std::clamp(y, 0, h - 1);
        return smooth[(static_cast<size_t>(y) * w + x) * 3 + c];
    };

    std::vector<double> mag(static_cast<size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                double m;
                if (cfg.derivative_order == 1) {
                    const double dx = 0.5 * (value(x + 1, y, c) - value(x - 1, y, c));
                    const double dy = 0.5 * (value(x, y + 1, c) - value(x, y - 1, c));
                    m = std::sqrt(dx * dx + dy * dy);
                } else {
                    const double lap = value(x + 1, y, c) + value(x - 1, y, c) +
                                       value(x, y + 1, c) + value(x, y - 1, c) -
                                       4.0 * value(x, y, c);
                    m = std::abs(lap);
                }
                mag[(static_cast<size_t>(y) * w + x) * 3 + c] = m;
            }

    const Eigen::Vector3d v = minkowski_mean(mag, ok, cfg.minkowski_p);
    if (v.norm() <= 0.0)
        raise(ErrorCode::zero_gradient_energy, "image has no gradient energy");
    return Illuminant(v);
}

}  // namespace pccc::baselines
