#include "pccc/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pccc::imaging {

double srgb_to_linear(double v) {
    if (v <= 0.04045) return v / 12.92;
    return std::pow((v + 0.055) / 1.055, 2.4);
}

LinearImage srgb_to_linear(const SrgbImage& img) {
    LinearImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) out.data[i] = srgb_to_linear(img.data[i]);
    return out;
}

LinearImage remove_tuning(const LinearImage& img, const TuningMatrix& m) {
    const double det = m.m.determinant();
    if (std::abs(det) <= 1e-12)
        raise(ErrorCode::singular_matrix, "tuning matrix is singular (|det| <= 1e-12)");
    const Eigen::Matrix3d inv = m.m.inverse();

    LinearImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    size_t clamped = 0;
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        Eigen::Vector3d p = inv * img.pixel(i);
        for (int c = 0; c < 3; ++c) {
            if (p[c] < 0.0) {
                p[c] = 0.0;
                ++clamped;
            }
        }
        out.data[i * 3] = p.x();
        out.data[i * 3 + 1] = p.y();
        out.data[i * 3 + 2] = p.z();
    }
    if (clamped > 0)
        std::fprintf(stderr, "[pccc] remove_tuning: clamped %zu negative channel values to 0\n",
                     clamped);
    return out;
}

Illuminant label_illuminant(const LinearImage& img, const NeutralMask& mask, MaskStatistic stat) {
    if (mask.width != img.width || mask.height != img.height)
        raise(ErrorCode::shape_mismatch, "mask dimensions do not match image");

    std::vector<double> r, g, b;
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    size_t count = 0;
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        if (mask.mask[i] == 0) continue;
        const Eigen::Vector3d p = img.pixel(i);
        sum += p;
        ++count;
        if (stat == MaskStatistic::median) {
            r.push_back(p.x());
            g.push_back(p.y());
            b.push_back(p.z());
        }
    }
    if (count == 0) raise(ErrorCode::empty_mask, "neutral mask selects no pixels");

    Eigen::Vector3d v;
    if (stat == MaskStatistic::mean) {
        v = sum / static_cast<double>(count);
    } else {
        auto med = [](std::vector<double>& xs) {
            std::sort(xs.begin(), xs.end());
            const size_t k = xs.size();
            return (k % 2 == 1) ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
        };
        v = Eigen::Vector3d(med(r), med(g), med(b));
    }
    if (v.norm() <= 0.0) raise(ErrorCode::zero_vector, "masked region is black");
    return Illuminant(v);
}

Eigen::Vector3d awb_gains(const Illuminant& e) {
    if (e.r() <= 0.0 || e.g() <= 0.0 || e.b() <= 0.0)
        raise(ErrorCode::zero_component, "illuminant has a zero component, gains undefined");
    return Eigen::Vector3d(e.g() / e.r(), 1.0, e.g() / e.b());
}

LinearImage apply_awb(const LinearImage& img, const Illuminant& e) {
    const Eigen::Vector3d gains = awb_gains(e);
    LinearImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.data.size());
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) out.data[i * 3 + c] = img.data[i * 3 + c] * gains[c];
    return out;
}

double angular_error_deg(const Illuminant& a, const Illuminant& b) {
    const double d = std::clamp(a.vec().dot(b.vec()), -1.0, 1.0);
    return std::acos(d) * 180.0 / M_PI;
}

}  // namespace pccc::imaging
