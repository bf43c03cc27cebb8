#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pccc/error.hpp"
#include "pccc/geometry.hpp"
#include "pccc/imaging.hpp"
#include "pccc/net/gemm.hpp"

namespace pccc::net {

// Floor added to the rectified per-point illuminant so the fused estimate can
// never collapse to the zero vector.
inline constexpr double kIllumFloor = 1e-4;
// Clamp margin inside the arccos of the loss; keeps its gradient finite.
inline constexpr double kCosClamp = 1e-7;

template <typename S>
struct LinearLayer {
    MatX<S> weight;  // out x in
    VecX<S> bias;    // out

    int in() const { return static_cast<int>(weight.cols()); }
    int out() const { return static_cast<int>(weight.rows()); }
};

// Layer widths as chains [in, out0, out1, ...]. The head input is the
// concatenation of the first-group output and the pooled global feature.
struct Architecture {
    std::vector<int> group1{6, 64};
    std::vector<int> group2{64, 128, 1024};
    std::vector<int> head{1088, 512, 256, 128, 4};

    static Architecture standard() { return Architecture{}; }

    // Same topology at reduced widths, for exhaustive-gradient tests.
    static Architecture tiny(int g1 = 8, int mid = 12, int global = 24) {
        Architecture a;
        a.group1 = {6, g1};
        a.group2 = {g1, mid, global};
        a.head = {g1 + global, 16, 8, 4};
        return a;
    }

    int local_width() const { return group1.back() + group2.back(); }

    void validate() const {
        if (group1.size() < 2 || group2.size() < 2 || head.size() < 2)
            raise(ErrorCode::invalid_argument, "architecture chains need >= 1 layer each");
        if (group1.front() != 6)
            raise(ErrorCode::invalid_argument, "point features are 6-dimensional");
        if (group2.front() != group1.back())
            raise(ErrorCode::invalid_argument, "group2 input must match group1 output");
        if (head.front() != local_width())
            raise(ErrorCode::invalid_argument, "head input must be group1 output + global width");
        if (head.back() != 4)
            raise(ErrorCode::invalid_argument, "head output must be 4 (illum rgb + weight)");
        for (auto& chain : {group1, group2, head})
            for (int w : chain)
                if (w < 1) raise(ErrorCode::invalid_argument, "layer widths must be >= 1");
    }
};

template <typename S>
struct PcccModel {
    std::vector<LinearLayer<S>> group1;  // per-point, feeds the local concat
    std::vector<LinearLayer<S>> group2;  // per-point, feeds the max pool
    std::vector<LinearLayer<S>> head;    // per-point on the 1088-wide local vector

    Architecture arch() const {
        Architecture a;
        auto chain = [](const std::vector<LinearLayer<S>>& layers) {
            std::vector<int> c{layers.front().in()};
            for (const auto& l : layers) c.push_back(l.out());
            return c;
        };
        a.group1 = chain(group1);
        a.group2 = chain(group2);
        a.head = chain(head);
        return a;
    }

    size_t parameter_count() const {
        size_t n = 0;
        for (auto* g : {&group1, &group2, &head})
            for (const auto& l : *g) n += static_cast<size_t>(l.weight.size()) + l.bias.size();
        return n;
    }

    template <typename T>
    PcccModel<T> cast() const {
        PcccModel<T> m;
        auto conv = [](const std::vector<LinearLayer<S>>& in) {
            std::vector<LinearLayer<T>> out(in.size());
            for (size_t i = 0; i < in.size(); ++i) {
                out[i].weight = in[i].weight.template cast<T>();
                out[i].bias = in[i].bias.template cast<T>();
            }
            return out;
        };
        m.group1 = conv(group1);
        m.group2 = conv(group2);
        m.head = conv(head);
        return m;
    }
};

// Kaiming fan-in initialization, zero biases. Weights are drawn in double in
// declaration order, so float and double models from one seed agree.
template <typename S>
PcccModel<S> make_model(const Architecture& arch, uint64_t seed) {
    arch.validate();
    std::mt19937_64 rng(seed);
    auto build = [&rng](const std::vector<int>& chain) {
        std::vector<LinearLayer<S>> layers;
        for (size_t i = 0; i + 1 < chain.size(); ++i) {
            LinearLayer<S> l;
            const int fan_in = chain[i], fan_out = chain[i + 1];
            std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
            l.weight.resize(fan_out, fan_in);
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
                for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
                    l.weight(r, c) = static_cast<S>(dist(rng));
            l.bias = VecX<S>::Zero(fan_out);
            layers.push_back(std::move(l));
        }
        return layers;
    };
    PcccModel<S> m;
    m.group1 = build(arch.group1);
    m.group2 = build(arch.group2);
    m.head = build(arch.head);
    return m;
}

// Caches everything backward() needs. The widest per-point activation (the
// pre-pool feature map) is reduced to its pooled maxima and argmax columns.
template <typename S>
struct ForwardTrace {
    MatX<S> input;                  // 6 x N
    std::vector<MatX<S>> group1_h;  // post-relu, one per group1 layer
    std::vector<MatX<S>> group2_h;  // post-relu, all group2 layers except the last
    Eigen::VectorXi argmax;         // pooled point index per global channel
    VecX<S> global;                 // pooled feature (relu applied)
    std::vector<MatX<S>> head_h;    // post-relu head hidden layers
    MatX<S> head_out;               // raw 4 x N head output
    Eigen::Matrix3Xd p_illum;       // rectified + floored per-point estimates
    Eigen::VectorXd weights;        // softmax over the spatial logits
    Eigen::Vector3d fused;          // unnormalized global estimate

    Eigen::Index n_points() const { return input.cols(); }
};

template <typename S>
struct ForwardResult {
    imaging::Illuminant e_global;
    Eigen::Matrix3Xd p_illum;  // column per point
    Eigen::VectorXd w_s;       // raw spatial logits, one per point
    ForwardTrace<S> trace;
};

// Full forward pass. The cloud is expected in the normalized (centroid zero,
// unit radius) convention used for training.
template <typename S>
ForwardResult<S> forward(const PcccModel<S>& model, const geometry::ColoredPointCloud& pc) {
    if (pc.size() < 1) raise(ErrorCode::empty_cloud, "forward needs at least one point");
    if (model.group1.empty() || model.group1.front().in() != 6)
        raise(ErrorCode::shape_mismatch, "model input width must be 6");

    ForwardTrace<S> tr;
    tr.input = pc.points.cast<S>();
    const Eigen::Index n = tr.input.cols();
    tr.group1_h.reserve(model.group1.size());
    tr.group2_h.reserve(model.group2.size());
    tr.head_h.reserve(model.head.size());

    const MatX<S>* cur = &tr.input;
    for (const auto& l : model.group1) {
        MatX<S> h;
        colwise_affine(l.weight, l.bias, *cur, h);
        relu_inplace(h);
        tr.group1_h.push_back(std::move(h));
        cur = &tr.group1_h.back();
    }
    for (size_t i = 0; i + 1 < model.group2.size(); ++i) {
        MatX<S> h;
        colwise_affine(model.group2[i].weight, model.group2[i].bias, *cur, h);
        relu_inplace(h);
        tr.group2_h.push_back(std::move(h));
        cur = &tr.group2_h.back();
    }

    // Last per-point feature layer feeds the channel-wise max pool. Ties keep
    // the lowest point index so backward stays deterministic.
    const auto& last = model.group2.back();
    MatX<S> feat;
    colwise_affine(last.weight, last.bias, *cur, feat);
    relu_inplace(feat);
    const int gw = static_cast<int>(feat.rows());
    tr.argmax.resize(gw);
    tr.global.resize(gw);
    for (int c = 0; c < gw; ++c) {
        int best = 0;
        S bestv = feat(c, 0);
        for (Eigen::Index j = 1; j < n; ++j)
            if (feat(c, j) > bestv) {
                bestv = feat(c, j);
                best = static_cast<int>(j);
            }
        tr.argmax[c] = best;
        tr.global[c] = bestv;
    }

    // Local vector per point: group1 output on top, pooled global below.
    MatX<S> local(model.head.front().in(), n);
    const auto& g1out = tr.group1_h.back();
    local.topRows(g1out.rows()) = g1out;
    local.bottomRows(gw).colwise() = tr.global;

    cur = &local;
    for (size_t i = 0; i + 1 < model.head.size(); ++i) {
        MatX<S> h;
        colwise_affine(model.head[i].weight, model.head[i].bias, *cur, h);
        relu_inplace(h);
        tr.head_h.push_back(std::move(h));
        cur = &tr.head_h.back();
    }
    colwise_affine(model.head.back().weight, model.head.back().bias, *cur, tr.head_out);
    if (!tr.head_out.allFinite())
        raise(ErrorCode::non_finite, "non-finite activation in head output");

    // Fusion runs in double regardless of the model scalar: softmax weights,
    // the convex combination, and the normalization.
    tr.p_illum = tr.head_out.topRows(3).template cast<double>().cwiseMax(0.0).array() +
                 kIllumFloor;
    Eigen::VectorXd logits = tr.head_out.row(3).template cast<double>().transpose();
    Eigen::VectorXd ex = (logits.array() - logits.maxCoeff()).exp();
    tr.weights = ex / ex.sum();
    tr.fused = tr.p_illum * tr.weights;

    ForwardResult<S> res;
    res.e_global = imaging::Illuminant(tr.fused);
    res.p_illum = tr.p_illum;
    res.w_s = logits;
    res.trace = std::move(tr);
    return res;
}

// Recovery angular loss in radians; scale-invariant in e_hat. The cosine is
// clamped to +-(1 - kCosClamp) so the gradient stays finite at the optimum.
inline double angular_loss(const Eigen::Vector3d& e_hat, const imaging::Illuminant& e_gt) {
    const double n = e_hat.norm();
    if (!(n > 0.0)) raise(ErrorCode::zero_vector, "angular_loss of the zero vector");
    const double c = std::clamp(e_hat.dot(e_gt.vec()) / n, -1.0 + kCosClamp, 1.0 - kCosClamp);
    return std::acos(c);
}

}  // namespace pccc::net
