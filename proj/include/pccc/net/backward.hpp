#pragma once

#include "pccc/net/model.hpp"

namespace pccc::net {

template <typename S>
struct Gradients {
    std::vector<LinearLayer<S>> group1, group2, head;

    static Gradients zeros_like(const PcccModel<S>& m) {
        Gradients g;
        auto zero = [](const std::vector<LinearLayer<S>>& layers) {
            std::vector<LinearLayer<S>> out(layers.size());
            for (size_t i = 0; i < layers.size(); ++i) {
                out[i].weight = MatX<S>::Zero(layers[i].weight.rows(), layers[i].weight.cols());
                out[i].bias = VecX<S>::Zero(layers[i].bias.size());
            }
            return out;
        };
        g.group1 = zero(m.group1);
        g.group2 = zero(m.group2);
        g.head = zero(m.head);
        return g;
    }

    void set_zero() {
        for (auto* grp : {&group1, &group2, &head})
            for (auto& l : *grp) {
                l.weight.setZero();
                l.bias.setZero();
            }
    }

    void add_scaled(const Gradients& other, S scale) {
        auto acc = [scale](std::vector<LinearLayer<S>>& dst,
                           const std::vector<LinearLayer<S>>& src) {
            for (size_t i = 0; i < dst.size(); ++i) {
                dst[i].weight.noalias() += scale * src[i].weight;
                dst[i].bias.noalias() += scale * src[i].bias;
            }
        };
        acc(group1, other.group1);
        acc(group2, other.group2);
        acc(head, other.head);
    }
};

namespace detail {

template <typename S>
void check_trace(const PcccModel<S>& model, const ForwardTrace<S>& tr) {
    const Eigen::Index n = tr.n_points();
    bool ok = tr.input.rows() == 6 && n >= 1 &&
              tr.group1_h.size() == model.group1.size() &&
              tr.group2_h.size() + 1 == model.group2.size() &&
              tr.head_h.size() + 1 == model.head.size() &&
              tr.head_out.rows() == 4 && tr.head_out.cols() == n &&
              tr.global.size() == model.group2.back().out() &&
              tr.argmax.size() == tr.global.size() && tr.weights.size() == n;
    for (size_t i = 0; ok && i < model.group1.size(); ++i)
        ok = tr.group1_h[i].rows() == model.group1[i].out() && tr.group1_h[i].cols() == n;
    for (size_t i = 0; ok && i < tr.group2_h.size(); ++i)
        ok = tr.group2_h[i].rows() == model.group2[i].out() && tr.group2_h[i].cols() == n;
    for (size_t i = 0; ok && i < tr.head_h.size(); ++i)
        ok = tr.head_h[i].rows() == model.head[i].out() && tr.head_h[i].cols() == n;
    if (!ok) raise(ErrorCode::stale_trace, "trace does not match this model");
}

template <typename S>
MatX<S> relu_mask_times(const MatX<S>& grad, const MatX<S>& post_relu) {
    return ((post_relu.array() > S(0)).template cast<S>() * grad.array()).matrix();
}

}  // namespace detail

// Exact reverse-mode gradients of angular_loss(trace.fused, e_gt) with
// respect to every weight and bias. Max-pool gradients route through the
// cached argmax columns; the softmax uses its full Jacobian.
template <typename S>
Gradients<S> backward(const PcccModel<S>& model, const ForwardTrace<S>& trace,
                      const imaging::Illuminant& e_gt) {
    detail::check_trace(model, trace);
    const Eigen::Index n = trace.n_points();
    Gradients<S> g = Gradients<S>::zeros_like(model);

    // Fusion stage in double, mirroring forward.
    const Eigen::Vector3d u = trace.fused;
    const Eigen::Vector3d e = e_gt.vec();
    const double nu = u.norm();
    const double cosv = u.dot(e) / nu;
    Eigen::Vector3d grad_u = Eigen::Vector3d::Zero();
    if (cosv > -1.0 + kCosClamp && cosv < 1.0 - kCosClamp) {
        const double dldc = -1.0 / std::sqrt(1.0 - cosv * cosv);
        grad_u = dldc * (e - cosv * (u / nu)) / nu;
    }

    const Eigen::Matrix3Xd grad_p = grad_u * trace.weights.transpose();
    const Eigen::VectorXd grad_s = trace.p_illum.transpose() * grad_u;
    const double mix = trace.weights.dot(grad_s);
    const Eigen::VectorXd grad_logits =
        trace.weights.array() * (grad_s.array() - mix);

    MatX<S> g_out(4, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (int r = 0; r < 3; ++r)
            g_out(r, j) = trace.head_out(r, j) > S(0) ? static_cast<S>(grad_p(r, j)) : S(0);
        g_out(3, j) = static_cast<S>(grad_logits[j]);
    }

    // Rebuild the local concat (group1 output over pooled global).
    const MatX<S>& g1_top = trace.group1_h.back();
    MatX<S> local(model.head.front().in(), n);
    local.topRows(g1_top.rows()) = g1_top;
    local.bottomRows(trace.global.size()).colwise() = trace.global;

    // Head chain.
    MatX<S> grad_h;
    for (int i = static_cast<int>(model.head.size()) - 1; i >= 0; --i) {
        MatX<S> grad_a = (i == static_cast<int>(model.head.size()) - 1)
                             ? std::move(g_out)
                             : MatX<S>(detail::relu_mask_times(grad_h, trace.head_h[i]));
        const MatX<S>& in = i == 0 ? local : trace.head_h[i - 1];
        g.head[i].weight.noalias() = grad_a * in.transpose();
        g.head[i].bias.noalias() = grad_a.rowwise().sum();
        grad_h.noalias() = model.head[i].weight.transpose() * grad_a;
    }

    const Eigen::Index g1w = g1_top.rows();
    const Eigen::Index gw = trace.global.size();
    MatX<S> grad_g1 = grad_h.topRows(g1w);  // local-path share
    const VecX<S> grad_global = grad_h.bottomRows(gw).rowwise().sum();

    // Pooled layer: gradients exist only at argmax columns, and only where the
    // pooled value cleared the rectifier.
    const auto& pool_layer = model.group2.back();
    const MatX<S>& pool_in =
        model.group2.size() >= 2 ? trace.group2_h.back() : trace.group1_h.back();
    MatX<S> grad_pool_in = MatX<S>::Zero(pool_in.rows(), n);
    auto& g_pool = g.group2.back();
    for (Eigen::Index c = 0; c < gw; ++c) {
        const S gv = grad_global[c];
        if (gv == S(0) || !(trace.global[c] > S(0))) continue;
        const int j = trace.argmax[c];
        g_pool.weight.row(c).noalias() += gv * pool_in.col(j).transpose();
        g_pool.bias[c] += gv;
        grad_pool_in.col(j).noalias() += gv * pool_layer.weight.row(c).transpose();
    }

    // Remaining group2 layers.
    grad_h = std::move(grad_pool_in);
    for (int i = static_cast<int>(model.group2.size()) - 2; i >= 0; --i) {
        MatX<S> grad_a = detail::relu_mask_times(grad_h, trace.group2_h[i]);
        const MatX<S>& in = i == 0 ? trace.group1_h.back() : trace.group2_h[i - 1];
        g.group2[i].weight.noalias() = grad_a * in.transpose();
        g.group2[i].bias.noalias() = grad_a.rowwise().sum();
        grad_h.noalias() = model.group2[i].weight.transpose() * grad_a;
    }

    // group1 receives both the group2 path and the local-concat path.
    grad_g1 += grad_h;
    for (int i = static_cast<int>(model.group1.size()) - 1; i >= 0; --i) {
        MatX<S> grad_a = detail::relu_mask_times(grad_g1, trace.group1_h[i]);
        const MatX<S>& in = i == 0 ? trace.input : trace.group1_h[i - 1];
        g.group1[i].weight.noalias() = grad_a * in.transpose();
        g.group1[i].bias.noalias() = grad_a.rowwise().sum();
        if (i > 0) grad_g1 = model.group1[i].weight.transpose() * grad_a;
    }
    return g;
}

}  // namespace pccc::net
