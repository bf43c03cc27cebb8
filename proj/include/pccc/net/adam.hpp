#pragma once

#include "pccc/net/backward.hpp"

namespace pccc::net {

template <typename S>
struct AdamState {
    std::vector<LinearLayer<S>> m, v;  // first/second moments, shaped like the parameters
    int64_t step = 0;
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState init(const PcccModel<S>& model, double lr) {
        AdamState st;
        st.lr = lr;
        auto za = Gradients<S>::zeros_like(model);
        auto zb = Gradients<S>::zeros_like(model);
        for (auto* src : {&za.group1, &za.group2, &za.head})
            st.m.insert(st.m.end(), src->begin(), src->end());
        for (auto* src : {&zb.group1, &zb.group2, &zb.head})
            st.v.insert(st.v.end(), src->begin(), src->end());
        return st;
    }
};

namespace detail {

template <typename S, typename Mat>
void adam_update(Mat& p, const Mat& grad, Mat& m, Mat& v, const AdamState<S>& st) {
    if (p.rows() != grad.rows() || p.cols() != grad.cols())
        raise(ErrorCode::shape_mismatch, "gradient shape does not match parameter");
    const S b1 = static_cast<S>(st.beta1), b2 = static_cast<S>(st.beta2);
    m = b1 * m + (S(1) - b1) * grad;
    v.array() = b2 * v.array() + (S(1) - b2) * grad.array().square();
    const S c1 = static_cast<S>(1.0 / (1.0 - std::pow(st.beta1, static_cast<double>(st.step))));
    const S c2 = static_cast<S>(1.0 / (1.0 - std::pow(st.beta2, static_cast<double>(st.step))));
    p.array() -= static_cast<S>(st.lr) * (c1 * m.array()) /
                 ((c2 * v.array()).sqrt() + static_cast<S>(st.epsilon));
}

}  // namespace detail

// Standard bias-corrected Adam step over every parameter, in declaration order.
template <typename S>
void adam_step(PcccModel<S>& model, const Gradients<S>& g, AdamState<S>& st) {
    st.step += 1;
    size_t k = 0;
    auto walk = [&](std::vector<LinearLayer<S>>& params,
                    const std::vector<LinearLayer<S>>& grads) {
        if (params.size() != grads.size())
            raise(ErrorCode::shape_mismatch, "gradient layer count does not match model");
        for (size_t i = 0; i < params.size(); ++i, ++k) {
            if (k >= st.m.size())
                raise(ErrorCode::shape_mismatch, "optimizer state does not match model");
            detail::adam_update(params[i].weight, grads[i].weight, st.m[k].weight,
                                st.v[k].weight, st);
            detail::adam_update(params[i].bias, grads[i].bias, st.m[k].bias, st.v[k].bias, st);
        }
    };
    walk(model.group1, g.group1);
    walk(model.group2, g.group2);
    walk(model.head, g.head);
    if (k != st.m.size())
        raise(ErrorCode::shape_mismatch, "optimizer state does not match model");
}

}  // namespace pccc::net
