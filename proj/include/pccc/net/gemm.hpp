#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstring>

namespace pccc::net {

template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// C(:,j) = b + sum_k W(:,k) * X(k,j).
//
// Every output column is accumulated strictly in ascending k with one fused
// update per (row, k), through a single code path regardless of the column's
// position in X. A permuted input therefore yields bit-identical permuted
// columns, which blocked general-purpose GEMMs do not guarantee. Trailing
// columns run through the same 4-wide kernel against a scratch output so the
// compiler cannot contract body and tail differently.
template <typename S>
void colwise_affine(const MatX<S>& W, const VecX<S>& b, const MatX<S>& X, MatX<S>& C) {
    const int out = static_cast<int>(W.rows());
    const int in = static_cast<int>(W.cols());
    const int n = static_cast<int>(X.cols());
    C.resize(out, n);
    if (n == 0) return;

    constexpr int RT = 64;  // row tile, fits accumulators in registers
    constexpr int JU = 4;   // column unroll
    const S* Wd = W.data();
    alignas(64) S acc[JU][RT];

    auto tile = [&](int rr, int rt, const S* const* xcols, S* const* ccols) {
        for (int c = 0; c < JU; ++c) std::memset(acc[c], 0, sizeof(S) * rt);
        for (int k = 0; k < in; ++k) {
            const S* __restrict w = Wd + static_cast<size_t>(k) * out + rr;
            const S x0 = xcols[0][k], x1 = xcols[1][k], x2 = xcols[2][k], x3 = xcols[3][k];
            for (int r = 0; r < rt; ++r) {
                const S wv = w[r];
                acc[0][r] += wv * x0;
                acc[1][r] += wv * x1;
                acc[2][r] += wv * x2;
                acc[3][r] += wv * x3;
            }
        }
        const S* bp = b.data() + rr;
        for (int c = 0; c < JU; ++c)
            for (int r = 0; r < rt; ++r) ccols[c][rr + r] = bp[r] + acc[c][r];
    };

    VecX<S> scratch(out);
    for (int jj = 0; jj < n; jj += JU) {
        const int jc = std::min(JU, n - jj);
        const S* xcols[JU];
        S* ccols[JU];
        for (int c = 0; c < JU; ++c) {
            xcols[c] = X.col(jj + std::min(c, jc - 1)).data();
            ccols[c] = c < jc ? C.col(jj + c).data() : scratch.data();
        }
        int rr = 0;
        for (; rr + RT <= out; rr += RT) tile(rr, RT, xcols, ccols);
        if (rr < out) tile(rr, out - rr, xcols, ccols);
    }
}

// std::max(x, 0) keeps NaN (the comparison is false), so overflowing
// activations surface at the head's finiteness check instead of being
// silently rectified away.
template <typename S>
void relu_inplace(MatX<S>& m) {
    S* p = m.data();
    const size_t n = static_cast<size_t>(m.size());
    for (size_t i = 0; i < n; ++i) p[i] = std::max(p[i], S(0));
}

}  // namespace pccc::net
