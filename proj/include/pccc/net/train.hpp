#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "pccc/augment.hpp"
#include "pccc/net/adam.hpp"

namespace pccc::net {

struct TrainSample {
    geometry::ColoredPointCloud cloud;  // raw, full resolution or pre-sampled
    imaging::Illuminant label;
};

struct TrainConfig {
    int epochs = 10000;
    double lr = 3e-4;
    int batch_size = 16;
    uint64_t seed = 0;
    int n_points = 256;
    augment::AugmentConfig aug;  // aug.enabled gates both augmentations
    Architecture arch = Architecture::standard();
    std::function<void(int epoch, double mean_loss)> progress;

    void validate() const {
        if (epochs < 1) raise(ErrorCode::invalid_argument, "epochs must be >= 1");
        if (!(lr > 0.0)) raise(ErrorCode::invalid_argument, "learning rate must be > 0");
        if (batch_size < 1) raise(ErrorCode::invalid_argument, "batch_size must be >= 1");
        if (n_points < 1) raise(ErrorCode::invalid_argument, "n_points must be >= 1");
        aug.validate();
    }
};

template <typename S>
struct TrainOutcome {
    PcccModel<S> model;
    std::vector<double> history;  // mean loss per epoch, radians
};

// Estimate for a single cloud: normalize, forward, read the fused illuminant.
template <typename S>
imaging::Illuminant estimate_cloud(const PcccModel<S>& model,
                                   const geometry::ColoredPointCloud& pc) {
    auto [norm, frame] = geometry::normalize_cloud(pc);
    (void)frame;
    return forward(model, norm).e_global;
}

// Seeded mini-batch training with per-sample augmentation streams. One Adam
// step per batch on the batch-averaged gradient. Deterministic for a fixed
// config and dataset.
template <typename S = float>
TrainOutcome<S> train(const std::vector<TrainSample>& dataset, const TrainConfig& cfg) {
    cfg.validate();
    if (dataset.empty()) raise(ErrorCode::empty_dataset, "no training samples");

    // Thumbnail sampling happens once, up front.
    std::vector<geometry::ColoredPointCloud> clouds(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i)
        clouds[i] = sample_points(dataset[i].cloud, cfg.n_points,
                                  cfg.seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));

    PcccModel<S> model = make_model<S>(cfg.arch, cfg.seed);
    AdamState<S> opt = AdamState<S>::init(model, cfg.lr);
    Gradients<S> batch_grad = Gradients<S>::zeros_like(model);

    std::vector<size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(cfg.seed ^ 0xc2b2ae3d27d4eb4full);

    std::vector<double> history;
    history.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const size_t stop = std::min(order.size(), start + cfg.batch_size);
            const S inv = S(1) / static_cast<S>(stop - start);
            batch_grad.set_zero();
            for (size_t b = start; b < stop; ++b) {
                const size_t idx = order[b];
                auto rng = augment::make_sample_rng(cfg.seed, idx, epoch);
                auto [pc, label] = augment::augment(clouds[idx], dataset[idx].label, cfg.aug, rng);
                auto [norm, frame] = geometry::normalize_cloud(pc);
                (void)frame;
                auto res = forward(model, norm);
                const double loss = angular_loss(res.trace.fused, label);
                if (!std::isfinite(loss))
                    raise(ErrorCode::divergence, "non-finite loss at epoch " +
                                                     std::to_string(epoch));
                epoch_loss += loss;
                batch_grad.add_scaled(backward(model, res.trace, label), inv);
            }
            adam_step(model, batch_grad, opt);
        }
        history.push_back(epoch_loss / static_cast<double>(dataset.size()));
        if (cfg.progress) cfg.progress(epoch, history.back());
    }
    return {std::move(model), std::move(history)};
}

}  // namespace pccc::net
