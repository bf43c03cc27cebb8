// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 3 and 4 train real models and dominate the runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "pccc/augment.hpp"
#include "pccc/baselines.hpp"
#include "pccc/bench/apps.hpp"
#include "pccc/bench/evaluate.hpp"
#include "pccc/bench/synth.hpp"
#include "pccc/net/backward.hpp"
#include "pccc/net/checkpoint.hpp"
#include "pccc/net/train.hpp"

using namespace pccc;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

geometry::ColoredPointCloud random_cloud(int n, uint64_t seed) {
    geometry::ColoredPointCloud pc;
    pc.points.resize(6, n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xyz(-1.0, 1.0), rgb(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        pc.points.col(i) << xyz(rng), xyz(rng), xyz(rng), rgb(rng), rgb(rng), rgb(rng);
    return pc;
}

std::vector<bench::LoadedSample> materialize(const std::vector<bench::SyntheticSceneSpec>& specs,
                                             size_t begin, size_t end) {
    std::vector<bench::LoadedSample> out;
    for (size_t i = begin; i < end; ++i) {
        const auto scene = bench::synth_generate(specs[i]);
        bench::LoadedSample s;
        s.id = "scene_" + std::to_string(i);
        s.image = scene.image;
        s.depth = scene.depth;
        s.intrinsics = specs[i].intrinsics;
        s.gt = scene.gt;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<net::TrainSample> to_train_samples(const std::vector<bench::LoadedSample>& samples,
                                               geometry::DepthMode mode) {
    std::vector<net::TrainSample> out;
    for (const auto& s : samples)
        out.push_back(
            {geometry::build_point_cloud(s.image, s.depth, s.intrinsics, mode), s.gt});
    return out;
}

// ---- criterion 1: gradient oracle ------------------------------------------

void criterion_gradient_oracle() {
    const auto t0 = Clock::now();
    const net::Architecture archs[] = {
        net::Architecture::tiny(), net::Architecture::tiny(7, 10, 18),
        net::Architecture::tiny(5, 8, 12), net::Architecture::tiny(9, 12, 24),
        net::Architecture::tiny(6, 9, 16)};
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.05, 1.0);

    double worst = 0.0;
    size_t total = 0;
    const double h = 1e-4;
    for (int trial = 0; trial < 5; ++trial) {
        auto model = net::make_model<double>(archs[trial], 9000 + trial);
        const auto pc = random_cloud(32, 7000 + trial);
        const imaging::Illuminant gt(u(rng), u(rng), u(rng));

        const auto res = net::forward(model, pc);
        const auto grads = net::backward(model, res.trace, gt);

        auto loss = [&]() { return net::angular_loss(net::forward(model, pc).trace.fused, gt); };
        auto sweep = [&](std::vector<net::LinearLayer<double>>& params,
                         const std::vector<net::LinearLayer<double>>& g) {
            for (size_t l = 0; l < params.size(); ++l) {
                auto probe = [&](double& p, double analytic) {
                    const double saved = p;
                    p = saved + h;
                    const double lp = loss();
                    p = saved - h;
                    const double lm = loss();
                    p = saved;
                    const double fd = (lp - lm) / (2.0 * h);
                    worst = std::max(worst, std::abs(fd - analytic) /
                                                std::max({1e-6, std::abs(fd), std::abs(analytic)}));
                    ++total;
                };
                for (Eigen::Index i = 0; i < params[l].weight.size(); ++i)
                    probe(params[l].weight.data()[i], g[l].weight.data()[i]);
                for (Eigen::Index i = 0; i < params[l].bias.size(); ++i)
                    probe(params[l].bias.data()[i], g[l].bias.data()[i]);
            }
        };
        sweep(model.group1, grads.group1);
        sweep(model.group2, grads.group2);
        sweep(model.head, grads.head);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%zu parameters on 5 triples, worst rel err %.3g (tol 1e-4), %.1f s", total,
                  worst, secs);
    report(1, "gradient oracle", worst < 1e-4 && secs < 60.0, detail);
}

// ---- criterion 2: permutation invariance ------------------------------------

void criterion_permutation() {
    std::mt19937_64 rng(555);
    const auto model = net::make_model<float>(net::Architecture::standard(), 31);
    double worst_norm = 0.0;
    bool exact = true;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 8 + static_cast<int>(rng() % 300);
        const auto pc = random_cloud(n, 100 + trial);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        geometry::ColoredPointCloud shuffled;
        shuffled.points.resize(6, n);
        for (int i = 0; i < n; ++i) shuffled.points.col(i) = pc.points.col(perm[i]);

        const auto a = net::forward(model, pc);
        const auto b = net::forward(model, shuffled);
        worst_norm = std::max(worst_norm, (a.e_global.vec() - b.e_global.vec()).norm());
        for (int i = 0; i < n && exact; ++i)
            exact = a.p_illum.col(perm[i]) == b.p_illum.col(i) && a.w_s[perm[i]] == b.w_s[i];
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "100 clouds, e_global worst diff %.3g (tol 1e-9), per-point outputs %s",
                  worst_norm, exact ? "bit-exact" : "NOT exact");
    report(2, "permutation invariance", worst_norm < 1e-9 && exact, detail);
}

// ---- criterion 3: synthetic learning ----------------------------------------

void criterion_synthetic_learning() {
    const auto t0 = Clock::now();
    bench::CorpusOptions opts;
    opts.count = 250;
    opts.seed = 20240601;
    const auto specs = bench::make_corpus_specs(opts);
    const auto train_set = materialize(specs, 0, 200);
    const auto test_set = materialize(specs, 200, 250);

    net::TrainConfig cfg;
    cfg.epochs = 120;
    cfg.lr = 3e-4;
    cfg.batch_size = 8;
    cfg.n_points = 256;
    cfg.seed = 7;
    const auto outcome =
        net::train<float>(to_train_samples(train_set, geometry::DepthMode::real), cfg);

    const auto est = bench::make_pccc_estimator(outcome.model, 256, geometry::DepthMode::real, 3);
    const auto net_eval = bench::evaluate_samples(est, test_set);
    const auto gw = bench::make_baseline_estimator("grayworld", baselines::BaselineConfig{});
    const auto gw_eval = bench::evaluate_samples(gw, test_set);

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = net_eval.summary.mean < 3.0 &&
                      net_eval.summary.mean < gw_eval.summary.mean && secs < 900.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "held-out mean %.3f deg (tol < 3), gray_world %.3f deg, %.0f s (tol < 900)",
                  net_eval.summary.mean, gw_eval.summary.mean, secs);
    report(3, "synthetic learning", pass, detail);
}

// ---- criterion 4: depth ablation direction -----------------------------------

void criterion_depth_ablation() {
    bench::CorpusOptions opts;
    opts.count = 190;
    opts.mixed_lighting = true;
    opts.seed = 777;
    const auto specs = bench::make_corpus_specs(opts);
    const auto train_set = materialize(specs, 0, 150);
    const auto test_set = materialize(specs, 150, 190);

    net::TrainConfig cfg;
    cfg.epochs = 70;
    cfg.lr = 3e-4;
    cfg.batch_size = 8;
    cfg.n_points = 256;
    cfg.seed = 99;

    const auto with_depth =
        net::train<float>(to_train_samples(train_set, geometry::DepthMode::real), cfg);
    const auto without_depth =
        net::train<float>(to_train_samples(train_set, geometry::DepthMode::uniform_one), cfg);

    const auto eval_real = bench::evaluate_samples(
        bench::make_pccc_estimator(with_depth.model, 256, geometry::DepthMode::real, 5),
        test_set);
    const auto eval_flat = bench::evaluate_samples(
        bench::make_pccc_estimator(without_depth.model, 256, geometry::DepthMode::uniform_one, 5),
        test_set);

    char detail[160];
    std::snprintf(detail, sizeof(detail), "real-depth mean %.3f deg <= uniform-depth %.3f deg",
                  eval_real.summary.mean, eval_flat.summary.mean);
    report(4, "depth ablation direction", eval_real.summary.mean <= eval_flat.summary.mean,
           detail);
}

// ---- criterion 5: throughput -------------------------------------------------

void criterion_throughput() {
    // 16x16 thumbnail scene, end to end: cloud build + sample + normalize + net
    bench::CorpusOptions opts;
    opts.count = 1;
    opts.width = opts.height = 16;
    opts.seed = 12;
    const auto spec = bench::make_corpus_specs(opts)[0];
    const auto scene = bench::synth_generate(spec);
    const auto model = net::make_model<float>(net::Architecture::standard(), 77);

    auto run_once = [&]() {
        const auto cloud =
            geometry::build_point_cloud(scene.image, scene.depth, spec.intrinsics);
        const auto thumb = geometry::sample_points(cloud, 256, 1);
        return net::estimate_cloud(model, thumb);
    };
    run_once();  // warm up
    const int frames = 50;
    const auto t0 = Clock::now();
    for (int i = 0; i < frames; ++i) run_once();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const double ms_per_frame = 1000.0 * secs / frames;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%.2f ms/frame (tol <= 10), %.1f fps single-threaded",
                  ms_per_frame, frames / secs);
    report(5, "throughput", ms_per_frame <= 10.0, detail);
}

// ---- criterion 6: metrics oracle ---------------------------------------------

void criterion_metrics_oracle() {
    const auto ex = bench::summarize_errors({1, 2, 3, 4, 5, 6, 7, 8});
    bool pass = ex.mean == 4.5 && ex.median == 4.5 && ex.trimean == 4.5 && ex.best25 == 1.5 &&
                ex.worst25 == 7.5;

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> err(0.0, 30.0);
    std::uniform_int_distribution<int> len(1, 400);
    double worst = 0.0;
    for (int t = 0; t < 1000 && pass; ++t) {
        std::vector<double> v(len(rng));
        for (double& x : v) x = err(rng);
        const auto s = bench::summarize_errors(v);

        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = sum / n;
        const double median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        auto q = [&](double p) {
            if (n == 1) return v[0];
            const double hh = p * (n - 1);
            const size_t i = static_cast<size_t>(hh);
            const double f = hh - i;
            return i + 1 < n ? v[i] * (1.0 - f) + v[i + 1] * f : v[i];
        };
        const double trimean = (q(0.25) + 2 * q(0.5) + q(0.75)) / 4.0;
        const size_t k = (n + 3) / 4;
        double lo = 0, hi = 0;
        for (size_t i = 0; i < k; ++i) {
            lo += v[i];
            hi += v[n - 1 - i];
        }
        worst = std::max({worst, std::abs(s.mean - mean), std::abs(s.median - median),
                          std::abs(s.trimean - trimean), std::abs(s.best25 - lo / k),
                          std::abs(s.worst25 - hi / k)});
    }
    pass = pass && worst < 1e-9;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "worked example exact, 1000 random vectors worst diff %.3g (tol 1e-9)", worst);
    report(6, "metrics oracle", pass, detail);
}

// ---- criterion 7: geometry round trip ----------------------------------------

void criterion_geometry() {
    const geometry::CameraIntrinsics k{500.0, 500.0, 320.0, 240.0};
    const Eigen::Vector3d p = geometry::backproject(420.0, 240.0, 2.0, k);
    const bool worked = std::abs(p.x() - 0.4) < 1e-12 && std::abs(p.y()) < 1e-12 &&
                        std::abs(p.z() - 2.0) < 1e-12;

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> up(0.0, 640.0), vp(0.0, 480.0), dp(0.05, 20.0);
    double worst = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const double u = up(rng), v = vp(rng), d = dp(rng);
        const auto [u2, v2] = geometry::project(geometry::backproject(u, v, d, k), k);
        worst = std::max({worst, std::abs(u2 - u), std::abs(v2 - v)});
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "worked example exact to 1e-12, 1e5 round trips worst %.3g px (tol 1e-6)",
                  worst);
    report(7, "geometry round trip", worked && worst < 1e-6, detail);
}

// ---- criterion 8: augmentation label preservation -----------------------------

void criterion_augmentation() {
    augment::AugmentConfig cfg;
    const imaging::Illuminant label(0.8, 1.0, 0.6);
    bool labels_exact = true;
    double worst_dist = 0.0;
    for (uint64_t trial = 0; trial < 1000; ++trial) {
        const auto pc = random_cloud(24, trial);
        auto rng = augment::make_sample_rng(3, trial, 0);
        const auto [out, label_out] = augment::augment(pc, label, cfg, rng);
        labels_exact = labels_exact && imaging::angular_error_deg(label, label_out) == 0.0;
        // rigid preservation of pairwise distances, colors scaled by one scalar
        for (int a = 0; a < 24; a += 5)
            for (int b = a + 1; b < 24; b += 7) {
                const double d0 = (pc.xyz(a) - pc.xyz(b)).norm();
                const double d1 = (out.xyz(a) - out.xyz(b)).norm();
                worst_dist = std::max(worst_dist, std::abs(d0 - d1));
            }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "1000 draws, labels identical, worst pairwise-distance drift %.3g (tol 1e-9)",
                  worst_dist);
    report(8, "augmentation label preservation", labels_exact && worst_dist < 1e-9, detail);
}

// ---- criterion 9: baseline sanity ---------------------------------------------

void criterion_baselines() {
    bench::CorpusOptions opts;
    opts.count = 10;
    opts.noise_sigma = 0.0;
    opts.seed = 31337;
    auto specs = bench::make_corpus_specs(opts);
    double worst_gw = 0.0;
    for (auto& spec : specs) {
        for (auto& s : spec.surfaces) {
            s.albedo = Eigen::Vector3d::Constant(0.65);
            s.albedo2 = Eigen::Vector3d::Constant(0.35);
        }
        spec.noise_sigma = 0.0;
        const auto scene = bench::synth_generate(spec);
        worst_gw = std::max(
            worst_gw, imaging::angular_error_deg(baselines::gray_world(scene.image), scene.gt));
    }

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.001, 0.9);
    double worst_sog = 0.0;
    for (int t = 0; t < 20; ++t) {
        imaging::LinearImage img = imaging::LinearImage::zeros(16, 16);
        for (auto& v : img.data) v = u(rng);
        baselines::BaselineConfig cfg;
        cfg.minkowski_p = 1.0;
        worst_sog = std::max(worst_sog, (baselines::shades_of_gray(img, cfg).vec() -
                                         baselines::gray_world(img).vec())
                                            .norm());
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "gray_world worst %.3g deg on achromatic scenes (tol 1e-4), "
                  "sog(p=1) vs gray_world worst %.3g (tol 1e-9)",
                  worst_gw, worst_sog);
    report(9, "baseline sanity", worst_gw < 1e-4 && worst_sog < 1e-9, detail);
}

// ---- criterion 10: applications ------------------------------------------------

void criterion_applications() {
    bench::CorpusOptions opts;
    opts.count = 1;
    opts.width = opts.height = 32;
    opts.seed = 5150;
    const auto spec = bench::make_corpus_specs(opts)[0];
    const auto scene = bench::synth_generate(spec);
    bench::LoadedSample sample;
    sample.id = "app";
    sample.image = scene.image;
    sample.depth = scene.depth;
    sample.intrinsics = spec.intrinsics;
    sample.gt = scene.gt;

    // constant-output model
    auto model = net::make_model<float>(net::Architecture::tiny(), 4);
    model.head.back().weight.setZero();
    model.head.back().bias << 0.7f, 0.4f, 0.55f, 0.0f;

    bench::AppConfig cfg;
    cfg.n_points = 128;
    const auto local = bench::local_awb(model, sample, cfg);
    const auto cloud =
        geometry::build_point_cloud(sample.image, sample.depth, sample.intrinsics);
    const auto est = net::estimate_cloud(model, geometry::sample_points(cloud, 128, cfg.seed));
    const auto global = imaging::apply_awb(sample.image, est);
    bool awb_exact = true;
    for (size_t i = 0; i < global.data.size(); ++i)
        awb_exact = awb_exact && local.corrected.data[i] == global.data[i];

    // relight identity and shift-map mean with a generic model
    const auto generic = net::make_model<float>(net::Architecture::tiny(9, 14, 20), 6);
    const auto probe = bench::relight(generic, sample, imaging::Illuminant(1, 1, 1), cfg);
    Eigen::Vector3d shift_mean = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < probe.shift_map.pixel_count(); ++i)
        shift_mean += probe.shift_map.pixel(i);
    shift_mean /= static_cast<double>(probe.shift_map.pixel_count());
    const double worst_shift = shift_mean.cwiseAbs().maxCoeff();

    const auto identity = bench::relight(generic, sample, imaging::Illuminant(probe.map_mean),
                                         cfg);
    double worst_identity = 0.0;
    for (size_t i = 0; i < identity.relit.data.size(); ++i)
        worst_identity =
            std::max(worst_identity, std::abs(identity.relit.data[i] - sample.image.data[i]));

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "constant-map awb %s, relight identity worst %.3g (tol 1e-6), "
                  "shift mean worst %.3g (tol 1e-9)",
                  awb_exact ? "bit-exact" : "NOT exact", worst_identity, worst_shift);
    report(10, "applications", awb_exact && worst_identity < 1e-6 && worst_shift < 1e-9, detail);
}

// ---- criterion 11: persistence --------------------------------------------------

void criterion_persistence() {
    const std::string path = "/tmp/pccc_acceptance_model.pccc";
    const auto model = net::make_model<float>(net::Architecture::standard(), 123);
    net::save_model(path, model);
    const auto loaded = net::load_model<float>(path);
    const auto pc = random_cloud(64, 3);
    const auto a = net::forward(model, pc);
    const auto b = net::forward(loaded, pc);
    const bool bit_exact = a.e_global.vec() == b.e_global.vec() && a.p_illum == b.p_illum &&
                           a.w_s == b.w_s;

    bool rejects = false;
    {
        std::ifstream is(path, std::ios::binary);
        std::vector<char> bytes{std::istreambuf_iterator<char>(is),
                                std::istreambuf_iterator<char>()};
        is.close();
        std::vector<char> truncated(bytes.begin(), bytes.begin() + bytes.size() / 3);
        std::ofstream os(path + ".trunc", std::ios::binary);
        os.write(truncated.data(), static_cast<std::streamsize>(truncated.size()));
        os.close();
        std::vector<char> versioned = bytes;
        versioned[4] = 42;
        std::ofstream os2(path + ".version", std::ios::binary);
        os2.write(versioned.data(), static_cast<std::streamsize>(versioned.size()));
        os2.close();
        int caught = 0;
        try {
            net::load_model<float>(path + ".trunc");
        } catch (const Error& e) {
            caught += e.code() == ErrorCode::corrupt_file;
        }
        try {
            net::load_model<float>(path + ".version");
        } catch (const Error& e) {
            caught += e.code() == ErrorCode::version_mismatch;
        }
        rejects = caught == 2;
    }
    report(11, "persistence", bit_exact && rejects,
           bit_exact ? "round trip bit-exact, corrupt/version files rejected"
                     : "round trip NOT bit-exact");
}

}  // namespace

int main() {
    std::printf("pccc acceptance suite\n");
    criterion_gradient_oracle();
    criterion_permutation();
    criterion_metrics_oracle();
    criterion_geometry();
    criterion_augmentation();
    criterion_baselines();
    criterion_applications();
    criterion_persistence();
    criterion_throughput();
    criterion_synthetic_learning();
    criterion_depth_ablation();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
