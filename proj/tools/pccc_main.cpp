#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "pccc/bench/apps.hpp"
#include "pccc/bench/evaluate.hpp"
#include "pccc/bench/synth.hpp"
#include "pccc/io/ply.hpp"
#include "pccc/io/png_io.hpp"
#include "pccc/net/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace pccc;

namespace {

struct CommonOpts {
    std::string manifest;
    std::string split = "test";
    int points = 256;
    uint64_t seed = 0;
    std::string depth_mode = "real";
};

geometry::DepthMode parse_depth_mode(const std::string& s) {
    if (s == "real") return geometry::DepthMode::real;
    if (s == "uniform_one") return geometry::DepthMode::uniform_one;
    raise(ErrorCode::invalid_argument, "depth mode must be 'real' or 'uniform_one'");
}

bench::Split parse_split(const std::string& s) {
    if (s == "train") return bench::Split::train;
    if (s == "test") return bench::Split::test;
    raise(ErrorCode::invalid_argument, "split must be 'train' or 'test'");
}

bench::LoadedSample find_sample(const bench::DatasetManifest& m, const std::string& id) {
    for (const auto& r : m.samples)
        if (r.id == id) return bench::load_sample(r);
    raise(ErrorCode::invalid_argument, "no sample with id '" + id + "'");
}

imaging::Illuminant parse_illuminant(const std::string& csv) {
    double r, g, b;
    if (std::sscanf(csv.c_str(), "%lf,%lf,%lf", &r, &g, &b) != 3)
        raise(ErrorCode::invalid_argument, "expected an r,g,b triple");
    return imaging::Illuminant(r, g, b);
}

bench::Estimator build_estimator(const std::string& method, const std::string& model_path,
                                 double p, double sigma, const CommonOpts& c,
                                 net::PcccModel<float>& model_storage) {
    if (method == "pccc") {
        if (model_path.empty())
            raise(ErrorCode::invalid_argument, "--model is required for method 'pccc'");
        model_storage = net::load_model<float>(model_path);
        return bench::make_pccc_estimator(model_storage, c.points,
                                          parse_depth_mode(c.depth_mode), c.seed);
    }
    baselines::BaselineConfig cfg;
    cfg.minkowski_p = p;
    cfg.smoothing_sigma = sigma;
    return bench::make_baseline_estimator(method, cfg);
}

int cmd_synth(const std::string& out_dir, int count, int size, bool mixed, double noise,
              double test_fraction, uint64_t seed) {
    fs::create_directories(out_dir);
    bench::CorpusOptions opts;
    opts.count = count;
    opts.width = opts.height = size;
    opts.mixed_lighting = mixed;
    opts.noise_sigma = noise;
    opts.seed = seed;
    const auto specs = bench::make_corpus_specs(opts);

    std::vector<bench::ManifestEntry> entries;
    const int n_train = count - static_cast<int>(std::ceil(count * test_fraction));
    for (int i = 0; i < count; ++i) {
        const auto scene = bench::synth_generate(specs[i]);
        char rgb_name[64], depth_name[64], id[64];
        std::snprintf(id, sizeof(id), "scene_%04d", i);
        std::snprintf(rgb_name, sizeof(rgb_name), "rgb_%04d.png", i);
        std::snprintf(depth_name, sizeof(depth_name), "depth_%04d.png", i);
        io::write_linear_png16((fs::path(out_dir) / rgb_name).string(), scene.image);
        io::write_depth_png16((fs::path(out_dir) / depth_name).string(), scene.depth);
        bench::ManifestEntry e;
        e.id = id;
        e.rgb = rgb_name;
        e.depth = depth_name;
        e.gt = scene.gt.vec();
        e.intrinsics = specs[i].intrinsics;
        e.split = i < n_train ? bench::Split::train : bench::Split::test;
        entries.push_back(std::move(e));
    }
    bench::write_manifest((fs::path(out_dir) / "manifest.json").string(), entries);
    std::printf("wrote %d scenes to %s\n", count, out_dir.c_str());
    return 0;
}

std::vector<net::TrainSample> load_split_clouds(const bench::DatasetManifest& m,
                                                bench::Split split,
                                                geometry::DepthMode depth_mode) {
    std::vector<net::TrainSample> out;
    for (const auto* rec : m.split_samples(split)) {
        const auto s = bench::load_sample(*rec);
        out.push_back({geometry::build_point_cloud(s.image, s.depth, s.intrinsics, depth_mode),
                       s.gt});
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-cloud illuminant estimation and white balance"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic RGB-D corpus");
    std::string synth_out;
    int synth_count = 200, synth_size = 64;
    bool synth_mixed = false;
    double synth_noise = 0.002, synth_test_fraction = 0.2;
    uint64_t synth_seed = 1;
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--count", synth_count, "Number of scenes");
    synth->add_option("--size", synth_size, "Image width and height");
    synth->add_flag("--mixed", synth_mixed, "Depth-keyed two-illuminant scenes");
    synth->add_option("--noise", synth_noise, "Gaussian noise sigma");
    synth->add_option("--test-fraction", synth_test_fraction, "Fraction tagged as test split");
    synth->add_option("--seed", synth_seed, "Corpus seed");

    // train
    auto* train = app.add_subcommand("train", "Train the point-cloud regressor");
    CommonOpts tc;
    tc.split = "train";
    std::string train_out, train_history;
    net::TrainConfig tcfg;
    tcfg.epochs = 300;
    bool no_aug = false, quiet = false;
    train->add_option("--manifest", tc.manifest, "Dataset manifest")->required();
    train->add_option("--split", tc.split, "Split to train on");
    train->add_option("--out", train_out, "Checkpoint path")->required();
    train->add_option("--epochs", tcfg.epochs, "Training epochs");
    train->add_option("--lr", tcfg.lr, "Adam learning rate");
    train->add_option("--batch", tcfg.batch_size, "Mini-batch size");
    train->add_option("--points", tcfg.n_points, "Points per cloud");
    train->add_option("--seed", tcfg.seed, "Training seed");
    train->add_option("--aug-rot-deg", tcfg.aug.max_rotation_deg, "Pose jitter per axis");
    train->add_option("--aug-intensity-sigma", tcfg.aug.intensity_sigma,
                      "Intensity scale sigma");
    train->add_flag("--no-augment", no_aug, "Disable augmentation");
    train->add_option("--depth-mode", tc.depth_mode, "real | uniform_one");
    train->add_option("--history", train_history, "Write per-epoch loss CSV here");
    train->add_flag("--quiet", quiet, "No per-epoch output");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Per-sample illuminant estimates");
    CommonOpts ec;
    std::string est_method = "grayworld", est_model, est_id;
    double est_p = 6.0, est_sigma = 2.0;
    estimate->add_option("--method", est_method,
                         "grayworld|whitepatch|sog|grayedge1|grayedge2|pccc");
    estimate->add_option("--model", est_model, "Checkpoint for method pccc");
    estimate->add_option("--manifest", ec.manifest, "Dataset manifest")->required();
    estimate->add_option("--split", ec.split, "Split to estimate");
    estimate->add_option("--id", est_id, "Single sample id");
    estimate->add_option("--p", est_p, "Minkowski p");
    estimate->add_option("--sigma", est_sigma, "Gaussian sigma");
    estimate->add_option("--points", ec.points, "Points per cloud");
    estimate->add_option("--seed", ec.seed, "Sampling seed");
    estimate->add_option("--depth-mode", ec.depth_mode, "real | uniform_one");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Angular-error metrics over a split");
    CommonOpts vc;
    std::string eval_method = "grayworld", eval_model, eval_csv;
    double eval_p = 6.0, eval_sigma = 2.0;
    evaluate->add_option("--method", eval_method,
                         "grayworld|whitepatch|sog|grayedge1|grayedge2|pccc");
    evaluate->add_option("--model", eval_model, "Checkpoint for method pccc");
    evaluate->add_option("--manifest", vc.manifest, "Dataset manifest")->required();
    evaluate->add_option("--split", vc.split, "Split to evaluate");
    evaluate->add_option("--out-csv", eval_csv, "Per-sample CSV path");
    evaluate->add_option("--p", eval_p, "Minkowski p");
    evaluate->add_option("--sigma", eval_sigma, "Gaussian sigma");
    evaluate->add_option("--points", vc.points, "Points per cloud");
    evaluate->add_option("--seed", vc.seed, "Sampling seed");
    evaluate->add_option("--depth-mode", vc.depth_mode, "real | uniform_one");

    // awb
    auto* awb = app.add_subcommand("awb", "White-balance one sample with a trained model");
    CommonOpts ac;
    std::string awb_model, awb_id, awb_out, awb_map, awb_mode = "local";
    awb->add_option("--manifest", ac.manifest, "Dataset manifest")->required();
    awb->add_option("--id", awb_id, "Sample id")->required();
    awb->add_option("--model", awb_model, "Checkpoint")->required();
    awb->add_option("--out", awb_out, "Corrected image (16-bit linear PNG)")->required();
    awb->add_option("--map", awb_map, "Also write the illumination map here");
    awb->add_option("--mode", awb_mode, "local | global");
    awb->add_option("--points", ac.points, "Points per cloud");
    awb->add_option("--seed", ac.seed, "Sampling seed");
    awb->add_option("--depth-mode", ac.depth_mode, "real | uniform_one");

    // relight
    auto* relight = app.add_subcommand("relight", "Re-render a sample under a new illuminant");
    CommonOpts rc;
    std::string rel_model, rel_id, rel_out, rel_map, rel_illum;
    relight->add_option("--manifest", rc.manifest, "Dataset manifest")->required();
    relight->add_option("--id", rel_id, "Sample id")->required();
    relight->add_option("--model", rel_model, "Checkpoint")->required();
    relight->add_option("--illuminant", rel_illum, "Target chromaticity r,g,b")->required();
    relight->add_option("--out", rel_out, "Relit image (16-bit linear PNG)")->required();
    relight->add_option("--map", rel_map, "Also write the illumination map here");
    relight->add_option("--points", rc.points, "Points per cloud");
    relight->add_option("--seed", rc.seed, "Sampling seed");

    // export-ply
    auto* exp = app.add_subcommand("export-ply", "Write a sample's colored point cloud");
    CommonOpts xc;
    std::string ply_id, ply_out;
    int ply_points = 0;
    exp->add_option("--manifest", xc.manifest, "Dataset manifest")->required();
    exp->add_option("--id", ply_id, "Sample id")->required();
    exp->add_option("--out", ply_out, "PLY path")->required();
    exp->add_option("--points", ply_points, "Subsample to this many points (0 = all)");
    exp->add_option("--seed", xc.seed, "Sampling seed");
    exp->add_option("--depth-mode", xc.depth_mode, "real | uniform_one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_out, synth_count, synth_size, synth_mixed, synth_noise,
                             synth_test_fraction, synth_seed);

        if (train->parsed()) {
            tcfg.aug.enabled = !no_aug;
            const auto manifest = bench::load_manifest(tc.manifest);
            const auto samples = load_split_clouds(manifest, parse_split(tc.split),
                                                   parse_depth_mode(tc.depth_mode));
            if (!quiet)
                tcfg.progress = [](int epoch, double loss) {
                    if (epoch % 10 == 0 || epoch < 3)
                        std::printf("epoch %4d  loss %.5f rad\n", epoch, loss);
                };
            auto outcome = net::train<float>(samples, tcfg);
            net::save_model(train_out, outcome.model);
            if (!train_history.empty()) {
                std::ofstream os(train_history);
                os << "epoch,mean_loss\n";
                for (size_t i = 0; i < outcome.history.size(); ++i)
                    os << i << "," << outcome.history[i] << "\n";
            }
            std::printf("saved %s (final loss %.5f rad)\n", train_out.c_str(),
                        outcome.history.back());
            return 0;
        }

        if (estimate->parsed()) {
            const auto manifest = bench::load_manifest(ec.manifest);
            net::PcccModel<float> model;
            const auto est = build_estimator(est_method, est_model, est_p, est_sigma, ec, model);
            std::printf("id,r,g,b,error_deg\n");
            auto run_one = [&](const bench::SampleRecord& rec) {
                const auto s = bench::load_sample(rec);
                try {
                    const auto e = est(s);
                    std::printf("%s,%.6f,%.6f,%.6f,%.4f\n", s.id.c_str(), e.r(), e.g(), e.b(),
                                imaging::angular_error_deg(e, s.gt));
                } catch (const Error& err) {
                    std::printf("%s,failed:%s\n", s.id.c_str(), err.what());
                }
            };
            if (!est_id.empty()) {
                for (const auto& rec : manifest.samples)
                    if (rec.id == est_id) {
                        run_one(rec);
                        return 0;
                    }
                raise(ErrorCode::invalid_argument, "no sample with id '" + est_id + "'");
            }
            for (const auto* rec : manifest.split_samples(parse_split(ec.split))) run_one(*rec);
            return 0;
        }

        if (evaluate->parsed()) {
            const auto manifest = bench::load_manifest(vc.manifest);
            net::PcccModel<float> model;
            const auto est =
                build_estimator(eval_method, eval_model, eval_p, eval_sigma, vc, model);
            const auto result = bench::evaluate(est, manifest, parse_split(vc.split));
            std::fputs(bench::format_summary_table(result.summary, eval_method, result.failures)
                           .c_str(),
                       stdout);
            if (!eval_csv.empty()) bench::write_per_sample_csv(eval_csv, result, eval_method);
            return 0;
        }

        if (awb->parsed()) {
            const auto manifest = bench::load_manifest(ac.manifest);
            const auto sample = find_sample(manifest, awb_id);
            const auto model = net::load_model<float>(awb_model);
            bench::AppConfig cfg{ac.points, parse_depth_mode(ac.depth_mode), ac.seed};
            if (awb_mode == "global") {
                const auto est = bench::make_pccc_estimator(model, ac.points, cfg.depth_mode,
                                                            ac.seed)(sample);
                io::write_linear_png16(awb_out, imaging::apply_awb(sample.image, est));
            } else if (awb_mode == "local") {
                const auto res = bench::local_awb(model, sample, cfg);
                io::write_linear_png16(awb_out, res.corrected);
                if (!awb_map.empty()) io::write_linear_png16(awb_map, res.illum_map);
            } else {
                raise(ErrorCode::invalid_argument, "--mode must be local or global");
            }
            std::printf("wrote %s\n", awb_out.c_str());
            return 0;
        }

        if (relight->parsed()) {
            const auto manifest = bench::load_manifest(rc.manifest);
            const auto sample = find_sample(manifest, rel_id);
            const auto model = net::load_model<float>(rel_model);
            bench::AppConfig cfg{rc.points, geometry::DepthMode::real, rc.seed};
            const auto res = bench::relight(model, sample, parse_illuminant(rel_illum), cfg);
            io::write_linear_png16(rel_out, res.relit);
            if (!rel_map.empty()) io::write_linear_png16(rel_map, res.illum_map);
            std::printf("wrote %s\n", rel_out.c_str());
            return 0;
        }

        if (exp->parsed()) {
            const auto manifest = bench::load_manifest(xc.manifest);
            const auto sample = find_sample(manifest, ply_id);
            auto cloud = geometry::build_point_cloud(sample.image, sample.depth,
                                                     sample.intrinsics,
                                                     parse_depth_mode(xc.depth_mode));
            if (ply_points > 0) cloud = geometry::sample_points(cloud, ply_points, xc.seed);
            io::write_ply(ply_out, cloud);
            std::printf("wrote %s (%lld points)\n", ply_out.c_str(),
                        static_cast<long long>(cloud.size()));
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return is_validation_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
