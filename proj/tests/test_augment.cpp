#include <doctest.h>

#include <random>

#include "pccc/augment.hpp"

using namespace pccc;
using geometry::ColoredPointCloud;

namespace {

ColoredPointCloud random_cloud(int n, uint64_t seed) {
    ColoredPointCloud pc;
    pc.points.resize(6, n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xyz(-1.0, 1.0), rgb(0.01, 1.0);
    for (int i = 0; i < n; ++i)
        pc.points.col(i) << xyz(rng), xyz(rng), xyz(rng) + 2.0, rgb(rng), rgb(rng), rgb(rng);
    return pc;
}

}  // namespace

TEST_CASE("camera pose augmentation is rigid and leaves colors alone") {
    augment::AugmentConfig cfg;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        const ColoredPointCloud pc = random_cloud(50, seed + 100);
        augment::RngState rng(seed);
        const ColoredPointCloud out = augment::camera_pose_aug(pc, cfg, rng);

        CHECK((out.points.bottomRows<3>() - pc.points.bottomRows<3>()).cwiseAbs().maxCoeff() ==
              0.0);
        for (int a = 0; a < 50; a += 7)
            for (int b = a + 1; b < 50; b += 11) {
                const double before = (pc.xyz(a) - pc.xyz(b)).norm();
                const double after = (out.xyz(a) - out.xyz(b)).norm();
                CHECK(std::abs(before - after) < 1e-9);
            }
    }
}

TEST_CASE("zero rotation bound is the identity") {
    augment::AugmentConfig cfg;
    cfg.max_rotation_deg = 0.0;
    const ColoredPointCloud pc = random_cloud(20, 5);
    augment::RngState rng(9);
    const ColoredPointCloud out = augment::camera_pose_aug(pc, cfg, rng);
    CHECK((out.points - pc.points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("drawn rotations are proper") {
    // distances to the centroid are preserved and so is chirality; verify via
    // the implied Gram matrices of three displaced points
    augment::AugmentConfig cfg;
    cfg.max_rotation_deg = 45.0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const ColoredPointCloud pc = random_cloud(4, seed);
        augment::RngState rng(seed * 3 + 1);
        const ColoredPointCloud out = augment::camera_pose_aug(pc, cfg, rng);
        const Eigen::Vector3d c_in = pc.points.topRows<3>().rowwise().mean();
        const Eigen::Vector3d c_out = out.points.topRows<3>().rowwise().mean();
        Eigen::Matrix3d a, b;
        for (int i = 0; i < 3; ++i) {
            a.col(i) = pc.xyz(i) - c_in;
            b.col(i) = out.xyz(i) - c_out;
        }
        // b = R a for a proper rotation R
        CHECK((b.transpose() * b - a.transpose() * a).cwiseAbs().maxCoeff() < 1e-9);
        if (std::abs(a.determinant()) > 1e-6)
            CHECK(b.determinant() * a.determinant() > 0.0);
    }
}

TEST_CASE("light intensity augmentation scales colors only") {
    augment::AugmentConfig cfg;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        const ColoredPointCloud pc = random_cloud(40, seed + 500);
        augment::RngState rng(seed);
        const ColoredPointCloud out = augment::light_intensity_aug(pc, cfg, rng);

        CHECK((out.points.topRows<3>() - pc.points.topRows<3>()).cwiseAbs().maxCoeff() == 0.0);
        for (int i = 0; i < 40; ++i) {
            const Eigen::Vector3d before = pc.rgb(i).normalized();
            const Eigen::Vector3d after = out.rgb(i).normalized();
            CHECK((before - after).norm() < 1e-9);
        }
        // single scalar: the ratio matches across all points and channels
        const double ratio = out.rgb(0).x() / pc.rgb(0).x();
        CHECK(ratio >= cfg.intensity_floor);
        for (int i = 0; i < 40; ++i)
            for (int c = 0; c < 3; ++c)
                CHECK(out.rgb(i)[c] == doctest::Approx(ratio * pc.rgb(i)[c]).epsilon(1e-12));
    }
}

TEST_CASE("sigma zero intensity augmentation is the identity") {
    augment::AugmentConfig cfg;
    cfg.intensity_sigma = 0.0;
    const ColoredPointCloud pc = random_cloud(10, 77);
    augment::RngState rng(1);
    const ColoredPointCloud out = augment::light_intensity_aug(pc, cfg, rng);
    CHECK((out.points - pc.points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("composed augmentation passes the label through and is deterministic") {
    augment::AugmentConfig cfg;
    const imaging::Illuminant label(0.4, 1.0, 0.7);
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        const ColoredPointCloud pc = random_cloud(8, seed);
        augment::RngState rng(seed);
        const auto [out, label_out] = augment::augment(pc, label, cfg, rng);
        CHECK(imaging::angular_error_deg(label, label_out) == 0.0);
        CHECK(out.size() == pc.size());
    }

    const ColoredPointCloud pc = random_cloud(30, 4242);
    augment::RngState r1(123), r2(123);
    const auto [a, la] = augment::augment(pc, label, cfg, r1);
    const auto [b, lb] = augment::augment(pc, label, cfg, r2);
    CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);

    augment::AugmentConfig off = cfg;
    off.enabled = false;
    augment::RngState r3(1);
    const auto [same, ls] = augment::augment(pc, label, off, r3);
    CHECK((same.points - pc.points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("augmentation config validation") {
    augment::AugmentConfig bad;
    bad.max_rotation_deg = 180.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = augment::AugmentConfig{};
    bad.intensity_floor = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}
