#include "pccc/bench/synth.hpp"

#include <cmath>
#include <random>

namespace pccc::bench {

void SyntheticSceneSpec::validate() const {
    if (width < 1 || height < 1) raise(ErrorCode::invalid_argument, "image size must be >= 1");
    intrinsics.validate();
    if (surfaces.empty()) raise(ErrorCode::invalid_argument, "scene needs at least one surface");
    for (const auto& s : surfaces) {
        if (std::abs(s.normal.norm() - 1.0) > 1e-9)
            raise(ErrorCode::invalid_argument, "surface normals must be unit length");
        if (s.albedo.minCoeff() < 0.0 || s.albedo.maxCoeff() > 1.0 ||
            s.albedo2.minCoeff() < 0.0 || s.albedo2.maxCoeff() > 1.0)
            raise(ErrorCode::invalid_argument, "albedos must lie in [0,1]");
    }
    if (!(ambient >= 0.0 && ambient <= 1.0))
        raise(ErrorCode::invalid_argument, "ambient must lie in [0,1]");
    if (noise_sigma < 0.0) raise(ErrorCode::invalid_argument, "noise_sigma must be >= 0");
}

SynthScene synth_generate(const SyntheticSceneSpec& spec) {
    spec.validate();

    SynthScene out;
    out.image = imaging::LinearImage::zeros(spec.width, spec.height);
    out.depth = geometry::DepthMap::zeros(spec.width, spec.height);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);

    const Eigen::Vector3d to_light = spec.light_dir;
    double blend_near_total = 0.0;
    size_t hit_count = 0;

    for (int v = 0; v < spec.height; ++v) {
        for (int u = 0; u < spec.width; ++u) {
            // Ray through the pixel, parameterized by z.
            const Eigen::Vector3d dir((u - spec.intrinsics.cx) / spec.intrinsics.fx,
                                      (v - spec.intrinsics.cy) / spec.intrinsics.fy, 1.0);
            double best_z = 0.0;
            const PlaneSurface* hit = nullptr;
            Eigen::Vector3d hit_p = Eigen::Vector3d::Zero();
            for (const auto& s : spec.surfaces) {
                const double denom = s.normal.dot(dir);
                if (std::abs(denom) < 1e-12) continue;
                const double z = s.offset / denom;
                if (z <= 0.05 || z > 100.0) continue;
                if (!hit || z < best_z) {
                    best_z = z;
                    hit = &s;
                    hit_p = dir * z;
                }
            }
            if (!hit) continue;
            ++hit_count;
            out.depth.at(u, v) = best_z;

            Eigen::Vector3d albedo = hit->albedo;
            if (hit->checker_period > 0.0) {
                long long t = 0;
                for (int c = 0; c < 3; ++c)
                    t += static_cast<long long>(std::floor(hit_p[c] / hit->checker_period));
                if (((t % 2) + 2) % 2 == 1) albedo = hit->albedo2;
            }

            const double lambert = std::max(0.0, hit->normal.dot(to_light));
            const double shading = spec.ambient + (1.0 - spec.ambient) * lambert;

            Eigen::Vector3d illum = spec.illuminant.vec();
            if (spec.illuminant2) {
                const double w =
                    1.0 / (1.0 + std::exp((best_z - spec.blend_mid_z) / spec.blend_softness));
                illum = w * spec.illuminant.vec() + (1.0 - w) * spec.illuminant2->vec();
                blend_near_total += w;
            }

            for (int c = 0; c < 3; ++c) {
                double val = shading * albedo[c] * illum[c];
                if (spec.noise_sigma > 0.0) val += noise(rng);
                out.image.at(u, v, c) = std::max(0.0, val);
            }
        }
    }
    if (hit_count == 0) raise(ErrorCode::no_visible_surface, "no surface in front of the camera");

    if (spec.illuminant2 && blend_near_total < 0.5 * static_cast<double>(hit_count))
        out.gt = *spec.illuminant2;  // far illuminant dominates
    else
        out.gt = spec.illuminant;
    return out;
}

namespace {

// Chromaticity from log-ratios against green.
imaging::Illuminant chroma_from_log(double lr, double lb) {
    return imaging::Illuminant(std::exp(lr), 1.0, std::exp(lb));
}

double chroma_angle_deg(const Eigen::Vector3d& a) {
    const Eigen::Vector3d n = Eigen::Vector3d::Ones().normalized();
    return std::acos(std::clamp(a.normalized().dot(n), -1.0, 1.0)) * 180.0 / M_PI;
}

}  // namespace

std::vector<SyntheticSceneSpec> make_corpus_specs(const CorpusOptions& opts) {
    std::vector<SyntheticSceneSpec> specs;
    specs.reserve(opts.count);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    for (int i = 0; i < opts.count; ++i) {
        SyntheticSceneSpec s;
        s.width = opts.width;
        s.height = opts.height;
        const double f = 0.95 * opts.width;
        s.intrinsics = {f, f, 0.5 * (opts.width - 1), 0.5 * (opts.height - 1)};
        s.seed = opts.seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
        s.noise_sigma = opts.noise_sigma;
        s.ambient = 0.25 + 0.25 * uni(rng);

        // Light source above and camera-side, tilted at random.
        s.light_dir =
            Eigen::Vector3d(0.8 * (uni(rng) - 0.5), -0.2 - 0.6 * uni(rng), -0.4 - 0.8 * uni(rng))
                .normalized();

        // Back wall, floor, and sometimes a side wall.
        auto tilted = [&](const Eigen::Vector3d& base) {
            const Eigen::Vector3d jitter(0.12 * (uni(rng) - 0.5), 0.12 * (uni(rng) - 0.5),
                                         0.12 * (uni(rng) - 0.5));
            return (base + jitter).normalized();
        };
        PlaneSurface wall;
        wall.normal = tilted(Eigen::Vector3d(0, 0, -1));
        const double wall_z = 1.8 + 1.4 * uni(rng);
        wall.offset = wall.normal.dot(Eigen::Vector3d(0, 0, wall_z));
        PlaneSurface floor;
        floor.normal = tilted(Eigen::Vector3d(0, -1, 0));
        const double floor_y = 0.5 + 0.7 * uni(rng);
        floor.offset = floor.normal.dot(Eigen::Vector3d(0, floor_y, 1.2));
        s.surfaces = {wall, floor};
        if (uni(rng) < 0.5) {
            PlaneSurface side;
            const double sx = uni(rng) < 0.5 ? -1.0 : 1.0;
            side.normal = tilted(Eigen::Vector3d(-sx, 0, 0));
            side.offset = side.normal.dot(Eigen::Vector3d(sx * (0.8 + 0.8 * uni(rng)), 0, 1.5));
            s.surfaces.push_back(side);
        }

        // One near-neutral surface; the rest visibly colored so chromaticity
        // alone separates them from any plausible illuminant.
        const size_t neutral_idx =
            std::min(s.surfaces.size() - 1, static_cast<size_t>(uni(rng) * s.surfaces.size()));
        for (size_t k = 0; k < s.surfaces.size(); ++k) {
            auto& surf = s.surfaces[k];
            if (k == neutral_idx) {
                const double a = 0.55 + 0.35 * uni(rng);
                Eigen::Vector3d alb;
                for (int c = 0; c < 3; ++c) alb[c] = a * (1.0 + 0.02 * (uni(rng) - 0.5));
                surf.albedo = alb.cwiseMin(1.0);
                surf.albedo2 = surf.albedo;
                continue;
            }
            auto colored = [&]() {
                while (true) {
                    Eigen::Vector3d alb(0.08 + 0.8 * uni(rng), 0.08 + 0.8 * uni(rng),
                                        0.08 + 0.8 * uni(rng));
                    if (chroma_angle_deg(alb) > 25.0) return alb;
                }
            };
            surf.albedo = colored();
            surf.albedo2 = uni(rng) < 0.6 ? colored() : surf.albedo;
            surf.checker_period = 0.2 + 0.5 * uni(rng);
        }

        // Illuminant gamut: within ~16 degrees of neutral.
        if (opts.mixed_lighting) {
            // Warm near light, cool far light; dominance varies with layout.
            s.illuminant = chroma_from_log(0.10 + 0.30 * uni(rng), -0.40 + 0.25 * uni(rng));
            s.illuminant2 = chroma_from_log(-0.35 + 0.25 * uni(rng), 0.10 + 0.30 * uni(rng));
            s.blend_mid_z = 1.6 + 1.4 * uni(rng);
            s.blend_softness = 0.15 + 0.25 * uni(rng);
        } else {
            s.illuminant = chroma_from_log(-0.35 + 0.7 * uni(rng), -0.35 + 0.7 * uni(rng));
        }
        specs.push_back(std::move(s));
    }
    return specs;
}

}  // namespace pccc::bench
