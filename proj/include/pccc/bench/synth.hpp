#pragma once

#include <optional>
#include <vector>

#include "pccc/geometry.hpp"
#include "pccc/imaging.hpp"

namespace pccc::bench {

// One plane of the scene box. normal * p = offset, normal facing the camera.
struct PlaneSurface {
    Eigen::Vector3d normal = Eigen::Vector3d(0, 0, -1);
    double offset = -2.0;
    Eigen::Vector3d albedo = Eigen::Vector3d::Constant(0.7);
    Eigen::Vector3d albedo2 = Eigen::Vector3d::Constant(0.7);  // checker partner
    double checker_period = 0.0;                               // meters; 0 = flat
};

// Desk-scale labeled RGB-D scene: planes intersected by pinhole rays, shaded
// with a Lambertian term to a fixed light direction, colored as
// shading * albedo * illuminant per channel.
struct SyntheticSceneSpec {
    int width = 64;
    int height = 64;
    geometry::CameraIntrinsics intrinsics{60.0, 60.0, 31.5, 31.5};
    std::vector<PlaneSurface> surfaces;
    imaging::Illuminant illuminant;
    // Optional second illuminant blended by depth: near pixels see illuminant,
    // far pixels see illuminant2, with a sigmoid transition at blend_mid_z.
    std::optional<imaging::Illuminant> illuminant2;
    double blend_mid_z = 2.0;
    double blend_softness = 0.3;
    // Unit vector from surface points toward the light source. The default
    // sits above and slightly behind the camera, so walls and floor are lit.
    Eigen::Vector3d light_dir = Eigen::Vector3d(0.25, -0.6, -0.75).normalized();
    double ambient = 0.35;
    double noise_sigma = 0.0;
    uint64_t seed = 0;

    void validate() const;
};

struct SynthScene {
    imaging::LinearImage image;
    geometry::DepthMap depth;
    imaging::Illuminant gt;  // dominant-blend illuminant for mixed scenes
};

SynthScene synth_generate(const SyntheticSceneSpec& spec);

// Randomized corpus specs. Every scene contains one near-neutral surface
// (the learnable cue) plus colored surfaces whose chroma stays outside the
// illuminant gamut. mixed_lighting gates the depth-keyed two-illuminant blend.
struct CorpusOptions {
    int count = 200;
    int width = 64;
    int height = 64;
    bool mixed_lighting = false;
    double noise_sigma = 0.002;
    uint64_t seed = 1;
};

std::vector<SyntheticSceneSpec> make_corpus_specs(const CorpusOptions& opts);

}  // namespace pccc::bench
