#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pccc/geometry.hpp"
#include "pccc/imaging.hpp"

namespace pccc::bench {

enum class Split { train, test };

struct SampleRecord {
    std::string id;
    std::string rgb_path;    // resolved against the manifest directory
    std::string depth_path;
    std::string colorspace = "srgb";  // "srgb" | "linear"
    std::string depth_unit = "mm";
    imaging::Illuminant gt;
    geometry::CameraIntrinsics intrinsics;
    std::optional<geometry::RigidTransform> depth_to_rgb;
    std::optional<imaging::TuningMatrix> tuning;
    std::optional<std::string> mask_path;
    Split split = Split::train;
};

struct DatasetManifest {
    std::string directory;
    std::vector<SampleRecord> samples;

    std::vector<const SampleRecord*> split_samples(Split s) const {
        std::vector<const SampleRecord*> out;
        for (const auto& r : samples)
            if (r.split == s) out.push_back(&r);
        return out;
    }
};

// Parses and validates: unique ids, referenced files exist, ground truth
// normalizes, intrinsics positive.
DatasetManifest load_manifest(const std::string& path);

// Decoded sample. The image is linear light: sRGB sources are linearized and
// the tuning matrix, when present, removed; depth is meters, aligned into the
// RGB frame when a transform is present.
struct LoadedSample {
    std::string id;
    imaging::LinearImage image;
    geometry::DepthMap depth;
    geometry::CameraIntrinsics intrinsics;
    imaging::Illuminant gt;
};

LoadedSample load_sample(const SampleRecord& rec);

// Writes a corpus manifest for synthetic scenes (paths relative to dir).
struct ManifestEntry {
    std::string id;
    std::string rgb;
    std::string depth;
    Eigen::Vector3d gt;
    geometry::CameraIntrinsics intrinsics;
    Split split;
};
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

}  // namespace pccc::bench
