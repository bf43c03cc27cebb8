#pragma once

#include <string>

#include "pccc/geometry.hpp"
#include "pccc/imaging.hpp"

namespace pccc::io {

// 8- or 16-bit RGB/gray PNG, scaled to [0,1]. Gray is replicated to 3 channels.
imaging::SrgbImage read_srgb_png(const std::string& path);

// Same decoding as read_srgb_png but the values are taken as linear light.
imaging::LinearImage read_linear_png(const std::string& path);

// 16-bit single-channel PNG in millimeters; 0 stays 0 (invalid).
geometry::DepthMap read_depth_png(const std::string& path);

// 8-bit single-channel PNG; nonzero = true.
imaging::NeutralMask read_mask_png(const std::string& path);

// Values clamped to [0,1] and quantized.
void write_srgb_png(const std::string& path, const imaging::SrgbImage& img);
void write_linear_png16(const std::string& path, const imaging::LinearImage& img);
void write_depth_png16(const std::string& path, const geometry::DepthMap& dm);
void write_mask_png(const std::string& path, const imaging::NeutralMask& mask);

}  // namespace pccc::io
