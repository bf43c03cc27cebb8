#pragma once

#include <string>

#include "pccc/geometry.hpp"

namespace pccc::io {

// ASCII PLY with properties x y z red green blue. Colors are scaled to 0-255
// for export only; coordinates keep full precision.
void write_ply(const std::string& path, const geometry::ColoredPointCloud& pc);

}  // namespace pccc::io
