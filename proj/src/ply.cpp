#include "pccc/io/ply.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace pccc::io {

void write_ply(const std::string& path, const geometry::ColoredPointCloud& pc) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "wb"),
                                                       &std::fclose);
    if (!fp) raise(ErrorCode::io_error, "cannot open " + path + " for writing");

    std::fprintf(fp.get(),
                 "ply\nformat ascii 1.0\nelement vertex %lld\n"
                 "property float x\nproperty float y\nproperty float z\n"
                 "property uchar red\nproperty uchar green\nproperty uchar blue\n"
                 "end_header\n",
                 static_cast<long long>(pc.size()));
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        const Eigen::Vector3d p = pc.xyz(i);
        const Eigen::Vector3d c = pc.rgb(i);
        auto byte = [](double v) {
            return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
        };
        std::fprintf(fp.get(), "%.9g %.9g %.9g %d %d %d\n", p.x(), p.y(), p.z(), byte(c.x()),
                     byte(c.y()), byte(c.z()));
    }
}

}  // namespace pccc::io
