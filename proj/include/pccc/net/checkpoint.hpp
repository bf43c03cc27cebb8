#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "pccc/net/model.hpp"

namespace pccc::net {

inline constexpr uint16_t kCheckpointVersion = 1;

// Checkpoint layout, all integers and floats little-endian:
//   "PCCC" | u16 version | u16 counts (group1, group2, head) | u16 input width
//   | u16 output width per layer | per layer: weight f32 row-major, bias f32.

namespace detail {

inline void put_u16(std::ostream& os, uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

inline void put_f32(std::ostream& os, float f) {
    uint32_t v;
    std::memcpy(&v, &f, 4);
    const unsigned char b[4] = {
        static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), 2))
        raise(ErrorCode::corrupt_file, "checkpoint truncated");
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

inline float get_f32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        raise(ErrorCode::corrupt_file, "checkpoint truncated");
    const uint32_t v = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
                       (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
    float f;
    std::memcpy(&f, &v, 4);
    return f;
}

}  // namespace detail

template <typename S>
void save_model(const std::string& path, const PcccModel<S>& model) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorCode::io_error, "cannot open " + path + " for writing");
    os.write("PCCC", 4);
    detail::put_u16(os, kCheckpointVersion);
    detail::put_u16(os, static_cast<uint16_t>(model.group1.size()));
    detail::put_u16(os, static_cast<uint16_t>(model.group2.size()));
    detail::put_u16(os, static_cast<uint16_t>(model.head.size()));
    detail::put_u16(os, static_cast<uint16_t>(model.group1.front().in()));
    for (auto* grp : {&model.group1, &model.group2, &model.head})
        for (const auto& l : *grp) detail::put_u16(os, static_cast<uint16_t>(l.out()));
    for (auto* grp : {&model.group1, &model.group2, &model.head})
        for (const auto& l : *grp) {
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
                for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
                    detail::put_f32(os, static_cast<float>(l.weight(r, c)));
            for (Eigen::Index i = 0; i < l.bias.size(); ++i)
                detail::put_f32(os, static_cast<float>(l.bias[i]));
        }
    if (!os) raise(ErrorCode::io_error, "write failed for " + path);
}

template <typename S = float>
PcccModel<S> load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(ErrorCode::missing_file, "cannot open checkpoint " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "PCCC", 4) != 0)
        raise(ErrorCode::corrupt_file, "bad checkpoint magic");
    const uint16_t version = detail::get_u16(is);
    if (version != kCheckpointVersion)
        raise(ErrorCode::version_mismatch,
              "unsupported checkpoint version " + std::to_string(version));

    const int n1 = detail::get_u16(is), n2 = detail::get_u16(is), nh = detail::get_u16(is);
    if (n1 < 1 || n2 < 1 || nh < 1) raise(ErrorCode::corrupt_file, "bad layer counts");
    int in_width = detail::get_u16(is);

    Architecture arch;
    arch.group1 = {in_width};
    arch.group2.clear();
    arch.head.clear();
    for (int i = 0; i < n1; ++i) arch.group1.push_back(detail::get_u16(is));
    arch.group2 = {arch.group1.back()};
    for (int i = 0; i < n2; ++i) arch.group2.push_back(detail::get_u16(is));
    arch.head = {arch.group1.back() + arch.group2.back()};
    for (int i = 0; i < nh; ++i) arch.head.push_back(detail::get_u16(is));
    arch.validate();

    PcccModel<S> model = make_model<S>(arch, 0);
    for (auto* grp : {&model.group1, &model.group2, &model.head})
        for (auto& l : *grp) {
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
                for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
                    l.weight(r, c) = static_cast<S>(detail::get_f32(is));
            for (Eigen::Index i = 0; i < l.bias.size(); ++i)
                l.bias[i] = static_cast<S>(detail::get_f32(is));
        }
    is.peek();
    if (!is.eof()) raise(ErrorCode::corrupt_file, "trailing bytes in checkpoint");
    return model;
}

}  // namespace pccc::net
