#include "pccc/bench/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "pccc/io/png_io.hpp"

namespace pccc::bench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Eigen::Matrix3d mat3_from(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 9)
        raise(ErrorCode::parse_error, what + " must be a row-major array of 9 numbers");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = arr[3 * r + c].get<double>();
    return m;
}

std::string resolve(const std::string& dir, const std::string& rel) {
    fs::path p(rel);
    return p.is_absolute() ? p.string() : (fs::path(dir) / p).string();
}

void require_file(const std::string& path, const std::string& id) {
    if (!fs::exists(path))
        raise(ErrorCode::missing_file, "sample '" + id + "' references missing file " + path);
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) raise(ErrorCode::missing_file, "cannot open manifest " + path);
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::exception& e) {
        raise(ErrorCode::parse_error, std::string("manifest parse error: ") + e.what());
    }
    if (!doc.contains("samples") || !doc["samples"].is_array())
        raise(ErrorCode::parse_error, "manifest needs a 'samples' array");

    DatasetManifest m;
    m.directory = fs::path(path).parent_path().string();
    std::set<std::string> ids;
    for (const auto& js : doc["samples"]) {
        SampleRecord r;
        try {
            r.id = js.at("id").get<std::string>();
            r.rgb_path = resolve(m.directory, js.at("rgb").get<std::string>());
            r.depth_path = resolve(m.directory, js.at("depth").get<std::string>());
            if (js.contains("colorspace")) r.colorspace = js["colorspace"].get<std::string>();
            if (js.contains("depth_unit")) r.depth_unit = js["depth_unit"].get<std::string>();

            const auto& gt = js.at("illuminant");
            if (!gt.is_array() || gt.size() != 3)
                raise(ErrorCode::parse_error, "illuminant must be a 3-vector");
            try {
                r.gt = imaging::Illuminant(gt[0].get<double>(), gt[1].get<double>(),
                                           gt[2].get<double>());
            } catch (const Error&) {
                raise(ErrorCode::invalid_ground_truth,
                      "sample '" + r.id + "' has an invalid illuminant");
            }

            const auto& k = js.at("intrinsics");
            r.intrinsics = {k.at("fx").get<double>(), k.at("fy").get<double>(),
                            k.at("cx").get<double>(), k.at("cy").get<double>()};
            r.intrinsics.validate();

            if (js.contains("depth_to_rgb")) {
                geometry::RigidTransform x;
                x.r = mat3_from(js["depth_to_rgb"].at("r"), "depth_to_rgb.r");
                const auto& t = js["depth_to_rgb"].at("t");
                for (int i = 0; i < 3; ++i) x.t[i] = t.at(i).get<double>();
                x.validate();
                r.depth_to_rgb = x;
            }
            if (js.contains("tuning_matrix")) {
                imaging::TuningMatrix tm;
                tm.m = mat3_from(js["tuning_matrix"], "tuning_matrix");
                r.tuning = tm;
            }
            if (js.contains("neutral_mask"))
                r.mask_path = resolve(m.directory, js["neutral_mask"].get<std::string>());

            const std::string split = js.value("split", "train");
            if (split == "train")
                r.split = Split::train;
            else if (split == "test")
                r.split = Split::test;
            else
                raise(ErrorCode::parse_error, "split must be 'train' or 'test'");
        } catch (const json::exception& e) {
            raise(ErrorCode::parse_error, std::string("manifest sample error: ") + e.what());
        }

        if (!ids.insert(r.id).second)
            raise(ErrorCode::duplicate_id, "duplicate sample id '" + r.id + "'");
        require_file(r.rgb_path, r.id);
        require_file(r.depth_path, r.id);
        if (r.mask_path) require_file(*r.mask_path, r.id);
        if (r.colorspace != "srgb" && r.colorspace != "linear")
            raise(ErrorCode::parse_error, "colorspace must be 'srgb' or 'linear'");
        if (r.depth_unit != "mm" && r.depth_unit != "m")
            raise(ErrorCode::parse_error, "depth_unit must be 'mm' or 'm'");
        m.samples.push_back(std::move(r));
    }
    return m;
}

LoadedSample load_sample(const SampleRecord& rec) {
    LoadedSample s;
    s.id = rec.id;
    s.gt = rec.gt;
    s.intrinsics = rec.intrinsics;

    if (rec.colorspace == "srgb")
        s.image = imaging::srgb_to_linear(io::read_srgb_png(rec.rgb_path));
    else
        s.image = io::read_linear_png(rec.rgb_path);
    if (rec.tuning) s.image = imaging::remove_tuning(s.image, *rec.tuning);

    s.depth = io::read_depth_png(rec.depth_path);
    if (rec.depth_unit == "m")
        for (auto& d : s.depth.d) d *= 1000.0;  // png stores mm; undo the mm read scale
    if (rec.depth_to_rgb)
        s.depth = geometry::align_depth_to_rgb(s.depth, rec.intrinsics, rec.intrinsics,
                                               *rec.depth_to_rgb);
    return s;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    json samples = json::array();
    for (const auto& e : entries) {
        json js;
        js["id"] = e.id;
        js["rgb"] = e.rgb;
        js["depth"] = e.depth;
        js["colorspace"] = "linear";
        js["depth_unit"] = "mm";
        js["illuminant"] = {e.gt.x(), e.gt.y(), e.gt.z()};
        js["intrinsics"] = {{"fx", e.intrinsics.fx},
                            {"fy", e.intrinsics.fy},
                            {"cx", e.intrinsics.cx},
                            {"cy", e.intrinsics.cy}};
        js["split"] = e.split == Split::train ? "train" : "test";
        samples.push_back(std::move(js));
    }
    json doc;
    doc["samples"] = std::move(samples);
    std::ofstream os(path);
    if (!os) raise(ErrorCode::io_error, "cannot write manifest " + path);
    os << doc.dump(2) << "\n";
}

}  // namespace pccc::bench
