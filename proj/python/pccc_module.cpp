#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pccc/baselines.hpp"
#include "pccc/bench/apps.hpp"
#include "pccc/bench/evaluate.hpp"
#include "pccc/bench/synth.hpp"
#include "pccc/net/checkpoint.hpp"

namespace py = pybind11;
using namespace pccc;

namespace {

imaging::LinearImage image_from_array(const py::array_t<double, py::array::c_style>& a) {
    if (a.ndim() != 3 || a.shape(2) != 3)
        throw py::value_error("expected an (H, W, 3) array");
    imaging::LinearImage img;
    img.height = static_cast<int>(a.shape(0));
    img.width = static_cast<int>(a.shape(1));
    img.data.assign(a.data(), a.data() + a.size());
    return img;
}

py::array_t<double> array_from_image(const imaging::LinearImage& img) {
    py::array_t<double> a({img.height, img.width, 3});
    std::copy(img.data.begin(), img.data.end(), a.mutable_data());
    return a;
}

geometry::DepthMap depth_from_array(const py::array_t<double, py::array::c_style>& a) {
    if (a.ndim() != 2) throw py::value_error("expected an (H, W) depth array");
    geometry::DepthMap dm;
    dm.height = static_cast<int>(a.shape(0));
    dm.width = static_cast<int>(a.shape(1));
    dm.d.assign(a.data(), a.data() + a.size());
    return dm;
}

py::array_t<double> points_array(const geometry::ColoredPointCloud& pc) {
    py::array_t<double> a({static_cast<py::ssize_t>(pc.size()), static_cast<py::ssize_t>(6)});
    auto r = a.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (py::ssize_t j = 0; j < 6; ++j) r(i, j) = pc.points(j, i);
    return a;
}

baselines::BaselineConfig make_cfg(double p, double sigma, int order, double saturation) {
    baselines::BaselineConfig cfg;
    cfg.minkowski_p = p;
    cfg.smoothing_sigma = sigma;
    cfg.derivative_order = order;
    cfg.saturation_threshold = saturation;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(pccc, m) {
    m.doc() = "Point-cloud illuminant estimation and white balance";

    py::register_exception<Error>(m, "PcccError");

    // imaging
    m.def("srgb_to_linear", [](const py::array_t<double, py::array::c_style>& a) {
        imaging::SrgbImage srgb;
        if (a.ndim() != 3 || a.shape(2) != 3)
            throw py::value_error("expected an (H, W, 3) array");
        srgb.height = static_cast<int>(a.shape(0));
        srgb.width = static_cast<int>(a.shape(1));
        srgb.data.assign(a.data(), a.data() + a.size());
        return array_from_image(imaging::srgb_to_linear(srgb));
    });
    m.def(
        "apply_awb",
        [](const py::array_t<double, py::array::c_style>& img, const Eigen::Vector3d& e) {
            return array_from_image(
                imaging::apply_awb(image_from_array(img), imaging::Illuminant(e)));
        },
        py::arg("image"), py::arg("illuminant"));
    m.def(
        "label_illuminant",
        [](const py::array_t<double, py::array::c_style>& img,
           const py::array_t<uint8_t, py::array::c_style>& mask) {
            imaging::NeutralMask nm;
            nm.height = static_cast<int>(mask.shape(0));
            nm.width = static_cast<int>(mask.shape(1));
            nm.mask.assign(mask.data(), mask.data() + mask.size());
            return imaging::label_illuminant(image_from_array(img), nm).vec();
        },
        py::arg("image"), py::arg("mask"));
    m.def(
        "angular_error_deg",
        [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
            return imaging::angular_error_deg(imaging::Illuminant(a), imaging::Illuminant(b));
        },
        py::arg("a"), py::arg("b"));

    // baselines
    m.def(
        "gray_world",
        [](const py::array_t<double, py::array::c_style>& img, double saturation) {
            return baselines::gray_world(image_from_array(img),
                                         make_cfg(6.0, 2.0, 1, saturation))
                .vec();
        },
        py::arg("image"), py::arg("saturation_threshold") = 0.98);
    m.def(
        "white_patch",
        [](const py::array_t<double, py::array::c_style>& img, double saturation) {
            return baselines::white_patch(image_from_array(img),
                                          make_cfg(6.0, 2.0, 1, saturation))
                .vec();
        },
        py::arg("image"), py::arg("saturation_threshold") = 0.98);
    m.def(
        "shades_of_gray",
        [](const py::array_t<double, py::array::c_style>& img, double p, double saturation) {
            return baselines::shades_of_gray(image_from_array(img),
                                             make_cfg(p, 2.0, 1, saturation))
                .vec();
        },
        py::arg("image"), py::arg("p") = 6.0, py::arg("saturation_threshold") = 0.98);
    m.def(
        "gray_edge",
        [](const py::array_t<double, py::array::c_style>& img, int order, double sigma, double p,
           double saturation) {
            return baselines::gray_edge(image_from_array(img),
                                        make_cfg(p, sigma, order, saturation))
                .vec();
        },
        py::arg("image"), py::arg("order") = 1, py::arg("sigma") = 2.0, py::arg("p") = 6.0,
        py::arg("saturation_threshold") = 0.98);

    // geometry
    py::class_<geometry::ColoredPointCloud>(m, "PointCloud")
        .def_property_readonly("points", &points_array)
        .def("__len__", [](const geometry::ColoredPointCloud& pc) { return pc.size(); })
        .def(
            "sample",
            [](const geometry::ColoredPointCloud& pc, int n, uint64_t seed) {
                return geometry::sample_points(pc, n, seed);
            },
            py::arg("n"), py::arg("seed") = 0)
        .def("normalized", [](const geometry::ColoredPointCloud& pc) {
            auto [out, frame] = geometry::normalize_cloud(pc);
            return py::make_tuple(out, frame.center, frame.scale);
        });

    m.def(
        "build_point_cloud",
        [](const py::array_t<double, py::array::c_style>& img,
           const py::array_t<double, py::array::c_style>& depth, double fx, double fy, double cx,
           double cy, bool uniform_depth) {
            return geometry::build_point_cloud(
                image_from_array(img), depth_from_array(depth),
                geometry::CameraIntrinsics{fx, fy, cx, cy},
                uniform_depth ? geometry::DepthMode::uniform_one : geometry::DepthMode::real);
        },
        py::arg("image"), py::arg("depth"), py::arg("fx"), py::arg("fy"), py::arg("cx"),
        py::arg("cy"), py::arg("uniform_depth") = false);
    m.def("backproject", [](double u, double v, double d, double fx, double fy, double cx,
                            double cy) {
        return geometry::backproject(u, v, d, geometry::CameraIntrinsics{fx, fy, cx, cy});
    });

    // net
    py::class_<net::PcccModel<float>>(m, "Model")
        .def_static("load", &net::load_model<float>, py::arg("path"))
        .def("save",
             [](const net::PcccModel<float>& model, const std::string& path) {
                 net::save_model(path, model);
             })
        .def("estimate",
             [](const net::PcccModel<float>& model, const geometry::ColoredPointCloud& pc) {
                 return net::estimate_cloud(model, pc).vec();
             })
        .def("forward",
             [](const net::PcccModel<float>& model, const geometry::ColoredPointCloud& pc) {
                 const auto res = net::forward(model, pc);
                 py::dict out;
                 out["e_global"] = res.e_global.vec();
                 py::array_t<double> p({static_cast<py::ssize_t>(res.p_illum.cols()),
                                        static_cast<py::ssize_t>(3)});
                 auto r = p.mutable_unchecked<2>();
                 for (py::ssize_t i = 0; i < r.shape(0); ++i)
                     for (py::ssize_t j = 0; j < 3; ++j) r(i, j) = res.p_illum(j, i);
                 out["p_illum"] = p;
                 out["w_s"] = res.w_s;
                 return out;
             })
        .def_property_readonly("parameter_count", &net::PcccModel<float>::parameter_count);

    m.def(
        "train",
        [](const std::vector<std::pair<geometry::ColoredPointCloud, Eigen::Vector3d>>& samples,
           int epochs, double lr, int batch_size, int n_points, uint64_t seed, bool augment_on,
           bool standard_arch) {
            std::vector<net::TrainSample> data;
            for (const auto& [pc, label] : samples)
                data.push_back({pc, imaging::Illuminant(label)});
            net::TrainConfig cfg;
            cfg.epochs = epochs;
            cfg.lr = lr;
            cfg.batch_size = batch_size;
            cfg.n_points = n_points;
            cfg.seed = seed;
            cfg.aug.enabled = augment_on;
            if (!standard_arch) cfg.arch = net::Architecture::tiny(8, 16, 32);
            auto out = net::train<float>(data, cfg);
            return py::make_tuple(std::move(out.model), out.history);
        },
        py::arg("samples"), py::arg("epochs") = 100, py::arg("lr") = 3e-4,
        py::arg("batch_size") = 16, py::arg("n_points") = 256, py::arg("seed") = 0,
        py::arg("augment") = true, py::arg("standard_arch") = true);

    // bench
    m.def(
        "synth_scene",
        [](uint64_t seed, int size, bool mixed, double noise) {
            bench::CorpusOptions opts;
            opts.count = 1;
            opts.width = opts.height = size;
            opts.mixed_lighting = mixed;
            opts.noise_sigma = noise;
            opts.seed = seed;
            const auto spec = bench::make_corpus_specs(opts)[0];
            const auto scene = bench::synth_generate(spec);
            py::array_t<double> depth({scene.depth.height, scene.depth.width});
            std::copy(scene.depth.d.begin(), scene.depth.d.end(), depth.mutable_data());
            py::dict out;
            out["image"] = array_from_image(scene.image);
            out["depth"] = depth;
            out["illuminant"] = scene.gt.vec();
            out["fx"] = spec.intrinsics.fx;
            out["fy"] = spec.intrinsics.fy;
            out["cx"] = spec.intrinsics.cx;
            out["cy"] = spec.intrinsics.cy;
            return out;
        },
        py::arg("seed") = 0, py::arg("size") = 64, py::arg("mixed") = false,
        py::arg("noise") = 0.002);
    m.def("summarize_errors", [](std::vector<double> errors) {
        const auto s = bench::summarize_errors(std::move(errors));
        py::dict out;
        out["mean"] = s.mean;
        out["median"] = s.median;
        out["trimean"] = s.trimean;
        out["best25"] = s.best25;
        out["worst25"] = s.worst25;
        out["n"] = s.n;
        return out;
    });
}
