// Python bindings. Images cross the boundary as 2-D uint8 numpy arrays
// (rows, columns).

#include "grayfuzz/benchmark.hpp"
#include "grayfuzz/metrics.hpp"
#include "grayfuzz/phantom.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using namespace grayfuzz;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const U8Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D uint8 array");
    const auto h = static_cast<std::size_t>(a.shape(0));
    const auto w = static_cast<std::size_t>(a.shape(1));
    std::vector<std::uint8_t> px(a.data(), a.data() + w * h);
    return GrayImage(w, h, std::move(px));
}

py::array_t<std::uint8_t> to_array(const GrayImage& img) {
    py::array_t<std::uint8_t> out({img.height(), img.width()});
    if (img.size() != 0) std::memcpy(out.mutable_data(), img.pixels().data(), img.size());
    return out;
}

py::array_t<std::uint8_t> mask_array(const BinaryMask& m) {
    py::array_t<std::uint8_t> out({m.height, m.width});
    if (!m.bits.empty()) std::memcpy(out.mutable_data(), m.bits.data(), m.bits.size());
    return out;
}

ThresholdMethod method_of(const std::string& name) {
    const auto m = parse_method(name);
    if (!m) throw std::invalid_argument("unknown threshold method: " + name);
    return *m;
}

py::dict report_dict(const ThresholdReport& r) {
    py::dict d;
    for (auto m : kAllMethods) {
        const auto& res = r[m];
        d[py::str(std::string(method_name(m)))] = res.level ? py::object(py::int_(*res.level)) : py::object(py::none());
    }
    return d;
}

Histogram hist_of(const py::object& obj) {
    const auto a = U8Array::ensure(obj);
    if (a && a.ndim() == 2) return histogram(to_image(a));
    const auto counts = py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast>::ensure(obj);
    if (!counts || counts.ndim() != 1 || counts.shape(0) != 256) {
        throw std::invalid_argument("expected a 2-D uint8 image or 256 histogram counts");
    }
    return Histogram::from_counts(std::span<const std::uint64_t, 256>(counts.data(), 256));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grayscale thresholding, fuzzy rule extraction and PSNR benchmarking";

    m.def("load_pgm", [](const std::string& path) { return to_array(read_pgm_file(path)); }, py::arg("path"));
    m.def("save_pgm", [](const std::string& path, const U8Array& img) { write_pgm_file(path, to_image(img)); },
          py::arg("path"), py::arg("image"));

    m.def(
        "histogram",
        [](const U8Array& img) {
            const auto h = histogram(to_image(img));
            py::array_t<std::uint64_t> out(256);
            std::memcpy(out.mutable_data(), h.counts.data(), sizeof h.counts);
            return out;
        },
        py::arg("image"));

    m.def(
        "add_noise",
        [](const U8Array& img, double sigma, std::uint64_t seed) {
            return to_array(add_gaussian_noise(to_image(img), {sigma, seed}));
        },
        py::arg("image"), py::arg("sigma"), py::arg("seed"));

    m.def("methods", [] {
        std::vector<std::string> names;
        for (auto mm : kAllMethods) names.emplace_back(method_name(mm));
        return names;
    });

    m.def(
        "compute_threshold",
        [](const std::string& method, const py::object& data) -> std::optional<int> {
            return compute_threshold(method_of(method), hist_of(data)).level;
        },
        py::arg("method"), py::arg("data"),
        "Level for one method from an image or 256 counts; None when the method fails.");

    m.def(
        "threshold_report", [](const py::object& data) { return report_dict(threshold_report(hist_of(data))); },
        py::arg("data"));

    m.def(
        "binarize", [](const U8Array& img, int level) { return mask_array(binarize(to_image(img), level)); },
        py::arg("image"), py::arg("level"));

    m.def(
        "extract",
        [](const U8Array& img, int min_regions, int window, int training_stride, const std::string& training_fusion) {
            PipelineConfig cfg;
            cfg.min_regions = min_regions;
            cfg.window = window;
            cfg.training_stride = training_stride;
            const auto f = parse_training_fusion(training_fusion);
            if (!f) throw std::invalid_argument("unknown training fusion: " + training_fusion);
            cfg.training_fusion = *f;
            const auto image = to_image(img);
            ExtractionResult r;
            {
                py::gil_scoped_release release;
                r = extract(image, cfg);
            }
            py::dict d;
            d["extracted"] = to_array(r.extracted);
            d["mask"] = mask_array(r.mask);
            d["report"] = report_dict(r.report);
            d["no_rule_pixels"] = r.no_rule_pixels;
            d["degenerate"] = r.degenerate;
            d["rulebase"] = r.rulebase ? py::object(py::str(r.rulebase->to_json())) : py::object(py::none());
            return d;
        },
        py::arg("image"), py::arg("min_regions") = PipelineConfig{}.min_regions,
        py::arg("window") = PipelineConfig{}.window, py::arg("training_stride") = PipelineConfig{}.training_stride,
        py::arg("training_fusion") = std::string(training_fusion_name(PipelineConfig{}.training_fusion)));

    m.def(
        "compare",
        [](const U8Array& test, const U8Array& reference) {
            const auto r = compare(to_image(test), to_image(reference));
            py::dict d;
            d["mae"] = r.mae;
            d["mse"] = r.mse;
            d["snr_db"] = r.snr_db;
            d["psnr_db"] = r.psnr_db;
            return d;
        },
        py::arg("test"), py::arg("reference"));

    m.def(
        "bimodal_phantom",
        [](std::size_t width, std::size_t height) { return to_array(phantom::bimodal(width, height)); },
        py::arg("width") = 256, py::arg("height") = 256);

    m.def(
        "benchmark_csv",
        [](const std::vector<U8Array>& images, const std::vector<double>& sigmas,
           const std::vector<std::uint64_t>& seeds) {
            std::vector<GrayImage> imgs;
            for (const auto& a : images) imgs.push_back(to_image(a));
            BenchmarkSpec spec;
            spec.sigmas = sigmas;
            spec.seeds = seeds;
            py::gil_scoped_release release;
            return run_benchmark(imgs, spec).to_csv();
        },
        py::arg("images"), py::arg("sigmas") = BenchmarkSpec{}.sigmas, py::arg("seeds") = BenchmarkSpec{}.seeds);

    py::register_exception<PgmError>(m, "PgmError", PyExc_ValueError);
}
