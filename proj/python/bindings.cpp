// Python bindings for the starprune core: numpy-facing wrappers around
// resizing, codebook quantization, similarity scoring, mask construction,
// quality metrics, and full pipeline runs.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "starprune/commands.hpp"
#include "starprune/config.hpp"
#include "starprune/interpolate.hpp"
#include "starprune/metrics.hpp"
#include "starprune/quantize.hpp"
#include "starprune/report.hpp"
#include "starprune/sttp.hpp"
#include "starprune/tensor.hpp"

namespace py = pybind11;
using namespace starprune;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Tensor tensor_from_array(const FloatArray& arr) {
    if (arr.ndim() == 2) {
        Tensor t(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), 1);
        std::memcpy(t.data(), arr.data(), sizeof(float) * t.storage().size());
        return t;
    }
    if (arr.ndim() == 3) {
        Tensor t(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                 static_cast<int>(arr.shape(2)));
        std::memcpy(t.data(), arr.data(), sizeof(float) * t.storage().size());
        return t;
    }
    throw std::invalid_argument("expected a (rows, cols) or (rows, cols, channels) array");
}

py::array_t<float> array_from_tensor(const Tensor& t) {
    py::array_t<float> arr({t.rows(), t.cols(), t.channels()});
    std::memcpy(arr.mutable_data(), t.data(), sizeof(float) * t.storage().size());
    return arr;
}

Field field_from_array(const FloatArray& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a (rows, cols) array");
    Field f(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    std::memcpy(f.storage().data(), arr.data(), sizeof(float) * f.storage().size());
    return f;
}

py::array_t<float> array_from_field(const Field& f) {
    py::array_t<float> arr({f.rows(), f.cols()});
    std::memcpy(arr.mutable_data(), f.storage().data(), sizeof(float) * f.storage().size());
    return arr;
}

ResizeMode mode_from_name(const std::string& name) {
    if (name == "bilinear") return ResizeMode::Bilinear;
    if (name == "nearest") return ResizeMode::Nearest;
    throw std::invalid_argument("mode must be 'bilinear' or 'nearest', got '" + name + "'");
}

Codebook codebook_from_array(const FloatArray& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("codebook must be a (size, channels) array");
    Codebook cb;
    cb.size = static_cast<int>(arr.shape(0));
    cb.channels = static_cast<int>(arr.shape(1));
    cb.entries.assign(arr.data(), arr.data() + arr.size());
    cb.validate();
    return cb;
}

py::dict json_to_pydict(const nlohmann::json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_starprune, m) {
    m.doc() = "Coarse-to-fine video-feature generation with similarity-based "
              "token pruning and partial updates";

    m.def(
        "interpolate",
        [](const FloatArray& src, int rows, int cols, const std::string& mode) {
            return array_from_tensor(
                interpolate(tensor_from_array(src), Extent2{rows, cols}, mode_from_name(mode)));
        },
        py::arg("src"), py::arg("rows"), py::arg("cols"), py::arg("mode") = "bilinear",
        "Resize a (rows, cols[, channels]) feature map; returns (rows, cols, channels).");

    m.def(
        "build_codebook",
        [](uint64_t seed, int size, int channels, float spread) {
            const Codebook cb = build_codebook(seed, size, channels, spread);
            py::array_t<float> arr({cb.size, cb.channels});
            std::memcpy(arr.mutable_data(), cb.entries.data(),
                        sizeof(float) * cb.entries.size());
            return arr;
        },
        py::arg("seed"), py::arg("size"), py::arg("channels"), py::arg("spread") = 0.5f,
        "Seeded codebook as a (size, channels) array; row 0 is the zero vector.");

    m.def(
        "quantize",
        [](const FloatArray& residual, const FloatArray& codebook) {
            const Tensor t = tensor_from_array(residual);
            const Codebook cb = codebook_from_array(codebook);
            const TokenMap tokens = quantize(t, cb);
            py::array_t<int32_t> codes({tokens.rows, tokens.cols});
            std::memcpy(codes.mutable_data(), tokens.codes.data(),
                        sizeof(int32_t) * tokens.codes.size());
            return py::make_tuple(codes, array_from_tensor(dequantize(tokens, cb)));
        },
        py::arg("residual"), py::arg("codebook"),
        "Nearest-codebook-entry quantization; returns (codes, embedded).");

    m.def(
        "spatial_similarity",
        [](const FloatArray& f_prev, const FloatArray& f_curr) {
            return array_from_field(
                spatial_similarity(tensor_from_array(f_prev), tensor_from_array(f_curr)).data);
        },
        py::arg("f_prev"), py::arg("f_curr"),
        "Per-token channel cosine similarity between consecutive snapshots.");

    m.def(
        "temporal_similarity",
        [](const FloatArray& f_prev_clip, const FloatArray& f_curr_clip) {
            return array_from_field(temporal_similarity(tensor_from_array(f_prev_clip),
                                                        tensor_from_array(f_curr_clip))
                                        .data);
        },
        py::arg("f_prev_clip"), py::arg("f_curr_clip"),
        "Per-token channel cosine similarity against the previous clip.");

    m.def(
        "fuse_scores",
        [](const FloatArray& spatial, const FloatArray& temporal, double p) {
            SimilarityMap s{SimilarityKind::Spatial, 0, 0, field_from_array(spatial)};
            SimilarityMap t{SimilarityKind::Temporal, 0, 0, field_from_array(temporal)};
            return array_from_field(fuse_scores(s, t, p).data);
        },
        py::arg("spatial"), py::arg("temporal"), py::arg("p") = 2.0,
        "Fused dissimilarity scores; p = math.inf takes the max of the two.");

    m.def(
        "build_mask",
        [](const FloatArray& scores, double ratio) {
            FusedScoreMap map{0, 0, 2.0, field_from_array(scores)};
            const PruneMask mask = build_mask(map, ratio);
            py::array_t<uint8_t> arr({mask.keep.rows(), mask.keep.cols()});
            std::memcpy(arr.mutable_data(), mask.keep.storage().data(),
                        sizeof(uint8_t) * mask.keep.storage().size());
            return arr;
        },
        py::arg("scores"), py::arg("ratio"),
        "Keep-mask retaining the round((1 - ratio) * n) highest scores.");

    m.def(
        "mse",
        [](const FloatArray& a, const FloatArray& b) {
            return mse(tensor_from_array(a), tensor_from_array(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "psnr",
        [](const FloatArray& a, const FloatArray& b, double peak) {
            return psnr(tensor_from_array(a), tensor_from_array(b), peak);
        },
        py::arg("a"), py::arg("b"), py::arg("peak") = 2.0);

    m.def(
        "ssim",
        [](const FloatArray& a, const FloatArray& b, double peak, int window) {
            return ssim(tensor_from_array(a), tensor_from_array(b), peak, window);
        },
        py::arg("a"), py::arg("b"), py::arg("peak") = 2.0, py::arg("window") = 8);

    m.def(
        "generate",
        [](const std::string& config_text, const std::string& out_dir) {
            const RunConfig config = parse_config(config_text);
            const RunReport report = cmd_generate(config, out_dir);
            return json_to_pydict(report_to_json(report));
        },
        py::arg("config_text"), py::arg("out_dir"),
        "Run the reference + reduced pipelines from a key=value config string, "
        "write artifacts into out_dir, and return the run report as a dict.");

    m.def("default_config", [] { return serialize_config(RunConfig{}); },
          "Default configuration in the key = value grammar.");
}
