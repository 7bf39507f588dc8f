// Copyright 2026 The jqpie Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "jqpie/bench.hpp"
#include "jqpie/circuit.hpp"
#include "jqpie/image.hpp"
#include "jqpie/jpeg.hpp"
#include "jqpie/metrics.hpp"
#include "jqpie/pipeline.hpp"
#include "jqpie/statevector.hpp"
#include "jqpie/synth.hpp"

namespace py = pybind11;
using namespace jqpie;

namespace {

using Array2D = py::array_t<double, py::array::c_style | py::array::forcecast>;

imagio::GrayscaleImage to_image(const Array2D &a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto h = std::size_t(a.shape(0));
  const auto w = std::size_t(a.shape(1));
  if (h == 0 || w == 0) throw py::value_error("empty image");
  std::vector<double> px(a.data(), a.data() + h * w);
  return imagio::GrayscaleImage(h, w, std::move(px));
}

py::array_t<double> to_array(const imagio::GrayscaleImage &img) {
  py::array_t<double> out({img.height(), img.width()});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

py::array_t<std::complex<double>> to_array(const sim::StateVector &sv) {
  py::array_t<std::complex<double>> out(py::ssize_t(sv.dim()));
  std::copy(sv.amplitudes().begin(), sv.amplitudes().end(), out.mutable_data());
  return out;
}

py::object to_py(const nlohmann::json &j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::array<double, 64> to_block(const Array2D &a) {
  if (a.ndim() != 2 || a.shape(0) != 8 || a.shape(1) != 8) {
    throw py::value_error("expected an 8x8 array");
  }
  std::array<double, 64> b{};
  std::copy(a.data(), a.data() + 64, b.begin());
  return b;
}

py::array_t<double> block_array(const std::array<double, 64> &b) {
  py::array_t<double> out({8, 8});
  std::copy(b.begin(), b.end(), out.mutable_data());
  return out;
}

struct PyResult {
  pipeline::PipelineResult r;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "JPEG-assisted quantum image preparation simulator";

  py::register_exception<imagio::ImageError>(m, "ImageError", PyExc_ValueError);
  py::register_exception<circuit::CircuitError>(m, "CircuitError", PyExc_ValueError);
  py::register_exception<sim::SimError>(m, "SimError", PyExc_RuntimeError);

  // imagio
  m.def("load_image", [](const std::filesystem::path &p) { return to_array(imagio::load_image(p)); },
        py::arg("path"), "Read PGM/PPM (and PNG when available) as a float64 array.");
  m.def("save_pgm", [](const Array2D &a, const std::filesystem::path &p) {
          imagio::save_pgm(to_image(a), p);
        },
        py::arg("image"), py::arg("path"));

  // jpegcore
  m.def("dct2_block", [](const Array2D &b) { return block_array(jpeg::dct2_block(to_block(b))); });
  m.def("idct2_block", [](const Array2D &b) { return block_array(jpeg::idct2_block(to_block(b))); });
  m.def("quant_table", [](double s) { return block_array(jpeg::QuantTable(s).entries()); },
        py::arg("scale") = 1.0);
  m.def("zigzag_permutation", [] {
    const auto &p = jpeg::zigzag_permutation();
    return std::vector<int>(p.begin(), p.end());
  });
  m.def("classical_decode",
        [](const Array2D &img, const std::string &mode, int r, double scale, bool level_shift) {
          return to_array(jpeg::classical_reference_decode(
              to_image(img), jpeg::parse_decode_mode(mode), r, {scale, level_shift}));
        },
        py::arg("image"), py::arg("mode") = "jpeg", py::arg("r") = 6, py::arg("scale") = 1.0,
        py::arg("level_shift") = false,
        "Classical decoders: jpeg, jqpie_oracle, qf_oracle. Output is not clamped.");
  m.def("sparsity_stats",
        [](const Array2D &img, double scale) {
          const auto st = jpeg::sparsity_stats(to_image(img), {scale, false});
          py::dict d;
          d["nonzero"] = st.nonzero;
          d["pixel_count"] = st.pixel_count;
          d["block_count"] = st.block_count;
          d["compression_ratio"] = st.compression_ratio;
          d["histogram"] = std::vector<double>(st.histogram.begin(), st.histogram.end());
          return d;
        },
        py::arg("image"), py::arg("scale") = 1.0);

  // synth / qcircuit
  m.def("closed_form_resources",
        [](int h, int w, int r, const std::string &method, bool abstract_perm) {
          return to_py(nlohmann::json(synth::closed_form_resources(
              h, w, r, synth::parse_method(method), abstract_perm)));
        },
        py::arg("h"), py::arg("w"), py::arg("r"), py::arg("method") = "jqpie",
        py::arg("abstract_perm") = false,
        "Per-stage CX, rotation and depth counts for a 2^h x 2^w image.");
  m.def("state_prep_cost", [](int m_) {
    const auto c = synth::state_prep_cost(m_);
    return py::make_tuple(c.cx, c.rotations, c.depth);
  });
  m.def("truncated_zigzag_map", &synth::truncated_zigzag_map, py::arg("r"));
  m.def("export_stage_qasm",
        [](const std::string &stage, int r, double scale) {
          circuit::Circuit c;
          if (stage == "inverse_zigzag") {
            synth::ZigzagOptions zo;
            zo.lowered = true;
            c = synth::synth_truncated_zigzag(r, zo);
          } else if (stage == "inverse_quantization") {
            c = synth::synth_inverse_quantization(jpeg::QuantTable(scale)).circuit;
          } else {
            throw py::value_error("stage must be inverse_zigzag or inverse_quantization");
          }
          return circuit::export_qasm(c);
        },
        py::arg("stage"), py::arg("r") = 6, py::arg("scale") = 1.0);
  m.def("state_prep_qasm", [](const std::vector<double> &amps) {
    return circuit::export_qasm(synth::synth_state_prep(amps));
  });

  // pipeline
  py::class_<PyResult>(m, "PipelineResult")
      .def_property_readonly("method", [](const PyResult &p) { return std::string(synth::to_string(p.r.method)); })
      .def_property_readonly("state", [](const PyResult &p) { return to_array(p.r.state); })
      .def_property_readonly("num_qubits", [](const PyResult &p) { return p.r.state.num_qubits(); })
      .def_property_readonly("success_probability", [](const PyResult &p) { return p.r.success_probability; })
      .def_property_readonly("reconstructed", [](const PyResult &p) { return to_array(p.r.reconstructed); })
      .def_property_readonly("resources", [](const PyResult &p) { return to_py(nlohmann::json(p.r.resources)); })
      .def_property_readonly("stage_states", [](const PyResult &p) {
        py::list out;
        for (const auto &[name, sv] : p.r.stage_states) out.append(py::make_tuple(name, to_array(sv)));
        return out;
      })
      .def("readout", [](const PyResult &p, const std::string &model) {
        const auto rm = model == "measurement" ? pipeline::ReadoutModel::measurement
                                               : pipeline::ReadoutModel::amplitude;
        return to_array(pipeline::readout_image(p.r.state, p.r.norm_record, p.r.geometry, rm));
      }, py::arg("model") = "amplitude")
      .def("raster_state", [](const PyResult &p) {
        return to_array(pipeline::to_raster_order(p.r.state, p.r.geometry));
      }, "Final QF-JQPIE state reordered into the column-major QPIE layout.")
      .def("to_dict", [](const PyResult &p) { return to_py(pipeline::to_json(p.r)); });

  m.def("simulate",
        [](const Array2D &img, const std::string &method, int r, double scale,
           const std::string &backend, const std::string &norm_mode, bool level_shift,
           bool keep_stage_states, bool abstract_perm) {
          pipeline::PipelineOptions o;
          o.r = r;
          o.scale = scale;
          o.backend = sim::parse_backend(backend);
          o.norm_mode = pipeline::parse_norm_mode(norm_mode);
          o.level_shift = level_shift;
          o.keep_stage_states = keep_stage_states;
          o.abstract_perm = abstract_perm;
          const auto image = to_image(img);
          const auto meth = synth::parse_method(method);
          py::gil_scoped_release release;
          return PyResult{pipeline::run(meth, image, o)};
        },
        py::arg("image"), py::arg("method") = "jqpie", py::arg("r") = 6, py::arg("scale") = 1.0,
        py::arg("backend") = "operator", py::arg("norm_mode") = "global",
        py::arg("level_shift") = false, py::arg("keep_stage_states") = false,
        py::arg("abstract_perm") = false,
        "Run qpie, jqpie or qf_jqpie on a grayscale array.");

  // metrics
  m.def("psnr", [](const Array2D &a, const Array2D &b) { return metrics::psnr(to_image(a), to_image(b)); });
  m.def("ssim",
        [](const Array2D &a, const Array2D &b, const std::string &mode) {
          return metrics::ssim(to_image(a), to_image(b), metrics::parse_ssim_mode(mode));
        },
        py::arg("a"), py::arg("b"), py::arg("mode") = "global");

  // bench
  m.def("run_sweep",
        [](const std::vector<std::filesystem::path> &inputs, const std::vector<std::string> &methods,
           const std::vector<int> &r_set, double scale, const std::string &backend,
           const std::string &norm_mode, unsigned threads) {
          bench::SweepConfig cfg;
          cfg.inputs = inputs;
          cfg.methods.clear();
          for (const auto &s : methods) cfg.methods.push_back(synth::parse_method(s));
          cfg.r_set = r_set;
          cfg.scale = scale;
          cfg.backend = sim::parse_backend(backend);
          cfg.norm_mode = pipeline::parse_norm_mode(norm_mode);
          cfg.threads = threads;
          bench::SweepResult res;
          {
            py::gil_scoped_release release;
            res = bench::run_sweep(cfg);
          }
          return py::make_tuple(bench::to_csv(res.rows), to_py(bench::summary_json(res)));
        },
        py::arg("inputs"), py::arg("methods") = std::vector<std::string>{"jqpie", "qf_jqpie"},
        py::arg("r_set") = std::vector<int>{5, 4, 3, 2}, py::arg("scale") = 1.0,
        py::arg("backend") = "operator", py::arg("norm_mode") = "global", py::arg("threads") = 0u,
        "Returns (csv_text, summary_dict).");
}
