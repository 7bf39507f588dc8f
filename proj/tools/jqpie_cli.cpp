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

// jqpie command line: stats, simulate, sweep, resources, export-circuit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jqpie/bench.hpp"
#include "jqpie/circuit.hpp"
#include "jqpie/image.hpp"
#include "jqpie/jpeg.hpp"
#include "jqpie/metrics.hpp"
#include "jqpie/pipeline.hpp"
#include "jqpie/statevector.hpp"
#include "jqpie/synth.hpp"

namespace fs = std::filesystem;
using namespace jqpie;

namespace {

void write_text(const fs::path &p, const std::string &text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

int cmd_stats(const std::vector<fs::path> &inputs, double scale,
              bool level_shift, const fs::path &out) {
  const bench::Dataset ds = bench::ingest_dataset(inputs);
  for (const auto &w : ds.warnings) std::cerr << "warning: " << w << "\n";
  bench::SweepResult res;
  res.skipped = ds.skipped;
  int failures = 0;
  std::printf("%-40s %10s %10s %10s\n", "image", "N", "d", "CR");
  for (const auto &li : ds.images) {
    bench::ImageStats st{li.label, li.category, std::nullopt, std::nullopt};
    try {
      st.stats = jpeg::sparsity_stats(li.image, {scale, level_shift});
      std::printf("%-40s %10zu %10zu %10.4f\n", li.label.c_str(),
                  st.stats->pixel_count, st.stats->nonzero,
                  st.stats->compression_ratio);
    } catch (const std::exception &e) {
      st.error = e.what();
      ++failures;
      std::printf("%-40s error: %s\n", li.label.c_str(), e.what());
    }
    res.stats.push_back(std::move(st));
  }
  if (!out.empty()) {
    fs::create_directories(out);
    nlohmann::json j = bench::summary_json(res);
    j.erase("within_tolerance");
    j.erase("rows");
    j.erase("error_rows");
    j.erase("tolerance");
    j["scale"] = scale;
    write_text(out / "stats.json", j.dump(2) + "\n");
    write_text(out / "histogram.csv", bench::histogram_csv(res.stats));
  }
  return failures ? 1 : 0;
}

struct SimArgs {
  fs::path image;
  std::string method = "jqpie";
  int r = 6;
  double scale = 1.0;
  std::string backend = "operator";
  std::string norm_mode = "global";
  std::string readout = "amplitude";
  std::string ssim_mode = "global";
  bool level_shift = false;
  fs::path out;
  fs::path dump;
};

int cmd_simulate(const SimArgs &a) {
  const imagio::GrayscaleImage img = imagio::load_image(a.image);
  pipeline::PipelineOptions po;
  po.r = a.r;
  po.scale = a.scale;
  po.backend = sim::parse_backend(a.backend);
  po.norm_mode = pipeline::parse_norm_mode(a.norm_mode);
  po.level_shift = a.level_shift;
  const synth::Method method = synth::parse_method(a.method);
  const pipeline::PipelineResult res = pipeline::run(method, img, po);

  const pipeline::ReadoutModel model =
      a.readout == "measurement" ? pipeline::ReadoutModel::measurement
                                 : pipeline::ReadoutModel::amplitude;
  const imagio::GrayscaleImage recon =
      model == pipeline::ReadoutModel::amplitude
          ? res.reconstructed
          : pipeline::readout_image(res.state, res.norm_record, res.geometry, model);
  const imagio::GrayscaleImage baseline = jpeg::classical_reference_decode(
      img, jpeg::DecodeMode::jpeg, 6, {a.scale, a.level_shift});
  char bid[64];
  std::snprintf(bid, sizeof bid, "jpeg S=%g", a.scale);
  const metrics::QualityReport q = metrics::compare(
      img, recon, baseline, bid, metrics::parse_ssim_mode(a.ssim_mode));

  nlohmann::json j = pipeline::to_json(res);
  j["image"] = a.image.generic_string();
  j["r"] = a.r;
  j["scale"] = a.scale;
  j["backend"] = sim::to_string(po.backend);
  j["readout"] = a.readout;
  j["metrics"] = q;
  std::cout << j.dump(2) << "\n";
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    write_text(a.out / "result.json", j.dump(2) + "\n");
    imagio::save_pgm(recon, a.out / "reconstruction.pgm");
  }
  if (!a.dump.empty()) sim::dump_state(res.state, a.dump);
  return 0;
}

int cmd_sweep(const bench::SweepConfig &cfg, const fs::path &out,
              bool keep_going) {
  const bench::Dataset ds = bench::ingest_dataset(cfg.inputs);
  for (const auto &w : ds.warnings) std::cerr << "warning: " << w << "\n";
  const bench::SweepResult res = bench::run_sweep(ds, cfg);
  if (out.empty()) {
    std::cout << bench::to_csv(res.rows);
  } else {
    const auto files = bench::emit_report(res, out);
    std::cerr << "wrote " << files.csv.string() << ", "
              << files.summary.string() << ", " << files.histogram.string()
              << "\n";
  }
  const std::size_t errors = res.error_rows();
  if (errors > 0) {
    std::cerr << (keep_going ? "warning: " : "error: ") << errors
              << " error row(s)\n";
    return keep_going ? 0 : 1;
  }
  return 0;
}

int cmd_resources(std::size_t height, std::size_t width,
                  const std::vector<int> &rs, const std::string &method_s,
                  bool abstract_perm, bool as_json) {
  const synth::Method method = synth::parse_method(method_s);
  const int h = std::countr_zero(imagio::next_power_of_two(std::max<std::size_t>(height, 8)));
  const int w = std::countr_zero(imagio::next_power_of_two(std::max<std::size_t>(width, 8)));
  nlohmann::json rows = nlohmann::json::array();
  if (!as_json) {
    std::printf("%-10s %3s %-22s %12s %12s %12s\n", "method", "r", "stage",
                "cx", "rotations", "depth");
  }
  for (int r : rs) {
    const auto rep = synth::closed_form_resources(h, w, r, method, abstract_perm);
    const double red = method == synth::Method::qpie
                           ? 0.0
                           : bench::state_prep_cx_reduction(h, w, r);
    nlohmann::json j = rep;
    j["r"] = r;
    j["method"] = synth::to_string(method);
    j["state_prep_cx_reduction_pct"] = red;
    rows.push_back(j);
    if (!as_json) {
      for (const auto &s : rep.breakdown) {
        std::printf("%-10s %3d %-22s %12lld %12lld %12lld\n",
                    std::string(synth::to_string(method)).c_str(), r,
                    s.stage.c_str(), (long long)s.cost.cx,
                    (long long)s.cost.rotations, (long long)s.cost.depth);
      }
      std::printf("%-10s %3d %-22s %12lld %12lld %12lld  (state-prep CX -%.4f%%)\n",
                  std::string(synth::to_string(method)).c_str(), r, "total",
                  (long long)rep.cx_count, (long long)rep.rotation_count,
                  (long long)rep.depth, red);
    }
  }
  if (as_json) {
    nlohmann::json j = {{"padded", {1 << h, 1 << w}}, {"rows", rows}};
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_export(const std::string &method_s, const std::string &stage, int r,
               double scale, const fs::path &image, const fs::path &out) {
  const synth::Method method = synth::parse_method(method_s);
  circuit::Circuit c;
  if (stage == "inverse_zigzag") {
    synth::ZigzagOptions zo;
    zo.lowered = true;
    c = synth::synth_truncated_zigzag(r, zo);
  } else if (stage == "inverse_quantization") {
    c = synth::synth_inverse_quantization(jpeg::QuantTable(scale), true).circuit;
  } else if (stage == "inverse_qdct") {
    c = synth::synth_inverse_qdct();
  } else {
    if (image.empty()) throw CLI::ValidationError("--image", "required for this stage");
    pipeline::PipelineOptions po;
    po.r = r;
    po.scale = scale;
    const auto res = pipeline::run(method, imagio::load_image(image), po);
    if (stage == "all") {
      c = res.circuit;
    } else if (stage == "state_prep") {
      c = circuit::Circuit(res.circuit.registers());
      for (const auto &g : res.circuit.gates()) {
        if (g.stage == "state_prep") c.append(g);
      }
    } else {
      throw CLI::ValidationError("--stage", "unknown stage " + stage);
    }
  }
  const std::string text = circuit::export_qasm(synth::lower(c));
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"JPEG-assisted quantum image preparation simulator"};
  app.require_subcommand(1);
  int rc = 0;

  // stats
  auto *stats = app.add_subcommand("stats", "compression ratio and zigzag histogram");
  std::vector<fs::path> stats_in;
  double stats_scale = 1.0;
  bool stats_shift = false;
  fs::path stats_out;
  stats->add_option("inputs", stats_in, "image files or directories")->required();
  stats->add_option("--scale", stats_scale, "quantization scale S")->check(CLI::PositiveNumber);
  stats->add_flag("--level-shift", stats_shift, "subtract 128 before the DCT");
  stats->add_option("--out", stats_out, "output directory");
  stats->callback([&] { rc = cmd_stats(stats_in, stats_scale, stats_shift, stats_out); });

  // simulate
  auto *simulate = app.add_subcommand("simulate", "run one pipeline on one image");
  SimArgs sa;
  simulate->add_option("image", sa.image, "input image")->required()->check(CLI::ExistingFile);
  simulate->add_option("--method", sa.method, "qpie | jqpie | qf_jqpie");
  simulate->add_option("--r", sa.r, "truncation level")->check(CLI::Range(2, 6));
  simulate->add_option("--scale", sa.scale, "quantization scale S")->check(CLI::PositiveNumber);
  simulate->add_option("--backend", sa.backend, "operator | gate_exact");
  simulate->add_option("--norm-mode", sa.norm_mode, "global | per_block");
  simulate->add_option("--readout", sa.readout, "amplitude | measurement")
      ->check(CLI::IsMember({"amplitude", "measurement"}));
  simulate->add_option("--ssim", sa.ssim_mode, "global | windowed");
  simulate->add_flag("--level-shift", sa.level_shift, "subtract 128 before the DCT");
  simulate->add_option("--out", sa.out, "output directory (result.json, reconstruction.pgm)");
  simulate->add_option("--dump-state", sa.dump, "write the final state as raw f64 pairs");
  simulate->callback([&] { rc = cmd_simulate(sa); });

  // sweep
  auto *sweep = app.add_subcommand("sweep", "evaluate a dataset over r");
  bench::SweepConfig cfg;
  std::vector<std::string> sweep_methods = {"jqpie", "qf_jqpie"};
  std::string sweep_backend = "operator", sweep_norm = "global", sweep_ssim = "global";
  fs::path sweep_out;
  bool keep_going = false;
  sweep->add_option("inputs", cfg.inputs, "image files or directories")->required();
  sweep->add_option("--method", sweep_methods, "methods (comma separated)")->delimiter(',');
  sweep->add_option("--r", cfg.r_set, "truncation levels (comma separated)")
      ->delimiter(',')
      ->check(CLI::Range(2, 6));
  sweep->add_option("--scale", cfg.scale, "quantization scale S")->check(CLI::PositiveNumber);
  sweep->add_option("--backend", sweep_backend, "operator | gate_exact");
  sweep->add_option("--norm-mode", sweep_norm, "global | per_block");
  sweep->add_option("--ssim", sweep_ssim, "global | windowed");
  sweep->add_flag("--level-shift", cfg.level_shift, "subtract 128 before the DCT");
  sweep->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  sweep->add_option("--out", sweep_out, "report directory");
  sweep->add_flag("--keep-going", keep_going, "exit 0 even when error rows were produced");
  sweep->callback([&] {
    cfg.methods.clear();
    for (const auto &m : sweep_methods) cfg.methods.push_back(synth::parse_method(m));
    cfg.backend = sim::parse_backend(sweep_backend);
    cfg.norm_mode = pipeline::parse_norm_mode(sweep_norm);
    cfg.ssim_mode = metrics::parse_ssim_mode(sweep_ssim);
    rc = cmd_sweep(cfg, sweep_out, keep_going);
  });

  // resources
  auto *resources = app.add_subcommand("resources", "closed-form resource table");
  std::size_t res_h = 256, res_w = 256;
  std::vector<int> res_r = {6, 5, 4, 3, 2};
  std::string res_method = "jqpie";
  bool res_abstract = false, res_json = false;
  resources->add_option("--height", res_h, "image height in pixels");
  resources->add_option("--width", res_w, "image width in pixels");
  resources->add_option("--r", res_r, "truncation levels")->delimiter(',')->check(CLI::Range(2, 6));
  resources->add_option("--method", res_method, "qpie | jqpie | qf_jqpie");
  resources->add_flag("--abstract-perm", res_abstract, "count the zigzag permutation as free");
  resources->add_flag("--json", res_json, "print JSON");
  resources->callback([&] {
    rc = cmd_resources(res_h, res_w, res_r, res_method, res_abstract, res_json);
  });

  // export-circuit
  auto *exp = app.add_subcommand("export-circuit", "OpenQASM 3 for a lowered stage");
  std::string exp_method = "jqpie", exp_stage = "state_prep";
  int exp_r = 6;
  double exp_scale = 1.0;
  fs::path exp_image, exp_out;
  exp->add_option("--method", exp_method, "qpie | jqpie | qf_jqpie");
  exp->add_option("--stage", exp_stage,
                  "state_prep | inverse_zigzag | inverse_quantization | inverse_qdct | all");
  exp->add_option("--r", exp_r, "truncation level")->check(CLI::Range(2, 6));
  exp->add_option("--scale", exp_scale, "quantization scale S")->check(CLI::PositiveNumber);
  exp->add_option("--image", exp_image, "input image (state_prep, all)");
  exp->add_option("--out", exp_out, "output .qasm file");
  exp->callback([&] {
    rc = cmd_export(exp_method, exp_stage, exp_r, exp_scale, exp_image, exp_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
