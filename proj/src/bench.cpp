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

#include "jqpie/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace jqpie::bench {

namespace {

void collect(const fs::path &root, const fs::path &p, Dataset &ds) {
  std::string label = fs::relative(p, root).generic_string();
  if (label.empty() || label == ".") label = p.filename().generic_string();
  if (!imagio::is_supported_image(p)) {
    ++ds.skipped;
    ds.warnings.push_back("skipped non-image file: " + label);
    return;
  }
  try {
    LabeledImage li;
    li.label = label;
    const fs::path rel = fs::relative(p, root);
    li.category = std::distance(rel.begin(), rel.end()) > 1
                      ? rel.begin()->generic_string()
                      : "default";
    li.image = imagio::load_image(p);
    ds.images.push_back(std::move(li));
  } catch (const std::exception &e) {
    ++ds.skipped;
    ds.warnings.push_back("skipped " + label + ": " + e.what());
  }
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000" so byte output does not depend on rounding noise.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const fs::path &p, const std::string &text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

Dataset ingest_dataset(const std::vector<fs::path> &inputs) {
  Dataset ds;
  for (const fs::path &in : inputs) {
    if (!fs::exists(in)) {
      throw std::runtime_error("input does not exist: " + in.string());
    }
    if (fs::is_directory(in)) {
      std::vector<fs::path> files;
      for (const auto &e : fs::recursive_directory_iterator(in)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end(), [&](const auto &a, const auto &b) {
        return fs::relative(a, in).generic_string() <
               fs::relative(b, in).generic_string();
      });
      for (const auto &f : files) collect(in, f, ds);
    } else {
      collect(in.parent_path(), in, ds);
    }
  }
  if (ds.images.empty()) throw std::runtime_error("no images found in input");
  return ds;
}

Dataset ingest_dataset(const fs::path &input) {
  return ingest_dataset(std::vector<fs::path>{input});
}

void SweepConfig::validate() const {
  if (r_set.empty()) throw std::invalid_argument("r set must be non-empty");
  if (methods.empty()) throw std::invalid_argument("method set must be non-empty");
  for (int r : r_set) jpeg::validate_truncation(r);
  if (!(scale > 0)) throw std::invalid_argument("scale must be positive");
}

std::size_t SweepResult::error_rows() const {
  return std::size_t(std::count_if(
      rows.begin(), rows.end(), [](const SweepRow &r) { return r.error.has_value(); }));
}

double state_prep_cx_reduction(int h, int w, int r) {
  const double full = double(synth::state_prep_cost(h + w).cx);
  const double part = double(synth::state_prep_cost(h + w - (6 - r)).cx);
  return 100.0 * (1.0 - part / full);
}

std::vector<SweepRow> evaluate_image(
    const LabeledImage &li, const SweepConfig &cfg) {
  std::vector<SweepRow> rows;
  const jpeg::JpegOptions jo{cfg.scale, cfg.level_shift};
  std::optional<imagio::GrayscaleImage> baseline;
  std::string baseline_error;
  try {
    baseline = jpeg::classical_reference_decode(
        li.image, jpeg::DecodeMode::jpeg, 6, jo);
  } catch (const std::exception &e) {
    baseline_error = e.what();
  }
  char bid[64];
  std::snprintf(bid, sizeof bid, "jpeg S=%g", cfg.scale);
  for (synth::Method m : cfg.methods) {
    for (int r : cfg.r_set) {
      SweepRow row;
      row.image = li.label;
      row.category = li.category;
      row.method = m;
      row.r = r;
      row.scale = cfg.scale;
      try {
        if (!baseline) throw std::runtime_error(baseline_error);
        pipeline::PipelineOptions po;
        po.r = r;
        po.scale = cfg.scale;
        po.backend = cfg.backend;
        po.norm_mode = cfg.norm_mode;
        po.level_shift = cfg.level_shift;
        const pipeline::PipelineResult res = pipeline::run(m, li.image, po);
        const metrics::QualityReport q = metrics::compare(
            li.image, res.reconstructed, *baseline, bid, cfg.ssim_mode);
        row.psnr = q.psnr;
        row.ssim = q.ssim;
        row.delta_psnr = q.delta_psnr;
        row.delta_ssim = q.delta_ssim;
        row.success_prob = res.success_probability;
        row.cx_total = res.resources.cx_count;
        row.depth_total = res.resources.depth;
        row.cx_reduction_pct = m == synth::Method::qpie
                                   ? 0.0
                                   : state_prep_cx_reduction(
                                         res.geometry.h, res.geometry.w, r);
        row.within_tolerance = row.delta_psnr >= kPsnrTolerance &&
                               row.delta_ssim >= kSsimTolerance;
      } catch (const std::exception &e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SweepResult run_sweep(const Dataset &data, const SweepConfig &cfg) {
  cfg.validate();
  const std::size_t n = data.images.size();
  std::vector<std::vector<SweepRow>> per_image(n);
  SweepResult res;
  res.skipped = data.skipped;
  res.stats.resize(n);

  unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(n)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      const LabeledImage &li = data.images[i];
      per_image[i] = evaluate_image(li, cfg);
      ImageStats &st = res.stats[i];
      st.image = li.label;
      st.category = li.category;
      try {
        st.stats = jpeg::sparsity_stats(li.image, {cfg.scale, cfg.level_shift});
      } catch (const std::exception &e) {
        st.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();

  for (auto &rows : per_image) {
    for (auto &row : rows) res.rows.push_back(std::move(row));
  }
  return res;
}

SweepResult run_sweep(const SweepConfig &cfg) {
  cfg.validate();
  return run_sweep(ingest_dataset(cfg.inputs), cfg);
}

std::string to_csv(const std::vector<SweepRow> &rows) {
  std::ostringstream os;
  os << "image,method,r,S,psnr,ssim,delta_psnr,delta_ssim,success_prob,"
        "cx_total,depth_total,cx_reduction_pct,within_tolerance,error\n";
  for (const SweepRow &r : rows) {
    os << csv_field(r.image) << ',' << synth::to_string(r.method) << ','
       << r.r << ',' << fmt(r.scale) << ',';
    if (r.error) {
      os << ",,,,,,,,," << csv_field(*r.error) << '\n';
      continue;
    }
    os << fmt(r.psnr) << ',' << fmt(r.ssim) << ',' << fmt(r.delta_psnr) << ','
       << fmt(r.delta_ssim) << ',' << fmt(r.success_prob) << ',' << r.cx_total
       << ',' << r.depth_total << ',' << fmt(r.cx_reduction_pct) << ','
       << (r.within_tolerance ? 1 : 0) << ",\n";
  }
  return os.str();
}

nlohmann::json summary_json(const SweepResult &res) {
  nlohmann::json j;
  j["rows"] = res.rows.size();
  j["error_rows"] = res.error_rows();
  j["skipped_files"] = res.skipped;
  j["tolerance"] = {{"delta_psnr", kPsnrTolerance}, {"delta_ssim", kSsimTolerance}};

  struct Range {
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    std::size_t n = 0;
  };
  std::map<std::string, Range> cr;
  nlohmann::json per_image = nlohmann::json::array();
  for (const ImageStats &s : res.stats) {
    nlohmann::json e = {{"image", s.image}, {"category", s.category}};
    if (s.stats) {
      const double v = s.stats->compression_ratio;
      Range &r = cr[s.category];
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
      r.sum += v;
      ++r.n;
      e["compression_ratio"] = v;
      e["nonzero"] = s.stats->nonzero;
      e["pixel_count"] = s.stats->pixel_count;
    } else {
      e["error"] = s.error.value_or("");
    }
    per_image.push_back(std::move(e));
  }
  nlohmann::json crj = nlohmann::json::object();
  for (const auto &[cat, r] : cr) {
    crj[cat] = {{"min", r.lo}, {"max", r.hi}, {"mean", r.sum / double(r.n)},
                {"images", r.n}};
  }
  j["compression_ratio"] = crj;
  j["images"] = per_image;

  std::map<std::pair<std::string, int>, std::pair<std::size_t, std::size_t>> tol;
  for (const SweepRow &r : res.rows) {
    if (r.error) continue;
    auto &[pass, total] = tol[{std::string(synth::to_string(r.method)), r.r}];
    total += 1;
    pass += r.within_tolerance ? 1 : 0;
  }
  nlohmann::json tj = nlohmann::json::object();
  for (const auto &[key, v] : tol) {
    tj[key.first][std::to_string(key.second)] = {
        {"fraction_within_tolerance", double(v.first) / double(v.second)},
        {"images", v.second}};
  }
  j["within_tolerance"] = tj;
  return j;
}

std::string histogram_csv(const std::vector<ImageStats> &stats) {
  std::array<double, 64> counts{};
  double blocks = 0;
  for (const ImageStats &s : stats) {
    if (!s.stats) continue;
    blocks += double(s.stats->block_count);
    for (std::size_t k = 0; k < 64; ++k) {
      counts[k] += s.stats->histogram[k] * double(s.stats->block_count);
    }
  }
  std::ostringstream os;
  os << "position,fraction\n";
  for (std::size_t k = 0; k < 64; ++k) {
    os << k << ',' << fmt(blocks > 0 ? counts[k] / blocks : 0.0) << '\n';
  }
  return os.str();
}

ReportFiles emit_report(const SweepResult &res, const fs::path &out_dir) {
  if (res.rows.empty()) throw std::invalid_argument("no rows to report");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw std::runtime_error("cannot create output directory " + out_dir.string());
  }
  ReportFiles files{out_dir / "sweep.csv", out_dir / "summary.json",
                    out_dir / "histogram.csv"};
  write_file(files.csv, to_csv(res.rows));
  write_file(files.summary, summary_json(res).dump(2) + "\n");
  write_file(files.histogram, histogram_csv(res.stats));
  return files;
}

}  // namespace jqpie::bench
