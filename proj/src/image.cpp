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

#include "jqpie/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

#ifdef JQPIE_HAVE_PNG
#include <png.h>
#endif

namespace jqpie::imagio {

GrayscaleImage::GrayscaleImage(
    std::size_t height, std::size_t width, int bit_depth)
    : GrayscaleImage(
          height, width, std::vector<double>(height * width, 0.0),
          bit_depth) {}

GrayscaleImage::GrayscaleImage(
    std::size_t height, std::size_t width, std::vector<double> pixels,
    int bit_depth)
    : height_(height),
      width_(width),
      bit_depth_(bit_depth),
      original_{height, width},
      pixels_(std::move(pixels)) {
  if (pixels_.size() != height * width) {
    throw std::invalid_argument("pixel count does not match dimensions");
  }
  if (bit_depth < 1 || bit_depth > 16) {
    throw std::invalid_argument("bit depth must be in [1, 16]");
  }
}

GrayscaleImage GrayscaleImage::from_rows(
    const std::vector<std::vector<double>> &rows, int bit_depth) {
  const std::size_t h = rows.size();
  const std::size_t w = h == 0 ? 0 : rows.front().size();
  std::vector<double> px;
  px.reserve(h * w);
  for (const auto &row : rows) {
    if (row.size() != w) throw std::invalid_argument("ragged rows");
    px.insert(px.end(), row.begin(), row.end());
  }
  return GrayscaleImage(h, w, std::move(px), bit_depth);
}

void GrayscaleImage::set_original_dims(Dims d) {
  if (d.height > height_ || d.width > width_) {
    throw std::invalid_argument("original dims exceed image dims");
  }
  original_ = d;
}

bool GrayscaleImage::in_range() const {
  const double l = max_value();
  return std::all_of(pixels_.begin(), pixels_.end(), [l](double v) {
    return v >= 0.0 && v <= l;
  });
}

GrayscaleImage GrayscaleImage::clamped() const {
  GrayscaleImage out = *this;
  const double l = max_value();
  for (double &v : out.pixels_) v = std::clamp(v, 0.0, l);
  return out;
}

GrayscaleImage GrayscaleImage::cropped(Dims d) const {
  if (d.height > height_ || d.width > width_) {
    throw std::invalid_argument("crop exceeds image dims");
  }
  GrayscaleImage out(d.height, d.width, bit_depth_);
  for (std::size_t r = 0; r < d.height; ++r) {
    std::copy_n(
        pixels_.begin() + std::ptrdiff_t(r * width_), d.width,
        out.pixels_.begin() + std::ptrdiff_t(r * d.width));
  }
  return out;
}

GrayscaleImage GrayscaleImage::padded(Dims d) const {
  if (d.height < height_ || d.width < width_) {
    throw std::invalid_argument("padding target smaller than image");
  }
  GrayscaleImage out(d.height, d.width, bit_depth_);
  for (std::size_t r = 0; r < height_; ++r) {
    std::copy_n(
        pixels_.begin() + std::ptrdiff_t(r * width_), width_,
        out.pixels_.begin() + std::ptrdiff_t(r * d.width));
  }
  out.original_ = original_;
  return out;
}

namespace {

// Reads whitespace/comment separated header tokens of the netpbm family.
class NetpbmHeader {
 public:
  explicit NetpbmHeader(const std::string &data) : data_(data) {}

  std::size_t next_uint() {
    skip();
    std::size_t start = pos_;
    while (pos_ < data_.size() &&
           std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) throw ImageError("corrupt header");
    return std::stoul(data_.substr(start, pos_ - start));
  }

  std::size_t position() const { return pos_; }

  // Binary payload begins after exactly one whitespace byte.
  std::size_t payload_offset() {
    if (pos_ >= data_.size()) throw ImageError("corrupt payload");
    return pos_ + 1;
  }

 private:
  void skip() {
    while (pos_ < data_.size()) {
      char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string &data_;
  std::size_t pos_ = 2;
};

double bt601(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

GrayscaleImage decode_netpbm(const std::string &data) {
  if (data.size() < 2 || data[0] != 'P') throw ImageError("unsupported format");
  const char kind = data[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw ImageError("unsupported format");
  }
  NetpbmHeader hdr(data);
  const std::size_t w = hdr.next_uint();
  const std::size_t h = hdr.next_uint();
  const std::size_t maxval = hdr.next_uint();
  if (w == 0 || h == 0) throw ImageError("empty image");
  if (maxval == 0 || maxval > 65535) throw ImageError("corrupt header");
  const bool color = kind == '3' || kind == '6';
  const std::size_t channels = color ? 3 : 1;
  const std::size_t samples = w * h * channels;
  std::vector<double> raw(samples);

  if (kind == '2' || kind == '3') {
    std::istringstream in(data);
    const std::size_t off = hdr.position();
    in.seekg(std::streamoff(off));
    for (std::size_t i = 0; i < samples; ++i) {
      long v;
      if (!(in >> v)) throw ImageError("corrupt payload");
      if (v < 0 || std::size_t(v) > maxval) throw ImageError("corrupt payload");
      raw[i] = double(v);
    }
  } else {
    const std::size_t off = hdr.payload_offset();
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (data.size() < off + samples * bytes_per) {
      throw ImageError("corrupt payload");
    }
    const auto *p = reinterpret_cast<const unsigned char *>(data.data() + off);
    for (std::size_t i = 0; i < samples; ++i) {
      raw[i] = bytes_per == 1 ? double(p[i])
                              : double((p[2 * i] << 8) | p[2 * i + 1]);
    }
  }

  const double rescale = 255.0 / double(maxval);
  std::vector<double> px(w * h);
  for (std::size_t i = 0; i < w * h; ++i) {
    double v = color ? bt601(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2])
                     : raw[i];
    px[i] = maxval == 255 ? v : v * rescale;
  }
  return GrayscaleImage(h, w, std::move(px));
}

#ifdef JQPIE_HAVE_PNG
GrayscaleImage decode_png(const std::filesystem::path &path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw ImageError("corrupt header");
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw ImageError("corrupt payload");
  }
  const std::size_t w = image.width, h = image.height;
  std::vector<double> px(w * h);
  for (std::size_t i = 0; i < w * h; ++i) {
    px[i] = bt601(buf[3 * i], buf[3 * i + 1], buf[3 * i + 2]);
  }
  return GrayscaleImage(h, w, std::move(px));
}
#endif

std::string lower_ext(const std::filesystem::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
    return char(std::tolower(c));
  });
  return ext;
}

}  // namespace

bool is_supported_image(const std::filesystem::path &path) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return true;
#ifdef JQPIE_HAVE_PNG
  if (ext == ".png") return true;
#endif
  return false;
}

GrayscaleImage load_image(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("unreadable file: " + path.string());
  std::string data(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() >= 8 && static_cast<unsigned char>(data[0]) == 0x89 &&
      data.compare(1, 3, "PNG") == 0) {
#ifdef JQPIE_HAVE_PNG
    return decode_png(path);
#else
    throw ImageError("unsupported format: PNG support not built");
#endif
  }
  return decode_netpbm(data);
}

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

}  // namespace

void save_pgm(const GrayscaleImage &img, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageError("cannot write " + path.string());
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<char> payload(img.pixels().size());
  std::transform(
      img.pixels().begin(), img.pixels().end(), payload.begin(),
      [](double v) { return char(to_byte(v)); });
  out.write(payload.data(), std::streamsize(payload.size()));
  if (!out) throw ImageError("cannot write " + path.string());
}

void save_pgm_ascii(
    const GrayscaleImage &img, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw ImageError("cannot write " + path.string());
  out << "P2\n" << img.width() << " " << img.height() << "\n255\n";
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      out << int(to_byte(img(r, c))) << (c + 1 == img.width() ? '\n' : ' ');
    }
  }
}

BlockGrid pad_and_partition(const GrayscaleImage &img) {
  if (img.empty()) throw std::invalid_argument("empty image");
  BlockGrid grid;
  grid.blocks_x = (img.height() + 7) / 8;
  grid.blocks_y = (img.width() + 7) / 8;
  grid.original_dims = img.dims();
  grid.bit_depth = img.bit_depth();
  grid.blocks.assign(grid.blocks_x * grid.blocks_y, Block{});
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      grid.blocks[(r / 8) * grid.blocks_y + c / 8][(r % 8) * 8 + c % 8] =
          img(r, c);
    }
  }
  return grid;
}

GrayscaleImage assemble_image(
    const BlockGrid &grid, Dims original_dims, Clamp clamp) {
  if (grid.blocks.size() != grid.blocks_x * grid.blocks_y) {
    throw std::invalid_argument("incomplete block grid");
  }
  if ((original_dims.height + 7) / 8 != grid.blocks_x ||
      (original_dims.width + 7) / 8 != grid.blocks_y) {
    throw std::invalid_argument("grid does not match original dims");
  }
  GrayscaleImage out(original_dims.height, original_dims.width, grid.bit_depth);
  for (std::size_t r = 0; r < original_dims.height; ++r) {
    for (std::size_t c = 0; c < original_dims.width; ++c) {
      out(r, c) = grid.blocks[(r / 8) * grid.blocks_y + c / 8][(r % 8) * 8 +
                                                               c % 8];
    }
  }
  return clamp == Clamp::yes ? out.clamped() : out;
}

std::size_t next_power_of_two(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

GrayscaleImage pad_to_power_of_two(
    const GrayscaleImage &img, std::size_t min_side) {
  const Dims target{
      std::max(next_power_of_two(img.height()), min_side),
      std::max(next_power_of_two(img.width()), min_side)};
  return img.padded(target);
}

}  // namespace jqpie::imagio
