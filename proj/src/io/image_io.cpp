#include "scloss/io/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "scloss/error.hpp"

namespace scloss::io {

namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& msg) {
  fail(ErrorKind::io, path.string() + ": " + msg);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Netpbm header tokenizer: whitespace-separated, '#' starts a comment line.
class PnmCursor {
 public:
  PnmCursor(const std::string& data, const std::filesystem::path& path) : data_(data), path_(path) {}

  unsigned long number(const char* what) {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      io_fail(path_, std::string("malformed PGM header: expected ") + what);
    }
    unsigned long v = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(data_[pos_++] - '0');
      if (v > 1u << 30) io_fail(path_, std::string("PGM ") + what + " is too large");
    }
    return v;
  }

  // After maxval exactly one whitespace byte precedes the raster.
  void single_space() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      io_fail(path_, "malformed PGM header after maxval");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

GridDims image_dims(unsigned long h, unsigned long w, const std::filesystem::path& path) {
  if (h == 0 || w == 0) io_fail(path, "image has zero size");
  return GridDims(static_cast<int>(h), static_cast<int>(w));
}

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadGuard() {
    png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWriteGuard() {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

}  // namespace

GrayImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), sizeof sig);
  if (in.gcount() >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '2')) return read_pgm(path);
  if (in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
  io_fail(path, "not a PGM (P2/P5) or PNG image");
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::string data = slurp(path);
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '2')) io_fail(path, "not a P2/P5 PGM");
  const bool ascii = data[1] == '2';
  PnmCursor cur(data, path);
  const unsigned long w = cur.number("width");
  const unsigned long h = cur.number("height");
  const unsigned long maxval = cur.number("maxval");
  if (maxval == 0 || maxval > 65535) io_fail(path, "PGM maxval must lie in 1..65535");

  GrayImage img{image_dims(h, w, path), static_cast<std::uint32_t>(maxval), {}};
  img.pixels.resize(img.dims.size());
  if (ascii) {
    for (auto& px : img.pixels) {
      const unsigned long v = cur.number("sample");
      if (v > maxval) io_fail(path, "sample exceeds maxval");
      px = static_cast<std::uint16_t>(v);
    }
    return img;
  }
  cur.single_space();
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  const std::size_t need = img.pixels.size() * bytes_per;
  if (data.size() - cur.pos() < need) io_fail(path, "truncated PGM raster");
  const auto* raster = reinterpret_cast<const unsigned char*>(data.data() + cur.pos());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const unsigned v = bytes_per == 2 ? (raster[2 * i] << 8) | raster[2 * i + 1] : raster[i];
    if (v > maxval) io_fail(path, "sample exceeds maxval");
    img.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return img;
}

namespace {

// libpng reports through stderr by default; keep the text for our own error instead.
thread_local std::string png_message;

void png_error_fn(png_structp png, png_const_charp msg) {
  png_message = msg ? msg : "unknown error";
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

}  // namespace

GrayImage read_png(const std::filesystem::path& path) {
  PngReadGuard g;
  g.fp = std::fopen(path.c_str(), "rb");
  if (!g.fp) io_fail(path, "cannot open for reading");
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
  if (!g.png) io_fail(path, "libpng initialization failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) io_fail(path, "libpng initialization failed");

  std::vector<png_bytep> rows;
  std::vector<unsigned char> raster;
  png_uint_32 w = 0, h = 0;
  int depth = 0, color = 0;
  if (setjmp(png_jmpbuf(g.png))) io_fail(path, "corrupt PNG: " + png_message);

  png_init_io(g.png, g.fp);
  png_read_info(g.png, g.info);
  png_get_IHDR(g.png, g.info, &w, &h, &depth, &color, nullptr, nullptr, nullptr);
  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_GRAY_ALPHA) {
    io_fail(path, "only grayscale PNG images are supported");
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(g.png);
  png_read_update_info(g.png, g.info);

  const std::size_t rowbytes = png_get_rowbytes(g.png, g.info);
  raster.resize(rowbytes * h);
  rows.resize(h);
  for (png_uint_32 r = 0; r < h; ++r) rows[r] = raster.data() + r * rowbytes;
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);

  const int out_depth = depth < 8 ? 8 : depth;
  GrayImage img{image_dims(h, w, path), out_depth == 16 ? 65535u : 255u, {}};
  img.pixels.resize(img.dims.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = out_depth == 16 ? static_cast<std::uint16_t>((raster[2 * i] << 8) | raster[2 * i + 1]) : raster[i];
  }
  // Low bit depths were expanded to 8 bits, which rescales to 0..255 already.
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  if (img.pixels.size() != img.dims.size()) fail(ErrorKind::invalid_argument, "image buffer does not match its size");
  if (img.maxval == 0 || img.maxval > 65535) fail(ErrorKind::invalid_argument, "maxval must lie in 1..65535");
  std::string out = "P5\n" + std::to_string(img.dims.width) + " " + std::to_string(img.dims.height) + "\n" +
                    std::to_string(img.maxval) + "\n";
  const bool wide = img.maxval > 255;
  for (const std::uint16_t v : img.pixels) {
    if (wide) out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) io_fail(path, "cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) io_fail(path, "write failed");
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  if (img.pixels.size() != img.dims.size()) fail(ErrorKind::invalid_argument, "image buffer does not match its size");
  const bool wide = img.maxval > 255;
  const std::size_t bpp = wide ? 2 : 1;
  std::vector<unsigned char> raster(img.pixels.size() * bpp);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    // PNG stores full-range samples; rescale when maxval is not 255/65535.
    const double full = wide ? 65535.0 : 255.0;
    const auto v = static_cast<unsigned>(std::lround(img.pixels[i] * full / img.maxval));
    if (wide) {
      raster[2 * i] = static_cast<unsigned char>(v >> 8);
      raster[2 * i + 1] = static_cast<unsigned char>(v & 0xff);
    } else {
      raster[i] = static_cast<unsigned char>(v);
    }
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.dims.height));
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = raster.data() + r * img.dims.width * bpp;

  PngWriteGuard g;
  g.fp = std::fopen(path.c_str(), "wb");
  if (!g.fp) io_fail(path, "cannot open for writing");
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
  if (!g.png) io_fail(path, "libpng initialization failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) io_fail(path, "libpng initialization failed");
  if (setjmp(png_jmpbuf(g.png))) io_fail(path, "PNG encoding failed: " + png_message);
  png_init_io(g.png, g.fp);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(img.dims.width), static_cast<png_uint_32>(img.dims.height),
               wide ? 16 : 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  png_write_image(g.png, rows.data());
  png_write_end(g.png, nullptr);
}

ProbabilityMap to_probability(const GrayImage& img) {
  std::vector<double> p(img.pixels.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(img.pixels[i]) / img.maxval;
  return ProbabilityMap(img.dims, std::move(p));
}

LabelMap to_labels(const GrayImage& img, std::optional<double> soft_threshold) {
  if (soft_threshold && !(*soft_threshold >= 0.0 && *soft_threshold < 1.0)) {
    fail(ErrorKind::invalid_argument, "soft ground-truth threshold must lie in [0,1)");
  }
  LabelMap out(img.dims, 0);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const std::uint32_t v = img.pixels[i];
    if (soft_threshold) {
      out[i] = static_cast<double>(v) / img.maxval > *soft_threshold ? 1 : 0;
    } else if (v == 0 || v == img.maxval) {
      out[i] = v == 0 ? 0 : 1;
    } else {
      const PixelPos pos = img.dims.pos(i);
      fail(ErrorKind::invalid_argument, "ground truth is not binary: value " + std::to_string(v) + " at (" +
                                            std::to_string(pos.row) + "," + std::to_string(pos.col) +
                                            "); pass a soft threshold to binarize");
    }
  }
  return out;
}

GrayImage from_unit_field(const FieldMap& field) {
  GrayImage img{field.dims(), 255, std::vector<std::uint16_t>(field.size())};
  for (std::size_t i = 0; i < field.size(); ++i) {
    img.pixels[i] = static_cast<std::uint16_t>(std::lround(std::clamp(field[i], 0.0, 1.0) * 255.0));
  }
  return img;
}

Normalized normalize_u8(const FieldMap& field) {
  const auto v = field.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {normalize_u8(field, *lo, *hi), *lo, *hi};
}

GrayImage normalize_u8(const FieldMap& field, double lo, double hi) {
  GrayImage img{field.dims(), 255, std::vector<std::uint16_t>(field.size(), 0)};
  if (!(hi > lo)) return img;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double t = (std::clamp(field[i], lo, hi) - lo) / (hi - lo);
    img.pixels[i] = static_cast<std::uint16_t>(std::lround(t * 255.0));
  }
  return img;
}

}  // namespace scloss::io
