#include "fringe/field_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "fringe/errors.hpp"

namespace fringe {
namespace {

constexpr std::int64_t kMaxDim = 1'000'000;
constexpr std::int64_t kMaxPixels = 100'000'000;

[[noreturn]] void fail(const std::string& path, std::size_t offset, const std::string& what) {
  throw data_error(path + ": " + what + " (byte offset " + std::to_string(offset) + ")");
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error(path.string() + ": cannot open for reading");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw data_error(path.string() + ": read failure");
  return buf;
}

void write_all(const std::filesystem::path& path, const std::string& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error(path.string() + ": cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw data_error(path.string() + ": write failure");
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void skip_ws(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size() && is_ws(buf[pos])) ++pos;
}

std::int64_t parse_dim(const std::string& buf, std::size_t& pos, const std::string& path) {
  skip_ws(buf, pos);
  const std::size_t start = pos;
  std::int64_t value = 0;
  while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
    value = value * 10 + (buf[pos] - '0');
    if (value > kMaxDim) fail(path, start, "dimension exceeds limit " + std::to_string(kMaxDim));
    ++pos;
  }
  if (pos == start) fail(path, start, "expected a decimal dimension");
  if (value < 1) fail(path, start, "dimension must be at least 1");
  return value;
}

double parse_real(const std::string& buf, std::size_t& pos, const std::string& path) {
  skip_ws(buf, pos);
  const char* begin = buf.c_str() + pos;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) fail(path, pos, "expected a real number");
  pos += static_cast<std::size_t>(end - begin);
  return v;
}

// ---- PFM ----

ScalarField load_pfm(const std::filesystem::path& path) {
  const std::string buf = read_all(path);
  const std::string name = path.string();
  if (buf.size() < 2) fail(name, 0, "not a PFM file (short header)");
  if (buf[0] != 'P') fail(name, 0, "not a PFM file (bad magic)");
  if (buf[1] == 'F') fail(name, 1, "3-channel PFM (PF) not supported, expected grayscale Pf");
  if (buf[1] != 'f') fail(name, 1, "not a PFM file (bad magic)");

  std::size_t pos = 2;
  const std::int64_t width = parse_dim(buf, pos, name);
  const std::int64_t height = parse_dim(buf, pos, name);
  if (width * height > kMaxPixels) fail(name, 2, "pixel count exceeds limit");
  const std::size_t scale_pos = pos;
  const double scale = parse_real(buf, pos, name);
  if (scale == 0.0 || !std::isfinite(scale)) fail(name, scale_pos, "scale must be finite nonzero");
  if (pos >= buf.size() || !is_ws(buf[pos])) fail(name, pos, "expected whitespace after scale");
  ++pos;  // exactly one separator byte before the payload

  const bool little_endian = scale < 0.0;
  const double magnitude = std::fabs(scale);
  const std::size_t payload = pos;
  const std::size_t need = static_cast<std::size_t>(width) * height * 4;
  if (buf.size() - payload < need) {
    fail(name, buf.size(), "truncated payload, expected " + std::to_string(need) + " bytes");
  }

  std::vector<double> samples(static_cast<std::size_t>(width) * height);
  for (std::int64_t file_row = 0; file_row < height; ++file_row) {
    const std::int64_t image_row = height - 1 - file_row;  // PFM stores bottom-to-top
    for (std::int64_t col = 0; col < width; ++col) {
      const std::size_t at = payload + (static_cast<std::size_t>(file_row) * width + col) * 4;
      std::uint32_t bits;
      std::memcpy(&bits, buf.data() + at, 4);
      if (!little_endian) bits = __builtin_bswap32(bits);
      float fv;
      std::memcpy(&fv, &bits, 4);
      const double v = static_cast<double>(fv) * magnitude;
      if (!std::isfinite(v)) fail(name, at, "non-finite sample");
      samples[static_cast<std::size_t>(image_row) * width + col] = v;
    }
  }
  return ScalarField::from_samples(static_cast<int>(width), static_cast<int>(height),
                                   std::move(samples));
}

void save_pfm(const ScalarField& f, const std::filesystem::path& path) {
  f.ensure_finite();
  std::string buf = "Pf\n" + std::to_string(f.width()) + " " + std::to_string(f.height()) +
                    "\n-1.0\n";
  buf.reserve(buf.size() + f.size() * 4);
  for (int file_row = 0; file_row < f.height(); ++file_row) {
    const int image_row = f.height() - 1 - file_row;
    for (int col = 0; col < f.width(); ++col) {
      const double v = f.at(image_row, col);
      const float fv = static_cast<float>(v);
      if (!std::isfinite(fv)) {
        throw data_error(path.string() + ": sample " + std::to_string(v) +
                         " overflows the float32 payload");
      }
      char bytes[4];
      std::memcpy(bytes, &fv, 4);
      buf.append(bytes, 4);
    }
  }
  write_all(path, buf);
}

// ---- CSV ----

ScalarField load_csv(const std::filesystem::path& path) {
  const std::string buf = read_all(path);
  const std::string name = path.string();
  std::vector<double> samples;
  std::int64_t width = -1;
  std::int64_t height = 0;
  std::size_t pos = 0;
  while (pos < buf.size()) {
    if (buf[pos] == '\n') {  // tolerate blank trailing lines
      ++pos;
      continue;
    }
    std::int64_t cols = 0;
    while (true) {
      const std::size_t cell = pos;
      const char* begin = buf.c_str() + pos;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail(name, cell, "expected a numeric cell");
      if (!std::isfinite(v)) fail(name, cell, "non-finite sample");
      pos += static_cast<std::size_t>(end - begin);
      samples.push_back(v);
      ++cols;
      if (pos < buf.size() && buf[pos] == '\r') ++pos;
      if (pos >= buf.size() || buf[pos] == '\n') {
        if (pos < buf.size()) ++pos;
        break;
      }
      if (buf[pos] != ',') fail(name, pos, "expected ',' or end of line");
      ++pos;
    }
    if (width < 0) {
      width = cols;
    } else if (cols != width) {
      fail(name, pos, "ragged row: expected " + std::to_string(width) + " cells, got " +
                          std::to_string(cols));
    }
    ++height;
    if (width * height > kMaxPixels) fail(name, pos, "pixel count exceeds limit");
  }
  if (width < 1 || height < 1) fail(name, 0, "empty CSV");
  return ScalarField::from_samples(static_cast<int>(width), static_cast<int>(height),
                                   std::move(samples));
}

void save_csv(const ScalarField& f, const std::filesystem::path& path) {
  f.ensure_finite();
  std::string buf;
  buf.reserve(f.size() * 20);
  char cell[40];
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      std::snprintf(cell, sizeof cell, "%.17g", f.at(r, c));
      if (c) buf.push_back(',');
      buf += cell;
    }
    buf.push_back('\n');
  }
  write_all(path, buf);
}

// ---- PNG ----

struct PngMessage {
  std::string text;
};

extern "C" void png_error_handler(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngMessage*>(png_get_error_ptr(png));
  if (sink) sink->text = msg ? msg : "unknown libpng error";
  png_longjmp(png, 1);
}

extern "C" void png_warning_handler(png_structp, png_const_charp) {}

ScalarField load_png(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::FILE* fp = std::fopen(name.c_str(), "rb");
  if (!fp) throw data_error(name + ": cannot open for reading");

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    std::fclose(fp);
    fail(name, 0, "not a PNG file (bad signature)");
  }

  PngMessage err;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw data_error(name + ": libpng initialization failed");
  }

  // Buffers live across setjmp; longjmp lands back here without unwinding, so
  // everything is still valid and cleaned up on the error path.
  std::vector<png_bytep> rows;
  std::vector<unsigned char> pixels;
  int width = 0;
  int height = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw data_error(name + ": " + (err.text.empty() ? "libpng decode error" : err.text));
  }

  png_init_io(png, fp);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (w > kMaxDim || h > kMaxDim || static_cast<std::int64_t>(w) * h > kMaxPixels) {
    png_error(png, "image dimensions exceed limit");
  }

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  if (png_get_channels(png, info) != 1 || png_get_bit_depth(png, info) != 8) {
    png_error(png, "cannot reduce image to 8-bit grayscale");
  }

  width = static_cast<int>(w);
  height = static_cast<int>(h);
  pixels.resize(static_cast<std::size_t>(width) * height);
  rows.resize(height);
  for (int r = 0; r < height; ++r) rows[r] = pixels.data() + static_cast<std::size_t>(r) * width;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  std::vector<double> samples(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) samples[i] = pixels[i] / 255.0;
  return ScalarField::from_samples(width, height, std::move(samples));
}

void save_png(const ScalarField& f, const std::filesystem::path& path) {
  f.ensure_finite();
  const std::string name = path.string();

  std::vector<unsigned char> pixels(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = f.data()[i];
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    pixels[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  std::vector<png_bytep> rows(f.height());
  for (int r = 0; r < f.height(); ++r) {
    rows[r] = pixels.data() + static_cast<std::size_t>(r) * f.width();
  }

  std::FILE* fp = std::fopen(name.c_str(), "wb");
  if (!fp) throw data_error(name + ": cannot open for writing");

  PngMessage err;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw data_error(name + ": libpng initialization failed");
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw data_error(name + ": " + (err.text.empty() ? "libpng encode error" : err.text));
  }

  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(f.width()),
               static_cast<png_uint_32>(f.height()), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw data_error(name + ": write failure");
}

}  // namespace

FieldFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".pfm") return FieldFormat::Pfm;
  if (ext == ".png") return FieldFormat::Png;
  if (ext == ".csv") return FieldFormat::Csv;
  throw data_error(path.string() + ": unknown field format extension '" + ext + "'");
}

ScalarField load_field(const std::filesystem::path& path, FieldFormat format) {
  switch (format) {
    case FieldFormat::Pfm: return load_pfm(path);
    case FieldFormat::Png: return load_png(path);
    case FieldFormat::Csv: return load_csv(path);
  }
  throw data_error("load_field: invalid format");
}

ScalarField load_field(const std::filesystem::path& path) {
  return load_field(path, format_from_extension(path));
}

void save_field(const ScalarField& f, const std::filesystem::path& path, FieldFormat format) {
  switch (format) {
    case FieldFormat::Pfm: save_pfm(f, path); return;
    case FieldFormat::Png: save_png(f, path); return;
    case FieldFormat::Csv: save_csv(f, path); return;
  }
  throw data_error("save_field: invalid format");
}

void save_field(const ScalarField& f, const std::filesystem::path& path) {
  save_field(f, path, format_from_extension(path));
}

}  // namespace fringe
