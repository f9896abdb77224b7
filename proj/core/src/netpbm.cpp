#include "lrsd/netpbm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lrsd/error.hpp"

namespace lrsd {
namespace {

[[noreturn]] void format_error(const std::string& source,
                               const std::string& what) {
  fail(ErrorCode::format, source + ": " + what);
}

class HeaderReader {
 public:
  HeaderReader(std::string_view bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) format_error(source_, "truncated header");
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      format_error(source_, "malformed header field");
    }
    std::size_t v = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (v > (std::size_t{1} << 32)) format_error(source_, "header value too large");
      ++pos_;
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void end_header() {
    if (pos_ >= bytes_.size() ||
        !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      format_error(source_, "truncated header");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io, "cannot rename into " + path.string());
}

std::string indexed_name(const std::string& stem, std::size_t index,
                         std::size_t count, const char* ext) {
  std::size_t digits = 5;
  for (std::size_t c = count; c >= 100000; c /= 10) ++digits;
  std::string num = std::to_string(index);
  if (num.size() < digits) num.insert(0, digits - num.size(), '0');
  return stem + "_" + num + ext;
}

}  // namespace

std::uint8_t quantize_sample(double value, double peak) {
  if (!(value > 0.0)) return 0;  // also maps NaN to 0
  if (value >= peak) return 255;
  return static_cast<std::uint8_t>(std::lround(value * 255.0 / peak));
}

PixelFrame decode_pnm(std::string_view bytes, const std::string& source) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    format_error(source, "unsupported magic (expected binary P5 or P6)");
  }
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader header(bytes, source);
  header.advance(2);
  const std::size_t width = header.read_uint();
  const std::size_t height = header.read_uint();
  const std::size_t maxval = header.read_uint();
  if (width == 0 || height == 0) format_error(source, "zero image dimension");
  if (maxval != 255) {
    format_error(source, "unsupported maxval " + std::to_string(maxval) +
                             " (only 255 is accepted)");
  }
  header.end_header();

  const FrameGeometry g{width, height, channels};
  const std::size_t n = g.pixels();
  if (bytes.size() - header.pos() < n * channels) {
    format_error(source, "truncated pixel payload");
  }
  const auto* raster =
      reinterpret_cast<const unsigned char*>(bytes.data() + header.pos());
  std::vector<double> samples(n * channels);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      samples[c * n + i] = raster[i * channels + c];
    }
  }
  return {g, std::move(samples), 255.0};
}

std::string encode_pnm(const PixelFrame& frame) {
  const FrameGeometry& g = frame.geometry;
  g.validate();
  const std::size_t n = g.pixels();
  std::ostringstream head;
  head << (g.channels == 1 ? "P5" : "P6") << '\n'
       << g.width << ' ' << g.height << '\n'
       << 255 << '\n';
  std::string out = head.str();
  const std::size_t start = out.size();
  out.resize(start + n * g.channels);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < g.channels; ++c) {
      out[start + i * g.channels + c] =
          static_cast<char>(quantize_sample(frame.samples[c * n + i], frame.peak));
    }
  }
  return out;
}

PixelFrame read_pnm(const std::filesystem::path& path) {
  return decode_pnm(read_file(path), path.string());
}

void write_pnm(const std::filesystem::path& path, const PixelFrame& frame) {
  write_file_atomic(path, encode_pnm(frame));
}

std::vector<std::filesystem::path> list_frame_files(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorCode::io, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

std::vector<PixelFrame> read_frames(const std::filesystem::path& dir) {
  auto files = list_frame_files(dir);
  require(!files.empty(), ErrorCode::empty_input,
          "no .pgm or .ppm frames found in the input directory");
  return read_frames(files);
}

std::vector<PixelFrame> read_frames(
    const std::vector<std::filesystem::path>& files) {
  std::vector<PixelFrame> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(read_pnm(f));
  return frames;
}

std::vector<std::filesystem::path> write_frames(
    const std::vector<PixelFrame>& frames, const std::filesystem::path& dir,
    const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create directory " + dir.string());
  std::vector<std::filesystem::path> paths;
  paths.reserve(frames.size());
  for (std::size_t j = 0; j < frames.size(); ++j) {
    const char* ext = frames[j].geometry.channels == 1 ? ".pgm" : ".ppm";
    paths.push_back(dir / indexed_name(stem, j, frames.size(), ext));
    write_pnm(paths.back(), frames[j]);
  }
  return paths;
}

void write_mask(const std::filesystem::path& path, const SilhouetteMask& mask) {
  std::vector<double> s(mask.bits.size());
  std::transform(mask.bits.begin(), mask.bits.end(), s.begin(),
                 [](std::uint8_t b) { return b ? 255.0 : 0.0; });
  write_pnm(path, PixelFrame(mask.geometry, std::move(s)));
}

SilhouetteMask read_mask(const std::filesystem::path& path) {
  const PixelFrame f = read_pnm(path);
  if (f.geometry.channels != 1) {
    fail(ErrorCode::format, path.string() + ": masks must be grayscale P5");
  }
  SilhouetteMask m{f.geometry, std::vector<std::uint8_t>(f.samples.size())};
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    m.bits[i] = f.samples[i] != 0.0 ? 1 : 0;
  }
  return m;
}

std::vector<std::filesystem::path> write_masks(
    const std::vector<SilhouetteMask>& masks, const std::filesystem::path& dir,
    const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create directory " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (std::size_t j = 0; j < masks.size(); ++j) {
    paths.push_back(dir / indexed_name(stem, j, masks.size(), ".pgm"));
    write_mask(paths.back(), masks[j]);
  }
  return paths;
}

}  // namespace lrsd
