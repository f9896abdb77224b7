#include "lrsd/measurement_file.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "lrsd/error.hpp"

namespace lrsd {
namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), 8);
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return true;
}

}  // namespace

void MeasurementFile::validate() const {
  geometry.validate();
  require(frame_count >= 1, ErrorCode::format,
          "measurement file records zero frames");
  require(signal_len == geometry.samples() * frame_count, ErrorCode::format,
          "measurement file signal length disagrees with its geometry");
  require(measurements() >= 1 && measurements() <= signal_len,
          ErrorCode::format, "measurement count must lie in [1, N]");
}

void write_measurements(std::ostream& out, const MeasurementFile& file) {
  file.validate();
  out.write(MeasurementFile::kMagic, 8);
  put_u64(out, file.signal_len);
  put_u64(out, file.measurements());
  put_u64(out, file.seed);
  put_u64(out, file.geometry.width);
  put_u64(out, file.geometry.height);
  put_u64(out, file.geometry.channels);
  put_u64(out, file.frame_count);
  for (Eigen::Index i = 0; i < file.y.size(); ++i) {
    put_u64(out, std::bit_cast<std::uint64_t>(file.y(i)));
  }
  require(static_cast<bool>(out), ErrorCode::io,
          "failed writing measurement data");
}

MeasurementFile read_measurements(std::istream& in) {
  char magic[8];
  require(static_cast<bool>(in.read(magic, 8)), ErrorCode::format,
          "measurement file truncated in magic");
  require(std::memcmp(magic, MeasurementFile::kMagic, 8) == 0,
          ErrorCode::format, "measurement file has the wrong magic");
  std::uint64_t header[7];
  for (std::uint64_t& h : header) {
    require(get_u64(in, h), ErrorCode::format,
            "measurement file truncated in header");
  }
  MeasurementFile file;
  file.signal_len = header[0];
  const std::uint64_t m = header[1];
  file.seed = header[2];
  file.geometry = {header[3], header[4], header[5]};
  file.frame_count = header[6];
  require(m >= 1 && m <= file.signal_len, ErrorCode::format,
          "measurement count must lie in [1, N]");
  file.y.resize(static_cast<Eigen::Index>(m));
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t bits = 0;
    require(get_u64(in, bits), ErrorCode::format,
            "measurement file truncated in payload");
    file.y(static_cast<Eigen::Index>(i)) = std::bit_cast<double>(bits);
  }
  file.validate();
  return file;
}

void write_measurements(const std::filesystem::path& path,
                        const MeasurementFile& file) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    write_measurements(out, file);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io, "cannot rename into " + path.string());
}

MeasurementFile read_measurements(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  try {
    return read_measurements(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace lrsd
