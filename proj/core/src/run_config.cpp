#include "lrsd/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <limits>

#include "lrsd/error.hpp"

namespace lrsd {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  fail(ErrorCode::configuration, "invalid value '" + std::string(value) +
                                     "' for key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
  // std::from_chars for double is unavailable on some toolchains; strtod on a
  // terminated copy is portable.
  const std::string copy(value);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) bad_value(key, value);
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int v{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value);
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  bad_value(key, value);
}

}  // namespace

std::string_view to_string(ColorMode mode) noexcept {
  return mode == ColorMode::grayscale ? "grayscale" : "color";
}

void RunConfig::validate() const {
  require(measurement_rate > 0.0 && measurement_rate < 1.0,
          ErrorCode::configuration, "measurement rate must lie in (0, 1)");
  require(detection.window >= 1 && detection.window % 2 == 1,
          ErrorCode::configuration, "median window must be odd and >= 1");
  require(!detection.delta || *detection.delta > 0.0, ErrorCode::configuration,
          "delta must be positive");
  solver.validate();
}

void set_config_value(RunConfig& c, std::string_view key,
                      std::string_view value) {
  SolverConfig& s = c.solver;
  if (key == "mode") {
    if (value == "grayscale" || value == "gray") {
      c.mode = ColorMode::grayscale;
    } else if (value == "color" || value == "colour") {
      c.mode = ColorMode::color;
    } else {
      bad_value(key, value);
    }
  } else if (key == "rate") {
    c.measurement_rate = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "mu1") {
    s.mu1 = parse_double(key, value);
  } else if (key == "mu2") {
    s.mu2 = parse_double(key, value);
  } else if (key == "mu3") {
    s.mu3 = parse_double(key, value);
  } else if (key == "beta") {
    const double b = parse_double(key, value);
    s.beta = {b, b, b, b};
  } else if (key.size() == 5 && key.substr(0, 4) == "beta" && key[4] >= '1' &&
             key[4] <= '4') {
    s.beta[static_cast<std::size_t>(key[4] - '1')] = parse_double(key, value);
  } else if (key == "scale_beta") {
    s.scale_beta_by_measurements = parse_bool(key, value);
  } else if (key == "gamma") {
    s.gamma = parse_double(key, value);
  } else if (key == "max_iter") {
    s.max_iter = parse_int<int>(key, value);
  } else if (key == "tol_feas") {
    s.tol_feas = parse_double(key, value);
  } else if (key == "tol_change") {
    s.tol_rel_change = parse_double(key, value);
  } else if (key == "x_update") {
    if (value == "exact") {
      s.x_update = XUpdate::exact;
    } else if (value == "steepest_descent") {
      s.x_update = XUpdate::steepest_descent;
    } else {
      bad_value(key, value);
    }
  } else if (key == "split_x1_sparsity") {
    s.split_x1_sparsity = parse_bool(key, value);
  } else if (key == "delta") {
    c.detection.delta = parse_double(key, value);
  } else if (key == "window") {
    c.detection.window = parse_int<int>(key, value);
  } else {
    fail(ErrorCode::configuration, "unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunConfig& config, std::string_view text,
                       const std::string& source) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::configuration,
           source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  apply_config_text(config, text, path.string());
}

std::size_t measurement_count(std::size_t signal_len, double rate) {
  const double product = rate * static_cast<double>(signal_len);
  const double guarded =
      product * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  return static_cast<std::size_t>(std::floor(guarded));
}

}  // namespace lrsd
