#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lrsd/solver.hpp"

namespace lrsd {

enum class ColorMode { grayscale, color };

struct DetectionConfig {
  /// Threshold; unset means estimate_delta() on the foreground.
  std::optional<double> delta;
  int window = 3;
};

/// Settings shared by the CLI commands. Files use flat `key = value` lines
/// with `#` comments; command-line flags override file values.
struct RunConfig {
  ColorMode mode = ColorMode::grayscale;
  double measurement_rate = 0.2;
  std::uint64_t seed = 1;
  SolverConfig solver;
  DetectionConfig detection;

  void validate() const;
};

/// Applies one key/value pair. Unknown keys and unparsable values raise a
/// configuration error.
void set_config_value(RunConfig& config, std::string_view key,
                      std::string_view value);

/// Parses `key = value` text on top of `config`. `source` names the input in
/// error messages.
void apply_config_text(RunConfig& config, std::string_view text,
                       const std::string& source = "<config>");
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// floor(rate * N), guarding against the product landing one ulp below an
/// exact integer.
std::size_t measurement_count(std::size_t signal_len, double rate);

std::string_view to_string(ColorMode mode) noexcept;

}  // namespace lrsd
