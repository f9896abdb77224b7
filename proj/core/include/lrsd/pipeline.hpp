#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrsd/detection.hpp"
#include "lrsd/measurement_file.hpp"
#include "lrsd/run_config.hpp"
#include "lrsd/scene.hpp"
#include "lrsd/solver.hpp"

namespace lrsd {

/// Converts decoded frames to the working volume for `mode`: grayscale mode
/// takes the luma of colour input, colour mode requires RGB frames.
VideoVolume ingest_frames(const std::vector<PixelFrame>& frames, ColorMode mode);

/// Builds the operator from (N, floor(rate N), seed) and measures `volume`.
MeasurementFile measure_volume(const VideoVolume& volume, double rate,
                               std::uint64_t seed);

/// Rebuilds the sensing operator recorded in a measurement file.
SensingOperator operator_for(const MeasurementFile& file);

/// Rejects a file whose recorded geometry or frame count differs from the
/// caller's expectation.
void check_expected_geometry(const MeasurementFile& file,
                             const FrameGeometry& expected,
                             std::optional<std::size_t> expected_frames = {});

/// Dispatches to reconstruct / reconstruct_color on the recorded channels.
Decomposition reconstruct_measurements(const MeasurementFile& file,
                                       const SolverConfig& config);

/// Stable `key=value` lines describing a finished reconstruction.
std::string diagnostics_report(const MeasurementFile& file,
                               const Decomposition& result,
                               const SolverConfig& config);

/// Writes background/, foreground/ (|X2|, or its per-channel magnitude),
/// reconstruction/ (X1 + X2) frame directories and report.txt under `dir`.
void write_reconstruction(const std::filesystem::path& dir,
                          const MeasurementFile& file,
                          const Decomposition& result,
                          const SolverConfig& config);

struct SilhouetteResult {
  std::vector<SilhouetteMask> masks;
  double delta = 0.0;
};

/// Silhouettes of every frame of a foreground volume. Without an explicit
/// delta the threshold comes from estimate_delta(); an all-zero foreground
/// yields empty masks.
SilhouetteResult extract_silhouettes(const VideoVolume& foreground,
                                     const DetectionConfig& detection);

struct ScoreRow {
  std::string name;
  double psnr_db = 0.0;
  double iou = 0.0;
};

/// Pairs frames of two directories in filename order and scores each pair
/// by PSNR (peak 255) and by IoU of their nonzero-pixel masks. The last row
/// holds the means.
std::vector<ScoreRow> score_directories(const std::filesystem::path& a,
                                        const std::filesystem::path& b);
std::string format_score_table(const std::vector<ScoreRow>& rows);

/// Writes frames/, truth_masks/ and truth_background/ for a synthetic scene.
void write_scene(const std::filesystem::path& dir, const Scene& scene);

}  // namespace lrsd
