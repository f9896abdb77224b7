#include "lrsd/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lrsd/error.hpp"
#include "lrsd/framelet.hpp"
#include "lrsd/netpbm.hpp"
#include "lrsd/prox.hpp"

namespace lrsd {

VideoVolume ingest_frames(const std::vector<PixelFrame>& frames,
                          ColorMode mode) {
  require(!frames.empty(), ErrorCode::empty_input, "no input frames");
  if (mode == ColorMode::grayscale) {
    std::vector<PixelFrame> luma;
    luma.reserve(frames.size());
    for (const PixelFrame& f : frames) luma.push_back(to_luminance(f));
    return volume_from_frames(luma);
  }
  for (const PixelFrame& f : frames) {
    require(f.geometry.channels == 3, ErrorCode::invalid_argument,
            "colour mode requires RGB (P6) input frames");
  }
  return volume_from_frames(frames);
}

MeasurementFile measure_volume(const VideoVolume& volume, double rate,
                               std::uint64_t seed) {
  require(rate > 0.0 && rate < 1.0, ErrorCode::invalid_argument,
          "measurement rate must lie in (0, 1)");
  const std::size_t n = volume.entry_count();
  const std::size_t m = measurement_count(n, rate);
  require(m >= 1, ErrorCode::invalid_argument,
          "measurement rate yields zero measurements");
  const SensingOperator op = SensingOperator::build(n, m, seed);
  MeasurementFile file;
  file.signal_len = n;
  file.seed = seed;
  file.geometry = volume.geometry();
  file.frame_count = volume.frame_count();
  file.y = op.measure(volume);
  return file;
}

SensingOperator operator_for(const MeasurementFile& file) {
  file.validate();
  const auto n = static_cast<std::size_t>(file.signal_len);
  const auto m = static_cast<std::size_t>(file.measurements());
  return m == n ? SensingOperator::complete(n, file.seed)
                : SensingOperator::build(n, m, file.seed);
}

void check_expected_geometry(const MeasurementFile& file,
                             const FrameGeometry& expected,
                             std::optional<std::size_t> expected_frames) {
  if (!(file.geometry == expected)) {
    fail(ErrorCode::geometry_mismatch,
         "measurement header geometry " + std::to_string(file.geometry.width) +
             "x" + std::to_string(file.geometry.height) + "x" +
             std::to_string(file.geometry.channels) + " does not match expected " +
             std::to_string(expected.width) + "x" +
             std::to_string(expected.height) + "x" +
             std::to_string(expected.channels));
  }
  if (expected_frames && file.frame_count != *expected_frames) {
    fail(ErrorCode::geometry_mismatch,
         "measurement header frame count " + std::to_string(file.frame_count) +
             " does not match expected " + std::to_string(*expected_frames));
  }
}

Decomposition reconstruct_measurements(const MeasurementFile& file,
                                       const SolverConfig& config) {
  const SensingOperator op = operator_for(file);
  const FrameletTransform w(file.geometry);
  const auto frames = static_cast<std::size_t>(file.frame_count);
  if (file.geometry.channels == 3) {
    return reconstruct_color(file.y, op, w, w, file.geometry, frames, config);
  }
  return reconstruct(file.y, op, w, w, file.geometry, frames, config);
}

std::string diagnostics_report(const MeasurementFile& file,
                               const Decomposition& result,
                               const SolverConfig& config) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "mode=" << (file.geometry.channels == 3 ? "color" : "grayscale") << '\n'
      << "width=" << file.geometry.width << '\n'
      << "height=" << file.geometry.height << '\n'
      << "channels=" << file.geometry.channels << '\n'
      << "frames=" << file.frame_count << '\n'
      << "signal_len=" << file.signal_len << '\n'
      << "measurements=" << file.measurements() << '\n'
      << "seed=" << file.seed << '\n'
      << "mu=" << config.mu1 << ',' << config.mu2 << ',' << config.mu3 << '\n'
      << "gamma=" << config.gamma << '\n'
      << "x_update="
      << (config.x_update == XUpdate::exact ? "exact" : "steepest_descent")
      << '\n'
      << "iterations=" << result.iterations << '\n'
      << "converged=" << (result.converged ? 1 : 0) << '\n'
      << "final_feasibility="
      << (result.feas_history.empty() ? 0.0 : result.feas_history.back()) << '\n'
      << "final_rel_change="
      << (result.change_history.empty() ? 0.0 : result.change_history.back())
      << '\n'
      << "final_objective="
      << (result.objective_history.empty() ? 0.0
                                           : result.objective_history.back())
      << '\n'
      << "numerical_rank_x1=" << result.numerical_rank_x1 << '\n'
      << "x1_singular_values=";
  const Eigen::Index shown =
      std::min<Eigen::Index>(result.x1_singular_values.size(), 5);
  for (Eigen::Index i = 0; i < shown; ++i) {
    out << (i ? "," : "") << result.x1_singular_values(i);
  }
  out << '\n';
  return out.str();
}

void write_reconstruction(const std::filesystem::path& dir,
                          const MeasurementFile& file,
                          const Decomposition& result,
                          const SolverConfig& config) {
  const FrameGeometry& g = file.geometry;
  write_frames(volume_to_frames(result.background), dir / "background",
               "background");
  write_frames(volume_to_frames(VideoVolume(g, result.foreground.data().cwiseAbs())),
               dir / "foreground", "foreground");
  write_frames(volume_to_frames(VideoVolume(g, result.combined())),
               dir / "reconstruction", "frame");

  const std::string report = diagnostics_report(file, result, config);
  const std::filesystem::path tmp = dir / "report.txt.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
    out << report;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dir / "report.txt", ec);
  if (ec) fail(ErrorCode::io, "cannot rename report into place");
}

SilhouetteResult extract_silhouettes(const VideoVolume& foreground,
                                     const DetectionConfig& detection) {
  SilhouetteResult r;
  r.delta = detection.delta ? *detection.delta : estimate_delta(foreground);
  const FrameGeometry g = foreground.geometry().single_channel();
  if (!(r.delta > 0.0)) {
    r.masks.assign(foreground.frame_count(),
                   SilhouetteMask{g, std::vector<std::uint8_t>(g.pixels(), 0)});
    return r;
  }
  r.masks.reserve(foreground.frame_count());
  for (std::size_t j = 0; j < foreground.frame_count(); ++j) {
    r.masks.push_back(silhouette(foreground, j, r.delta, detection.window));
  }
  return r;
}

std::vector<ScoreRow> score_directories(const std::filesystem::path& a,
                                        const std::filesystem::path& b) {
  const auto files_a = list_frame_files(a);
  const auto files_b = list_frame_files(b);
  if (files_a.empty()) {
    fail(ErrorCode::empty_input, "score: no frames in " + a.string());
  }
  require(files_a.size() == files_b.size(), ErrorCode::shape_mismatch,
          "score: directories hold different frame counts");
  std::vector<ScoreRow> rows;
  double psnr_sum = 0.0, iou_sum = 0.0;
  for (std::size_t i = 0; i < files_a.size(); ++i) {
    const PixelFrame fa = read_pnm(files_a[i]);
    const PixelFrame fb = read_pnm(files_b[i]);
    if (!(fa.geometry == fb.geometry)) {
      fail(ErrorCode::geometry_mismatch, "score: " + files_a[i].string() +
                                             " and " + files_b[i].string() +
                                             " differ in geometry");
    }
    const Eigen::Map<const Vector> va(fa.samples.data(),
                                      static_cast<Eigen::Index>(fa.samples.size()));
    const Eigen::Map<const Vector> vb(fb.samples.data(),
                                      static_cast<Eigen::Index>(fb.samples.size()));
    const FrameGeometry g = fa.geometry.single_channel();
    SilhouetteMask ma{g, std::vector<std::uint8_t>(g.pixels(), 0)};
    SilhouetteMask mb = ma;
    for (std::size_t p = 0; p < g.pixels(); ++p) {
      for (std::size_t c = 0; c < fa.geometry.channels; ++c) {
        if (fa.samples[c * g.pixels() + p] != 0.0) ma.bits[p] = 1;
        if (fb.samples[c * g.pixels() + p] != 0.0) mb.bits[p] = 1;
      }
    }
    ScoreRow row{files_a[i].filename().string(), psnr(va, vb), mask_iou(ma, mb)};
    psnr_sum += row.psnr_db;
    iou_sum += row.iou;
    rows.push_back(row);
  }
  const double count = static_cast<double>(rows.size());
  rows.push_back({"mean", psnr_sum / count, iou_sum / count});
  return rows;
}

std::string format_score_table(const std::vector<ScoreRow>& rows) {
  std::ostringstream out;
  out << "frame\tpsnr_db\tiou\n" << std::fixed << std::setprecision(4);
  for (const ScoreRow& r : rows) {
    out << r.name << '\t';
    if (std::isinf(r.psnr_db)) {
      out << "inf";
    } else {
      out << r.psnr_db;
    }
    out << '\t' << r.iou << '\n';
  }
  return out.str();
}

void write_scene(const std::filesystem::path& dir, const Scene& scene) {
  write_frames(volume_to_frames(scene.volume), dir / "frames", "frame");
  write_frames(volume_to_frames(scene.background), dir / "truth_background",
               "background");
  write_masks(scene.masks, dir / "truth_masks", "mask");
}

}  // namespace lrsd
