#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "lrsd/error.hpp"
#include "lrsd/netpbm.hpp"
#include "lrsd/pipeline.hpp"
#include "lrsd/prox.hpp"

namespace lrsd {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lrsd_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Scene small_scene() {
  SceneSpec spec;
  spec.geometry = {16, 16, 1};
  spec.frame_count = 6;
  spec.sprites = {crossing_sprite(spec.geometry, 6, 4)};
  return generate_scene(spec, 5);
}

SolverConfig quick() {
  SolverConfig c;
  c.max_iter = 25;
  return c;
}

TEST(MeasureCommand, RateFloorAndDeterminism) {
  const Scene s = small_scene();
  const MeasurementFile a = measure_volume(s.volume, 0.04, 9);
  EXPECT_EQ(a.measurements(), 61u);  // floor(0.04 * 1536)
  EXPECT_EQ(a.signal_len, 1536u);
  const MeasurementFile b = measure_volume(s.volume, 0.04, 9);
  EXPECT_EQ(a.y, b.y);
  EXPECT_THROW(measure_volume(s.volume, 1.0, 9), Error);
  EXPECT_THROW(measure_volume(s.volume, 1e-6, 9), Error);
}

TEST(MeasureCommand, FileRoundTrip) {
  const fs::path dir = scratch("mf");
  fs::create_directories(dir);
  const MeasurementFile a = measure_volume(small_scene().volume, 0.2, 3);
  write_measurements(dir / "y.bin", a);
  const MeasurementFile b = read_measurements(dir / "y.bin");
  EXPECT_EQ(b.y, a.y);
  EXPECT_EQ(operator_for(b).row_set(), operator_for(a).row_set());
  fs::remove_all(dir);
}

TEST(Ingest, ModeHandling) {
  const std::vector<PixelFrame> rgb = {PixelFrame({1, 1, 3}, {100, 50, 200})};
  EXPECT_EQ(ingest_frames(rgb, ColorMode::grayscale).geometry().channels, 1u);
  EXPECT_EQ(ingest_frames(rgb, ColorMode::color).geometry().channels, 3u);
  const std::vector<PixelFrame> gray = {PixelFrame({1, 1, 1}, {7})};
  EXPECT_THROW(ingest_frames(gray, ColorMode::color), Error);
  EXPECT_THROW(ingest_frames({}, ColorMode::grayscale), Error);
}

TEST(ReconstructCommand, ZeroMeasurementsGiveBlackOutputs) {
  MeasurementFile f;
  f.geometry = {8, 8, 1};
  f.frame_count = 3;
  f.signal_len = 192;
  f.seed = 4;
  f.y = Vector::Zero(38);
  const Decomposition d = reconstruct_measurements(f, SolverConfig{});
  const fs::path dir = scratch("zero");
  write_reconstruction(dir, f, d, SolverConfig{});
  for (const char* sub : {"background", "foreground", "reconstruction"}) {
    const auto frames = read_frames(dir / sub);
    ASSERT_EQ(frames.size(), 3u);
    for (const auto& fr : frames) {
      for (double v : fr.samples) EXPECT_EQ(v, 0.0);
    }
  }
  fs::remove_all(dir);
}

TEST(ReconstructCommand, ReportIsStableKeyValueText) {
  const MeasurementFile f = measure_volume(small_scene().volume, 0.3, 2);
  const Decomposition d = reconstruct_measurements(f, quick());
  const std::string r = diagnostics_report(f, d, quick());
  std::istringstream in(r);
  std::string line;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    ASSERT_NE(eq, std::string::npos) << line;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"mode", "width", "height", "channels", "frames", "measurements", "seed",
                          "iterations", "converged", "final_feasibility", "final_objective",
                          "numerical_rank_x1"}) {
    EXPECT_TRUE(kv.count(key)) << key;
  }
  EXPECT_EQ(kv["numerical_rank_x1"], std::to_string(numerical_rank(d.background.data())));
  EXPECT_EQ(kv["iterations"], std::to_string(d.iterations));
}

TEST(ReconstructCommand, ExpectedGeometryCheck) {
  const MeasurementFile f = measure_volume(small_scene().volume, 0.3, 2);
  EXPECT_NO_THROW(check_expected_geometry(f, {16, 16, 1}, 6));
  EXPECT_THROW(check_expected_geometry(f, {16, 8, 1}), Error);
  EXPECT_THROW(check_expected_geometry(f, {16, 16, 1}, 5), Error);
}

TEST(Pipeline, BitwiseDeterministicOutputs) {
  const Scene s = small_scene();
  std::vector<std::string> runs;
  for (int r = 0; r < 2; ++r) {
    const fs::path dir = scratch("det" + std::to_string(r));
    const MeasurementFile f = measure_volume(s.volume, 0.3, 8);
    write_measurements(dir.string() + ".bin", f);
    const Decomposition d = reconstruct_measurements(read_measurements(fs::path(dir.string() + ".bin")), quick());
    write_reconstruction(dir, f, d, quick());
    write_masks(extract_silhouettes(d.foreground, {}).masks, dir / "masks");
    std::string all = slurp(dir.string() + ".bin") + slurp(dir / "report.txt");
    for (const char* sub : {"background", "foreground", "reconstruction", "masks"}) {
      for (const auto& p : list_frame_files(dir / sub)) all += slurp(p);
    }
    runs.push_back(all);
    fs::remove_all(dir);
    fs::remove(dir.string() + ".bin");
  }
  EXPECT_EQ(runs[0], runs[1]);
}

TEST(Silhouettes, EmptyForegroundGivesEmptyMasks) {
  const SilhouetteResult r = extract_silhouettes(VideoVolume::zeros({4, 4, 1}, 3), {});
  ASSERT_EQ(r.masks.size(), 3u);
  for (const auto& m : r.masks) EXPECT_EQ(m.count(), 0u);
}

TEST(ScoreCommand, IdenticalDirectories) {
  const fs::path dir = scratch("score");
  write_scene(dir, small_scene());
  const auto rows = score_directories(dir / "frames", dir / "frames");
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.back().name, "mean");
  EXPECT_TRUE(std::isinf(rows.back().psnr_db));
  EXPECT_EQ(rows.back().iou, 1.0);
  const std::string table = format_score_table(rows);
  EXPECT_EQ(table.substr(0, table.find('\n')), "frame\tpsnr_db\tiou");
  EXPECT_NE(table.find("mean\tinf\t1.0000"), std::string::npos);
  EXPECT_THROW(score_directories(dir / "frames", dir / "truth_masks_missing"), Error);
  fs::remove_all(dir);
}

TEST(ScoreCommand, CountAndGeometryMismatch) {
  const fs::path a = scratch("score_a"), b = scratch("score_b");
  write_frames({PixelFrame({2, 2, 1}, {1, 2, 3, 4})}, a);
  write_frames({PixelFrame({2, 2, 1}, {1, 2, 3, 4}), PixelFrame({2, 2, 1}, {1, 2, 3, 4})}, b);
  EXPECT_THROW(score_directories(a, b), Error);
  fs::remove_all(b);
  write_frames({PixelFrame({4, 1, 1}, {1, 2, 3, 4})}, b);
  EXPECT_THROW(score_directories(a, b), Error);
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
}  // namespace lrsd
