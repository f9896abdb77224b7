// lrsd: synth / measure / reconstruct / silhouette / score.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "lrsd/error.hpp"
#include "lrsd/measurement_file.hpp"
#include "lrsd/netpbm.hpp"
#include "lrsd/pipeline.hpp"
#include "lrsd/run_config.hpp"
#include "lrsd/scene.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Overrides {
  std::string config;
  std::optional<std::string> mode;
  std::optional<double> rate;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<int> window;
  std::optional<int> max_iter;
  std::optional<double> tol_feas;
  std::optional<double> tol_change;
  std::optional<double> gamma;
  std::optional<double> mu1, mu2, mu3;
  std::optional<double> beta;
  std::optional<std::string> x_update;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key=value configuration file");
  cmd->add_option("--mode", o.mode, "grayscale or color");
  cmd->add_option("--seed", o.seed, "sensing / scene seed");
}

void add_solver(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--max-iter", o.max_iter, "iteration cap");
  cmd->add_option("--tol-feas", o.tol_feas, "relative feasibility tolerance");
  cmd->add_option("--tol-change", o.tol_change, "relative change tolerance");
  cmd->add_option("--gamma", o.gamma, "multiplier step, (0, 1.618)");
  cmd->add_option("--mu1", o.mu1, "nuclear norm weight");
  cmd->add_option("--mu2", o.mu2, "background sparsity weight");
  cmd->add_option("--mu3", o.mu3, "foreground sparsity weight");
  cmd->add_option("--beta", o.beta, "common penalty for all four constraints");
  cmd->add_option("--x-update", o.x_update, "exact or steepest_descent");
}

void add_detection(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--delta", o.delta, "silhouette threshold");
  cmd->add_option("--window", o.window, "median window (odd)");
}

std::string text_of(const std::string& v) { return v; }

template <class T>
std::string text_of(T v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
void put(lrsd::RunConfig& c, const char* key, const std::optional<T>& v) {
  if (v) lrsd::set_config_value(c, key, text_of(*v));
}

lrsd::RunConfig resolve(const Overrides& o) {
  lrsd::RunConfig c;
  if (!o.config.empty()) lrsd::apply_config_file(c, o.config);
  put(c, "mode", o.mode);
  put(c, "rate", o.rate);
  put(c, "seed", o.seed);
  put(c, "delta", o.delta);
  put(c, "window", o.window);
  put(c, "max_iter", o.max_iter);
  put(c, "tol_feas", o.tol_feas);
  put(c, "tol_change", o.tol_change);
  put(c, "gamma", o.gamma);
  put(c, "mu1", o.mu1);
  put(c, "mu2", o.mu2);
  put(c, "mu3", o.mu3);
  put(c, "beta", o.beta);
  put(c, "x_update", o.x_update);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive video background subtraction"};
  app.require_subcommand(1);
  Overrides o;

  // synth
  std::string synth_out;
  std::size_t width = 64, height = 64, frames = 20, sprite = 8;
  double dimmed = 1.0;
  auto* synth = app.add_subcommand("synth", "write a synthetic test scene");
  add_common(synth, o);
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--width", width);
  synth->add_option("--height", height);
  synth->add_option("--frames", frames);
  synth->add_option("--sprite", sprite, "sprite edge length");
  synth->add_option("--illumination", dimmed,
                    "scale applied to the second half of the frames");

  // measure
  std::string measure_in, measure_out;
  auto* measure = app.add_subcommand("measure", "frames -> measurement file");
  add_common(measure, o);
  measure->add_option("--rate", o.rate, "measurement rate M/N in (0, 1)");
  measure->add_option("input", measure_in, "frame directory")->required();
  measure->add_option("output", measure_out, "measurement file")->required();

  // reconstruct
  std::string rec_in, rec_out;
  std::optional<std::size_t> expect_w, expect_h, expect_c, expect_j;
  auto* rec = app.add_subcommand("reconstruct",
                                 "measurement file -> background/foreground");
  add_common(rec, o);
  add_solver(rec, o);
  rec->add_option("input", rec_in, "measurement file")->required();
  rec->add_option("output", rec_out, "output directory")->required();
  rec->add_option("--expect-width", expect_w);
  rec->add_option("--expect-height", expect_h);
  rec->add_option("--expect-channels", expect_c);
  rec->add_option("--expect-frames", expect_j);

  // silhouette
  std::string sil_in, sil_out;
  auto* sil = app.add_subcommand("silhouette", "foreground frames -> masks");
  add_common(sil, o);
  add_detection(sil, o);
  sil->add_option("input", sil_in, "foreground frame directory")->required();
  sil->add_option("output", sil_out, "mask directory")->required();

  // score
  std::string score_a, score_b;
  auto* score = app.add_subcommand("score", "per-frame PSNR / IoU table");
  score->add_option("first", score_a)->required();
  score->add_option("second", score_b)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const lrsd::RunConfig c = resolve(o);
      lrsd::SceneSpec spec;
      spec.geometry = {width, height,
                       c.mode == lrsd::ColorMode::color ? std::size_t{3}
                                                        : std::size_t{1}};
      spec.frame_count = frames;
      spec.sprites = {lrsd::crossing_sprite(spec.geometry, frames, sprite)};
      if (dimmed != 1.0) spec.illumination = lrsd::illumination_step(frames, dimmed);
      lrsd::write_scene(synth_out, lrsd::generate_scene(spec, c.seed));
    } else if (*measure) {
      const lrsd::RunConfig c = resolve(o);
      const lrsd::VideoVolume v =
          lrsd::ingest_frames(lrsd::read_frames(fs::path(measure_in)), c.mode);
      const lrsd::MeasurementFile file =
          lrsd::measure_volume(v, c.measurement_rate, c.seed);
      lrsd::write_measurements(fs::path(measure_out), file);
      std::cout << "N=" << file.signal_len << " M=" << file.measurements()
                << " seed=" << file.seed << '\n';
    } else if (*rec) {
      const lrsd::RunConfig c = resolve(o);
      const lrsd::MeasurementFile file = lrsd::read_measurements(fs::path(rec_in));
      if (expect_w || expect_h || expect_c) {
        lrsd::FrameGeometry g = file.geometry;
        if (expect_w) g.width = *expect_w;
        if (expect_h) g.height = *expect_h;
        if (expect_c) g.channels = *expect_c;
        lrsd::check_expected_geometry(file, g, expect_j);
      } else if (expect_j) {
        lrsd::check_expected_geometry(file, file.geometry, expect_j);
      }
      const lrsd::Decomposition d = lrsd::reconstruct_measurements(file, c.solver);
      lrsd::write_reconstruction(rec_out, file, d, c.solver);
      std::cout << lrsd::diagnostics_report(file, d, c.solver);
    } else if (*sil) {
      const lrsd::RunConfig c = resolve(o);
      const auto pixels = lrsd::read_frames(fs::path(sil_in));
      const lrsd::VideoVolume fg = lrsd::volume_from_frames(pixels);
      const lrsd::SilhouetteResult r = lrsd::extract_silhouettes(fg, c.detection);
      lrsd::write_masks(r.masks, sil_out);
      std::cout << "delta=" << r.delta << " frames=" << r.masks.size() << '\n';
    } else if (*score) {
      std::cout << lrsd::format_score_table(
          lrsd::score_directories(score_a, score_b));
    }
  } catch (const lrsd::Error& e) {
    std::cerr << "lrsd: " << lrsd::to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == lrsd::ErrorCode::numerical_failure ? kExitNumerical
                                                          : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "lrsd: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
