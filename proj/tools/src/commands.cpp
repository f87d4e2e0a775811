#include "pgeo_tools/commands.hpp"

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "pgeo/activation_dump.hpp"
#include "pgeo/baseline_io.hpp"
#include "pgeo/error.hpp"
#include "pgeo/plot.hpp"
#include "pgeo/profile_io.hpp"

namespace pgeo::cli {

namespace fs = std::filesystem;

namespace {

// Maps exceptions onto exit statuses with a one-line diagnostic.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "pgeo: error [" << to_string(e.stage()) << "]";
    if (e.layer()) err << " layer " << *e.layer();
    err << ": " << e.detail() << '\n';
    return kUserError;
  } catch (const InvariantError& e) {
    err << "pgeo: internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "pgeo: internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

std::string cell(std::optional<double> v, const char* fmt = "%10.4f") {
  char buf[32];
  if (!v) return "   undefined";
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

void print_table(const LayerProfile& p, const std::optional<BootstrapResult>& boot, std::ostream& out) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%5s %12s %10s %14s", "layer", "rsa", "gpa", "stress");
  out << buf;
  if (boot) {
    std::snprintf(buf, sizeof(buf), "  %21s  %21s", "rsa CI", "gpa CI");
    out << buf;
  }
  out << '\n';
  for (std::size_t l = 0; l < p.per_layer.size(); ++l) {
    const auto& s = p.per_layer[l];
    std::snprintf(buf, sizeof(buf), "%5d %12s %10.4f %14.6g", s.layer, cell(s.rsa, "%12.4f").c_str(), s.gpa,
                  s.stress);
    out << buf;
    if (boot) {
      const auto& b = boot->per_layer[l];
      std::snprintf(buf, sizeof(buf), "  [%9.4f, %9.4f]  [%9.4f, %9.4f]", b.rsa_lo, b.rsa_hi, b.gpa_lo, b.gpa_hi);
      out << buf;
    }
    out << '\n';
  }
  out << "peak layer (GPA): " << p.peak_layer_gpa << '\n';
  out << "peak layer (RSA): " << (p.peak_layer_rsa ? std::to_string(*p.peak_layer_rsa) : "undefined") << '\n';
}

}  // namespace

void RunConfig::validate() const {
  if (dump_path.empty()) throw Error(Stage::ingest, "--dump is required");
  if (human_path.empty()) throw Error(Stage::ingest, "--human is required");
  if (out_dir.empty()) throw Error(Stage::ingest, "--out is required");
  profile.mds.validate();
  if (profile.isomap.k && *profile.isomap.k < 1) throw Error(Stage::geometry, "--knn must be >= 1");
  if (bootstrap) {
    if (boot.iterations < 1) throw Error(Stage::profiling, "--iterations must be >= 1");
    if (!(boot.confidence > 0.0 && boot.confidence < 1.0)) {
      throw Error(Stage::profiling, "--confidence must lie in (0, 1)");
    }
  }
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto tensor = read_activation_dump(config.dump_path);
    const auto human = config.human_kind == HumanKind::vad
                           ? vad_to_dissimilarity(read_vad_table(config.human_path))
                           : read_human_dissimilarity(config.human_path);

    ProfileDocument doc;
    doc.profile = profile(tensor, human, config.profile);
    if (config.bootstrap) {
      BootstrapOptions boot = config.boot;
      boot.threads = config.profile.threads;
      doc.bootstrap = bootstrap(tensor, human, doc.profile, boot);
    }

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw Error(Stage::profiling, "cannot create " + config.out_dir.string() + ": " + ec.message());
    write_text_atomically(config.out_dir / "profile.json", profile_to_json(doc));

    print_table(doc.profile, doc.bootstrap, out);
    out << "wrote " << (config.out_dir / "profile.json").string() << '\n';
    return kOk;
  });
}

int cmd_plot(const PlotConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.out.empty()) throw Error(Stage::plot, "--out is required");
    const auto doc = read_profile(config.profile_path);
    std::string svg;
    if (config.what == "map") {
      svg = render_map_svg(doc, config.layer);
    } else if (config.what == "trajectory") {
      if (config.require_bands && !doc.bootstrap) {
        err << "pgeo: warning: profile has no bootstrap block; drawing the trajectory without CI bands\n";
      }
      svg = render_trajectory_svg(doc);
    } else {
      throw Error(Stage::plot, "unknown plot kind '" + config.what + "' (expected map or trajectory)");
    }
    write_text_atomically(config.out, svg);
    out << "wrote " << config.out.string() << '\n';
    return kOk;
  });
}

int cmd_convert_vad(const fs::path& vad_path, const fs::path& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto d = vad_to_dissimilarity(read_vad_table(vad_path));
    write_dissimilarity_table(d, out_path);
    out << "wrote " << d.size() << "x" << d.size() << " dissimilarity table to " << out_path.string() << '\n';
    return kOk;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layer-wise perceptual geometry analysis of transformer activations"};
  app.set_config("--config", "", "Read flags from a TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1);

  RunConfig run_config;
  std::string human_kind = "dissimilarity";
  std::string method = "smacof";
  std::optional<int> knn;
  auto* analyze = app.add_subcommand("analyze", "Profile every layer of an activation dump against a human baseline");
  analyze->add_option("--dump", run_config.dump_path, "ACTV1 activation dump directory")->required();
  analyze->add_option("--human", run_config.human_path, "Human baseline table (CSV)")->required();
  analyze->add_option("--human-kind", human_kind, "Baseline table kind")
      ->check(CLI::IsMember({"dissimilarity", "vad"}))
      ->capture_default_str();
  analyze->add_option("--dim", run_config.profile.mds.p, "Map dimension")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  analyze->add_option("--method", method, "Embedding method")
      ->check(CLI::IsMember({"smacof", "classical", "isomap"}))
      ->capture_default_str();
  analyze->add_option("--knn", knn, "Isomap neighbour count (default min(N-1, 6))");
  analyze->add_flag("--knn-auto", run_config.profile.isomap.auto_connect,
                    "Grow k until the Isomap neighbourhood graph is connected");
  analyze->add_option("--restarts", run_config.profile.mds.restarts, "Extra random SMACOF starts")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  analyze->add_option("--max-iterations", run_config.profile.mds.max_iterations, "SMACOF iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--tolerance", run_config.profile.mds.rel_tolerance, "SMACOF relative stress tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--seed", run_config.profile.mds.seed, "Seed for restarts and bootstrap")->capture_default_str();
  analyze->add_flag("--bootstrap", run_config.bootstrap, "Compute percentile bootstrap intervals");
  analyze->add_option("--iterations", run_config.boot.iterations, "Bootstrap iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--confidence", run_config.boot.confidence, "Bootstrap confidence level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  analyze->add_option("--threads", run_config.profile.threads, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--out", run_config.out_dir, "Output directory for profile.json")->required();

  PlotConfig plot_config;
  auto* plot = app.add_subcommand("plot", "Render a geometry map or the layer-wise trajectory as SVG");
  plot->add_option("--profile", plot_config.profile_path, "profile.json written by analyze")->required();
  plot->add_option("--what", plot_config.what, "Figure kind")
      ->check(CLI::IsMember({"map", "trajectory"}))
      ->capture_default_str();
  plot->add_option("--layer", plot_config.layer, "Layer for map (default: peak GPA layer; -1: human baseline)");
  plot->add_flag("--bands", plot_config.require_bands, "Warn if the profile lacks bootstrap bands");
  plot->add_option("--out", plot_config.out, "Output SVG file")->required();

  fs::path vad_path, vad_out;
  auto* convert = app.add_subcommand("convert-vad", "Convert a VAD rating table into a cosine dissimilarity table");
  convert->add_option("--vad", vad_path, "VAD table (label, valence, arousal, dominance)")->required();
  convert->add_option("--out", vad_out, "Output dissimilarity table (CSV)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pgeo: error [cli]: " << e.what() << '\n';
    return kUserError;
  }

  if (*analyze) {
    run_config.human_kind = human_kind == "vad" ? HumanKind::vad : HumanKind::dissimilarity;
    run_config.profile.method = parse_embedding_method(method);
    run_config.profile.isomap.k = knn;
    run_config.boot.seed = run_config.profile.mds.seed;
    return cmd_analyze(run_config, out, err);
  }
  if (*plot) return cmd_plot(plot_config, out, err);
  if (*convert) return cmd_convert_vad(vad_path, vad_out, out, err);
  return kUserError;
}

}  // namespace pgeo::cli
