#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pgeo/profiling.hpp"

namespace pgeo::cli {

enum class HumanKind { dissimilarity, vad };

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUserError = 1;
inline constexpr int kInternalError = 2;

struct RunConfig {
  std::filesystem::path dump_path;
  std::filesystem::path human_path;
  HumanKind human_kind = HumanKind::dissimilarity;
  ProfileOptions profile;          // method, MDS and Isomap settings, threads
  bool bootstrap = false;
  BootstrapOptions boot;
  std::filesystem::path out_dir;

  void validate() const;
};

struct PlotConfig {
  std::filesystem::path profile_path;
  std::string what = "trajectory";  // "map" or "trajectory"
  std::optional<int> layer;
  bool require_bands = false;
  std::filesystem::path out;
};

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotConfig& config, std::ostream& out, std::ostream& err);
int cmd_convert_vad(const std::filesystem::path& vad_path, const std::filesystem::path& out_path,
                    std::ostream& out, std::ostream& err);

// Full command line (argv[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgeo::cli
