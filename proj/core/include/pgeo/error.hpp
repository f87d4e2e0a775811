#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pgeo {

// Pipeline stage an error originated in; surfaces in CLI diagnostics.
enum class Stage { ingest, geometry, alignment, profiling, plot };

std::string_view to_string(Stage stage) noexcept;

// User or data error: bad input files, violated preconditions, degenerate
// data. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
 public:
  Error(Stage stage, const std::string& what, std::optional<int> layer = std::nullopt);

  Stage stage() const noexcept { return stage_; }
  std::optional<int> layer() const noexcept { return layer_; }

  // Copy of this error annotated with a layer index (keeps the first one set).
  Error at_layer(int layer) const;

  // The message without stage/layer decoration.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Stage stage_;
  std::optional<int> layer_;
  std::string detail_;
};

// Broken internal invariant (a bug, not bad input). Exit status 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pgeo
