#include "pgeo/baseline_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "csv.hpp"
#include "pgeo/error.hpp"

namespace pgeo {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Stage::ingest, what); }

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

DissimilarityMatrix parse_human_dissimilarity(std::istream& in) {
  detail::CsvReader reader(in);
  auto header = reader.next();
  if (!header) fail("dissimilarity table is empty");

  std::vector<std::string> labels = header->fields;
  std::vector<detail::CsvRow> rows;
  while (auto row = reader.next()) rows.push_back(std::move(*row));

  // A header one wider than the row count carries a corner cell.
  if (labels.size() == rows.size() + 1) labels.erase(labels.begin());
  const std::size_t n = labels.size();
  if (rows.size() != n) {
    fail("dissimilarity table is not square: " + std::to_string(n) + " header labels, " +
         std::to_string(rows.size()) + " data rows");
  }
  require_unique_labels(labels, "dissimilarity table");

  Eigen::MatrixXd values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != n + 1) {
      fail(at_line(row.line) + "expected label plus " + std::to_string(n) + " values, got " +
           std::to_string(row.fields.size()) + " fields");
    }
    if (row.fields[0] != labels[i]) {
      fail(at_line(row.line) + "row label '" + row.fields[0] + "' does not match header label '" +
           labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto v = detail::parse_number(row.fields[j + 1]);
      if (!v || !std::isfinite(*v)) {
        fail(at_line(row.line) + "bad number '" + row.fields[j + 1] + "' in column " + std::to_string(j + 1));
      }
      values(i, j) = *v;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(values(i, i)) > kBaselineTolerance) {
      fail("diagonal entry for '" + labels[i] + "' is " + format_double(values(i, i)) + ", expected 0");
    }
    values(i, i) = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (values(i, j) < 0.0) {
        fail("negative dissimilarity " + format_double(values(i, j)) + " between '" + labels[i] +
             "' and '" + labels[j] + "'");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = values(i, j);
      const double b = values(j, i);
      if (std::abs(a - b) > kBaselineTolerance) {
        fail("asymmetric table: '" + labels[i] + "','" + labels[j] + "' = " + format_double(a) +
             " but '" + labels[j] + "','" + labels[i] + "' = " + format_double(b) +
             " (tolerance 1e-9)");
      }
      values(i, j) = values(j, i) = 0.5 * (a + b);
    }
  }
  return {std::move(labels), std::move(values)};
}

DissimilarityMatrix read_human_dissimilarity(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  return parse_human_dissimilarity(in);
}

void write_dissimilarity_table(const DissimilarityMatrix& d, std::ostream& out) {
  const auto& labels = d.labels();
  for (const auto& label : labels) out << ',' << detail::csv_escape(label);
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << detail::csv_escape(labels[i]);
    for (std::size_t j = 0; j < labels.size(); ++j) out << ',' << format_double(d(i, j));
    out << '\n';
  }
}

void write_dissimilarity_table(const DissimilarityMatrix& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail("cannot open " + path.string() + " for writing");
  write_dissimilarity_table(d, out);
  if (!out) fail("failed writing " + path.string());
}

VadTable parse_vad_table(std::istream& in) {
  detail::CsvReader reader(in);
  auto header = reader.next();
  if (!header) fail("VAD table is empty");
  if (header->fields.size() != 4) {
    fail(at_line(header->line) + "VAD header must have 4 columns (label, valence, arousal, dominance)");
  }
  std::vector<std::string> labels;
  std::vector<Eigen::RowVector3d> rows;
  while (auto row = reader.next()) {
    if (row->fields.size() != 4) {
      fail(at_line(row->line) + "expected 4 fields, got " + std::to_string(row->fields.size()));
    }
    Eigen::RowVector3d v;
    for (int k = 0; k < 3; ++k) {
      auto x = detail::parse_number(row->fields[k + 1]);
      if (!x || !std::isfinite(*x)) {
        fail(at_line(row->line) + "bad number '" + row->fields[k + 1] + "'");
      }
      v(k) = *x;
    }
    if (!(v.squaredNorm() > 0.0)) fail(at_line(row->line) + "VAD row '" + row->fields[0] + "' has zero norm");
    labels.push_back(row->fields[0]);
    rows.push_back(v);
  }
  if (labels.empty()) fail("VAD table has no data rows");
  Eigen::MatrixX3d coords(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) coords.row(static_cast<Eigen::Index>(i)) = rows[i];
  return {std::move(labels), std::move(coords)};
}

VadTable read_vad_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  return parse_vad_table(in);
}

}  // namespace pgeo
