#include "pgeo/plot.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pgeo/error.hpp"

namespace pgeo {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr const char* kRsaColor = "#1f77b4";
constexpr const char* kGpaColor = "#d62728";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Linear map from a data interval onto a pixel interval.
struct Axis {
  double lo, hi, px_lo, px_hi;
  double operator()(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

void open_svg(std::ostringstream& out, int width, int height) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"Helvetica, Arial, sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void text(std::ostringstream& out, double x, double y, std::string_view s, int size,
          const char* anchor = "middle", const char* extra = "") {
  out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
      << "\" text-anchor=\"" << anchor << "\"" << extra << ">" << xml_escape(s) << "</text>\n";
}

// Tick step from {1, 2, 5} x 10^k giving at most `max_ticks` intervals.
double nice_step(double span, int max_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::optional<std::string> parse_hex_color(std::string_view label) {
  if (!label.empty() && label.front() == '#') label.remove_prefix(1);
  if (label.size() != 6) return std::nullopt;
  std::string out = "#";
  for (char c : label) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) return std::nullopt;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string stimulus_color(std::string_view modality, std::string_view label, std::size_t index) {
  if (modality == "color") {
    if (auto hex = parse_hex_color(label)) return *hex;
  }
  return kPalette[index % kPalette.size()];
}

std::string render_map_svg(const ProfileDocument& doc, std::optional<int> layer) {
  const auto& p = doc.profile;
  const int num_layers = static_cast<int>(p.layer_embeddings.size());
  const int chosen = layer.value_or(p.peak_layer_gpa);
  if (chosen < -1 || chosen >= num_layers) {
    throw Error(Stage::plot, "layer " + std::to_string(chosen) + " out of range: profile has layers 0.." +
                                 std::to_string(num_layers - 1) + " (-1 selects the human baseline)");
  }
  const EmbeddingConfig& y = chosen < 0 ? p.human_embedding : p.layer_embeddings[static_cast<std::size_t>(chosen)];

  std::string title;
  if (chosen < 0) {
    title = "Human baseline (" + p.modality + ")";
  } else {
    title = p.model_id + " - layer " + std::to_string(chosen);
    if (chosen == p.peak_layer_gpa) title += " (peak GPA)";
    char buf[64];
    std::snprintf(buf, sizeof(buf), ", GPA %.3f", p.per_layer[static_cast<std::size_t>(chosen)].gpa);
    title += buf;
  }

  constexpr int size = 640;
  constexpr double margin = 60.0;
  std::ostringstream out;
  open_svg(out, size, size);
  text(out, size / 2.0, 30, title, 16);
  std::string subtitle = std::string(to_string(p.method)) + " map, p = " + std::to_string(y.dim());
  if (y.dim() > 2) subtitle += " (axes 1-2 shown)";
  text(out, size / 2.0, 50, subtitle, 12, "middle", " fill=\"#555\"");

  // Equal aspect ratio: one data unit is the same length on both axes.
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  if (y.coords.rows() > 0 && y.coords.cols() >= 2) {
    xmin = y.coords.col(0).minCoeff();
    xmax = y.coords.col(0).maxCoeff();
    ymin = y.coords.col(1).minCoeff();
    ymax = y.coords.col(1).maxCoeff();
  }
  const double half = std::max({(xmax - xmin) / 2.0, (ymax - ymin) / 2.0, 1e-9}) * 1.1;
  const double cx = (xmin + xmax) / 2.0, cy = (ymin + ymax) / 2.0;
  const Axis ax{cx - half, cx + half, margin, size - margin};
  const Axis ay{cy - half, cy + half, size - margin, margin};

  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size - 2 * margin << "\" height=\""
      << size - 2 * margin << "\" fill=\"none\" stroke=\"#999\"/>\n";
  out << "<g id=\"points\">\n";
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double px = ax(y.coords(r, 0));
    const double py = ay(y.coords.cols() > 1 ? y.coords(r, 1) : 0.0);
    out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"6\" fill=\""
        << stimulus_color(p.modality, y.labels[i], i) << "\" stroke=\"#333\" stroke-width=\"0.8\"/>\n";
    text(out, px + 8, py - 8, y.labels[i], 10, "start");
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_trajectory_svg(const ProfileDocument& doc) {
  const auto& p = doc.profile;
  constexpr int width = 820, height = 440;
  constexpr double left = 70, right = 150, top = 60, bottom = 60;
  const int n = static_cast<int>(p.per_layer.size());

  double vmin = 0.0, vmax = 1.0;
  for (const auto& s : p.per_layer) {
    if (s.rsa) vmin = std::min(vmin, *s.rsa);
    vmin = std::min(vmin, s.gpa);
  }
  if (doc.bootstrap) {
    for (const auto& b : doc.bootstrap->per_layer) vmin = std::min({vmin, b.rsa_lo, b.gpa_lo});
  }
  const double ystep = nice_step(vmax - vmin, 6);
  vmin = std::floor(vmin / ystep) * ystep;

  const Axis ax{0.0, std::max(1.0, n - 1.0), left, width - right};
  const Axis ay{vmin, vmax, height - bottom, top};

  std::ostringstream out;
  open_svg(out, width, height);
  text(out, (left + width - right) / 2.0, 30, "Layer-wise alignment: " + p.model_id + " (" + p.modality + ")", 16);

  // Axes and ticks.
  out << "<g id=\"axes\" stroke=\"#333\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom << "\"/>\n"
      << "</g>\n";
  const int xstep = n <= 40 ? 1 : static_cast<int>(std::max(1.0, nice_step(n - 1, 16)));
  for (int l = 0; l < n; l += xstep) {
    const double x = ax(l);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << height - bottom << "\" x2=\"" << num(x) << "\" y2=\""
        << height - bottom + 5 << "\" stroke=\"#333\"/>\n";
    text(out, x, height - bottom + 20, std::to_string(l), 11);
  }
  for (double v = vmin; v <= vmax + 1e-9; v += ystep) {
    const double y = ay(v);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << width - right << "\" y2=\""
        << num(y) << "\" stroke=\"#ddd\"/>\n";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.1f", std::abs(v) < 1e-12 ? 0.0 : v);
    text(out, left - 10, y + 4, buf, 11, "end");
  }
  text(out, (left + width - right) / 2.0, height - 15, "layer", 13);
  text(out, 20, (top + height - bottom) / 2.0, "score", 13, "middle",
       (" transform=\"rotate(-90 20 " + num((top + height - bottom) / 2.0) + ")\"").c_str());

  // Percentile bands.
  if (doc.bootstrap && !doc.bootstrap->per_layer.empty()) {
    const auto& rows = doc.bootstrap->per_layer;
    auto band = [&](const char* id, const char* color, auto lo, auto hi) {
      out << "<polygon id=\"" << id << "\" fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (const auto& r : rows) out << num(ax(r.layer)) << ',' << num(ay(lo(r))) << ' ';
      for (auto it = rows.rbegin(); it != rows.rend(); ++it) out << num(ax(it->layer)) << ',' << num(ay(hi(*it))) << ' ';
      out << "\"/>\n";
    };
    band("rsa-band", kRsaColor, [](const BootstrapLayer& r) { return r.rsa_lo; },
         [](const BootstrapLayer& r) { return r.rsa_hi; });
    band("gpa-band", kGpaColor, [](const BootstrapLayer& r) { return r.gpa_lo; },
         [](const BootstrapLayer& r) { return r.gpa_hi; });
  }

  // Series; undefined RSA values break the line.
  auto series = [&](const char* id, const char* color, auto value) {
    out << "<g id=\"" << id << "\">\n<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" d=\"";
    bool pen_down = false;
    for (const auto& s : p.per_layer) {
      const std::optional<double> v = value(s);
      if (!v) {
        pen_down = false;
        continue;
      }
      out << (pen_down ? 'L' : 'M') << num(ax(s.layer)) << ',' << num(ay(*v)) << ' ';
      pen_down = true;
    }
    out << "\"/>\n";
    for (const auto& s : p.per_layer) {
      if (auto v = value(s)) {
        out << "<circle cx=\"" << num(ax(s.layer)) << "\" cy=\"" << num(ay(*v)) << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
      }
    }
    out << "</g>\n";
  };
  series("rsa", kRsaColor, [](const LayerScore& s) { return s.rsa; });
  series("gpa", kGpaColor, [](const LayerScore& s) { return std::optional<double>(s.gpa); });

  // Legend.
  const double lx = width - right + 20;
  out << "<line x1=\"" << lx << "\" y1=\"" << top + 10 << "\" x2=\"" << lx + 24 << "\" y2=\"" << top + 10
      << "\" stroke=\"" << kRsaColor << "\" stroke-width=\"2\"/>\n";
  text(out, lx + 30, top + 14, "RSA", 12, "start");
  out << "<line x1=\"" << lx << "\" y1=\"" << top + 30 << "\" x2=\"" << lx + 24 << "\" y2=\"" << top + 30
      << "\" stroke=\"" << kGpaColor << "\" stroke-width=\"2\"/>\n";
  text(out, lx + 30, top + 34, "GPA", 12, "start");
  if (doc.bootstrap) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.0f%% CI, B=%d", doc.bootstrap->confidence * 100.0, doc.bootstrap->iterations);
    text(out, lx, top + 56, buf, 11, "start", " fill=\"#555\"");
  }
  text(out, lx, top + 76, "peak GPA: " + std::to_string(p.peak_layer_gpa), 11, "start");
  text(out, lx, top + 92,
       "peak RSA: " + (p.peak_layer_rsa ? std::to_string(*p.peak_layer_rsa) : std::string("n/a")), 11, "start");

  out << "</svg>\n";
  return out.str();
}

}  // namespace pgeo
