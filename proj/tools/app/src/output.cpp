#include "optomech_app/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech::app {
namespace {

std::string short_number(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3g", v);
  return buf.data();
}

std::string coord(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.1f", v);
  return buf.data();
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

void CsvTable::add_column(std::string name, const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (const double v : values) cells.push_back(format_number(v));
  add_text_column(std::move(name), std::move(cells));
}

void CsvTable::add_text_column(std::string name, std::vector<std::string> values) {
  if (!columns.empty() && values.size() != columns.front().size()) {
    throw DimensionMismatch("column '" + name + "' has a different length");
  }
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

std::string CsvTable::render() const {
  std::string out;
  for (const auto& line : metadata) out += "# " + line + "\n";
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c][r];
    }
    out += "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string render_json(const nlohmann::json& doc) {
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string render_svg(const std::string& title, const std::vector<PlotPanel>& panels) {
  constexpr double width = 820.0, panel_height = 300.0, left = 80.0, right = 160.0, top = 40.0, bottom = 50.0;
  const double height = top + static_cast<double>(panels.size()) * (panel_height + bottom) + 10.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
      << "</text>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const PlotPanel& panel = panels[p];
    const double y0 = top + static_cast<double>(p) * (panel_height + bottom);
    const double plot_w = width - left - right;
    const double plot_h = panel_height - 30.0;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : panel.series) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return y0 + 20.0 + (ymax - y) / (ymax - ymin) * plot_h; };

    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << y0 + 12 << "\" text-anchor=\"middle\">"
        << escape_xml(panel.title) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << y0 + 20 << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double xv = xmin + (xmax - xmin) * t / 4.0;
      const double yv = ymin + (ymax - ymin) * t / 4.0;
      svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << y0 + 20 + plot_h << "\" x2=\"" << sx(xv) << "\" y2=\""
          << y0 + 25 + plot_h << "\" stroke=\"black\"/>";
      svg << "<text x=\"" << sx(xv) << "\" y=\"" << y0 + 38 + plot_h << "\" text-anchor=\"middle\">"
          << short_number(xv) << "</text>\n";
      svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\"" << sy(yv)
          << "\" stroke=\"black\"/>";
      svg << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << short_number(yv)
          << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << y0 + plot_h + 52 << "\" text-anchor=\"middle\">"
        << escape_xml(panel.x_label) << "</text>\n";
    svg << "<text transform=\"translate(18," << y0 + 20 + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape_xml(panel.y_label) << "</text>\n";

    for (std::size_t k = 0; k < panel.series.size(); ++k) {
      const auto& s = panel.series[k];
      const char* color = kPalette[k % kPalette.size()];
      std::string points;
      auto flush = [&] {
        if (!points.empty()) {
          svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"" << points
              << "\"/>\n";
        }
        points.clear();
      };
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          flush();
          continue;
        }
        points += coord(sx(s.x[i])) + "," + coord(sy(s.y[i])) + " ";
      }
      flush();
      const double ly = y0 + 30 + 16.0 * static_cast<double>(k);
      svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 32
          << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
      svg << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label)
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace optomech::app
