#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace optomech::app {

/// Round-trip text for a double ("%.17g"); NaN prints as "nan".
std::string format_number(double v);

/// Column-oriented table rendered as CSV with leading "# " metadata lines.
struct CsvTable {
  std::vector<std::string> metadata;
  std::vector<std::string> header;
  /// Cells already formatted as text.
  std::vector<std::vector<std::string>> columns;

  void add_column(std::string name, const std::vector<double>& values);
  void add_text_column(std::string name, std::vector<std::string> values);
  std::string render() const;
};

/// Writes through a temporary file in the same directory and renames it into
/// place, creating the directory when needed.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Pretty JSON with NaN written as null.
std::string render_json(const nlohmann::json& doc);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Panels stacked vertically, each with axes, tick labels and polylines.
/// Non-finite points break a polyline.
std::string render_svg(const std::string& title, const std::vector<PlotPanel>& panels);

}  // namespace optomech::app
