#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "experiment.hpp"

namespace cgap::app {

/// Shortest round-trip decimal form; identical across runs and platforms
/// with IEEE doubles.
std::string num(double x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  CsvWriter& operator<<(const std::string& cell);
  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(long long x);
  CsvWriter& operator<<(std::size_t x) { return *this << static_cast<long long>(x); }
  CsvWriter& operator<<(int x) { return *this << static_cast<long long>(x); }
  void end_row();
  std::size_t rows() const { return rows_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void sep();
  std::filesystem::path path_;
  std::ofstream out_;
  bool fresh_ = true;
  std::size_t rows_ = 0;
};

struct ScatterSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool line = false;
};

/// Static log-log scatter plot.
void write_svg_scatter(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<ScatterSeries>& series);

/// Summary JSON with the verbatim config, invariants and extra sections.
void write_summary(const std::filesystem::path& path, const ExperimentConfig& cfg, const CommandResult& result,
                   const nlohmann::ordered_json& details);

std::string witness(const CsvWriter& csv, std::size_t row);

}  // namespace cgap::app
