#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "cgap/error.hpp"

namespace cgap::app {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  for (const auto& h : header) *this << h;
  out_ << '\n';
  fresh_ = true;
}

void CsvWriter::sep() {
  if (!fresh_) out_ << ',';
  fresh_ = false;
}

CsvWriter& CsvWriter::operator<<(const std::string& cell) {
  sep();
  if (cell.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : cell) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  } else {
    out_ << cell;
  }
  return *this;
}

CsvWriter& CsvWriter::operator<<(double x) {
  sep();
  out_ << num(x);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long x) {
  sep();
  out_ << x;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  fresh_ = true;
  ++rows_;
}

std::string witness(const CsvWriter& csv, std::size_t row) {
  return csv.path().filename().string() + "#" + std::to_string(row);
}

void write_svg_scatter(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<ScatterSeries>& series) {
  const double W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0 && y > 0)) continue;
      x0 = std::min(x0, std::log10(x));
      x1 = std::max(x1, std::log10(x));
      y0 = std::min(y0, std::log10(y));
      y1 = std::max(y1, std::log10(y));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
  const auto px = [&](double x) { return L + (std::log10(x) - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (std::log10(y) - y0) / (y1 - y0) * (H - T - B); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = x0; e <= x1 + 1e-9; e += 1) {
    const double x = px(std::pow(10.0, e));
    out << "<line x1=\"" << num(x) << "\" y1=\"" << H - B << "\" x2=\"" << num(x) << "\" y2=\"" << H - B + 5
        << "\" stroke=\"black\"/><text x=\"" << num(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">1e"
        << static_cast<int>(e) << "</text>\n";
  }
  for (double e = y0; e <= y1 + 1e-9; e += 1) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << L << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e"
        << static_cast<int>(e) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\">" << y_label << "</text>\n";
  double ly = T + 16;
  for (const auto& s : series) {
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
      for (const auto& [x, y] : s.points)
        if (x > 0 && y > 0) out << num(px(x)) << ',' << num(py(y)) << ' ';
      out << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points)
        if (x > 0 && y > 0)
          out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2\" fill=\"" << s.color
              << "\" fill-opacity=\"0.5\"/>\n";
    }
    out << "<rect x=\"" << L + 10 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << s.color
        << "\"/><text x=\"" << L + 26 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
}

void write_summary(const std::filesystem::path& path, const ExperimentConfig& cfg, const CommandResult& result,
                   const nlohmann::ordered_json& details) {
  nlohmann::ordered_json j;
  j["command"] = result.command;
  j["seed"] = cfg.seed;
  j["pass"] = result.pass();
  j["partial"] = result.partial;
  auto& inv = j["invariants"] = nlohmann::ordered_json::array();
  for (const auto& i : result.invariants) {
    nlohmann::ordered_json e;
    e["name"] = i.name;
    e["pass"] = i.pass;
    auto& m = e["measured"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : i.measured) {
      if (std::isfinite(v)) m[k] = v;
      else m[k] = num(v);
    }
    e["witness"] = i.witness;
    if (!i.note.empty()) e["note"] = i.note;
    inv.push_back(std::move(e));
  }
  j["details"] = details;
  j["config_text"] = cfg.text;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace cgap::app
