#include "mmw/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mmw/format.hpp"

namespace mmw {

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

std::string plot_path_for(const std::string& report_path) {
  return report_path + ".plot";
}

std::string fmt15(double value) { return fmt_double(value, 15); }

ReportWriter::ReportWriter(const std::string& title) {
  report_ = "# " + title + "\n";
  kv("version", kToolVersion);
}

void ReportWriter::section(const std::string& name) {
  report_ += "\n## " + name + "\n";
}

void ReportWriter::line(const std::string& text) { report_ += text + "\n"; }

void ReportWriter::kv(const std::string& key, const std::string& value) {
  report_ += key + ": " + value + "\n";
}

void ReportWriter::kv(const std::string& key, double value) { kv(key, fmt15(value)); }

void ReportWriter::kv_int(const std::string& key, long long value) {
  kv(key, std::to_string(value));
}

void ReportWriter::curve(const std::string& name,
                         const std::vector<std::pair<double, double>>& points) {
  report_ += "curve " + name + ":\n";
  plot_ += "# " + name + "\n";
  for (const auto& [x, y] : points) {
    std::string row = fmt15(x) + " " + fmt15(y);
    report_ += "  " + row + "\n";
    plot_ += row + "\n";
  }
  plot_ += "\n";
}

void ReportWriter::save(const std::string& path) const {
  write_atomic(path, report_);
  write_atomic(plot_path_for(path), plot_);
}

}  // namespace mmw
