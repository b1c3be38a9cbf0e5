#ifndef MMW_REPORT_HPP
#define MMW_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

namespace mmw {

inline constexpr const char* kToolVersion = "1.0.0";

/// Writes `content` to `path` atomically (temp file in the same directory,
/// then rename).
void write_atomic(const std::string& path, const std::string& content);

/// Companion plot-data file placed next to a report.
std::string plot_path_for(const std::string& report_path);

/// Deterministic sectioned text reports.  All numbers go through a fixed
/// 15-significant-digit formatter so identical inputs produce byte-identical
/// files.  Curves are echoed inline and collected into a companion (x, y)
/// tabular file.
class ReportWriter {
 public:
  explicit ReportWriter(const std::string& title);

  void section(const std::string& name);
  void line(const std::string& text);
  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, double value);
  void kv_int(const std::string& key, long long value);
  void curve(const std::string& name, const std::vector<std::pair<double, double>>& points);

  const std::string& report_text() const { return report_; }
  const std::string& plot_text() const { return plot_; }

  /// Writes the report to `path` and the plot data to plot_path_for(path).
  void save(const std::string& path) const;

 private:
  std::string report_;
  std::string plot_;
};

/// 15-significant-digit decimal rendering used by every report field.
std::string fmt15(double value);

}  // namespace mmw

#endif  // MMW_REPORT_HPP
