#pragma once

#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace whembed {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct Calibration {
  std::string name;
  std::complex<double> value;
  std::string provenance;
};

// Machine-readable outcome of a verification: every residual is compared to
// its tolerance with `value < tolerance`; NaN never passes.
struct EmbeddingReport {
  std::string name;
  std::vector<Check> checks;
  std::vector<Calibration> calibrations;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;

  const Check& check(const std::string& check_name, double value, double tolerance) {
    checks.push_back({check_name, value, tolerance, value < tolerance});
    return checks.back();
  }
  void metric(const std::string& metric_name, double value) { metrics.emplace_back(metric_name, value); }
  void calibration(const std::string& cal_name, std::complex<double> value, const std::string& provenance) {
    calibrations.push_back({cal_name, value, provenance});
  }
  void note(const std::string& text) { notes.push_back(text); }

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  // Appends another report's content, prefixing its names.
  void absorb(const EmbeddingReport& other) {
    const std::string p = other.name.empty() ? "" : other.name + ".";
    for (auto c : other.checks) { c.name = p + c.name; checks.push_back(c); }
    for (auto c : other.calibrations) { c.name = p + c.name; calibrations.push_back(c); }
    for (auto m : other.metrics) { m.first = p + m.first; metrics.push_back(m); }
    for (const auto& n : other.notes) notes.push_back(p + n);
  }

  const Check* find(const std::string& check_name) const {
    for (const auto& c : checks)
      if (c.name == check_name) return &c;
    return nullptr;
  }
  double metric_value(const std::string& metric_name) const {
    for (const auto& m : metrics)
      if (m.first == metric_name) return m.second;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace whembed
