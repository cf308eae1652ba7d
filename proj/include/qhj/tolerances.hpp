#pragma once

#include <map>
#include <string>

namespace qhj {

/// Default tolerances for every named check, overridable per run.
///
/// Upper bounds are multiplied by `scale` (the --tolerance-scale flag). Lower
/// bounds (convergence order, refinement ratio, mismatch distance) and wall
/// clock budgets are not scaled.
class ToleranceTable {
 public:
  struct Entry {
    double value;
    bool scalable;
    const char* meaning;
  };

  ToleranceTable();

  static const std::map<std::string, Entry>& defaults();

  double operator[](const std::string& key) const;
  void set(const std::string& key, double value);
  void set_scale(double scale);
  double scale() const { return scale_; }
  const std::map<std::string, double>& overrides() const { return overrides_; }

 private:
  std::map<std::string, double> overrides_;
  double scale_ = 1.0;
};

}  // namespace qhj
