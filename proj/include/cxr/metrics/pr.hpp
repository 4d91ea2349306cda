#pragma once

#include <span>
#include <vector>

namespace cxr::metrics {

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double threshold = 0.0;  // score at the end of the tied block
};

struct PRCurve {
  std::vector<PRPoint> points;
  std::size_t positive_count = 0;
  std::size_t total = 0;
  /// Precision of a classifier that cannot separate the classes.
  double baseline = 0.0;
};

/// Ranks by descending score; one point per distinct score, placed at the
/// end of its tied block. Throws MetricsError(NoPositives) if no truth is set.
PRCurve pr_curve(std::span<const double> scores, std::span<const int> truths);

/// Sum over points of (R_n - R_{n-1}) * P_n with R_0 = 0. No interpolation.
double average_precision(const PRCurve& curve);

}  // namespace cxr::metrics
