#include "cxr/metrics/pr.hpp"

#include <algorithm>
#include <numeric>

#include "cxr/metrics/errors.hpp"

namespace cxr::metrics {

PRCurve pr_curve(std::span<const double> scores, std::span<const int> truths) {
  if (scores.size() != truths.size()) {
    throw MetricsError(ErrorCode::LengthMismatch, "scores and truths differ in length");
  }
  PRCurve curve;
  curve.total = scores.size();
  for (int t : truths) curve.positive_count += t != 0;
  if (curve.positive_count == 0) throw MetricsError(ErrorCode::NoPositives, "no positive samples");
  curve.baseline = static_cast<double>(curve.positive_count) / static_cast<double>(curve.total);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double positives = static_cast<double>(curve.positive_count);
  std::size_t tp = 0;
  for (std::size_t n = 0; n < order.size(); ++n) {
    tp += truths[order[n]] != 0;
    const bool block_end = n + 1 == order.size() || scores[order[n + 1]] != scores[order[n]];
    if (!block_end) continue;
    curve.points.push_back({static_cast<double>(tp) / positives,
                            static_cast<double>(tp) / static_cast<double>(n + 1),
                            scores[order[n]]});
  }
  return curve;
}

double average_precision(const PRCurve& curve) {
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const auto& p : curve.points) {
    ap += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return ap;
}

}  // namespace cxr::metrics
