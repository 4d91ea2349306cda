#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cxr::metrics {

/// counts[t][p] = samples of true class t predicted as p.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> counts;

  std::size_t size() const { return labels.size(); }
  std::uint64_t total() const;

  // One-vs-rest counts for class c.
  std::uint64_t tp(std::size_t c) const;
  std::uint64_t fp(std::size_t c) const;
  std::uint64_t fn(std::size_t c) const;
  std::uint64_t tn(std::size_t c) const;

  std::size_t index_of(const std::string& label) const;
};

/// A metric value. Zero denominators give value 0 with `undefined` set, so
/// averages stay finite.
struct Metric {
  double value = 0.0;
  bool undefined = false;

  bool operator==(const Metric&) const = default;
};

ConfusionMatrix confusion(std::span<const std::string> labels,
                          std::span<const std::string> truth,
                          std::span<const std::string> predicted);

/// (TP+TN)/(TP+TN+FP+FN), i.e. trace/total for the multi-class matrix.
Metric accuracy(const ConfusionMatrix& cm);
/// TP/(TP+FP)
Metric precision(const ConfusionMatrix& cm, std::size_t c);
/// TP/(TP+FN)
Metric recall(const ConfusionMatrix& cm, std::size_t c);
/// 2TP/(2TP+FP+FN)
Metric f1(const ConfusionMatrix& cm, std::size_t c);
/// 2PR/(P+R); the harmonic-mean form of F1.
Metric f1_from(double precision, double recall);

}  // namespace cxr::metrics
