#include "cxr/metrics/confusion.hpp"

#include "cxr/metrics/errors.hpp"

namespace cxr::metrics {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::EmptyFold: return "EmptyFold";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

MetricsError::MetricsError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts) {
    for (auto v : row) n += v;
  }
  return n;
}

std::uint64_t ConfusionMatrix::tp(std::size_t c) const { return counts[c][c]; }

std::uint64_t ConfusionMatrix::fp(std::size_t c) const {
  std::uint64_t n = 0;
  for (std::size_t t = 0; t < size(); ++t) {
    if (t != c) n += counts[t][c];
  }
  return n;
}

std::uint64_t ConfusionMatrix::fn(std::size_t c) const {
  std::uint64_t n = 0;
  for (std::size_t p = 0; p < size(); ++p) {
    if (p != c) n += counts[c][p];
  }
  return n;
}

std::uint64_t ConfusionMatrix::tn(std::size_t c) const {
  return total() - tp(c) - fp(c) - fn(c);
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw MetricsError(ErrorCode::UnknownLabel, "'" + label + "'");
}

ConfusionMatrix confusion(std::span<const std::string> labels,
                          std::span<const std::string> truth,
                          std::span<const std::string> predicted) {
  if (truth.size() != predicted.size()) {
    throw MetricsError(ErrorCode::LengthMismatch,
                       std::to_string(truth.size()) + " truths vs " +
                           std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm;
  cm.labels.assign(labels.begin(), labels.end());
  cm.counts.assign(labels.size(), std::vector<std::uint64_t>(labels.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cm.counts[cm.index_of(truth[i])][cm.index_of(predicted[i])];
  }
  return cm;
}

namespace {

Metric ratio(double num, double den) {
  if (den == 0.0) return {0.0, true};
  return {num / den, false};
}

}  // namespace

Metric accuracy(const ConfusionMatrix& cm) {
  std::uint64_t trace = 0;
  for (std::size_t c = 0; c < cm.size(); ++c) trace += cm.counts[c][c];
  return ratio(static_cast<double>(trace), static_cast<double>(cm.total()));
}

Metric precision(const ConfusionMatrix& cm, std::size_t c) {
  return ratio(static_cast<double>(cm.tp(c)), static_cast<double>(cm.tp(c) + cm.fp(c)));
}

Metric recall(const ConfusionMatrix& cm, std::size_t c) {
  return ratio(static_cast<double>(cm.tp(c)), static_cast<double>(cm.tp(c) + cm.fn(c)));
}

Metric f1(const ConfusionMatrix& cm, std::size_t c) {
  return ratio(2.0 * static_cast<double>(cm.tp(c)),
               static_cast<double>(2 * cm.tp(c) + cm.fp(c) + cm.fn(c)));
}

Metric f1_from(double p, double r) { return ratio(2.0 * p * r, p + r); }

}  // namespace cxr::metrics
