#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cxr/metrics/confusion.hpp"

namespace cxr::metrics {

inline constexpr std::array<std::string_view, 3> kClasses = {"COVID-19", "Non-COVID-19",
                                                             "No Finding"};
inline constexpr std::string_view kModelAverage = "Model Average";

struct ScoredSample {
  std::string id;
  std::string true_label;
  std::array<double, 3> probabilities{};
  int fold = 0;
};

struct ReportRow {
  std::string name;
  std::size_t image_count = 0;
  Metric precision, recall, f1, ap;
};

/// Rows in fixed order: Model Average, COVID-19, Non-COVID-19, No Finding.
/// Class metrics are computed per fold and averaged unweighted across
/// folds; Model Average is the unweighted mean of the class rows.
struct EvalReport {
  std::vector<ReportRow> rows;
  Metric accuracy;
  int fold_count = 0;
};

/// Predicted label is the argmax (lowest index on ties). Folds are the ids
/// 0..fold_count-1; each must hold at least one sample.
EvalReport evaluate(const std::vector<ScoredSample>& samples, int fold_count);

/// CSV with header id,true_label,p_covid,p_noncovid,p_nofinding,fold.
std::vector<ScoredSample> read_predictions_csv(std::string_view text);

/// Table with 3-decimal numbers, undefined values marked '*', and a footer
/// describing the averaging.
std::string render_text(const EvalReport& report);

/// class,image_count,precision,recall,f1,ap,undefined  (full precision).
std::string render_csv(const EvalReport& report);

/// class,threshold_rank,recall,precision over all samples, one-vs-rest.
std::string pr_curves_csv(const std::vector<ScoredSample>& samples);

}  // namespace cxr::metrics
