#include "cxr/metrics/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "cxr/common/csv.hpp"
#include "cxr/common/io.hpp"
#include "cxr/metrics/errors.hpp"
#include "cxr/metrics/pr.hpp"

namespace cxr::metrics {

namespace {

std::size_t predicted_index(const ScoredSample& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.probabilities.size(); ++i) {
    if (s.probabilities[i] > s.probabilities[best]) best = i;
  }
  return best;
}

struct Accumulator {
  double sum = 0.0;
  bool undefined = false;
  int n = 0;

  void add(const Metric& m) {
    sum += m.value;
    undefined = undefined || m.undefined;
    ++n;
  }
  Metric mean() const { return {n ? sum / n : 0.0, undefined || n == 0}; }
};

struct ClassAcc {
  Accumulator precision, recall, f1, ap;
};

std::vector<std::string> class_labels() {
  return {std::string(kClasses[0]), std::string(kClasses[1]), std::string(kClasses[2])};
}

}  // namespace

EvalReport evaluate(const std::vector<ScoredSample>& samples, int fold_count) {
  if (fold_count < 1) throw MetricsError(ErrorCode::BadInput, "fold count must be >= 1");
  const auto labels = class_labels();
  std::vector<std::vector<const ScoredSample*>> folds(static_cast<std::size_t>(fold_count));
  for (const auto& s : samples) {
    if (s.fold < 0 || s.fold >= fold_count) {
      throw MetricsError(ErrorCode::BadInput, "sample '" + s.id + "' has fold " +
                                                  std::to_string(s.fold) + " outside [0," +
                                                  std::to_string(fold_count) + ")");
    }
    folds[static_cast<std::size_t>(s.fold)].push_back(&s);
  }
  for (int f = 0; f < fold_count; ++f) {
    if (folds[static_cast<std::size_t>(f)].empty()) {
      throw MetricsError(ErrorCode::EmptyFold, "fold " + std::to_string(f) + " has no samples");
    }
  }

  std::array<ClassAcc, 3> acc;
  Accumulator accuracy_acc;
  for (const auto& fold : folds) {
    std::vector<std::string> truth, predicted;
    for (const auto* s : fold) {
      truth.push_back(s->true_label);
      predicted.push_back(labels[predicted_index(*s)]);
    }
    const auto cm = confusion(labels, truth, predicted);
    accuracy_acc.add(accuracy(cm));
    for (std::size_t c = 0; c < labels.size(); ++c) {
      acc[c].precision.add(precision(cm, c));
      acc[c].recall.add(recall(cm, c));
      acc[c].f1.add(f1(cm, c));
      std::vector<double> scores;
      std::vector<int> truths;
      for (const auto* s : fold) {
        scores.push_back(s->probabilities[c]);
        truths.push_back(s->true_label == labels[c]);
      }
      try {
        acc[c].ap.add({average_precision(pr_curve(scores, truths)), false});
      } catch (const MetricsError& e) {
        if (e.code() != ErrorCode::NoPositives) throw;
        acc[c].ap.add({0.0, true});
      }
    }
  }

  EvalReport report;
  report.fold_count = fold_count;
  report.accuracy = accuracy_acc.mean();
  ReportRow average{std::string(kModelAverage), samples.size(), {}, {}, {}, {}};
  Accumulator ap, p, r, f;
  std::vector<ReportRow> class_rows;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    ReportRow row;
    row.name = labels[c];
    for (const auto& s : samples) row.image_count += s.true_label == labels[c];
    row.precision = acc[c].precision.mean();
    row.recall = acc[c].recall.mean();
    row.f1 = acc[c].f1.mean();
    row.ap = acc[c].ap.mean();
    p.add(row.precision);
    r.add(row.recall);
    f.add(row.f1);
    ap.add(row.ap);
    class_rows.push_back(row);
  }
  average.precision = p.mean();
  average.recall = r.mean();
  average.f1 = f.mean();
  average.ap = ap.mean();
  report.rows.push_back(average);
  report.rows.insert(report.rows.end(), class_rows.begin(), class_rows.end());
  return report;
}

std::vector<ScoredSample> read_predictions_csv(std::string_view text) {
  const auto table = parse_csv(text);
  const auto id = table.require_column("id");
  const auto truth = table.require_column("true_label");
  const std::array<std::size_t, 3> prob = {table.require_column("p_covid"),
                                           table.require_column("p_noncovid"),
                                           table.require_column("p_nofinding")};
  const auto fold = table.require_column("fold");
  const auto labels = class_labels();

  std::vector<ScoredSample> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "row " + std::to_string(r + 2);
    ScoredSample s;
    s.id = row[id];
    s.true_label = row[truth];
    if (std::find(labels.begin(), labels.end(), s.true_label) == labels.end()) {
      throw MetricsError(ErrorCode::UnknownLabel, where + ": '" + s.true_label + "'");
    }
    for (std::size_t c = 0; c < 3; ++c) {
      const std::string& field = row[prob[c]];
      char* end = nullptr;
      s.probabilities[c] = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() ||
          !std::isfinite(s.probabilities[c])) {
        throw MetricsError(ErrorCode::BadInput, where + ": bad probability '" + field + "'");
      }
    }
    const std::string& f = row[fold];
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), s.fold);
    if (ec != std::errc{} || p != f.data() + f.size()) {
      throw MetricsError(ErrorCode::BadInput, where + ": bad fold '" + f + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string cell(const Metric& m) {
  return format_fixed(m.value, 3) + (m.undefined ? "*" : " ");
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_text(const EvalReport& report) {
  std::string out = pad_right("Class", 15) + pad_left("Image count", 12) +
                    pad_left("Precision", 11) + pad_left("Recall", 9) +
                    pad_left("F1 Score", 10) + pad_left("AP", 8) + "\n";
  bool any_undefined = false;
  for (const auto& row : report.rows) {
    out += pad_right(row.name, 15) + pad_left(std::to_string(row.image_count), 12);
    for (auto [m, w] : {std::pair{&row.precision, 11}, {&row.recall, 9}, {&row.f1, 10},
                        {&row.ap, 8}}) {
      out += pad_left(cell(*m), static_cast<std::size_t>(w));
      any_undefined = any_undefined || m->undefined;
    }
    out += "\n";
  }
  out += "\nAccuracy: " + cell(report.accuracy) + "\n";
  out += "Model Average is the unweighted (macro) mean of the class rows; each class "
         "metric is the unweighted mean over " +
         std::to_string(report.fold_count) + " fold(s).\n";
  if (any_undefined || report.accuracy.undefined) {
    out += "* undefined in at least one fold (zero denominator or no positives); counted as 0.\n";
  }
  return out;
}

std::string render_csv(const EvalReport& report) {
  std::string out = "class,image_count,precision,recall,f1,ap,undefined\n";
  for (const auto& row : report.rows) {
    std::string undefined;
    for (auto [m, name] : {std::pair{&row.precision, "precision"}, {&row.recall, "recall"},
                           {&row.f1, "f1"}, {&row.ap, "ap"}}) {
      if (m->undefined) undefined += std::string(undefined.empty() ? "" : ";") + name;
    }
    out += csv_join({row.name, std::to_string(row.image_count), format_double(row.precision.value),
                     format_double(row.recall.value), format_double(row.f1.value),
                     format_double(row.ap.value), undefined}) +
           "\n";
  }
  return out;
}

std::string pr_curves_csv(const std::vector<ScoredSample>& samples) {
  std::string out = "class,threshold_rank,recall,precision\n";
  const auto labels = class_labels();
  for (std::size_t c = 0; c < labels.size(); ++c) {
    std::vector<double> scores;
    std::vector<int> truths;
    for (const auto& s : samples) {
      scores.push_back(s.probabilities[c]);
      truths.push_back(s.true_label == labels[c]);
    }
    PRCurve curve;
    try {
      curve = pr_curve(scores, truths);
    } catch (const MetricsError& e) {
      if (e.code() != ErrorCode::NoPositives) throw;
      continue;
    }
    for (std::size_t n = 0; n < curve.points.size(); ++n) {
      out += csv_join({labels[c], std::to_string(n + 1), format_double(curve.points[n].recall),
                       format_double(curve.points[n].precision)}) +
             "\n";
    }
  }
  return out;
}

}  // namespace cxr::metrics
