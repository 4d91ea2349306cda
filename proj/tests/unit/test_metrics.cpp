#include <doctest.h>

#include <cmath>

#include "cxr/common/csv.hpp"
#include "cxr/common/io.hpp"
#include "cxr/common/rng.hpp"
#include "cxr/metrics/confusion.hpp"
#include "cxr/metrics/errors.hpp"
#include "cxr/metrics/evaluate.hpp"
#include "cxr/metrics/pr.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace cxr;
using namespace cxr::metrics;

namespace {

const std::vector<std::string> kLabels = {"COVID-19", "Non-COVID-19", "No Finding"};

std::string metrics_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const MetricsError& e) {
    return error_name(e.code());
  }
  return "ok";
}

}  // namespace

TEST_CASE("one-vs-rest counts on a worked example") {
  const std::vector<std::string> truth = {"COVID-19", "COVID-19", "COVID-19", "Non-COVID-19",
                                          "Non-COVID-19", "No Finding", "No Finding"};
  const std::vector<std::string> pred = {"COVID-19", "COVID-19", "No Finding", "COVID-19",
                                         "Non-COVID-19", "No Finding", "No Finding"};
  const auto cm = confusion(kLabels, truth, pred);
  CHECK(cm.tp(0) == 2);
  CHECK(cm.fp(0) == 1);
  CHECK(cm.fn(0) == 1);
  CHECK(cm.tn(0) == 3);
  CHECK(precision(cm, 0).value == doctest::Approx(2.0 / 3.0));
  CHECK(recall(cm, 0).value == doctest::Approx(2.0 / 3.0));
  CHECK(recall(cm, 1).value == 0.5);
  CHECK(precision(cm, 2).value == doctest::Approx(2.0 / 3.0));
  CHECK(accuracy(cm).value == doctest::Approx(5.0 / 7.0));
  CHECK(f1(cm, 1).value == doctest::Approx(2.0 / 3.0));
  CHECK(metrics_error([&] { confusion(kLabels, truth, std::vector<std::string>{"x"}); }) ==
        "LengthMismatch");
  CHECK(metrics_error([&] {
          confusion(kLabels, std::vector<std::string>{"Flu"}, std::vector<std::string>{"Flu"});
        }) == "UnknownLabel");
}

TEST_CASE("zero denominators are flagged, not NaN") {
  const std::vector<std::string> truth = {"COVID-19", "COVID-19"};
  const std::vector<std::string> pred = {"COVID-19", "COVID-19"};
  const auto cm = confusion(kLabels, truth, pred);
  CHECK(precision(cm, 1) == Metric{0.0, true});
  CHECK(recall(cm, 1) == Metric{0.0, true});
  CHECK(f1(cm, 1) == Metric{0.0, true});
  CHECK(f1_from(0.0, 0.0) == Metric{0.0, true});
  CHECK(precision(cm, 0) == Metric{1.0, false});
}

TEST_CASE("F1 formula lock at 3 d.p.") {
  CHECK(format_fixed(f1_from(0.981, 0.962).value, 3) == "0.971");
  CHECK(format_fixed(f1_from(0.941, 0.967).value, 3) == "0.954");
  CHECK(format_fixed(f1_from(0.952, 0.950).value, 3) == "0.951");
}

TEST_CASE("AP on a hand-worked ranking") {
  const std::vector<double> s = {0.9, 0.8, 0.7, 0.6};
  const std::vector<int> t = {1, 0, 1, 0};
  CHECK(average_precision(pr_curve(s, t)) == doctest::Approx(0.5 + 0.5 * 2.0 / 3.0));
  // Tied block {0.8, 0.8} yields a single point.
  const std::vector<double> tied = {0.9, 0.8, 0.8, 0.1};
  const auto curve = pr_curve(tied, t);
  CHECK(curve.points.size() == 3);
  CHECK(curve.points[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(curve.baseline == 0.5);
}

TEST_CASE("AP equals brute-force threshold enumeration on 1,000 random sets") {
  XorShift64Star rng(2024);
  std::vector<double> scores;
  std::vector<int> truths;
  for (int i = 0; i < 1000; ++i) {
    oracle::random_scored_set(rng, 1 + rng.below(50), scores, truths);
    CHECK(std::abs(average_precision(pr_curve(scores, truths)) -
                   oracle::brute_force_ap(scores, truths)) <= 1e-12);
  }
}

TEST_CASE("PR curve errors") {
  const std::vector<double> s = {0.1, 0.2};
  CHECK(metrics_error([&] { pr_curve(s, std::vector<int>{0, 0}); }) == "NoPositives");
  CHECK(metrics_error([&] { pr_curve(s, std::vector<int>{1}); }) == "LengthMismatch");
}

TEST_CASE("perfect predictions in one fold give 1.0 everywhere") {
  std::vector<ScoredSample> samples;
  for (int i = 0; i < 9; ++i) {
    ScoredSample s;
    s.id = std::to_string(i);
    s.true_label = kLabels[i % 3];
    s.probabilities = {0.1, 0.1, 0.1};
    s.probabilities[i % 3] = 0.8;
    samples.push_back(s);
  }
  const auto r = evaluate(samples, 1);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].name == "Model Average");
  for (const auto& row : r.rows) {
    CHECK(row.precision == Metric{1.0, false});
    CHECK(row.recall == Metric{1.0, false});
    CHECK(row.f1 == Metric{1.0, false});
    CHECK(row.ap == Metric{1.0, false});
  }
  CHECK(r.accuracy.value == 1.0);
}

TEST_CASE("30-sample, 3-fold fixture matches the independent reference script") {
  const auto dir = testpaths::fixtures() / "metrics";
  const auto samples = read_predictions_csv(read_text_file(dir / "predictions.csv"));
  REQUIRE(samples.size() == 30);
  const auto report = evaluate(samples, 3);
  const auto expected = parse_csv(read_text_file(dir / "expected_report.csv"));
  REQUIRE(expected.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const auto& want = expected.rows[i];
    CAPTURE(row.name);
    CHECK(row.name == want[0]);
    CHECK(row.image_count == std::stoul(want[1]));
    CHECK(std::abs(row.precision.value - std::stod(want[2])) <= 1e-12);
    CHECK(std::abs(row.recall.value - std::stod(want[3])) <= 1e-12);
    CHECK(std::abs(row.f1.value - std::stod(want[4])) <= 1e-12);
    CHECK(std::abs(row.ap.value - std::stod(want[5])) <= 1e-12);
  }
  // The CSV rendering round-trips the same numbers.
  const auto rendered = parse_csv(render_csv(report));
  CHECK(rendered.header == expected.header);
  for (std::size_t i = 0; i < rendered.rows.size(); ++i) CHECK(rendered.rows[i][6] == expected.rows[i][6]);
}

TEST_CASE("fold handling") {
  std::vector<ScoredSample> samples(3);
  for (int i = 0; i < 3; ++i) {
    samples[i].id = std::to_string(i);
    samples[i].true_label = kLabels[i];
    samples[i].probabilities = {0.2, 0.3, 0.5};
    samples[i].fold = i == 2 ? 2 : 0;
  }
  CHECK(metrics_error([&] { evaluate(samples, 3); }) == "EmptyFold");
  CHECK(metrics_error([&] { evaluate(samples, 2); }) == "BadInput");
  CHECK(metrics_error([&] { evaluate(samples, 0); }) == "BadInput");
  samples[2].fold = 1;
  const auto r = evaluate(samples, 2);
  // Fold 1 holds no COVID-19 sample, so its AP is undefined there.
  CHECK(r.rows[1].ap.undefined);
}

TEST_CASE("text report: 3 decimals, undefined marker, averaging footer") {
  std::vector<ScoredSample> samples(2);
  samples[0] = {"a", "COVID-19", {0.9, 0.05, 0.05}, 0};
  samples[1] = {"b", "No Finding", {0.1, 0.1, 0.8}, 0};
  const auto text = render_text(evaluate(samples, 1));
  CHECK(text.find("Model Average") != std::string::npos);
  CHECK(text.find("1.000") != std::string::npos);
  CHECK(text.find('*') != std::string::npos);
  CHECK(text.find("macro") != std::string::npos);
}

TEST_CASE("predictions CSV validation") {
  CHECK(metrics_error([] {
          read_predictions_csv("id,true_label,p_covid,p_noncovid,p_nofinding,fold\nx,Flu,0.1,0.2,0.7,0\n");
        }) == "UnknownLabel");
  CHECK(metrics_error([] {
          read_predictions_csv("id,true_label,p_covid,p_noncovid,p_nofinding,fold\nx,COVID-19,abc,0.2,0.7,0\n");
        }) == "BadInput");
  CHECK(metrics_error([] {
          read_predictions_csv("id,true_label,p_covid,p_noncovid,p_nofinding,fold\nx,COVID-19,0.1,0.2,0.7,z\n");
        }) == "BadInput");
}

TEST_CASE("PR curve CSV lists every class") {
  const auto dir = testpaths::fixtures() / "metrics";
  const auto samples = read_predictions_csv(read_text_file(dir / "predictions.csv"));
  const auto t = parse_csv(pr_curves_csv(samples));
  CHECK(t.header == std::vector<std::string>{"class", "threshold_rank", "recall", "precision"});
  std::set<std::string> classes;
  for (const auto& row : t.rows) classes.insert(row[0]);
  CHECK(classes.size() == 3);
}
