// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include <json.hpp>

#include "roadcond/core/random.hpp"
#include "roadcond/metrics/confusion.hpp"
#include "roadcond/metrics/report.hpp"
#include "test_support.hpp"

using namespace roadcond;
using namespace roadcond::metrics;
using roadcond::testing::fixture;
using roadcond::testing::slurp;

namespace {

constexpr auto D = RoadCondition::Dry;
constexpr auto N = RoadCondition::NonDry;

ConfusionMatrix resnet_phase1() { return ConfusionMatrix(Scheme::TwoClass, {{193, 7}, {125, 75}}); }

double r2(double v) { return round_decimal(v, 2); }

}  // namespace

TEST_CASE("accumulate touches one cell") {
  ConfusionMatrix cm(Scheme::TwoClass);
  cm.accumulate(D, D);
  CHECK(cm.counts() == std::vector<std::vector<std::uint64_t>>{{1, 0}, {0, 0}});
  ConfusionMatrix other(Scheme::TwoClass);
  other.accumulate(D, N);
  CHECK(other.counts() == std::vector<std::vector<std::uint64_t>>{{0, 1}, {0, 0}});
  CHECK_THROWS_AS(cm.accumulate(RoadCondition::Poor, D), Error);
  CHECK_THROWS_AS(ConfusionMatrix(Scheme::TwoClass, {{1, 2, 3}, {4, 5, 6}}), Error);
}

TEST_CASE("400 accumulations rebuild the phase-1 ResNet matrix") {
  ConfusionMatrix cm(Scheme::TwoClass);
  for (int i = 0; i < 193; ++i) cm.accumulate(D, D);
  for (int i = 0; i < 7; ++i) cm.accumulate(D, N);
  for (int i = 0; i < 125; ++i) cm.accumulate(N, D);
  for (int i = 0; i < 75; ++i) cm.accumulate(N, N);
  CHECK(cm == resnet_phase1());
  CHECK(cm.total() == 400);
}

TEST_CASE("phase-1 ResNet metrics") {
  const auto cm = resnet_phase1();
  CHECK(precision(cm, D).value == doctest::Approx(193.0 / 318.0));
  CHECK(recall(cm, D).value == doctest::Approx(193.0 / 200.0));
  CHECK(r2(precision(cm, D).value) == 0.61);
  CHECK(r2(recall(cm, D).value) == 0.96);
  CHECK(r2(f1(cm, D).value) == 0.75);
  CHECK(accuracy(cm) == doctest::Approx(0.67));
}

TEST_CASE("hand-enumerated metrics") {
  const ConfusionMatrix perfect(Scheme::TwoClass, {{5, 0}, {0, 5}});
  const ConfusionMatrix mixed(Scheme::TwoClass, {{2, 1}, {1, 2}});
  for (RoadCondition c : {D, N}) {
    CHECK(precision(perfect, c).value == 1.0);
    CHECK(recall(perfect, c).value == 1.0);
    CHECK(f1(perfect, c).value == 1.0);
    CHECK(precision(mixed, c).value == doctest::Approx(2.0 / 3.0));
    CHECK(recall(mixed, c).value == doctest::Approx(2.0 / 3.0));
    CHECK(f1(mixed, c).value == doctest::Approx(2.0 / 3.0));
  }
}

TEST_CASE("zero denominators are flagged") {
  const ConfusionMatrix cm(Scheme::TwoClass, {{4, 0}, {0, 0}});
  const auto p = precision(cm, N);
  CHECK(p.undefined);
  CHECK(p.value == 0.0);
  CHECK(recall(cm, N).undefined);
  CHECK(f1(cm, N).undefined);
  CHECK_FALSE(precision(cm, D).undefined);
  CHECK_THROWS_AS(accuracy(ConfusionMatrix(Scheme::TwoClass)), Error);
  CHECK_THROWS_AS(make_report(ConfusionMatrix(Scheme::TwoClass)), Error);
}

TEST_CASE("published accuracies") {
  const auto acc = [](const char* name) {
    return accuracy(load_matrix_json(fixture(std::string("metrics/") + name + ".json")));
  };
  CHECK(acc("phase1_resnet50_2class") == doctest::Approx(268.0 / 400.0));
  CHECK(acc("phase1_vgg16_2class") == doctest::Approx(329.0 / 400.0));
  CHECK(acc("phase3_vgg16_5class") == doctest::Approx(3642.0 / 4091.0));
  CHECK(round_decimal(100.0 * acc("phase1_vgg16_2class"), 1) == 82.3);
  CHECK(round_decimal(100.0 * acc("phase4_efficientnet_b4_5class"), 1) == 90.9);
}

TEST_CASE("IRNV2 five-class F1 row") {
  const auto cm = load_matrix_json(fixture("metrics/phase4_inception_resnet_v2_5class.json"));
  CHECK(r2(f1(cm, RoadCondition::Dry).value) == 0.91);
  CHECK(r2(f1(cm, RoadCondition::Offline).value) == 0.99);
  CHECK(r2(f1(cm, RoadCondition::Poor).value) == 0.88);
  CHECK(r2(f1(cm, RoadCondition::Snow).value) == 0.91);
  CHECK(r2(f1(cm, RoadCondition::Wet).value) == 0.88);
}

TEST_CASE("phase-3 Dry F1 is the matrix value, not the printed one") {
  const auto cm = load_matrix_json(fixture("metrics/phase3_vgg16_5class.json"));
  const double f = f1(cm, RoadCondition::Dry).value;
  CHECK(f == doctest::Approx(2.0 * 1780 / (2025.0 + 1924.0)));
  CHECK(r2(f) != 0.93);
  const double printed_harmonic = 2 * 0.88 * 0.90 / (0.88 + 0.90);
  CHECK(r2(printed_harmonic) == 0.89);
}

TEST_CASE("every published report cell within tolerance") {
  for (const auto& entry : std::filesystem::directory_iterator(fixture("metrics"))) {
    const auto doc = nlohmann::json::parse(slurp(entry.path()));
    CAPTURE(entry.path().filename().string());
    const auto cm = parse_matrix_json(slurp(entry.path()));
    std::set<std::pair<std::string, std::string>> swapped;
    if (doc.contains("printed_swaps")) {
      for (const auto& s : doc["printed_swaps"]) {
        const auto cls = s["class"].get<std::string>();
        for (const auto& column : s["columns"]) swapped.insert({cls, column.get<std::string>()});
      }
    }
    for (const auto& [cls, row] : doc["report"].items()) {
      const auto c = parse_road_condition(cls);
      REQUIRE(c);
      CAPTURE(cls);
      std::map<std::string, double> computed{{"precision", precision(cm, *c).value},
                                             {"recall", recall(cm, *c).value},
                                             {"f1", f1(cm, *c).value}};
      for (const auto& [column, value] : computed) {
        std::string printed_column = column;
        if (swapped.count({cls, column})) printed_column = column == "recall" ? "f1" : "recall";
        CAPTURE(column);
        CHECK(std::abs(r2(value) - row[printed_column].get<double>()) <= 0.005 + 1e-9);
      }
      const auto idx = class_index(cm.scheme(), *c);
      CHECK(cm.row_sum(*idx) == row["support"].get<std::uint64_t>());
    }
    CHECK(std::abs(100.0 * accuracy(cm) - doc["accuracy_percent"].get<double>()) <= 0.05 + 1e-9);
  }
}

TEST_CASE("metrics are scale invariant and accuracy is support-weighted recall") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::uint64_t>> counts(5, std::vector<std::uint64_t>(5));
    for (auto& row : counts) {
      for (auto& v : row) v = 1 + rng.below(50);
    }
    const ConfusionMatrix cm(Scheme::FiveClass, counts);
    const auto k = 1 + rng.below(9);
    auto scaled_counts = counts;
    for (auto& row : scaled_counts) {
      for (auto& v : row) v *= k;
    }
    const ConfusionMatrix scaled(Scheme::FiveClass, scaled_counts);
    double weighted = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto c = classes_of(Scheme::FiveClass)[i];
      CHECK(precision(cm, c).value == doctest::Approx(precision(scaled, c).value).epsilon(1e-12));
      CHECK(recall(cm, c).value == doctest::Approx(recall(scaled, c).value).epsilon(1e-12));
      CHECK(f1(cm, c).value == doctest::Approx(f1(scaled, c).value).epsilon(1e-12));
      weighted += recall(cm, c).value * static_cast<double>(cm.row_sum(i));
    }
    CHECK(accuracy(cm) == doctest::Approx(weighted / static_cast<double>(cm.total())).epsilon(1e-12));
  }
}

TEST_CASE("merge is commutative and associative") {
  SplitMix64 rng(5);
  const auto random_cm = [&] {
    ConfusionMatrix cm(Scheme::FourClass);
    for (int i = 0; i < 50; ++i) {
      cm.accumulate(classes_of(Scheme::FourClass)[rng.below(4)], classes_of(Scheme::FourClass)[rng.below(4)]);
    }
    return cm;
  };
  const auto a = random_cm(), b = random_cm(), c = random_cm();
  CHECK(merge(a, b) == merge(b, a));
  CHECK(merge(merge(a, b), c) == merge(a, merge(b, c)));
  CHECK(merge(a, b).total() == 100);
  CHECK_THROWS_AS(merge(a, ConfusionMatrix(Scheme::FiveClass)), Error);
}

TEST_CASE("matrix json honours the file's class order") {
  const auto cm = parse_matrix_json(R"({"classes": ["NonDry", "Dry"], "matrix": [[75, 125], [7, 193]]})");
  CHECK(cm == resnet_phase1());
  CHECK_THROWS_AS(parse_matrix_json(R"({"classes": ["Dry", "Dry"], "matrix": [[1,0],[0,1]]})"), Error);
  CHECK_THROWS_AS(parse_matrix_json("[1,2]"), Error);
}

TEST_CASE("rendering") {
  const auto report = make_report(resnet_phase1());
  const auto text = render_text(report, 2);
  CHECK(text.find("67.0%") != std::string::npos);
  CHECK(text.find("0.96") != std::string::npos);
  const auto csv = render_csv(report, 2);
  CHECK(csv.rfind("class,precision,recall,f1,support", 0) == 0);
  CHECK(csv.find("Dry,0.61,0.96,0.75,200") != std::string::npos);
  const auto json = nlohmann::json::parse(render_json(report, 2));
  CHECK(json.dump().find("0.61") != std::string::npos);

  const ConfusionMatrix identity(Scheme::FiveClass, {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                     {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}});
  const auto id_report = make_report(identity);
  for (const auto& row : id_report.classes) {
    CHECK(row.precision.value == 1.0);
    CHECK(row.recall.value == 1.0);
    CHECK(row.f1.value == 1.0);
  }
  CHECK(render_text(id_report).find("1.00") != std::string::npos);
}

TEST_CASE("round_decimal is half away from zero on the stored value") {
  CHECK(round_decimal(193.0 / 200.0, 2) == 0.96);
  CHECK(round_decimal(0.125, 2) == 0.13);
  CHECK(round_decimal(-0.125, 2) == -0.13);
  CHECK(round_decimal(0.7451, 2) == 0.75);
  CHECK(round_decimal(82.25, 1) == 82.3);
  CHECK(round_decimal(9.995, 2) == 9.99);
  CHECK(round_decimal(99.95, 1) == 100.0);
  CHECK(round_decimal(0.5, 0) == 1.0);
  CHECK(round_decimal(-0.001, 2) == 0.0);
  const auto text = render_text(make_report(ConfusionMatrix(Scheme::TwoClass, {{176, 24}, {47, 153}})));
  CHECK(text.find("82.3%") != std::string::npos);
}
