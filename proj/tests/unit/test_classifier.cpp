// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "roadcond/classifier/backend.hpp"
#include "roadcond/classifier/baseline.hpp"
#include "roadcond/classifier/classify.hpp"
#include "roadcond/classifier/distribution.hpp"
#include "roadcond/classifier/model_file.hpp"
#include "roadcond/classifier/synthetic.hpp"
#include "roadcond/core/random.hpp"
#include "roadcond/core/time.hpp"
#include "roadcond/imaging/resize.hpp"
#include "test_support.hpp"

using namespace roadcond;
using namespace roadcond::classifier;
using roadcond::testing::TempDir;

namespace {

imaging::Tensor random_tensor(int w, int h, SplitMix64& rng) {
  imaging::Tensor t{w, h, std::vector<float>(static_cast<std::size_t>(w) * h * 3)};
  for (auto& v : t.values) v = static_cast<float>(rng.uniform01());
  return t;
}

std::vector<ingest::CameraRecord> cameras(std::size_t n) {
  std::vector<ingest::CameraRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"cam" + std::to_string(i), "http://x/" + std::to_string(i), 40.0 + static_cast<double>(i),
                   -70.0 - static_cast<double>(i), std::nullopt});
  }
  return out;
}

std::shared_ptr<BaselineBackend> small_trained_model() {
  const auto corpus = synthetic::generate(300, Scheme::FiveClass, 24, 24, 3);
  TrainOptions opts;
  opts.seed = 3;
  opts.epochs = 4;
  return train_baseline(synthetic::to_samples(corpus), Scheme::FiveClass, opts);
}

}  // namespace

TEST_CASE("class distributions") {
  const ClassDistribution d(Scheme::FiveClass, {0.1, 0.2, 0.3, 0.2, 0.2});
  CHECK(d.argmax() == RoadCondition::Snow);
  CHECK(d.confidence() == doctest::Approx(0.3));
  CHECK(d.probability(RoadCondition::Wet) == doctest::Approx(0.2));
  CHECK_THROWS_AS(ClassDistribution(Scheme::FiveClass, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(ClassDistribution(Scheme::TwoClass, {0.7, 0.7}), Error);
  CHECK_THROWS_AS(ClassDistribution(Scheme::TwoClass, {1.5, -0.5}), Error);

  const ClassDistribution tie(Scheme::FourClass, {0.1, 0.4, 0.4, 0.1});
  CHECK(tie.argmax() == RoadCondition::Wet);
  const ClassDistribution flat(Scheme::FiveClass, {0.2, 0.2, 0.2, 0.2, 0.2});
  CHECK(flat.argmax() == RoadCondition::Dry);

  CHECK(ClassDistribution::one_hot(Scheme::TwoClass, RoadCondition::NonDry).argmax() == RoadCondition::NonDry);
  const std::vector<double> logits{1000.0, 1001.0, 999.0};
  const auto p = softmax(logits);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
  CHECK(p[1] > p[0]);
  CHECK(p[0] == doctest::Approx(std::exp(-1.0) / (1 + std::exp(-1.0) + std::exp(-2.0))));
}

TEST_CASE("classify_batch with a constant backend") {
  std::vector<double> probs{0.7, 0.075, 0.075, 0.075, 0.075};
  const ConstantBackend backend(ClassDistribution(Scheme::FiveClass, probs), {4, 4});
  const Timestamp now = parse_iso8601("2021-02-03T04:05:06Z");
  CHECK(classify_batch(backend, {}, {}, now).empty());

  std::vector<imaging::Image> images(3, imaging::Image(4, 4));
  const auto cams = cameras(3);
  const auto out = classify_batch(backend, images, cams, now);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out[i].camera_id == cams[i].camera_id);
    CHECK(out[i].label == RoadCondition::Dry);
    CHECK(out[i].confidence == doctest::Approx(0.7));
    CHECK(out[i].timestamp == now);
    CHECK(out[i].latitude == cams[i].latitude);
  }
}

TEST_CASE("classify_batch rejects mismatches and names the index") {
  const ConstantBackend backend(ClassDistribution::one_hot(Scheme::FiveClass, RoadCondition::Dry), {4, 4});
  std::vector<imaging::Image> images{imaging::Image(4, 4), imaging::Image(4, 4), imaging::Image(5, 4)};
  try {
    classify_batch(backend, images, cameras(3), now_utc());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(classify_batch(backend, images, cameras(2), now_utc()), Error);
}

TEST_CASE("classify_batch is permutation-equivariant") {
  const auto backend = small_trained_model();
  SplitMix64 rng(4);
  std::vector<imaging::Image> images;
  for (int i = 0; i < 12; ++i) {
    images.push_back(synthetic::scene(classes_of(Scheme::FiveClass)[rng.below(5)], 24, 24, rng));
  }
  const auto cams = cameras(12);
  const Timestamp now = now_utc();
  const auto base = classify_batch(*backend, images, cams, now);

  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(perm, rng);
  std::vector<imaging::Image> p_images;
  std::vector<ingest::CameraRecord> p_cams;
  for (auto i : perm) {
    p_images.push_back(images[i]);
    p_cams.push_back(cams[i]);
  }
  const auto permuted = classify_batch(*backend, p_images, p_cams, now);
  for (std::size_t k = 0; k < perm.size(); ++k) CHECK(permuted[k] == base[perm[k]]);
}

TEST_CASE("baseline separates dark from bright within 20 epochs") {
  std::vector<TrainingSample> samples;
  SplitMix64 rng(8);
  for (int i = 0; i < 40; ++i) {
    const bool bright = i % 2 == 0;
    imaging::Tensor t{8, 8, std::vector<float>(8 * 8 * 3)};
    for (auto& v : t.values) v = static_cast<float>(bright ? rng.uniform(0.7, 1.0) : rng.uniform(0.0, 0.3));
    samples.push_back({std::move(t), bright ? RoadCondition::Dry : RoadCondition::NonDry});
  }
  TrainOptions opts;
  opts.epochs = 20;
  BaselineTrainer trainer(samples, Scheme::TwoClass, opts);
  bool reached = false;
  for (int e = 0; e < 20 && !reached; ++e) {
    trainer.run_epoch();
    reached = trainer.accuracy(samples) == 1.0;
  }
  CHECK(reached);
}

TEST_CASE("baseline training input checks") {
  TrainOptions opts;
  CHECK_THROWS_AS(train_baseline({}, Scheme::FiveClass, opts), Error);
  imaging::Tensor t{4, 4, std::vector<float>(48, 0.5f)};
  std::vector<TrainingSample> one_class{{t, RoadCondition::Dry}, {t, RoadCondition::Dry}};
  CHECK_THROWS_AS(train_baseline(one_class, Scheme::FiveClass, opts), Error);
  std::vector<TrainingSample> wrong{{t, RoadCondition::Dry}, {t, RoadCondition::NonDry}};
  CHECK_THROWS_AS(train_baseline(wrong, Scheme::FiveClass, opts), Error);
  imaging::Tensor other{5, 4, std::vector<float>(60, 0.5f)};
  std::vector<TrainingSample> mixed{{t, RoadCondition::Dry}, {other, RoadCondition::Wet}};
  CHECK_THROWS_AS(train_baseline(mixed, Scheme::FiveClass, opts), Error);
}

TEST_CASE("baseline training is deterministic") {
  const auto corpus = synthetic::generate(120, Scheme::FourClass, 16, 16, 21);
  TrainOptions opts;
  opts.seed = 21;
  opts.epochs = 3;
  const auto samples = synthetic::to_samples(corpus);
  CHECK(train_baseline(samples, Scheme::FourClass, opts)->model() ==
        train_baseline(samples, Scheme::FourClass, opts)->model());
}

TEST_CASE("baseline reaches 95% on held-out synthetic scenes") {
  const auto train = synthetic::generate(1000, Scheme::FiveClass, 32, 32, 100);
  const auto val = synthetic::generate(300, Scheme::FiveClass, 32, 32, 101);
  TrainOptions opts;
  opts.seed = 100;
  const auto backend = train_baseline(synthetic::to_samples(train), Scheme::FiveClass, opts);
  std::size_t correct = 0;
  const auto cams = cameras(val.images.size());
  const auto records = classify_batch(*backend, val.images, cams, now_utc());
  for (std::size_t i = 0; i < records.size(); ++i) correct += records[i].label == val.labels[i];
  CHECK(static_cast<double>(correct) / static_cast<double>(records.size()) >= 0.95);
}

TEST_CASE("pooled features") {
  imaging::Tensor t{4, 2, std::vector<float>(24)};
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 4; ++x) {
      for (int c = 0; c < 3; ++c) t.values[(y * 4 + x) * 3 + c] = static_cast<float>(x < 2 ? 0.0 : 1.0);
    }
  }
  const auto f = pooled_features(t, 2);
  REQUIRE(f.size() == 12);
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[3] == doctest::Approx(1.0));
  // A grid finer than the image still yields grid*grid*3 features.
  CHECK(pooled_features(t, 8).size() == 192);
}

TEST_CASE("synthetic corpus is deterministic and labelled") {
  const auto a = synthetic::generate(50, Scheme::TwoClass, 20, 10, 5);
  const auto b = synthetic::generate(50, Scheme::TwoClass, 20, 10, 5);
  CHECK(a.images == b.images);
  CHECK(a.labels == b.labels);
  for (auto l : a.labels) CHECK(in_scheme(Scheme::TwoClass, l));
  CHECK(a.images[0].width() == 20);
  CHECK(a.images[0].height() == 10);
}

TEST_CASE("RWB1 round trip agrees with the in-memory backend") {
  const auto backend = small_trained_model();
  TempDir dir;
  const auto path = dir / "model.rwb1";
  save_rwb1(backend->model(), path);
  const auto loaded = load_external_backend(path, Scheme::FiveClass);
  CHECK(loaded->input_dims() == backend->input_dims());

  SplitMix64 rng(77);
  std::vector<imaging::Tensor> batch;
  for (int i = 0; i < 100; ++i) batch.push_back(random_tensor(24, 24, rng));
  const auto expected = backend->classify(batch);
  const auto actual = loaded->classify(batch);
  REQUIRE(actual.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(actual[i].argmax() == expected[i].argmax());
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(actual[i].probabilities()[k] == doctest::Approx(expected[i].probabilities()[k]).epsilon(1e-6));
    }
  }
  const auto bytes = encode_rwb1(backend->model());
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RWB1");
  CHECK(decode_rwb1(bytes) == backend->model());
}

TEST_CASE("RWB1 loader errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_external_backend(dir / "missing.rwb1", Scheme::FiveClass), Error);

  const auto corpus = synthetic::generate(80, Scheme::FourClass, 16, 16, 9);
  TrainOptions opts;
  opts.epochs = 1;
  const auto four = train_baseline(synthetic::to_samples(corpus), Scheme::FourClass, opts);
  save_rwb1(four->model(), dir / "four.rwb1");
  CHECK_THROWS_AS(load_external_backend(dir / "four.rwb1", Scheme::FiveClass), Error);
  CHECK_NOTHROW(load_external_backend(dir / "four.rwb1", Scheme::FourClass));

  auto bytes = encode_rwb1(four->model());
  bytes.resize(bytes.size() - 3);
  CHECK_THROWS_AS(decode_rwb1(bytes), Error);
  bytes[0] = 'X';
  CHECK_THROWS_AS(decode_rwb1(bytes), Error);

  std::ofstream(dir / "model.onnx") << "onnx";
  CHECK_THROWS_AS(load_external_backend(dir / "model.onnx", Scheme::FiveClass), Error);
}

TEST_CASE("classify_checked validates backend output") {
  struct Broken final : Backend {
    std::string name() const override { return "broken"; }
    InputDims input_dims() const override { return {2, 2}; }
    Scheme scheme() const override { return Scheme::FiveClass; }
    std::vector<ClassDistribution> classify(std::span<const imaging::Tensor>) const override { return {}; }
  };
  const Broken broken;
  std::vector<imaging::Tensor> batch{imaging::Tensor{2, 2, std::vector<float>(12)}};
  CHECK_THROWS_AS(classify_checked(broken, batch), Error);
}
