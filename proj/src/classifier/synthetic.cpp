// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier::synthetic {
namespace {

using Rgb = std::array<double, 3>;

Rgb jitter(Rgb base, double amount, SplitMix64& rng) {
  const double shared = rng.uniform(-amount, amount);
  for (double& v : base) v += shared + rng.uniform(-amount / 3, amount / 3);
  return base;
}

std::uint8_t clamp_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

struct Painter {
  imaging::Image& img;
  SplitMix64& rng;
  double noise;

  void put(int x, int y, const Rgb& rgb) {
    for (int c = 0; c < imaging::kChannels; ++c) img.at(x, y, c) = clamp_pixel(rgb[c] + noise * rng.normal());
  }
};

}  // namespace

imaging::Image scene(RoadCondition label, int width, int height, SplitMix64& rng) {
  if (width < 1 || height < 1) throw Error("scene dims must be >= 1");
  if (label == RoadCondition::NonDry) label = rng.coin() ? RoadCondition::Wet : RoadCondition::Snow;

  imaging::Image img(width, height);
  const int horizon = static_cast<int>(height * rng.uniform(0.3, 0.5));
  const double centre = width * rng.uniform(0.4, 0.6);

  switch (label) {
    case RoadCondition::Dry: {
      Painter p{img, rng, 6.0};
      const Rgb sky = jitter({120, 165, 215}, 20, rng);
      const Rgb road = jitter({125, 123, 118}, 15, rng);
      const Rgb paint = jitter({225, 215, 150}, 10, rng);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          if (y < horizon) p.put(x, y, sky);
          else p.put(x, y, std::abs(x - centre) < width * 0.04 ? paint : road);
        }
      }
      break;
    }
    case RoadCondition::Wet: {
      Painter p{img, rng, 8.0};
      const Rgb sky = jitter({150, 155, 162}, 15, rng);
      const Rgb road = jitter({55, 60, 72}, 12, rng);
      const Rgb glint = jitter({205, 210, 220}, 15, rng);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          if (y < horizon) p.put(x, y, sky);
          else p.put(x, y, rng.uniform01() < 0.06 ? glint : road);
        }
      }
      break;
    }
    case RoadCondition::Snow: {
      Painter p{img, rng, 6.0};
      const Rgb sky = jitter({196, 202, 210}, 15, rng);
      const Rgb road = jitter({228, 230, 236}, 10, rng);
      const Rgb track = jitter({140, 140, 145}, 15, rng);
      const double offset = width * rng.uniform(0.12, 0.2);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const bool in_track = std::abs(std::abs(x - centre) - offset) < width * 0.04;
          if (y < horizon) p.put(x, y, sky);
          else p.put(x, y, in_track ? track : road);
        }
      }
      break;
    }
    case RoadCondition::Offline: {
      Painter p{img, rng, 1.5};
      static constexpr std::array<Rgb, 3> kPlaceholders{{{10, 10, 12}, {25, 50, 130}, {95, 95, 98}}};
      const Rgb field = jitter(kPlaceholders[rng.below(kPlaceholders.size())], 6, rng);
      const Rgb caption = jitter({235, 235, 235}, 8, rng);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const bool in_caption = std::abs(x - width / 2.0) < width * 0.3 &&
                                  std::abs(y - height / 2.0) < height * 0.1;
          p.put(x, y, in_caption ? caption : field);
        }
      }
      break;
    }
    case RoadCondition::Poor:
    case RoadCondition::NonDry: {
      Painter p{img, rng, 22.0};
      const Rgb dark = jitter({22, 20, 24}, 10, rng);
      const Rgb lamp = jitter({180, 120, 50}, 20, rng);
      const double lx = width * rng.uniform(0.1, 0.9);
      const double ly = height * rng.uniform(0.05, 0.3);
      const double radius = std::max(1.0, width * 0.06);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          p.put(x, y, std::hypot(x - lx, y - ly) < radius ? lamp : dark);
        }
      }
      break;
    }
  }
  return img;
}

Corpus generate(std::size_t count, Scheme scheme, int width, int height, std::uint64_t seed) {
  const auto classes = classes_of(scheme);
  Corpus corpus;
  corpus.images.reserve(count);
  corpus.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = SplitMix64::derive(seed, i);
    const RoadCondition label = classes[rng.below(classes.size())];
    corpus.images.push_back(scene(label, width, height, rng));
    corpus.labels.push_back(label);
  }
  return corpus;
}

std::vector<TrainingSample> to_samples(const Corpus& corpus) {
  std::vector<TrainingSample> out;
  out.reserve(corpus.images.size());
  for (std::size_t i = 0; i < corpus.images.size(); ++i) {
    out.push_back({imaging::rescale_01(corpus.images[i]), corpus.labels[i]});
  }
  return out;
}

}  // namespace roadcond::classifier::synthetic
