// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "roadcond/classifier/baseline.hpp"
#include "roadcond/core/random.hpp"
#include "roadcond/imaging/image.hpp"

namespace roadcond::classifier::synthetic {

/// Colour-field road scenes with a known class:
///   Dry      blue sky over mid-grey asphalt with a lane marking
///   Wet      grey sky over dark asphalt with specular glints
///   Snow     pale sky over white road with grey tyre tracks
///   Offline  flat placeholder colour with a bright caption block
///   Poor     near-black frame with heavy sensor noise
/// NonDry draws one of Wet or Snow.
imaging::Image scene(RoadCondition label, int width, int height, SplitMix64& rng);

struct Corpus {
  std::vector<imaging::Image> images;
  std::vector<RoadCondition> labels;
};

/// `count` scenes whose labels are drawn uniformly from the scheme's
/// classes. Deterministic in all arguments.
Corpus generate(std::size_t count, Scheme scheme, int width, int height, std::uint64_t seed);

std::vector<TrainingSample> to_samples(const Corpus& corpus);

}  // namespace roadcond::classifier::synthetic
