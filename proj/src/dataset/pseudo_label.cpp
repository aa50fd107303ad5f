// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/dataset/pseudo_label.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "roadcond/core/error.hpp"
#include "roadcond/imaging/codec.hpp"
#include "roadcond/imaging/resize.hpp"

namespace roadcond::dataset {

std::map<RoadCondition, std::size_t> PseudoLabelRun::counts() const {
  std::map<RoadCondition, std::size_t> out;
  for (auto c : classes_of(scheme)) out[c] = 0;
  for (const auto& l : labels) ++out[l.label];
  return out;
}

const PseudoLabel* PseudoLabelRun::find(std::string_view image_ref) const {
  for (const auto& l : labels) {
    if (l.image_ref == image_ref) return &l;
  }
  return nullptr;
}

ImageLoader file_loader(std::filesystem::path root) {
  return [root = std::move(root)](const std::string& ref) {
    const auto path = root / ref;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };
}

PseudoLabelRun pseudo_label(const classifier::Backend& backend, const std::vector<std::string>& refs,
                            const ImageLoader& loader, std::size_t batch_size) {
  if (batch_size < 1) throw Error("batch size must be >= 1");
  PseudoLabelRun run{backend.name(), backend.scheme(), {}, {}};
  const auto dims = backend.input_dims();

  std::vector<std::string> batch_refs;
  std::vector<imaging::Tensor> batch;
  const auto flush = [&] {
    if (batch.empty()) return;
    const auto dists = classifier::classify_checked(backend, batch);
    for (std::size_t i = 0; i < dists.size(); ++i) {
      run.labels.push_back({batch_refs[i], dists[i].argmax(), dists[i].confidence()});
    }
    batch.clear();
    batch_refs.clear();
  };

  for (const auto& ref : refs) {
    try {
      const auto bytes = loader(ref);
      const auto img = imaging::resize(imaging::decode_and_check(bytes), dims.width, dims.height);
      batch.push_back(imaging::rescale_01(img));
      batch_refs.push_back(ref);
    } catch (const std::exception& e) {
      spdlog::warn("pseudo-label: skipping '{}': {}", ref, e.what());
      run.failed.push_back(ref);
      continue;
    }
    if (batch.size() == batch_size) flush();
  }
  flush();
  return run;
}

std::string format_run(const PseudoLabelRun& run) {
  nlohmann::ordered_json doc;
  doc["backend"] = run.backend;
  doc["scheme"] = std::string(to_string(run.scheme));
  auto& labels = doc["labels"] = nlohmann::ordered_json::array();
  for (const auto& l : run.labels) {
    labels.push_back({{"image_ref", l.image_ref},
                      {"label", std::string(to_string(l.label))},
                      {"confidence", l.confidence}});
  }
  doc["failed"] = run.failed;
  return doc.dump(2) + "\n";
}

PseudoLabelRun parse_run(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    PseudoLabelRun run;
    run.backend = doc.value("backend", "");
    const auto scheme = parse_scheme(doc.at("scheme").get<std::string>());
    if (!scheme) throw Error(fmt::format("unknown scheme {}", doc.at("scheme").dump()));
    run.scheme = *scheme;
    for (const auto& l : doc.at("labels")) {
      const auto label = parse_road_condition(l.at("label").get<std::string>());
      if (!label || !in_scheme(run.scheme, *label)) {
        throw Error(fmt::format("label {} is not a {} class", l.at("label").dump(), to_string(run.scheme)));
      }
      const double conf = l.at("confidence").get<double>();
      if (!(conf >= 0.0 && conf <= 1.0)) throw Error(fmt::format("confidence {} outside [0, 1]", conf));
      run.labels.push_back({l.at("image_ref").get<std::string>(), *label, conf});
    }
    if (doc.contains("failed")) run.failed = doc["failed"].get<std::vector<std::string>>();
    return run;
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("pseudo-label run: {}", e.what()));
  }
}

PseudoLabelRun load_run(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run(buffer.str());
}

void save_run(const PseudoLabelRun& run, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << format_run(run);
}

}  // namespace roadcond::dataset
