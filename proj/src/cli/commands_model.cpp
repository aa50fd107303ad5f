// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <memory>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "roadcond/classifier/architectures.hpp"
#include "roadcond/classifier/model_file.hpp"
#include "roadcond/classifier/synthetic.hpp"
#include "roadcond/cli/app.hpp"
#include "roadcond/cli/bench.hpp"
#include "roadcond/core/csv.hpp"
#include "roadcond/core/error.hpp"
#include "roadcond/dataset/manifest.hpp"
#include "roadcond/dataset/pseudo_label.hpp"
#include "roadcond/imaging/codec.hpp"
#include "roadcond/imaging/resize.hpp"

namespace roadcond::cli {

namespace {

using classifier::TrainingSample;

imaging::Tensor load_tensor(const std::filesystem::path& path, int width, int height) {
  const std::string bytes = read_text(path);
  auto image = imaging::decode_and_check(
      std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  if (image.width() != width || image.height() != height) image = imaging::resize(image, width, height);
  return imaging::rescale_01(image);
}

std::vector<TrainingSample> load_samples(const dataset::DatasetManifest& m, const std::filesystem::path& root,
                                         std::optional<dataset::Split> split, int size) {
  std::vector<TrainingSample> out;
  for (const auto& s : m.samples) {
    if (split && s.split != *split) continue;
    try {
      out.push_back({load_tensor(root / s.image_ref, size, size), s.label});
    } catch (const Error& e) {
      throw Error(fmt::format("sample '{}': {}", s.image_ref, e.what()));
    }
  }
  return out;
}

/// "2000:500" -> {2000, 500}
std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--synthetic", "expected TRAIN:VALIDATION");
  try {
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--synthetic", "expected TRAIN:VALIDATION counts");
  }
}

std::vector<std::string> list_images(const std::filesystem::path& root) {
  std::vector<std::string> refs;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
      refs.push_back(std::filesystem::relative(entry.path(), root).generic_string());
    }
  }
  std::sort(refs.begin(), refs.end());
  return refs;
}

void add_classify(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string model, scheme = "five";
    std::vector<std::string> images;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("classify", "Classify image files with a model");
  sub->add_option("--model", o->model, "RWB1 model file")->required()->check(CLI::ExistingFile);
  sub->add_option("--scheme", o->scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->add_option("images", o->images, "Image files")->required()->check(CLI::ExistingFile);
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const auto backend = classifier::load_external_backend(o->model, to_scheme(o->scheme));
      const auto dims = backend->input_dims();
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& path : o->images) {
        const imaging::Tensor t = load_tensor(path, dims.width, dims.height);
        const auto dist = classifier::classify_checked(*backend, std::span(&t, 1)).at(0);
        if (ctx.json) {
          doc.push_back({{"image", path},
                         {"class", std::string(to_string(dist.argmax()))},
                         {"confidence", dist.confidence()}});
        } else {
          ctx.out << fmt::format("{}\t{}\t{:.4f}\n", path, to_string(dist.argmax()), dist.confidence());
        }
      }
      if (ctx.json) ctx.out << doc.dump(2) << '\n';
      return kExitOk;
    };
  });
}

void add_pseudolabel(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string model, images, out, scheme = "five";
    std::size_t batch = 16;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("pseudolabel", "Suggest labels for a directory of unlabelled images");
  sub->add_option("--model", o->model, "RWB1 model file")->required()->check(CLI::ExistingFile);
  sub->add_option("--images", o->images, "Image directory")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--out", o->out, "Run file (JSON)")->required();
  sub->add_option("--scheme", o->scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->add_option("--batch", o->batch, "Classification batch size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const auto backend = classifier::load_external_backend(o->model, to_scheme(o->scheme));
      const auto run =
          dataset::pseudo_label(*backend, list_images(o->images), dataset::file_loader(o->images), o->batch);
      dataset::save_run(run, o->out);
      if (ctx.json) {
        nlohmann::ordered_json doc{{"labelled", run.labels.size()}, {"failed", run.failed.size()}};
        for (const auto& [c, n] : run.counts()) doc["counts"][std::string(to_string(c))] = n;
        ctx.out << doc.dump(2) << '\n';
      } else {
        ctx.out << fmt::format("{} labelled, {} failed -> {}\n", run.labels.size(), run.failed.size(), o->out);
        for (const auto& [c, n] : run.counts()) ctx.out << fmt::format("  {:<8}{:>8}\n", to_string(c), n);
      }
      return kExitOk;
    };
  });
}

struct DataOpts {
  std::string manifest, images, synthetic, scheme = "five";
  int size = 64;
};

void add_data_options(CLI::App* sub, DataOpts& d, const char* default_synthetic) {
  auto* manifest = sub->add_option("--manifest", d.manifest, "Labelled manifest (JSON lines)")->check(CLI::ExistingFile);
  sub->add_option("--images", d.images, "Image root for manifest refs")->check(CLI::ExistingDirectory);
  auto* synth = sub->add_option("--synthetic", d.synthetic, "Generated corpus TRAIN:VALIDATION instead of a manifest");
  if (default_synthetic) synth->default_str(default_synthetic);
  manifest->excludes(synth);
  sub->add_option("--scheme", d.scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->add_option("--size", d.size, "Input width and height in pixels")->check(CLI::Range(8, 1024))->capture_default_str();
}

/// Training and validation sets from either a manifest or the synthetic generator.
std::pair<std::vector<TrainingSample>, std::vector<TrainingSample>> load_data(const DataOpts& d, std::uint64_t seed,
                                                                               const char* fallback) {
  const Scheme scheme = to_scheme(d.scheme);
  if (!d.manifest.empty()) {
    const auto m = dataset::load_manifest(d.manifest, scheme);
    const std::filesystem::path root =
        d.images.empty() ? std::filesystem::path(d.manifest).parent_path() : std::filesystem::path(d.images);
    auto train = load_samples(m, root, dataset::Split::Train, d.size);
    auto val = load_samples(m, root, dataset::Split::Validation, d.size);
    if (train.empty()) train = load_samples(m, root, std::nullopt, d.size);
    return {std::move(train), std::move(val)};
  }
  const auto [n_train, n_val] = parse_pair(d.synthetic.empty() ? fallback : d.synthetic);
  const auto train = classifier::synthetic::generate(n_train, scheme, d.size, d.size, seed);
  const auto val = classifier::synthetic::generate(n_val, scheme, d.size, d.size, seed ^ 0x5EED5EEDULL);
  return {classifier::synthetic::to_samples(train), classifier::synthetic::to_samples(val)};
}

void add_train(CLI::App& app, Context& ctx) {
  struct Opts {
    DataOpts data;
    std::string out;
    classifier::TrainOptions train;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train", "Train the baseline backend and save it as an RWB1 model");
  add_data_options(sub, o->data, nullptr);
  sub->add_option("--out", o->out, "Model file to write")->required();
  sub->add_option("--seed", o->train.seed, "Shuffle and generator seed")->required();
  sub->add_option("--epochs", o->train.epochs, "Epochs")->capture_default_str();
  sub->add_option("--grid", o->train.grid, "Pooling grid")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--lr", o->train.learning_rate, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--batch", o->train.batch_size, "Minibatch size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->callback([o, &ctx] {
    if (o->data.manifest.empty() && o->data.synthetic.empty()) {
      throw CLI::RequiredError("--manifest or --synthetic");
    }
    ctx.action = [o, &ctx] {
      const Scheme scheme = to_scheme(o->data.scheme);
      const auto [train, val] = load_data(o->data, o->train.seed, "");
      classifier::BaselineTrainer trainer(train, scheme, o->train);
      nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
      for (std::size_t e = 1; e <= o->train.epochs; ++e) {
        const double loss = trainer.run_epoch();
        const double acc = trainer.accuracy(train);
        const double vacc = val.empty() ? 0.0 : trainer.accuracy(val);
        if (ctx.json) {
          epochs.push_back({{"epoch", e}, {"loss", loss}, {"train_accuracy", acc}, {"validation_accuracy", vacc}});
        } else {
          ctx.out << fmt::format("epoch {:>3}  loss {:.4f}  train {:.4f}  val {:.4f}\n", e, loss, acc, vacc);
        }
      }
      classifier::save_rwb1(trainer.model(), o->out);
      if (ctx.json) {
        ctx.out << nlohmann::ordered_json{{"model", o->out}, {"epochs", std::move(epochs)}}.dump(2) << '\n';
      } else {
        ctx.out << fmt::format("saved {}\n", o->out);
      }
      return kExitOk;
    };
  });
}

void add_bench(CLI::App& app, Context& ctx) {
  struct Opts {
    DataOpts data;
    std::vector<std::string> backends{"baseline-8", "baseline-1"};
    BenchOptions bench;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bench", "Train backends side by side and tabulate accuracy and epoch times");
  add_data_options(sub, o->data, "2000:500");
  sub->add_option("--backend", o->backends, "Backends, e.g. baseline-8 baseline-1")->delimiter(',')->capture_default_str();
  sub->add_option("--epochs", o->bench.epochs, "Epochs per backend")->capture_default_str();
  sub->add_option("--seed", o->bench.seed, "Shuffle and generator seed")->required();
  sub->add_option("--lr", o->bench.learning_rate, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--batch", o->bench.batch_size, "Minibatch size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->callback([o, &ctx] {
    if (o->backends.empty()) throw CLI::ValidationError("--backend", "at least one backend is required");
    ctx.action = [o, &ctx] {
      std::vector<std::string> skipped;
      std::vector<std::pair<std::string, int>> runnable;
      for (const auto& name : o->backends) {
        if (const auto grid = baseline_grid(name)) {
          runnable.emplace_back(name, *grid);
        } else {
          spdlog::warn("backend '{}' is not trainable; skipping", name);
          ctx.err << fmt::format("warning: backend '{}' is not trainable; skipped\n", name);
          skipped.push_back(name);
        }
      }
      std::vector<BenchResult> results;
      if (!runnable.empty() && o->bench.epochs > 0) {
        const auto [train, val] = load_data(o->data, o->bench.seed, "2000:500");
        for (const auto& [name, grid] : runnable) {
          results.push_back(bench_baseline(name, grid, train, val, to_scheme(o->data.scheme), o->bench));
        }
      } else {
        for (const auto& [name, grid] : runnable) results.push_back({name, {}});
      }
      if (ctx.json) {
        ctx.out << bench_json(results, skipped);
      } else {
        ctx.out << "accuracy\n" << render_accuracy_table(results) << "\ntime (training + validation + saving)\n"
                << render_timing_table(results);
      }
      return kExitOk;
    };
  });
}

void add_synth(CLI::App& app, Context& ctx) {
  struct Opts {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string out, manifest, scheme = "five";
    int size = 64;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Write a seeded synthetic corpus of PNG scenes and its manifest");
  sub->add_option("--count", o->count, "Number of images")->required()->check(CLI::PositiveNumber);
  sub->add_option("--seed", o->seed, "Generator seed")->required();
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--manifest", o->manifest, "Manifest path; defaults to OUT/manifest.jsonl");
  sub->add_option("--scheme", o->scheme, "Class scheme")->check(scheme_validator())->capture_default_str();
  sub->add_option("--size", o->size, "Width and height in pixels")->check(CLI::Range(8, 1024))->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx] {
      const Scheme scheme = to_scheme(o->scheme);
      const auto corpus = classifier::synthetic::generate(o->count, scheme, o->size, o->size, o->seed);
      std::filesystem::create_directories(o->out);
      dataset::DatasetManifest m{scheme, {}};
      for (std::size_t i = 0; i < corpus.images.size(); ++i) {
        const std::string ref = fmt::format("synth-{:06d}-{}.png", i, to_string(corpus.labels[i]));
        const auto png = imaging::encode_png(corpus.images[i]);
        write_text(std::filesystem::path(o->out) / ref, std::string(png.begin(), png.end()));
        m.samples.push_back({ref, corpus.labels[i], dataset::SampleSource::Random, "synthetic", std::nullopt,
                             dataset::Split::Unassigned});
      }
      const std::filesystem::path manifest =
          o->manifest.empty() ? std::filesystem::path(o->out) / "manifest.jsonl" : std::filesystem::path(o->manifest);
      dataset::save_manifest(m, manifest);
      ctx.out << fmt::format("{} images -> {}, manifest {}\n", corpus.images.size(), o->out, manifest.string());
      return kExitOk;
    };
  });
}

void add_arch(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string name;
    int classes = 5;
    bool list = false;
    bool all_rows = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("arch", "Print layer output shapes and parameter counts of a reference network");
  sub->add_option("name", o->name, "Architecture name (see --list)");
  sub->add_option("--classes", o->classes, "Output classes")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--list", o->list, "List architecture names");
  sub->add_flag("--all-rows", o->all_rows, "Include rows nested inside blocks");
  sub->callback([o, &ctx] {
    if (!o->list && o->name.empty()) throw CLI::RequiredError("name");
    ctx.action = [o, &ctx] {
      if (o->list) {
        for (const auto& n : classifier::arch::names()) ctx.out << n << '\n';
        return kExitOk;
      }
      const auto spec = classifier::arch::by_name(o->name, o->classes);
      const auto rows = o->all_rows ? classifier::trace_shapes(spec) : classifier::infer_shapes(spec);
      const auto params = classifier::count_parameters_split(spec);
      if (ctx.json) {
        nlohmann::ordered_json doc{{"name", spec.name}, {"layers", nlohmann::ordered_json::array()}};
        for (const auto& r : rows) {
          doc["layers"].push_back({{"path", r.path},
                                   {"name", r.name},
                                   {"kind", std::string(classifier::to_string(r.kind))},
                                   {"output", classifier::to_string(r.output)},
                                   {"params", r.params}});
        }
        doc["total_params"] = params.total;
        doc["trainable_params"] = params.trainable;
        doc["non_trainable_params"] = params.non_trainable();
        ctx.out << doc.dump(2) << '\n';
        return kExitOk;
      }
      ctx.out << fmt::format("{:<12}{:<24}{:<16}{:<18}{:>14}\n", "path", "name", "kind", "output", "params");
      for (const auto& r : rows) {
        ctx.out << fmt::format("{:<12}{:<24}{:<16}{:<18}{:>14}\n", r.path, r.name, classifier::to_string(r.kind),
                               classifier::to_string(r.output), r.params);
      }
      ctx.out << fmt::format("total params {}\ntrainable params {}\nnon-trainable params {}\n", params.total,
                             params.trainable, params.non_trainable());
      return kExitOk;
    };
  });
}

}  // namespace

void add_model_commands(CLI::App& app, Context& ctx) {
  add_classify(app, ctx);
  add_pseudolabel(app, ctx);
  add_train(app, ctx);
  add_bench(app, ctx);
  add_synth(app, ctx);
  add_arch(app, ctx);
}

}  // namespace roadcond::cli
