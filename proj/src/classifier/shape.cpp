// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/shape.hpp"

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv: return "conv";
    case LayerKind::SeparableConv: return "separable_conv";
    case LayerKind::MaxPool: return "maxpool";
    case LayerKind::AvgPoolGlobal: return "avgpool_global";
    case LayerKind::Dense: return "dense";
    case LayerKind::Dropout: return "dropout";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::BranchConcat: return "branch_concat";
    case LayerKind::Repeat: return "repeat";
    case LayerKind::Residual: return "residual";
  }
  return "unknown";
}

LayerSpec LayerSpec::conv(int k, int filters, int stride, Padding padding) {
  return conv(k, k, filters, stride, padding);
}

LayerSpec LayerSpec::conv(int kh, int kw, int filters, int stride, Padding padding) {
  LayerSpec l;
  l.kind = LayerKind::Conv;
  l.kh = kh;
  l.kw = kw;
  l.filters = filters;
  l.stride = stride;
  l.padding = padding;
  return l;
}

LayerSpec LayerSpec::separable(int k, int filters, int stride, Padding padding) {
  LayerSpec l = conv(k, k, filters, stride, padding);
  l.kind = LayerKind::SeparableConv;
  return l;
}

LayerSpec LayerSpec::maxpool(int k, int stride, Padding padding) {
  LayerSpec l;
  l.kind = LayerKind::MaxPool;
  l.kh = l.kw = k;
  l.stride = stride;
  l.padding = padding;
  return l;
}

LayerSpec LayerSpec::global_avgpool() {
  LayerSpec l;
  l.kind = LayerKind::AvgPoolGlobal;
  return l;
}

LayerSpec LayerSpec::dense(int units) {
  LayerSpec l;
  l.kind = LayerKind::Dense;
  l.filters = units;
  return l;
}

LayerSpec LayerSpec::dropout(double rate) {
  LayerSpec l;
  l.kind = LayerKind::Dropout;
  l.rate = rate;
  return l;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec l;
  l.kind = LayerKind::Flatten;
  return l;
}

LayerSpec LayerSpec::branch(std::vector<std::vector<LayerSpec>> arms) {
  LayerSpec l;
  l.kind = LayerKind::BranchConcat;
  l.arms = std::move(arms);
  return l;
}

LayerSpec LayerSpec::repeat(int count, std::vector<LayerSpec> body) {
  LayerSpec l;
  l.kind = LayerKind::Repeat;
  l.count = count;
  l.body = std::move(body);
  return l;
}

LayerSpec LayerSpec::residual(std::vector<LayerSpec> body, std::vector<LayerSpec> shortcut) {
  LayerSpec l;
  l.kind = LayerKind::Residual;
  l.body = std::move(body);
  l.shortcut = std::move(shortcut);
  return l;
}

LayerSpec&& LayerSpec::named(std::string n) && {
  name = std::move(n);
  return std::move(*this);
}

LayerSpec&& LayerSpec::frozen() && {
  trainable = false;
  return std::move(*this);
}

std::string to_string(const Shape& s) {
  return s.flat ? fmt::format("({})", s.c) : fmt::format("({} x {} x {})", s.h, s.w, s.c);
}

int conv_output(int n, int k, int s, Padding padding) {
  if (padding == Padding::Same) return (n + s - 1) / s;
  if (k > n) return 0;
  return (n - k) / s + 1;
}

namespace {

struct Walker {
  std::vector<ShapeRow>* trace = nullptr;
  ParameterCount count;

  static std::string label(const LayerSpec& l, const std::string& path) {
    return l.name.empty() ? fmt::format("layer {} ({})", path, to_string(l.kind))
                          : fmt::format("layer '{}'", l.name);
  }

  Shape sequence(const std::vector<LayerSpec>& layers, Shape in, const std::string& prefix,
                 bool trainable) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string path = prefix.empty() ? std::to_string(i) : fmt::format("{}.{}", prefix, i);
      in = apply(layers[i], in, path, trainable);
    }
    return in;
  }

  void add(std::uint64_t params, bool trainable) {
    count.total += params;
    if (trainable) count.trainable += params;
  }

  Shape apply(const LayerSpec& l, Shape in, const std::string& path, bool trainable) {
    trainable = trainable && l.trainable;
    const ParameterCount before = count;
    Shape out = in;
    const auto need_spatial = [&] {
      if (in.flat) throw Error(fmt::format("{} needs a spatial input, got {}", label(l, path), to_string(in)));
    };
    const auto spatial = [&] {
      if (l.kh < 1 || l.kw < 1) throw Error(fmt::format("{} has kernel < 1", label(l, path)));
      if (l.stride < 1) throw Error(fmt::format("{} has stride < 1", label(l, path)));
      out.h = conv_output(in.h, l.kh, l.stride, l.padding);
      out.w = conv_output(in.w, l.kw, l.stride, l.padding);
      if (out.h < 1 || out.w < 1) {
        throw Error(fmt::format("{}: valid-padding kernel {}x{} exceeds input {}", label(l, path),
                                l.kh, l.kw, to_string(in)));
      }
    };
    const auto c_in = static_cast<std::uint64_t>(in.c);
    const auto k_area = static_cast<std::uint64_t>(l.kh) * static_cast<std::uint64_t>(l.kw);
    const auto filters = static_cast<std::uint64_t>(l.filters);

    switch (l.kind) {
      case LayerKind::Conv:
      case LayerKind::SeparableConv:
        need_spatial();
        if (l.filters < 1) throw Error(fmt::format("{} has no filters", label(l, path)));
        spatial();
        out.c = l.filters;
        add(l.kind == LayerKind::Conv ? (k_area * c_in + 1) * filters
                                      : k_area * c_in + (c_in + 1) * filters,
            trainable);
        break;
      case LayerKind::MaxPool:
        need_spatial();
        spatial();
        break;
      case LayerKind::AvgPoolGlobal:
        need_spatial();
        out = Shape{1, 1, in.c, true};
        break;
      case LayerKind::Flatten:
        out = Shape{1, 1, in.h * in.w * in.c, true};
        break;
      case LayerKind::Dense:
        if (!in.flat) {
          throw Error(fmt::format("{} needs a flat input, got {}", label(l, path), to_string(in)));
        }
        if (l.filters < 1) throw Error(fmt::format("{} has no units", label(l, path)));
        out = Shape{1, 1, l.filters, true};
        add((c_in + 1) * filters, trainable);
        break;
      case LayerKind::Dropout:
        break;
      case LayerKind::BranchConcat: {
        if (l.arms.empty()) throw Error(fmt::format("{} has no arms", label(l, path)));
        std::optional<Shape> merged;
        for (std::size_t a = 0; a < l.arms.size(); ++a) {
          const Shape arm = sequence(l.arms[a], in, fmt::format("{}.arm{}", path, a), trainable);
          if (arm.flat) throw Error(fmt::format("{}: arm {} is not spatial", label(l, path), a));
          if (!merged) {
            merged = arm;
          } else if (arm.h != merged->h || arm.w != merged->w) {
            throw Error(fmt::format("{}: arm {} outputs {}, arm 0 outputs {}", label(l, path), a,
                                    to_string(arm), to_string(*merged)));
          } else {
            merged->c += arm.c;
          }
        }
        out = *merged;
        break;
      }
      case LayerKind::Repeat:
        if (l.count < 1) throw Error(fmt::format("{} repeats {} times", label(l, path), l.count));
        for (int r = 0; r < l.count; ++r) {
          out = sequence(l.body, out, l.count == 1 ? path : fmt::format("{}.r{}", path, r), trainable);
        }
        break;
      case LayerKind::Residual: {
        out = sequence(l.body, in, fmt::format("{}.body", path), trainable);
        const Shape skip = sequence(l.shortcut, in, fmt::format("{}.shortcut", path), trainable);
        if (out != skip) {
          throw Error(fmt::format("{}: body outputs {}, shortcut outputs {}", label(l, path),
                                  to_string(out), to_string(skip)));
        }
        break;
      }
    }
    if (trace) {
      trace->push_back(ShapeRow{path, l.name, l.kind, out, count.total - before.total,
                                count.trainable - before.trainable});
    }
    return out;
  }
};

void check_input(const ArchitectureSpec& spec) {
  if (spec.input.h < 1 || spec.input.w < 1 || spec.input.c < 1) {
    throw Error(fmt::format("{}: input dims must be >= 1", spec.name));
  }
}

}  // namespace

std::vector<ShapeRow> trace_shapes(const ArchitectureSpec& spec) {
  check_input(spec);
  std::vector<ShapeRow> rows;
  Walker w{&rows, {}};
  w.sequence(spec.layers, spec.input, "", true);
  return rows;
}

std::vector<ShapeRow> infer_shapes(const ArchitectureSpec& spec) {
  std::vector<ShapeRow> top;
  for (auto& row : trace_shapes(spec)) {
    if (row.path.find('.') == std::string::npos) top.push_back(std::move(row));
  }
  return top;
}

std::optional<Shape> output_of(const ArchitectureSpec& spec, std::string_view name) {
  for (const auto& row : trace_shapes(spec)) {
    if (row.name == name) return row.output;
  }
  return std::nullopt;
}

ParameterCount count_parameters_split(const ArchitectureSpec& spec) {
  check_input(spec);
  Walker w;
  w.sequence(spec.layers, spec.input, "", true);
  return w.count;
}

std::uint64_t count_parameters(const ArchitectureSpec& spec) { return count_parameters_split(spec).total; }

}  // namespace roadcond::classifier
