// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roadcond::classifier {

enum class Padding { Same, Valid };

enum class LayerKind {
  Conv,
  SeparableConv,
  MaxPool,
  AvgPoolGlobal,
  Dense,
  Dropout,
  Flatten,
  BranchConcat,
  Repeat,
  Residual,
};

std::string_view to_string(LayerKind kind);

/// One node of an architecture descriptor. Composite kinds:
///   BranchConcat: each arm runs on the same input; channels are summed.
///   Repeat:       `body` applied `count` times in sequence.
///   Residual:     `body` plus `shortcut` (identity when empty); both must
///                 produce the same shape.
struct LayerSpec {
  LayerKind kind = LayerKind::Conv;
  std::string name;
  int kh = 1;
  int kw = 1;
  int stride = 1;
  Padding padding = Padding::Same;
  int filters = 0;  // conv filters or dense units
  double rate = 0.0;
  int count = 1;
  bool trainable = true;
  std::vector<std::vector<LayerSpec>> arms;
  std::vector<LayerSpec> body;
  std::vector<LayerSpec> shortcut;

  static LayerSpec conv(int k, int filters, int stride = 1, Padding padding = Padding::Same);
  static LayerSpec conv(int kh, int kw, int filters, int stride, Padding padding);
  static LayerSpec separable(int k, int filters, int stride = 1, Padding padding = Padding::Same);
  static LayerSpec maxpool(int k, int stride, Padding padding = Padding::Valid);
  static LayerSpec global_avgpool();
  static LayerSpec dense(int units);
  static LayerSpec dropout(double rate);
  static LayerSpec flatten();
  static LayerSpec branch(std::vector<std::vector<LayerSpec>> arms);
  static LayerSpec repeat(int count, std::vector<LayerSpec> body);
  static LayerSpec residual(std::vector<LayerSpec> body, std::vector<LayerSpec> shortcut = {});

  LayerSpec&& named(std::string n) &&;
  LayerSpec&& frozen() &&;
};

/// Feature-map dims. `flat` marks a vector (after flatten, global pooling or
/// dense); it is then stored as 1 x 1 x c.
struct Shape {
  int h = 0;
  int w = 0;
  int c = 0;
  bool flat = false;

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

struct ArchitectureSpec {
  std::string name;
  Shape input;
  std::vector<LayerSpec> layers;
};

struct ShapeRow {
  std::string path;  // "3", "3.0", "5.arm1.2", ... ; "" never
  std::string name;
  LayerKind kind;
  Shape output;
  std::uint64_t params = 0;            // including nested layers
  std::uint64_t trainable_params = 0;  // including nested layers
};

/// One row per top-level layer, in order. Throws roadcond::Error naming the
/// layer (name or path) when a valid-padding kernel exceeds its input, when
/// branch arms disagree spatially, when a residual's two paths disagree, or
/// when a dense/conv layer receives the wrong kind of input.
std::vector<ShapeRow> infer_shapes(const ArchitectureSpec& spec);

/// Every layer, nested ones included, in evaluation order. Composite rows
/// appear after their children.
std::vector<ShapeRow> trace_shapes(const ArchitectureSpec& spec);

/// Output of the first layer whose name equals `name`.
std::optional<Shape> output_of(const ArchitectureSpec& spec, std::string_view name);

struct ParameterCount {
  std::uint64_t total = 0;
  std::uint64_t trainable = 0;
  std::uint64_t non_trainable() const { return total - trainable; }
};

/// conv: (kh*kw*c_in + 1) * filters; separable: kh*kw*c_in + (c_in + 1) * filters;
/// dense: (n_in + 1) * units; everything else 0. Layers marked frozen (and
/// everything nested in them) count as non-trainable.
ParameterCount count_parameters_split(const ArchitectureSpec& spec);
std::uint64_t count_parameters(const ArchitectureSpec& spec);

/// Spatial output for one axis: valid floor((n - k) / s) + 1, same ceil(n / s).
int conv_output(int n, int k, int s, Padding padding);

}  // namespace roadcond::classifier
