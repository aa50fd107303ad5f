// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/classifier/architectures.hpp"

#include <fmt/format.h>

#include "roadcond/core/error.hpp"

namespace roadcond::classifier::arch {
namespace {

using L = LayerSpec;
constexpr Padding V = Padding::Valid;
constexpr Padding S = Padding::Same;

LayerSpec vgg_block(int convs, int filters, std::string name) {
  return L::repeat(convs, {L::conv(3, filters)}).named(std::move(name));
}

std::vector<LayerSpec> vgg_base() {
  return {
      vgg_block(2, 64, "conv-block1"),  L::maxpool(2, 2).named("maxpool1"),
      vgg_block(2, 128, "conv-block2"), L::maxpool(2, 2).named("maxpool2"),
      vgg_block(3, 256, "conv-block3"), L::maxpool(2, 2).named("maxpool3"),
      vgg_block(3, 512, "conv-block4"), L::maxpool(2, 2).named("maxpool4"),
      vgg_block(3, 512, "conv-block5"), L::maxpool(2, 2).named("maxpool5"),
  };
}

// Bottleneck stage: a projection block with stride s, then n-1 identity blocks.
LayerSpec resnet_stage(int n, int width, int stride, std::string name) {
  const int out = width * 4;
  auto body = [&](int s) {
    return std::vector<LayerSpec>{L::conv(1, width, s), L::conv(3, width), L::conv(1, out)};
  };
  std::vector<LayerSpec> blocks{L::residual(body(stride), {L::conv(1, out, stride)})};
  if (n > 1) blocks.push_back(L::repeat(n - 1, {L::residual(body(1))}));
  return L::repeat(1, std::move(blocks)).named(std::move(name));
}

// Xception downsampling block: separable convs and a strided max pool with a
// strided 1x1 projection on the shortcut.
LayerSpec xception_down(int f1, int f2) {
  return L::residual({L::separable(3, f1), L::separable(3, f2), L::maxpool(3, 2, S)},
                     {L::conv(1, f2, 2)});
}

LayerSpec mbconv_stage(int blocks, int kernel, int filters, int stride, std::string name) {
  std::vector<LayerSpec> body{L::separable(kernel, filters, stride)};
  if (blocks > 1) body.push_back(L::repeat(blocks - 1, {L::separable(kernel, filters)}));
  return L::repeat(1, std::move(body)).named(std::move(name));
}

}  // namespace

ArchitectureSpec vgg16(int num_classes) {
  ArchitectureSpec spec{"vgg16", {224, 224, 3}, vgg_base()};
  spec.layers.push_back(L::flatten().named("flatten"));
  spec.layers.push_back(L::repeat(2, {L::dense(4096)}).named("fc-relu"));
  spec.layers.push_back(L::dense(num_classes).named("fc-softmax"));
  return spec;
}

ArchitectureSpec vgg16_without_top() {
  ArchitectureSpec spec{"vgg16-without-top", {224, 224, 3}, vgg_base()};
  spec.layers.push_back(L::flatten().named("flatten"));
  spec.layers.push_back(L::repeat(2, {L::dense(4096)}).named("fc-relu"));
  return spec;
}

ArchitectureSpec vgg16_reduced_head(int num_classes) {
  ArchitectureSpec spec{"vgg16-reduced-head", {224, 224, 3}, vgg_base()};
  // Blocks 1-4 and their pools stay at their pretrained values.
  for (std::size_t i = 0; i < 8; ++i) spec.layers[i].trainable = false;
  spec.layers.push_back(L::flatten().named("flatten"));
  spec.layers.push_back(L::dense(1280).named("fc1"));
  spec.layers.push_back(L::dropout(0.5).named("dropout1"));
  spec.layers.push_back(L::dense(1280).named("fc2"));
  spec.layers.push_back(L::dropout(0.5).named("dropout2"));
  spec.layers.push_back(L::dense(num_classes).named("fc-softmax"));
  return spec;
}

ArchitectureSpec resnet50(int num_classes, double dropout) {
  return {"resnet50",
          {224, 224, 3},
          {
              L::conv(7, 64, 2).named("conv1"),
              L::maxpool(3, 2, S).named("maxpool"),
              resnet_stage(3, 64, 1, "conv2_x"),
              resnet_stage(4, 128, 2, "conv3_x"),
              resnet_stage(6, 256, 2, "conv4_x"),
              resnet_stage(3, 512, 2, "conv5_x"),
              L::global_avgpool().named("global_avg_pooling"),
              L::dropout(dropout).named("dropout"),
              L::dense(num_classes).named("fc_softmax"),
          }};
}

ArchitectureSpec inception_resnet_v2(int num_classes, double dropout) {
  // Channel counts inside the composite blocks are chosen so that each
  // block reproduces the widths the architecture table prints (256, 896,
  // 1792); the arm structure follows the table.
  LayerSpec stem = L::repeat(
      1, {
             L::conv(3, 32, 2, V).named("stem1"),
             L::conv(3, 32, 1, V).named("stem2"),
             L::conv(3, 64).named("stem3"),
             L::branch({{L::maxpool(3, 2, V)}, {L::conv(3, 96, 2, V)}}).named("stem4"),
             L::branch({{L::conv(1, 64), L::conv(3, 96, 1, V)},
                        {L::conv(1, 64), L::conv(7, 1, 64, 1, S), L::conv(1, 7, 64, 1, S),
                         L::conv(3, 96, 1, V)}})
                 .named("stem5"),
             L::branch({{L::maxpool(3, 2, V)}, {L::conv(3, 64, 2, V)}}).named("stem6"),
         });

  LayerSpec block_a = L::residual({
      L::branch({{L::conv(1, 32)},
                 {L::conv(1, 32), L::conv(3, 32)},
                 {L::conv(1, 32), L::conv(3, 48), L::conv(3, 64)}}),
      L::conv(1, 256),
  });
  LayerSpec reduction_a = L::branch({
      {L::maxpool(3, 2, V)},
      {L::conv(3, 384, 2, V)},
      {L::conv(1, 192), L::conv(3, 192), L::conv(3, 256, 2, V)},
  });
  LayerSpec block_b = L::residual({
      L::branch({{L::conv(1, 192)},
                 {L::conv(1, 128), L::conv(1, 7, 160, 1, S), L::conv(7, 1, 192, 1, S)}}),
      L::conv(1, 896),
  });
  LayerSpec reduction_b = L::branch({
      {L::maxpool(3, 2, V)},
      {L::conv(1, 256), L::conv(3, 384, 2, V)},
      {L::conv(1, 256), L::conv(3, 256, 2, V)},
      {L::conv(1, 256), L::conv(3, 256), L::conv(3, 256, 2, V)},
  });
  LayerSpec block_c = L::residual({
      L::branch({{L::conv(1, 192)},
                 {L::conv(1, 192), L::conv(1, 3, 224, 1, S), L::conv(3, 1, 256, 1, S)}}),
      L::conv(1, 1792),
  });

  return {"inception_resnet_v2",
          {299, 299, 3},
          {
              std::move(stem).named("stem"),
              L::repeat(5, {block_a}).named("inceptionresnet-a"),
              std::move(reduction_a).named("reduction-a"),
              L::repeat(10, {block_b}).named("inceptionresnet-b"),
              std::move(reduction_b).named("reduction-b"),
              L::repeat(5, {block_c}).named("inceptionresnet-c"),
              L::global_avgpool().named("avgpool"),
              L::dropout(dropout).named("dropout"),
              L::dense(num_classes).named("fc_softmax"),
          }};
}

ArchitectureSpec xception(int num_classes, double dropout) {
  return {"xception",
          {299, 299, 3},
          {
              L::repeat(1,
                        {
                            L::conv(3, 32, 2, V).named("entry-conv1"),
                            L::conv(3, 64, 1, V).named("entry-conv2"),
                            xception_down(128, 128).named("entry-block1"),
                            xception_down(256, 256).named("entry-block2"),
                            xception_down(728, 728).named("entry-block3"),
                        })
                  .named("entry"),
              L::repeat(8, {L::residual({L::separable(3, 728), L::separable(3, 728),
                                         L::separable(3, 728)})})
                  .named("middle"),
              L::repeat(1,
                        {
                            xception_down(728, 1024).named("exit-block1"),
                            L::separable(3, 1536),
                            L::separable(3, 2048),
                            L::global_avgpool(),
                        })
                  .named("exit"),
              L::dropout(dropout).named("dropout"),
              L::dense(num_classes).named("fc_softmax"),
          }};
}

ArchitectureSpec efficientnet_b0(int num_classes, double dropout) {
  // Strides follow the output sizes printed in the architecture table.
  return {"efficientnet_b0",
          {224, 224, 3},
          {
              L::conv(3, 32, 1).named("conv3"),
              mbconv_stage(1, 3, 16, 2, "mbconv1"),
              mbconv_stage(2, 3, 24, 1, "mbconv6-1"),
              mbconv_stage(2, 5, 40, 2, "mbconv6-2"),
              mbconv_stage(3, 3, 80, 2, "mbconv6-3"),
              mbconv_stage(3, 5, 112, 1, "mbconv6-4"),
              mbconv_stage(4, 5, 192, 2, "mbconv6-5"),
              mbconv_stage(1, 3, 320, 2, "mbconv6-6"),
              L::conv(1, 1280).named("conv1"),
              L::global_avgpool().named("pooling"),
              L::dropout(dropout).named("dropout"),
              L::dense(num_classes).named("fc_softmax"),
          }};
}

ArchitectureSpec dense_head(int inputs, int units) {
  return {fmt::format("dense-{}x{}", inputs, units), {1, 1, inputs, true}, {L::dense(units)}};
}

std::vector<std::string> names() {
  return {"vgg16", "vgg16-reduced-head", "resnet50", "inception_resnet_v2", "xception",
          "efficientnet_b0"};
}

ArchitectureSpec by_name(std::string_view name, int num_classes) {
  if (name == "vgg16") return vgg16(num_classes);
  if (name == "vgg16-reduced-head") return vgg16_reduced_head(num_classes);
  if (name == "resnet50") return resnet50(num_classes);
  if (name == "inception_resnet_v2") return inception_resnet_v2(num_classes);
  if (name == "xception") return xception(num_classes);
  if (name == "efficientnet_b0") return efficientnet_b0(num_classes);
  throw Error(fmt::format("unknown architecture '{}'", name));
}

}  // namespace roadcond::classifier::arch
