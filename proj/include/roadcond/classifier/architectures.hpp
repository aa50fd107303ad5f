// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "roadcond/classifier/shape.hpp"

namespace roadcond::classifier::arch {

/// Descriptors for the six reference networks. Top-level layers carry the
/// row names of the architecture tables ("conv-block1", "maxpool1", ...,
/// "fc-softmax") so their outputs can be looked up with output_of.

/// VGG-16 convolutional base (13 same-padded 3x3 convs, five 2x2/2 pools)
/// followed by two 4096-unit dense layers and a `num_classes` softmax.
ArchitectureSpec vgg16(int num_classes = 5);

/// VGG-16 with its last dense layer removed: the ImageNet trunk whose
/// 4096-wide output feeds a replacement classifier.
ArchitectureSpec vgg16_without_top();

/// The phase-3 training configuration: frozen blocks 1-4, trainable block 5,
/// flatten, two 1280-unit dense layers and a `num_classes` softmax.
ArchitectureSpec vgg16_reduced_head(int num_classes = 5);

ArchitectureSpec resnet50(int num_classes = 5, double dropout = 0.2);
ArchitectureSpec inception_resnet_v2(int num_classes = 5, double dropout = 0.4);
ArchitectureSpec xception(int num_classes = 5, double dropout = 0.2);

/// EfficientNet-B0 stage layout. MBConv blocks are modelled as separable
/// convolutions; expansion and squeeze-excitation are not represented.
ArchitectureSpec efficientnet_b0(int num_classes = 5, double dropout = 0.2);

/// A single dense layer on a flat input of `inputs` features.
ArchitectureSpec dense_head(int inputs, int units);

std::vector<std::string> names();
/// Throws roadcond::Error for an unknown name.
ArchitectureSpec by_name(std::string_view name, int num_classes = 5);

}  // namespace roadcond::classifier::arch
