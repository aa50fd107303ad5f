// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "roadcond/core/road_condition.hpp"

namespace roadcond::cli {

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  std::function<int()> action;
};

void add_data_commands(CLI::App& app, Context& ctx);
void add_model_commands(CLI::App& app, Context& ctx);
void add_runtime_commands(CLI::App& app, Context& ctx);

Scheme to_scheme(const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Validator accepting the scheme names understood by to_scheme.
const CLI::Validator& scheme_validator();

}  // namespace roadcond::cli
