// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include "roadcond/cli/app.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "commands.hpp"
#include "roadcond/core/error.hpp"

namespace roadcond::cli {

Scheme to_scheme(const std::string& text) {
  const auto s = parse_scheme(text);
  if (!s) throw Error(fmt::format("unknown scheme '{}' (two, four or five)", text));
  return *s;
}

const CLI::Validator& scheme_validator() {
  static const CLI::Validator v(
      [](std::string& text) { return parse_scheme(text) ? std::string() : "expected two, four or five"; }, "SCHEME");
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Road-condition camera classification toolkit", "roadcond");
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx{out, err, false, {}};
  app.add_flag("--json", ctx.json, "Machine-readable JSON output");

  add_data_commands(app, ctx);
  add_model_commands(app, ctx);
  add_runtime_commands(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (!ctx.action) return kExitUsage;
  try {
    return ctx.action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
}

}  // namespace roadcond::cli
