// Copyright 2026 The roadcond Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "roadcond/cli/app.hpp"

int main(int argc, char** argv) { return roadcond::cli::run_cli(argc, argv, std::cout, std::cerr); }
