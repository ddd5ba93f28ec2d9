// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "imgeval/cli/commands.h"

int main(int argc, char** argv) { return imgeval::cli::RunCli(argc, argv, std::cout, std::cerr); }
