// SPDX-License-Identifier: Apache-2.0

#include "swipt/cli.hpp"

int main(int argc, char** argv) { return swipt::cli::run_cli(argc, argv); }
