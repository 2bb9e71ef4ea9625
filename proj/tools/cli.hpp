// Copyright 2026 The foresttune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORESTTUNE_TOOLS_CLI_HPP_
#define FORESTTUNE_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace foresttune::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. `args` excludes the program name. Tabular results go
// to `out` (or to --out files); the resolved seed and diagnostics go to
// `err`. Failures print a single "error: <module>: <message>" line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foresttune::cli

#endif  // FORESTTUNE_TOOLS_CLI_HPP_
