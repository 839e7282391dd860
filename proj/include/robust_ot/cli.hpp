// Copyright 2026 The robust_ot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROBUST_OT_CLI_HPP_
#define ROBUST_OT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace robust_ot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitInternal = 4;

// Parses and runs one command. The result document goes to `out` (or the
// --out file); diagnostics go to `err`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace robust_ot::cli

#endif  // ROBUST_OT_CLI_HPP_
