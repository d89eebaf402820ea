// Copyright 2026 The Algodiv Authors
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

#ifndef ALGODIV_TOOLS_CLI_H_
#define ALGODIV_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace algodiv::cli {

// Runs one command line (without the program name). Results go to `out`;
// failures print {"error": CODE, "message": ...} to `err`. Returns the exit
// status: 0 success, 2 usage error, 1 any other error.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Formats a diversity value: shortest decimal, at least one fractional digit.
std::string FormatValue(double v);

}  // namespace algodiv::cli

#endif  // ALGODIV_TOOLS_CLI_H_
