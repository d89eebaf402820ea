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

#ifndef ALGODIV_LANG_PARSER_H_
#define ALGODIV_LANG_PARSER_H_

#include <string_view>

#include "algodiv/lang/ast.h"

namespace algodiv::lang {

struct ParseOptions {
  // Run name resolution after parsing (unresolved names are errors).
  bool check_names = true;
};

// Parses Mini source text. Throws Error(kSyntax) with "line:col: message",
// or Error(kUnresolvedName).
Ast Parse(std::string_view source, const ParseOptions& options = {});

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_PARSER_H_
