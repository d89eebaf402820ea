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

#ifndef ALGODIV_LANG_LEXER_H_
#define ALGODIV_LANG_LEXER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace algodiv::lang {

struct Token {
  enum class Kind { kIdent, kKeyword, kInt, kString, kPunct, kEof };
  Kind kind = Kind::kEof;
  std::string text;  // Identifier, keyword, punctuation, or decoded string.
  int64_t int_value = 0;
  int line = 1;
  int col = 1;
};

bool IsKeyword(std::string_view word);

// Throws Error(kSyntax) on malformed input.
std::vector<Token> Tokenize(std::string_view source);

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_LEXER_H_
