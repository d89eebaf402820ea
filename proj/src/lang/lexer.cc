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

#include "algodiv/lang/lexer.h"

#include <cctype>

#include "algodiv/core/error.h"

namespace algodiv::lang {
namespace {

constexpr std::string_view kKeywords[] = {
    "and",   "await",  "break",   "each",    "else", "false",
    "for",   "from",   "func",    "if",      "in",   "new",
    "none",  "not",    "or",      "pass",    "process", "receive",
    "received", "return", "self", "send",    "some", "timeout",
    "to",    "true",   "var",     "while",   "yield"};

[[noreturn]] void Fail(int line, int col, const std::string& msg) {
  throw Error(ErrorCode::kSyntax, std::to_string(line) + ":" +
                                      std::to_string(col) + ": " + msg);
}

}  // namespace

bool IsKeyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> Tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = IsKeyword(tok.text) ? Token::Kind::kKeyword : Token::Kind::kIdent;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      int64_t v = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        if (v > (INT64_MAX - (src[j] - '0')) / 10) Fail(line, col, "integer literal too large");
        v = v * 10 + (src[j] - '0');
        ++j;
      }
      tok.kind = Token::Kind::kInt;
      tok.int_value = v;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      advance(1);
      std::string s;
      while (true) {
        if (i >= src.size() || src[i] == '\n') Fail(tok.line, tok.col, "unterminated string");
        char d = src[i];
        if (d == '"') {
          advance(1);
          break;
        }
        if (d == '\\') {
          if (i + 1 >= src.size()) Fail(line, col, "bad escape");
          char e = src[i + 1];
          switch (e) {
            case 'n': s.push_back('\n'); break;
            case 't': s.push_back('\t'); break;
            case '\\': s.push_back('\\'); break;
            case '"': s.push_back('"'); break;
            default: Fail(line, col, std::string("unknown escape \\") + e);
          }
          advance(2);
          continue;
        }
        s.push_back(d);
        advance(1);
      }
      tok.kind = Token::Kind::kString;
      tok.text = std::move(s);
    } else {
      static constexpr std::string_view kTwo[] = {"==", "!=", "<=", ">="};
      tok.kind = Token::Kind::kPunct;
      for (std::string_view p : kTwo) {
        if (src.substr(i, 2) == p) tok.text = std::string(p);
      }
      if (tok.text.empty()) {
        if (std::string_view("()[]{},;.=<>+-*/%|").find(c) == std::string_view::npos) {
          Fail(line, col, std::string("unexpected character '") + c + "'");
        }
        tok.text = std::string(1, c);
      }
      advance(tok.text.size());
    }
    out.push_back(std::move(tok));
  }
  Token eof;
  eof.kind = Token::Kind::kEof;
  eof.line = line;
  eof.col = col;
  out.push_back(eof);
  return out;
}

}  // namespace algodiv::lang
