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

#ifndef ALGODIV_LANG_PRINTER_H_
#define ALGODIV_LANG_PRINTER_H_

#include <string>

#include "algodiv/lang/ast.h"

namespace algodiv::lang {

// Renders Mini source; Parse(Print(ast)) is structurally equal to ast.
std::string Print(const Ast& ast);
std::string PrintExpr(const Expr& e);

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_PRINTER_H_
