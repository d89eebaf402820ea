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

#ifndef ALGODIV_LANG_AST_JSON_H_
#define ALGODIV_LANG_AST_JSON_H_

#include "algodiv/lang/ast.h"
#include "json.hpp"

namespace algodiv::lang {

// Canonical AST interchange; see schemas/ast.schema.json.
nlohmann::json AstToJson(const Ast& ast);
Ast AstFromJson(const nlohmann::json& j);

nlohmann::json ExprToJson(const Expr& e);
Expr ExprFromJson(const nlohmann::json& j);

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_AST_JSON_H_
