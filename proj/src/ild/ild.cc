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

#include "algodiv/ild/ild.h"

#include <algorithm>
#include <map>
#include <set>

#include "algodiv/core/error.h"

namespace algodiv::ild {
namespace {

using lang::Ast;
using lang::Block;
using lang::Expr;
using lang::Pattern;
using lang::ProcMember;
using lang::Stmt;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Visits every block in the program, outer blocks before nested ones.
template <typename Fn>
void ForEachBody(Ast& ast, Fn&& fn);

template <typename Fn>
void WalkBlock(Block& block, Fn& fn) {
  fn(block);
  for (Stmt& s : block) {
    std::visit(Overloaded{
                   [&](lang::stmt::If& n) {
                     WalkBlock(n.then_body, fn);
                     WalkBlock(n.else_body, fn);
                   },
                   [&](lang::stmt::While& n) { WalkBlock(n.body, fn); },
                   [&](lang::stmt::For& n) { WalkBlock(n.body, fn); },
                   [&](lang::stmt::Await& n) {
                     for (auto& b : n.branches) WalkBlock(b.body, fn);
                     WalkBlock(n.timeout_body, fn);
                   },
                   [](auto&) {},
               },
               s.node);
  }
}

template <typename Fn>
void ForEachBody(Ast& ast, Fn&& fn) {
  for (lang::Item& item : ast.items) {
    if (auto* f = std::get_if<lang::FuncDef>(&item)) {
      WalkBlock(f->body, fn);
    } else if (auto* p = std::get_if<lang::ProcessDef>(&item)) {
      for (ProcMember& m : p->members) WalkBlock(m.func.body, fn);
    }
  }
}

// Read/write sets of a statement; `pure` is false when it contains anything
// with effects beyond its own writes.
struct Effects {
  std::set<std::string> reads;
  std::set<std::string> writes;
  bool pure = true;
};

void PatternEffects(const Pattern& p, Effects& e);

void ExprEffects(const Expr& x, Effects& e) {
  std::visit(Overloaded{
                 [&](const lang::expr::Literal&) {},
                 [&](const lang::expr::Name& n) { e.reads.insert(n.name); },
                 [&](const lang::expr::Self&) {},
                 [&](const lang::expr::Field& n) { e.reads.insert("self." + n.name); },
                 [&](const lang::expr::Received&) { e.pure = false; },
                 [&](const lang::expr::TupleLit& n) {
                   for (const Expr& c : n.elems) ExprEffects(c, e);
                 },
                 [&](const lang::expr::SeqLit& n) {
                   for (const Expr& c : n.elems) ExprEffects(c, e);
                 },
                 [&](const lang::expr::SetLit& n) {
                   for (const Expr& c : n.elems) ExprEffects(c, e);
                 },
                 [&](const lang::expr::Binary& n) {
                   ExprEffects(*n.lhs, e);
                   ExprEffects(*n.rhs, e);
                 },
                 [&](const lang::expr::Not& n) { ExprEffects(*n.operand, e); },
                 [&](const lang::expr::Neg& n) { ExprEffects(*n.operand, e); },
                 [&](const lang::expr::Call&) { e.pure = false; },
                 [&](const lang::expr::New&) { e.pure = false; },
                 [&](const lang::expr::Quant& n) {
                   PatternEffects(*n.pattern, e);
                   ExprEffects(*n.domain, e);
                   if (n.cond) ExprEffects(*n.cond, e);
                 },
             },
             x.node);
}

void PatternEffects(const Pattern& p, Effects& e) {
  std::visit(Overloaded{
                 [&](const lang::pattern::Bind& n) { e.writes.insert(n.name); },
                 [&](const lang::pattern::Eq& n) { ExprEffects(*n.expr, e); },
                 [&](const lang::pattern::Tuple& n) {
                   for (const Pattern& c : n.elems) PatternEffects(c, e);
                 },
                 [](const auto&) {},
             },
             p.node);
}

std::string TargetName(const lang::LValue& lv) {
  return lv.kind == lang::LValue::Kind::kField ? "self." + lv.name : lv.name;
}

std::optional<Effects> StmtEffects(const Stmt& s) {
  Effects e;
  if (std::holds_alternative<lang::stmt::Pass>(s.node)) return e;
  if (const auto* a = std::get_if<lang::stmt::Assign>(&s.node)) {
    e.writes.insert(TargetName(a->target));
    if (!a->target.indices.empty()) e.reads.insert(TargetName(a->target));
    for (const Expr& i : a->target.indices) ExprEffects(i, e);
    ExprEffects(a->value, e);
  } else if (const auto* o = std::get_if<lang::stmt::SetOp>(&s.node)) {
    e.writes.insert(TargetName(o->target));
    e.reads.insert(TargetName(o->target));
    for (const Expr& i : o->target.indices) ExprEffects(i, e);
    ExprEffects(o->elem, e);
  } else {
    return std::nullopt;
  }
  if (!e.pure) return std::nullopt;
  return e;
}

bool Disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a) {
    if (b.count(x)) return false;
  }
  return true;
}

// Swaps adjacent eligible pairs left to right; a swapped pair is not revisited.
template <typename Eligible, typename Swap>
void ScanPairs(size_t n, double p, SplitMix64* rng, Eligible eligible, Swap swap) {
  size_t i = 0;
  while (i + 1 < n) {
    if (eligible(i) && (rng == nullptr || rng->Bernoulli(p))) {
      swap(i);
      i += 2;
    } else {
      ++i;
    }
  }
}

// First string literal of a handler pattern's leading tuple element.
std::optional<std::string> HandlerKind(const ProcMember& m) {
  if (!m.msg_pattern) return std::nullopt;
  const Pattern* p = &*m.msg_pattern;
  if (const auto* t = std::get_if<lang::pattern::Tuple>(&p->node)) {
    if (t->elems.empty()) return std::nullopt;
    p = &t->elems[0];
  }
  if (const auto* l = std::get_if<lang::pattern::Literal>(&p->node)) {
    if (l->value.is_str()) return l->value.as_str();
  }
  return std::nullopt;
}

bool HandlersDisjoint(const ProcMember& a, const ProcMember& b) {
  auto ka = HandlerKind(a);
  auto kb = HandlerKind(b);
  return ka && kb && *ka != *kb;
}

void RewriteCallsInExpr(Expr& x, const std::map<std::string, int>& arity,
                        std::vector<ArgReorderIssue>* issues);

void RewriteCallsInPattern(Pattern& p, const std::map<std::string, int>& arity,
                           std::vector<ArgReorderIssue>* issues) {
  if (auto* eq = std::get_if<lang::pattern::Eq>(&p.node)) RewriteCallsInExpr(*eq->expr, arity, issues);
  if (auto* t = std::get_if<lang::pattern::Tuple>(&p.node)) {
    for (Pattern& c : t->elems) RewriteCallsInPattern(c, arity, issues);
  }
}

void RewriteCallsInExpr(Expr& x, const std::map<std::string, int>& arity,
                        std::vector<ArgReorderIssue>* issues) {
  auto rec = [&](Expr& c) { RewriteCallsInExpr(c, arity, issues); };
  std::visit(Overloaded{
                 [&](lang::expr::TupleLit& n) { std::for_each(n.elems.begin(), n.elems.end(), rec); },
                 [&](lang::expr::SeqLit& n) { std::for_each(n.elems.begin(), n.elems.end(), rec); },
                 [&](lang::expr::SetLit& n) { std::for_each(n.elems.begin(), n.elems.end(), rec); },
                 [&](lang::expr::Binary& n) {
                   rec(*n.lhs);
                   rec(*n.rhs);
                 },
                 [&](lang::expr::Not& n) { rec(*n.operand); },
                 [&](lang::expr::Neg& n) { rec(*n.operand); },
                 [&](lang::expr::New& n) {
                   if (n.count) rec(*n.count);
                 },
                 [&](lang::expr::Quant& n) {
                   RewriteCallsInPattern(*n.pattern, arity, issues);
                   rec(*n.domain);
                   if (n.cond) rec(*n.cond);
                 },
                 [&](lang::expr::Call& n) {
                   std::for_each(n.args.begin(), n.args.end(), rec);
                   auto it = arity.find(n.callee);
                   if (it == arity.end()) return;
                   if (it->second != static_cast<int>(n.args.size())) {
                     if (issues) issues->push_back({n.callee, x.pos});
                     return;
                   }
                   n.args = SwapPairs(std::move(n.args));
                 },
                 [](auto&) {},
             },
             x.node);
}

void RewriteCallsInBlock(Block& block, const std::map<std::string, int>& arity,
                         std::vector<ArgReorderIssue>* issues) {
  auto e = [&](Expr& x) { RewriteCallsInExpr(x, arity, issues); };
  auto b = [&](Block& bl) { RewriteCallsInBlock(bl, arity, issues); };
  for (Stmt& s : block) {
    std::visit(Overloaded{
                   [&](lang::stmt::Assign& n) {
                     std::for_each(n.target.indices.begin(), n.target.indices.end(), e);
                     e(n.value);
                   },
                   [&](lang::stmt::If& n) {
                     e(n.cond);
                     b(n.then_body);
                     b(n.else_body);
                   },
                   [&](lang::stmt::While& n) {
                     e(n.cond);
                     b(n.body);
                   },
                   [&](lang::stmt::For& n) {
                     RewriteCallsInPattern(n.pattern, arity, issues);
                     e(n.iter);
                     b(n.body);
                   },
                   [&](lang::stmt::Return& n) {
                     if (n.value) e(*n.value);
                   },
                   [&](lang::stmt::ExprStmt& n) { e(n.expr); },
                   [&](lang::stmt::Send& n) {
                     e(n.msg);
                     e(n.dest);
                   },
                   [&](lang::stmt::Await& n) {
                     for (auto& br : n.branches) {
                       e(br.cond);
                       b(br.body);
                     }
                     if (n.timeout) e(*n.timeout);
                     b(n.timeout_body);
                   },
                   [&](lang::stmt::SetOp& n) {
                     std::for_each(n.target.indices.begin(), n.target.indices.end(), e);
                     e(n.elem);
                   },
                   [](auto&) {},
               },
               s.node);
  }
}

}  // namespace

const char* TransformName(Transform t) {
  switch (t) {
    case Transform::kFuncReorder: return "func_reorder";
    case Transform::kArgReorder: return "arg_reorder";
    case Transform::kFieldReorder: return "field_reorder";
    case Transform::kBranchReorder: return "branch_reorder";
    case Transform::kStmtReorder: return "stmt_reorder";
    case Transform::kNopInsert: return "nop_insert";
  }
  return "?";
}

std::optional<Transform> TransformFromName(std::string_view name) {
  for (int i = 0; i < kNumTransforms; ++i) {
    if (name == TransformName(static_cast<Transform>(i))) return static_cast<Transform>(i);
  }
  return std::nullopt;
}

bool IldProfile::Enabled(Transform t) const {
  return std::find(enabled.begin(), enabled.end(), t) != enabled.end();
}

nlohmann::json ProfileToJson(const IldProfile& p) {
  nlohmann::json en = nlohmann::json::array();
  for (int i = 0; i < kNumTransforms; ++i) {
    if (p.Enabled(static_cast<Transform>(i))) en.push_back(TransformName(static_cast<Transform>(i)));
  }
  return {{"nop_probability", p.nop_probability},
          {"swap_probability", p.swap_probability},
          {"enabled", en},
          {"seed", p.seed}};
}

IldProfile ProfileFromJson(const nlohmann::json& j) {
  IldProfile p;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kConfig, "ILD profile must be an object");
    if (j.contains("nop_probability")) p.nop_probability = j["nop_probability"].get<double>();
    if (j.contains("swap_probability")) p.swap_probability = j["swap_probability"].get<double>();
    if (j.contains("seed")) p.seed = j["seed"].get<uint64_t>();
    if (j.contains("enabled")) {
      p.enabled.clear();
      for (const auto& n : j["enabled"]) {
        auto t = TransformFromName(n.get<std::string>());
        if (!t) throw Error(ErrorCode::kConfig, "unknown transform " + n.get<std::string>());
        p.enabled.push_back(*t);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad ILD profile: ") + e.what());
  }
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(p.nop_probability) || !in01(p.swap_probability)) {
    throw Error(ErrorCode::kConfig, "ILD probabilities must lie in [0, 1]");
  }
  return p;
}

bool Independent(const Stmt& a, const Stmt& b) {
  auto ea = StmtEffects(a);
  auto eb = StmtEffects(b);
  if (!ea || !eb) return false;
  std::set<std::string> all_a = ea->reads;
  all_a.insert(ea->writes.begin(), ea->writes.end());
  std::set<std::string> all_b = eb->reads;
  all_b.insert(eb->writes.begin(), eb->writes.end());
  return Disjoint(all_a, eb->writes) && Disjoint(all_b, ea->writes);
}

Ast NopInsert(Ast ast, double p, SplitMix64& rng) {
  ForEachBody(ast, [&](Block& block) {
    Block out;
    out.reserve(block.size() * 2);
    for (Stmt& s : block) {
      lang::Pos pos = s.pos;
      out.push_back(std::move(s));
      if (rng.Bernoulli(p)) out.push_back(lang::MakePass(pos));
    }
    block = std::move(out);
  });
  return ast;
}

Ast StmtReorder(Ast ast, double p, SplitMix64& rng) {
  ForEachBody(ast, [&](Block& block) {
    ScanPairs(
        block.size(), p, &rng, [&](size_t i) { return Independent(block[i], block[i + 1]); },
        [&](size_t i) { std::swap(block[i], block[i + 1]); });
  });
  return ast;
}

Ast BranchReorder(Ast ast, double p, SplitMix64& rng) {
  ForEachBody(ast, [&](Block& block) {
    for (Stmt& s : block) {
      auto* n = std::get_if<lang::stmt::If>(&s.node);
      if (!n || !rng.Bernoulli(p)) continue;
      lang::Pos pos = n->cond.pos;
      n->cond = Expr{lang::expr::Not{std::move(n->cond)}, pos};
      Block else_body = n->has_else ? std::move(n->else_body) : Block{lang::MakePass(s.pos)};
      n->else_body = std::move(n->then_body);
      n->then_body = std::move(else_body);
      n->has_else = true;
    }
  });
  return ast;
}

Ast FuncReorder(Ast ast, double p, SplitMix64& rng) {
  auto& items = ast.items;
  ScanPairs(
      items.size(), p, &rng,
      [&](size_t i) {
        return std::holds_alternative<lang::FuncDef>(items[i]) &&
               std::holds_alternative<lang::FuncDef>(items[i + 1]);
      },
      [&](size_t i) { std::swap(items[i], items[i + 1]); });
  for (lang::Item& item : items) {
    auto* proc = std::get_if<lang::ProcessDef>(&item);
    if (!proc) continue;
    auto& ms = proc->members;
    ScanPairs(
        ms.size(), p, &rng,
        [&](size_t i) {
          if (ms[i].kind == ProcMember::Kind::kMethod && ms[i + 1].kind == ProcMember::Kind::kMethod) return true;
          return ms[i].kind == ProcMember::Kind::kHandler && ms[i + 1].kind == ProcMember::Kind::kHandler &&
                 HandlersDisjoint(ms[i], ms[i + 1]);
        },
        [&](size_t i) { std::swap(ms[i], ms[i + 1]); });
  }
  return ast;
}

Ast ArgReorder(Ast ast, std::vector<ArgReorderIssue>* issues) {
  std::map<std::string, int> functions;
  for (lang::Item& item : ast.items) {
    if (auto* f = std::get_if<lang::FuncDef>(&item)) {
      functions[f->name] = static_cast<int>(f->params.size());
      f->params = SwapPairs(std::move(f->params));
    }
  }
  for (lang::Item& item : ast.items) {
    if (auto* f = std::get_if<lang::FuncDef>(&item)) {
      RewriteCallsInBlock(f->body, functions, issues);
    } else if (auto* g = std::get_if<lang::GlobalVar>(&item)) {
      RewriteCallsInExpr(g->init, functions, issues);
    } else if (auto* proc = std::get_if<lang::ProcessDef>(&item)) {
      // Methods shadow top-level functions inside their process.
      std::map<std::string, int> scope = functions;
      for (ProcMember& m : proc->members) {
        if (m.kind != ProcMember::Kind::kMethod) continue;
        scope[m.func.name] = static_cast<int>(m.func.params.size());
        m.func.params = SwapPairs(std::move(m.func.params));
      }
      for (ProcMember& m : proc->members) {
        RewriteCallsInBlock(m.func.body, scope, issues);
        if (m.msg_pattern) RewriteCallsInPattern(*m.msg_pattern, scope, issues);
        if (m.from_pattern) RewriteCallsInPattern(*m.from_pattern, scope, issues);
      }
    }
  }
  return ast;
}

Ast FieldReorder(Ast ast) {
  for (lang::Item& item : ast.items) {
    auto* proc = std::get_if<lang::ProcessDef>(&item);
    if (!proc) continue;
    for (ProcMember& m : proc->members) {
      if (m.kind != ProcMember::Kind::kSetup) continue;
      Block& body = m.func.body;
      size_t run = 0;
      while (run < body.size()) {
        const auto* a = std::get_if<lang::stmt::Assign>(&body[run].node);
        if (!a || a->target.kind != lang::LValue::Kind::kField || !a->target.indices.empty()) break;
        ++run;
      }
      for (size_t i = 0; i + 1 < run; i += 2) {
        if (Independent(body[i], body[i + 1])) std::swap(body[i], body[i + 1]);
      }
    }
  }
  return ast;
}

Ast ApplyIld(const Ast& ast, const IldProfile& profile) {
  SplitMix64 rng(profile.seed);
  Ast out = ast;
  if (profile.Enabled(Transform::kFuncReorder)) out = FuncReorder(std::move(out), profile.swap_probability, rng);
  if (profile.Enabled(Transform::kArgReorder)) out = ArgReorder(std::move(out));
  if (profile.Enabled(Transform::kFieldReorder)) out = FieldReorder(std::move(out));
  if (profile.Enabled(Transform::kBranchReorder)) {
    out = BranchReorder(std::move(out), profile.swap_probability, rng);
  }
  if (profile.Enabled(Transform::kStmtReorder)) out = StmtReorder(std::move(out), profile.swap_probability, rng);
  if (profile.Enabled(Transform::kNopInsert)) out = NopInsert(std::move(out), profile.nop_probability, rng);
  return out;
}

}  // namespace algodiv::ild
