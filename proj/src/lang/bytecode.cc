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

#include "algodiv/lang/bytecode.h"

#include <sstream>

#include "algodiv/core/error.h"
#include "algodiv/lang/builtins.h"

namespace algodiv::lang {
namespace {

using nlohmann::json;

constexpr const char* kOpcodeNames[kNumOpcodes] = {
    "PUSH_CONST", "LOAD_LOCAL", "STORE_LOCAL", "LOAD_GLOBAL", "STORE_GLOBAL",
    "LOAD_FIELD", "STORE_FIELD", "BINARY_OP", "COMPARE_OP", "NOT", "JUMP",
    "JUMP_IF_FALSE", "CALL", "RETURN", "BUILD_TUPLE", "BUILD_SEQ", "BUILD_SET",
    "SET_ADD", "SET_DEL", "ITER_NEW", "ITER_NEXT", "SEND", "YIELD_POINT",
    "COUNT", "NOP"};

constexpr BuiltinInfo kBuiltins[] = {
    {Builtin::kRange, "range", 2, false},
    {Builtin::kOrd, "ord", 1, false},
    {Builtin::kChr, "chr", 1, false},
    {Builtin::kMin, "min", 2, false},
    {Builtin::kMax, "max", 2, false},
    {Builtin::kAbs, "abs", 1, false},
    {Builtin::kAppend, "append", 2, false},
    {Builtin::kSeq, "seq", 2, false},
    {Builtin::kStr, "str", 1, false},
    {Builtin::kSetItem, "$setitem", 3, false},
    {Builtin::kTupleArity, "$tuple_arity", 2, false},
    {Builtin::kReplacePid, "$replace_pid", 3, false},
    {Builtin::kLogicalTime, "logical_time", 0, true},
    {Builtin::kSelfId, "self_id", 0, true},
    {Builtin::kOutput, "output", 1, true},
    {Builtin::kCsEnter, "cs_enter", 0, true},
    {Builtin::kCsExit, "cs_exit", 0, true},
    {Builtin::kSetup, "setup", 2, true},
    {Builtin::kStart, "start", 1, true},
    {Builtin::kNew, "$new", 2, true},
    {Builtin::kNow, "$now", 0, true},
    {Builtin::kAwaitExit, "$await_exit", 2, true},
    {Builtin::kGwSend, "$gw_send", 2, true},
    {Builtin::kGwYield, "$gw_yield", 3, true},
};

const char* kArithNames[] = {"ADD", "SUB", "MUL", "DIV", "MOD", "INDEX"};
const char* kCmpNames[] = {"EQ", "NE", "LT", "LE", "GT", "GE", "IN", "NOT_IN"};

json ConstantToJson(const Constant& c) {
  if (const auto* v = std::get_if<Value>(&c)) return json{{"value", ValueToJson(*v)}};
  const auto& callee = std::get<Callee>(c);
  const char* kind = callee.kind == Callee::Kind::kFunction ? "function"
                     : callee.kind == Callee::Kind::kMethod ? "method"
                                                            : "builtin";
  return json{{"callee", {{"kind", kind}, {"name", callee.name}, {"arity", callee.arity}}}};
}

Constant ConstantFromJson(const json& j) {
  if (j.contains("value")) return ValueFromJson(j.at("value"));
  const json& c = j.at("callee");
  Callee callee;
  std::string kind = c.at("kind").get<std::string>();
  callee.kind = kind == "function" ? Callee::Kind::kFunction
                : kind == "method" ? Callee::Kind::kMethod
                                   : Callee::Kind::kBuiltin;
  callee.name = c.at("name").get<std::string>();
  callee.arity = c.at("arity").get<int32_t>();
  return callee;
}

}  // namespace

const BuiltinInfo* FindBuiltin(std::string_view name) {
  for (const BuiltinInfo& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const BuiltinInfo& GetBuiltin(Builtin id) {
  for (const BuiltinInfo& b : kBuiltins) {
    if (b.id == id) return b;
  }
  throw Error(ErrorCode::kRuntime, "unknown builtin id");
}

const char* OpcodeName(Opcode op) { return kOpcodeNames[static_cast<int>(op)]; }

std::optional<Opcode> OpcodeFromName(std::string_view name) {
  for (int i = 0; i < kNumOpcodes; ++i) {
    if (name == kOpcodeNames[i]) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

bool IsJump(Opcode op) {
  return op == Opcode::kJump || op == Opcode::kJumpIfFalse || op == Opcode::kIterNext;
}

std::string CodeUnit::owner() const {
  size_t dot = name.find('.');
  return dot == std::string::npos ? std::string() : name.substr(0, dot);
}

const CodeUnit* CompiledProgram::FindUnit(std::string_view name) const {
  int i = FindUnitIndex(name);
  return i < 0 ? nullptr : &units[i];
}

int CompiledProgram::FindUnitIndex(std::string_view name) const {
  for (size_t i = 0; i < units.size(); ++i) {
    if (units[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const ProcessInfo* CompiledProgram::FindProcess(std::string_view name) const {
  for (const ProcessInfo& p : processes) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

json ProgramToJson(const CompiledProgram& p) {
  json units = json::array();
  for (const CodeUnit& u : p.units) {
    json consts = json::array();
    for (const Constant& c : u.constants) consts.push_back(ConstantToJson(c));
    json code = json::array();
    for (const Instruction& ins : u.code) code.push_back(json::array({OpcodeName(ins.op), ins.arg}));
    units.push_back(json{{"name", u.name},
                         {"num_params", u.num_params},
                         {"locals", u.locals},
                         {"constants", consts},
                         {"code", code}});
  }
  json procs = json::array();
  for (const ProcessInfo& pi : p.processes) {
    json handlers = json::array();
    for (const HandlerInfo& h : pi.handlers) handlers.push_back(json{{"unit", h.unit}, {"kind", h.kind}});
    procs.push_back(json{{"name", pi.name},
                         {"fields", pi.fields},
                         {"handlers", handlers},
                         {"setup_unit", pi.setup_unit},
                         {"run_unit", pi.run_unit},
                         {"setup_arity", pi.setup_arity},
                         {"received_field", pi.received_field}});
  }
  return json{{"format", "algodiv.bytecode"},
              {"version", 1},
              {"mode", p.mode == CompileMode::kSync ? "sync" : "plain"},
              {"globals", p.globals},
              {"units", units},
              {"processes", procs}};
}

CompiledProgram ProgramFromJson(const json& j) {
  if (j.value("format", "") != "algodiv.bytecode" || j.value("version", 0) != 1) {
    throw Error(ErrorCode::kVerify, "not an algodiv.bytecode v1 document");
  }
  CompiledProgram p;
  p.mode = j.at("mode") == "sync" ? CompileMode::kSync : CompileMode::kPlain;
  p.globals = j.at("globals").get<std::vector<std::string>>();
  for (const json& uj : j.at("units")) {
    CodeUnit u;
    u.name = uj.at("name").get<std::string>();
    u.num_params = uj.at("num_params").get<int32_t>();
    u.locals = uj.at("locals").get<std::vector<std::string>>();
    for (const json& c : uj.at("constants")) u.constants.push_back(ConstantFromJson(c));
    for (const json& ins : uj.at("code")) {
      auto op = OpcodeFromName(ins.at(0).get<std::string>());
      if (!op) throw Error(ErrorCode::kVerify, "unknown opcode " + ins.at(0).dump());
      u.code.push_back({*op, ins.at(1).get<int32_t>()});
    }
    p.units.push_back(std::move(u));
  }
  for (const json& pj : j.at("processes")) {
    ProcessInfo pi;
    pi.name = pj.at("name").get<std::string>();
    pi.fields = pj.at("fields").get<std::vector<std::string>>();
    for (const json& h : pj.at("handlers")) {
      pi.handlers.push_back({h.at("unit").get<std::string>(), h.at("kind").get<std::string>()});
    }
    pi.setup_unit = pj.at("setup_unit").get<std::string>();
    pi.run_unit = pj.at("run_unit").get<std::string>();
    pi.setup_arity = pj.at("setup_arity").get<int32_t>();
    pi.received_field = pj.at("received_field").get<int32_t>();
    p.processes.push_back(std::move(pi));
  }
  Verify(p);
  return p;
}

std::string InstructionText(const CodeUnit& unit, const Instruction& ins) {
  std::ostringstream s;
  s << OpcodeName(ins.op);
  switch (ins.op) {
    case Opcode::kPushConst:
      s << " " << ins.arg;
      if (ins.arg >= 0 && ins.arg < static_cast<int>(unit.constants.size())) {
        if (const auto* v = std::get_if<Value>(&unit.constants[ins.arg])) {
          s << " (" << v->ToString() << ")";
        }
      }
      break;
    case Opcode::kLoadLocal:
    case Opcode::kStoreLocal:
      s << " " << ins.arg;
      if (ins.arg >= 0 && ins.arg < unit.num_locals()) s << " (" << unit.locals[ins.arg] << ")";
      break;
    case Opcode::kBinaryOp:
      s << " " << (ins.arg >= 0 && ins.arg < 6 ? kArithNames[ins.arg] : "?");
      break;
    case Opcode::kCompareOp:
      s << " " << (ins.arg >= 0 && ins.arg < 8 ? kCmpNames[ins.arg] : "?");
      break;
    case Opcode::kCall:
      s << " " << ins.arg;
      if (ins.arg >= 0 && ins.arg < static_cast<int>(unit.constants.size())) {
        if (const auto* c = std::get_if<Callee>(&unit.constants[ins.arg])) {
          s << " (" << c->name << "/" << c->arity << ")";
        }
      }
      break;
    case Opcode::kNot:
    case Opcode::kReturn:
    case Opcode::kSetAdd:
    case Opcode::kSetDel:
    case Opcode::kIterNew:
    case Opcode::kSend:
    case Opcode::kCount:
    case Opcode::kNop:
      break;
    default:
      s << " " << ins.arg;
  }
  return s.str();
}

std::string Disassemble(const CompiledProgram& p) {
  std::ostringstream s;
  s << "; algodiv bytecode v1, mode "
    << (p.mode == CompileMode::kSync ? "sync" : "plain") << ", "
    << p.units.size() << " units, " << p.globals.size() << " globals\n";
  for (size_t i = 0; i < p.globals.size(); ++i) s << "; global " << i << " " << p.globals[i] << "\n";
  for (const ProcessInfo& pi : p.processes) {
    s << "; process " << pi.name << " fields [";
    for (size_t i = 0; i < pi.fields.size(); ++i) s << (i ? ", " : "") << pi.fields[i];
    s << "] handlers [";
    for (size_t i = 0; i < pi.handlers.size(); ++i) s << (i ? ", " : "") << pi.handlers[i].unit;
    s << "]\n";
  }
  for (const CodeUnit& u : p.units) {
    s << "\n" << u.name << " (params " << u.num_params << ", locals "
      << u.num_locals() << ", constants " << u.constants.size() << "):\n";
    for (size_t pc = 0; pc < u.code.size(); ++pc) {
      s << "  " << pc << "\t" << InstructionText(u, u.code[pc]) << "\n";
    }
  }
  return s.str();
}

}  // namespace algodiv::lang
