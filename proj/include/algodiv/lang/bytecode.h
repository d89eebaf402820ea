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

#ifndef ALGODIV_LANG_BYTECODE_H_
#define ALGODIV_LANG_BYTECODE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "algodiv/core/value.h"
#include "json.hpp"

namespace algodiv::lang {

enum class Opcode : uint8_t {
  kPushConst, kLoadLocal, kStoreLocal, kLoadGlobal, kStoreGlobal,
  kLoadField, kStoreField, kBinaryOp, kCompareOp, kNot, kJump,
  kJumpIfFalse, kCall, kReturn, kBuildTuple, kBuildSeq, kBuildSet,
  kSetAdd, kSetDel, kIterNew, kIterNext, kSend, kYieldPoint, kCount, kNop,
};
inline constexpr int kNumOpcodes = 25;

const char* OpcodeName(Opcode op);
std::optional<Opcode> OpcodeFromName(std::string_view name);
bool IsJump(Opcode op);  // JUMP, JUMP_IF_FALSE, ITER_NEXT.

// BINARY_OP operands.
enum class ArithOp : int32_t { kAdd, kSub, kMul, kDiv, kMod, kIndex };
// COMPARE_OP operands.
enum class CmpOp : int32_t { kEq, kNe, kLt, kLe, kGt, kGe, kIn, kNotIn };

struct Instruction {
  Opcode op = Opcode::kNop;
  int32_t arg = 0;
  bool operator==(const Instruction&) const = default;
};

struct Callee {
  enum class Kind : uint8_t { kFunction, kMethod, kBuiltin };
  Kind kind = Kind::kFunction;
  std::string name;  // Unit name for functions and methods.
  int32_t arity = 0;
  bool operator==(const Callee&) const = default;
};

using Constant = std::variant<Value, Callee>;

struct CodeUnit {
  std::string name;
  std::vector<Constant> constants;
  int32_t num_params = 0;
  std::vector<std::string> locals;  // Parameters first.
  std::vector<Instruction> code;

  int32_t num_locals() const { return static_cast<int32_t>(locals.size()); }
  // "P" for "P.run"; empty for top-level functions.
  std::string owner() const;
};

struct HandlerInfo {
  std::string unit;
  std::string kind;  // First literal string of the pattern, or "msg".
};

struct ProcessInfo {
  std::string name;
  std::vector<std::string> fields;
  std::vector<HandlerInfo> handlers;  // In source order.
  std::string setup_unit;
  std::string run_unit;
  int32_t setup_arity = 0;  // Includes the gateway parameter in sync mode.
  int32_t received_field = -1;  // Field holding `received`, if referenced.
};

enum class CompileMode { kPlain, kSync };

struct CompiledProgram {
  CompileMode mode = CompileMode::kPlain;
  std::vector<std::string> globals;
  std::vector<CodeUnit> units;
  std::vector<ProcessInfo> processes;

  const CodeUnit* FindUnit(std::string_view name) const;
  int FindUnitIndex(std::string_view name) const;
  const ProcessInfo* FindProcess(std::string_view name) const;
};

inline constexpr std::string_view kGlobalsUnit = "<globals>";

// Versioned JSON; operands are base-10 integers.
nlohmann::json ProgramToJson(const CompiledProgram& program);
CompiledProgram ProgramFromJson(const nlohmann::json& j);

std::string Disassemble(const CompiledProgram& program);
std::string InstructionText(const CodeUnit& unit, const Instruction& ins);

// Structural checks: jump ranges, index ranges, stack balance, every path
// ends in RETURN. Throws Error(kVerify).
void Verify(const CompiledProgram& program);

}  // namespace algodiv::lang

#endif  // ALGODIV_LANG_BYTECODE_H_
