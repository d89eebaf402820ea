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

#ifndef ALGODIV_METRICS_FINGERPRINT_H_
#define ALGODIV_METRICS_FINGERPRINT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "algodiv/lang/bytecode.h"
#include "json.hpp"

namespace algodiv::metrics {

struct FingerprintParams {
  int n = 5;
  int w = 4;
  bool winnow = false;
  bool operator==(const FingerprintParams&) const = default;
};

// Sorted, duplicate-free hash set tagged with the parameters that made it.
struct Fingerprint {
  FingerprintParams params;
  std::vector<uint64_t> hashes;
  bool operator==(const Fingerprint&) const = default;
};

// One normalized instruction. Jump targets become a placeholder; the
// boundary token pads units shorter than n.
struct NgramToken {
  enum class Kind : uint8_t { kPlain, kJumpPlaceholder, kBoundary };
  Kind kind = Kind::kPlain;
  lang::Opcode op = lang::Opcode::kNop;
  int32_t arg = 0;
  bool operator==(const NgramToken&) const = default;
};

std::vector<NgramToken> NormalizeNgram(std::span<const lang::Instruction> window);

uint64_t Fnv1a64(std::span<const uint8_t> bytes, uint64_t seed = 0xcbf29ce484222325ULL);
uint64_t HashTokens(const std::vector<NgramToken>& tokens);

// Rightmost minimum of every window of w hashes. Throws kUsage for w < 1.
std::vector<uint64_t> Winnow(std::span<const uint64_t> hashes, int w);
// Positions selected by Winnow, ascending.
std::vector<size_t> WinnowPositions(std::span<const uint64_t> hashes, int w);

// Per-unit n-gram hashes (unit order), before winnowing.
std::vector<std::vector<uint64_t>> UnitNgramHashes(const lang::CompiledProgram& program, int n);

Fingerprint NgramFingerprint(const lang::CompiledProgram& program, const FingerprintParams& params = {});

nlohmann::json FingerprintToJson(const Fingerprint& fp);
Fingerprint FingerprintFromJson(const nlohmann::json& j);

}  // namespace algodiv::metrics

#endif  // ALGODIV_METRICS_FINGERPRINT_H_
