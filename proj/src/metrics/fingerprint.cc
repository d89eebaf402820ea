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

#include "algodiv/metrics/fingerprint.h"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "algodiv/core/error.h"

namespace algodiv::metrics {

using lang::Opcode;

std::vector<NgramToken> NormalizeNgram(std::span<const lang::Instruction> window) {
  std::unordered_map<int32_t, int32_t> locals;
  std::unordered_map<int32_t, int32_t> globals;
  auto renumber = [](std::unordered_map<int32_t, int32_t>& m, int32_t idx) {
    auto [it, inserted] = m.try_emplace(idx, static_cast<int32_t>(m.size()));
    return it->second;
  };
  std::vector<NgramToken> out;
  out.reserve(window.size());
  for (const lang::Instruction& ins : window) {
    NgramToken t{NgramToken::Kind::kPlain, ins.op, ins.arg};
    switch (ins.op) {
      case Opcode::kLoadLocal:
      case Opcode::kStoreLocal:
        t.arg = renumber(locals, ins.arg);
        break;
      case Opcode::kLoadGlobal:
      case Opcode::kStoreGlobal:
        t.arg = renumber(globals, ins.arg);
        break;
      default:
        if (lang::IsJump(ins.op)) {
          t.kind = NgramToken::Kind::kJumpPlaceholder;
          t.arg = 0;
        }
        break;
    }
    out.push_back(t);
  }
  return out;
}

uint64_t Fnv1a64(std::span<const uint8_t> bytes, uint64_t seed) {
  uint64_t h = seed;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t HashTokens(const std::vector<NgramToken>& tokens) {
  // Each token serializes to 6 bytes: kind, opcode, operand (little endian).
  std::vector<uint8_t> bytes;
  bytes.reserve(tokens.size() * 6);
  for (const NgramToken& t : tokens) {
    bytes.push_back(static_cast<uint8_t>(t.kind));
    bytes.push_back(static_cast<uint8_t>(t.op));
    auto arg = static_cast<uint32_t>(t.arg);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<uint8_t>(arg >> (8 * i)));
  }
  return Fnv1a64(bytes);
}

std::vector<size_t> WinnowPositions(std::span<const uint64_t> hashes, int w) {
  if (w < 1) throw Error(ErrorCode::kUsage, "winnow window must be at least 1");
  std::vector<size_t> out;
  if (hashes.empty()) return out;
  size_t win = std::min<size_t>(w, hashes.size());
  // Monotonic deque of candidate positions; ties keep the rightmost.
  std::deque<size_t> dq;
  for (size_t i = 0; i < hashes.size(); ++i) {
    while (!dq.empty() && hashes[dq.back()] >= hashes[i]) dq.pop_back();
    dq.push_back(i);
    if (i + 1 < win) continue;
    while (dq.front() + win <= i) dq.pop_front();
    if (out.empty() || out.back() != dq.front()) out.push_back(dq.front());
  }
  return out;
}

std::vector<uint64_t> Winnow(std::span<const uint64_t> hashes, int w) {
  std::vector<uint64_t> out;
  for (size_t p : WinnowPositions(hashes, w)) out.push_back(hashes[p]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<uint64_t>> UnitNgramHashes(const lang::CompiledProgram& program, int n) {
  if (n < 1) throw Error(ErrorCode::kUsage, "n-gram length must be at least 1");
  std::vector<std::vector<uint64_t>> out;
  for (const lang::CodeUnit& unit : program.units) {
    std::vector<uint64_t> hs;
    const auto& code = unit.code;
    if (code.size() < static_cast<size_t>(n)) {
      std::vector<NgramToken> toks = NormalizeNgram(code);
      toks.resize(n, NgramToken{NgramToken::Kind::kBoundary, Opcode::kNop, 0});
      hs.push_back(HashTokens(toks));
    } else {
      for (size_t i = 0; i + n <= code.size(); ++i) {
        hs.push_back(HashTokens(NormalizeNgram(std::span(code).subspan(i, n))));
      }
    }
    out.push_back(std::move(hs));
  }
  return out;
}

Fingerprint NgramFingerprint(const lang::CompiledProgram& program, const FingerprintParams& params) {
  Fingerprint fp{params, {}};
  for (const auto& hs : UnitNgramHashes(program, params.n)) {
    if (params.winnow) {
      std::vector<uint64_t> sel = Winnow(hs, params.w);
      fp.hashes.insert(fp.hashes.end(), sel.begin(), sel.end());
    } else {
      fp.hashes.insert(fp.hashes.end(), hs.begin(), hs.end());
    }
  }
  std::sort(fp.hashes.begin(), fp.hashes.end());
  fp.hashes.erase(std::unique(fp.hashes.begin(), fp.hashes.end()), fp.hashes.end());
  return fp;
}

nlohmann::json FingerprintToJson(const Fingerprint& fp) {
  nlohmann::json hashes = nlohmann::json::array();
  for (uint64_t h : fp.hashes) hashes.push_back(h);
  return {{"format", "algodiv.fingerprint"},
          {"n", fp.params.n},
          {"w", fp.params.w},
          {"winnow", fp.params.winnow},
          {"hashes", hashes}};
}

Fingerprint FingerprintFromJson(const nlohmann::json& j) {
  try {
    if (j.at("format") != "algodiv.fingerprint") throw Error(ErrorCode::kIo, "not a fingerprint document");
    Fingerprint fp;
    fp.params.n = j.at("n").get<int>();
    fp.params.w = j.at("w").get<int>();
    fp.params.winnow = j.at("winnow").get<bool>();
    for (const auto& h : j.at("hashes")) fp.hashes.push_back(h.get<uint64_t>());
    std::sort(fp.hashes.begin(), fp.hashes.end());
    fp.hashes.erase(std::unique(fp.hashes.begin(), fp.hashes.end()), fp.hashes.end());
    return fp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad fingerprint document: ") + e.what());
  }
}

}  // namespace algodiv::metrics
