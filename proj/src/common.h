// Copyright 2026 The Authors.
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

#ifndef HSM_SRC_COMMON_H_
#define HSM_SRC_COMMON_H_

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsm {

// Mirrors hsm_status in the public header.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kTooLarge = 2,
  kNotIndependent = 3,
  kNotConverged = 4,
  kIo = 5,
  kParse = 6,
  kBusySlot = 7,
  kInfeasible = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, message);
}

// Vertex sets are bitmasks over internal vertex indices 0..63.
using VertexSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline VertexSet Bit(int v) { return VertexSet{1} << v; }
inline bool Contains(VertexSet s, int v) { return (s >> v) & 1u; }
inline int Count(VertexSet s) { return std::popcount(s); }
inline int Lowest(VertexSet s) { return std::countr_zero(s); }
inline VertexSet FirstN(int n) {
  return n >= 64 ? ~VertexSet{0} : (VertexSet{1} << n) - 1;
}

inline std::vector<int> Members(VertexSet s) {
  std::vector<int> out;
  out.reserve(Count(s));
  while (s) {
    out.push_back(Lowest(s));
    s &= s - 1;
  }
  return out;
}

// True when the ascending member sequence of `a` precedes that of `b`.
inline bool LexLess(VertexSet a, VertexSet b) {
  VertexSet diff = a ^ b;
  if (diff == 0) return false;
  int x = Lowest(diff);
  VertexSet above = ~FirstN(x + 1);
  if (Contains(a, x)) return (b & above) != 0;
  return (a & above) == 0;
}

}  // namespace hsm

#endif  // HSM_SRC_COMMON_H_
