// Copyright (c) 2026 The avbpo authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace avbpo {

// Thrown on malformed inputs, broken invariants, bad config. CLI maps this
// to exit code 2; all other exceptions map to 3.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// splitmix64. Used to derive per-clip / per-array substream seeds so that
// generation order never affects results.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
  return mix64(seed ^ mix64(v));
}

inline uint64_t hash_str(const std::string& s) {
  // FNV-1a
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t hash_combine(uint64_t seed, const std::string& s) {
  return hash_combine(seed, hash_str(s));
}

}  // namespace avbpo
