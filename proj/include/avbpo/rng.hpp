// Copyright (c) 2026 The avbpo authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "avbpo/common.hpp"

namespace avbpo {

// Deterministic RNG. The distributions are implemented by hand because the
// std::*_distribution classes are implementation-defined; reproducibility
// contracts here are byte-level.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  uint64_t uniform_int(uint64_t n) { return next_u64() % n; }

  // standard normal via Box-Muller with cached spare
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  const T& choice(const std::vector<T>& items) {
    return items[uniform_int(items.size())];
  }

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = uniform_int(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace avbpo
