// Copyright (c) 2026 The avbpo authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace avbpo {

// Dense float32 array with explicit dims. Data is row-major over dims.
struct Array {
  std::vector<int64_t> dims;
  std::vector<float> data;

  int64_t size() const {
    int64_t n = 1;
    for (int64_t d : dims) n *= d;
    return n;
  }
  bool operator==(const Array& other) const = default;
};

// Sidecar format: 8-byte magic "AVBPO001", rank and dims as little-endian
// int64, then float32 little-endian payload.
void write_array(const std::string& path, const Array& a);
Array read_array(const std::string& path);

void write_array(std::ostream& os, const Array& a);
Array read_array(std::istream& is, const std::string& what);

}  // namespace avbpo
