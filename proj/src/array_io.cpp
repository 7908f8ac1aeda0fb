// Copyright (c) 2026 The avbpo authors.
// SPDX-License-Identifier: Apache-2.0

#include "avbpo/array_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "avbpo/common.hpp"

namespace avbpo {

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'A', 'V', 'B', 'P', 'O', '0', '0', '1'};
}

void write_array(std::ostream& os, const Array& a) {
  os.write(kMagic, 8);
  const int64_t rank = static_cast<int64_t>(a.dims.size());
  os.write(reinterpret_cast<const char*>(&rank), 8);
  for (int64_t d : a.dims) {
    os.write(reinterpret_cast<const char*>(&d), 8);
  }
  os.write(reinterpret_cast<const char*>(a.data.data()),
           static_cast<std::streamsize>(a.data.size() * sizeof(float)));
}

Array read_array(std::istream& is, const std::string& what) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) {
    throw IoError("bad magic in array " + what);
  }
  int64_t rank = 0;
  is.read(reinterpret_cast<char*>(&rank), 8);
  if (!is || rank < 0 || rank > 8) {
    throw IoError("bad rank in array " + what);
  }
  Array a;
  a.dims.resize(static_cast<size_t>(rank));
  for (auto& d : a.dims) {
    is.read(reinterpret_cast<char*>(&d), 8);
    if (!is || d < 0) throw IoError("bad dims in array " + what);
  }
  a.data.resize(static_cast<size_t>(a.size()));
  is.read(reinterpret_cast<char*>(a.data.data()),
          static_cast<std::streamsize>(a.data.size() * sizeof(float)));
  if (!is) throw IoError("truncated array " + what);
  return a;
}

void write_array(const std::string& path, const Array& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for write: " + path);
  write_array(os, a);
  if (!os) throw IoError("write failed: " + path);
}

Array read_array(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("missing array file: " + path);
  return read_array(is, path);
}

}  // namespace avbpo
