// Copyright 2026 The mrlwe-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mrlwe/relin.hpp"
#include "mrlwe/she.hpp"

namespace mrlwe {

// ---------------------------------------------------------------------------
// Binary container for keys and ciphertexts.
//
//   magic   "MRLW"
//   version u16 LE
//   kind    u16 LE
//   params  m, degrees[m], q, t          (u64 LE each)
//   payload kind-specific, u64 LE fields and coefficient arrays
//
// Ciphertext payload: depth, max_depth, gamma, then gamma coefficient arrays
// of n residues each. Round-trips are byte-identical; readers reject unknown
// versions and kinds and validate every structural invariant on load.
// ---------------------------------------------------------------------------

enum class WireKind : uint16_t {
  secret_key = 1,
  public_key = 2,
  ciphertext = 3,
  relin_key = 4,
  structure_key = 5,
};

namespace wire {

inline constexpr char kMagic[4] = {'M', 'R', 'L', 'W'};
inline constexpr uint16_t kVersion = 1;

inline void put_u16(std::ostream& os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

inline void put_u64(std::ostream& os, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline uint16_t get_u16(std::istream& is) {
  unsigned char b[2];
  if (!is.read(reinterpret_cast<char*>(b), 2))
    throw IoError("wire: truncated input");
  return static_cast<uint16_t>(b[0] | (uint16_t(b[1]) << 8));
}

inline uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8))
    throw IoError("wire: truncated input");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
  return v;
}

inline void put_poly(std::ostream& os, const MultiPoly& p) {
  for (uint64_t c : p.coeffs) put_u64(os, c);
}

inline MultiPoly get_poly(std::istream& is, const std::vector<size_t>& shape,
                          uint64_t modulus) {
  MultiPoly p = MultiPoly::zero(shape, modulus);
  for (auto& c : p.coeffs) {
    c = get_u64(is);
    if (c >= modulus) throw IoError("wire: residue out of range");
  }
  return p;
}

inline void put_header(std::ostream& os, WireKind kind,
                       const RingParams& params) {
  os.write(kMagic, 4);
  put_u16(os, kVersion);
  put_u16(os, static_cast<uint16_t>(kind));
  put_u64(os, params.degrees.size());
  for (size_t d : params.degrees) put_u64(os, d);
  put_u64(os, params.q);
  put_u64(os, params.t);
}

inline std::pair<WireKind, RingParams> get_header(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != std::string(kMagic, 4))
    throw IoError("wire: bad magic");
  uint16_t version = get_u16(is);
  if (version != kVersion)
    throw IoError("wire: unsupported version " + std::to_string(version));
  uint16_t kind = get_u16(is);
  if (kind < 1 || kind > 5)
    throw IoError("wire: unknown kind " + std::to_string(kind));
  RingParams params;
  uint64_t m = get_u64(is);
  if (m == 0 || m > 16) throw IoError("wire: implausible variable count");
  params.degrees.resize(m);
  for (auto& d : params.degrees) {
    uint64_t v = get_u64(is);
    if (v == 0 || v > (uint64_t{1} << 40))
      throw IoError("wire: implausible degree");
    d = static_cast<size_t>(v);
  }
  params.q = get_u64(is);
  params.t = get_u64(is);
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw IoError(std::string("wire: invalid ring parameters: ") + e.what());
  }
  return {static_cast<WireKind>(kind), params};
}

inline void expect_kind(WireKind got, WireKind want) {
  if (got != want)
    throw IoError("wire: unexpected object kind " +
                  std::to_string(static_cast<int>(got)));
}

}  // namespace wire

// ------------------------------- writers -----------------------------------

inline void save(std::ostream& os, const SecretKey& sk) {
  wire::put_header(os, WireKind::secret_key, sk.params);
  wire::put_poly(os, sk.s);
}

inline void save(std::ostream& os, const PublicKey& pk) {
  wire::put_header(os, WireKind::public_key, pk.params);
  wire::put_poly(os, pk.a0);
  wire::put_poly(os, pk.a1);
}

inline void save(std::ostream& os, const Ciphertext& ct) {
  wire::put_header(os, WireKind::ciphertext, ct.params);
  wire::put_u64(os, ct.depth);
  wire::put_u64(os, ct.max_depth);
  wire::put_u64(os, ct.gamma());
  for (const auto& c : ct.comps) wire::put_poly(os, c);
}

inline void save(std::ostream& os, const RelinKey& rk) {
  wire::put_header(os, WireKind::relin_key, rk.params);
  wire::put_u64(os, rk.base);
  wire::put_u64(os, rk.hom.size());
  for (const auto& [a, b] : rk.hom) {
    wire::put_poly(os, a);
    wire::put_poly(os, b);
  }
}

inline void save(std::ostream& os, const StructureKey& stk) {
  wire::put_header(os, WireKind::structure_key, stk.source);
  wire::put_u64(os, stk.base);
  wire::put_u64(os, stk.target.degrees.size());
  for (size_t d : stk.target.degrees) wire::put_u64(os, d);
  wire::put_u64(os, stk.mapping.perm.size());
  for (uint64_t v : stk.mapping.perm) wire::put_u64(os, v);
  wire::put_u64(os, stk.levels());
  for (const auto& [a, b] : stk.grid) {
    wire::put_poly(os, a);
    wire::put_poly(os, b);
  }
}

// ------------------------------- readers -----------------------------------

inline SecretKey load_secret_key(std::istream& is) {
  auto [kind, params] = wire::get_header(is);
  wire::expect_kind(kind, WireKind::secret_key);
  return SecretKey{wire::get_poly(is, params.degrees, params.q), params};
}

inline PublicKey load_public_key(std::istream& is) {
  auto [kind, params] = wire::get_header(is);
  wire::expect_kind(kind, WireKind::public_key);
  MultiPoly a0 = wire::get_poly(is, params.degrees, params.q);
  MultiPoly a1 = wire::get_poly(is, params.degrees, params.q);
  return PublicKey{std::move(a0), std::move(a1), params};
}

inline Ciphertext load_ciphertext(std::istream& is) {
  auto [kind, params] = wire::get_header(is);
  wire::expect_kind(kind, WireKind::ciphertext);
  Ciphertext ct;
  ct.params = params;
  uint64_t depth = wire::get_u64(is);
  uint64_t max_depth = wire::get_u64(is);
  if (depth > max_depth || max_depth > 64)
    throw IoError("wire: implausible depth counters");
  ct.depth = static_cast<uint32_t>(depth);
  ct.max_depth = static_cast<uint32_t>(max_depth);
  uint64_t gamma = wire::get_u64(is);
  if (gamma < 2 || gamma > 4096) throw IoError("wire: implausible gamma");
  ct.comps.reserve(gamma);
  for (uint64_t i = 0; i < gamma; ++i)
    ct.comps.push_back(wire::get_poly(is, params.degrees, params.q));
  return ct;
}

inline RelinKey load_relin_key(std::istream& is) {
  auto [kind, params] = wire::get_header(is);
  wire::expect_kind(kind, WireKind::relin_key);
  RelinKey rk;
  rk.params = params;
  rk.base = wire::get_u64(is);
  if (rk.base < 2 || rk.base >= params.q) throw IoError("wire: bad base T");
  uint64_t levels = wire::get_u64(is);
  if (levels != decomposition_levels(params.q, rk.base))
    throw IoError("wire: level count does not match base and modulus");
  for (uint64_t i = 0; i < levels; ++i) {
    MultiPoly a = wire::get_poly(is, params.degrees, params.q);
    MultiPoly b = wire::get_poly(is, params.degrees, params.q);
    rk.hom.emplace_back(std::move(a), std::move(b));
  }
  return rk;
}

inline StructureKey load_structure_key(std::istream& is) {
  auto [kind, params] = wire::get_header(is);
  wire::expect_kind(kind, WireKind::structure_key);
  StructureKey stk;
  stk.source = params;
  stk.base = wire::get_u64(is);
  if (stk.base < 2 || stk.base >= params.q) throw IoError("wire: bad base T");
  uint64_t k = wire::get_u64(is);
  if (k == 0 || k > 16) throw IoError("wire: implausible target rank");
  stk.target = params;
  stk.target.degrees.resize(k);
  for (auto& d : stk.target.degrees) {
    uint64_t v = wire::get_u64(is);
    if (v == 0 || v > (uint64_t{1} << 40)) throw IoError("wire: bad degree");
    d = static_cast<size_t>(v);
  }
  try {
    stk.target.validate();
  } catch (const ParameterError& e) {
    throw IoError(std::string("wire: invalid target ring: ") + e.what());
  }
  stk.mapping.source_shape = params.degrees;
  stk.mapping.target_shape = stk.target.degrees;
  uint64_t n = wire::get_u64(is);
  if (n != params.n()) throw IoError("wire: permutation length mismatch");
  stk.mapping.perm.resize(n);
  for (auto& v : stk.mapping.perm) v = wire::get_u64(is);
  try {
    stk.mapping.validate();
  } catch (const StructuralError& e) {
    throw IoError(std::string("wire: invalid mapping: ") + e.what());
  }
  uint64_t levels = wire::get_u64(is);
  if (levels != decomposition_levels(params.q, stk.base))
    throw IoError("wire: level count does not match base and modulus");
  for (uint64_t i = 0; i < n * levels; ++i) {
    MultiPoly a = wire::get_poly(is, stk.target.degrees, params.q);
    MultiPoly b = wire::get_poly(is, stk.target.degrees, params.q);
    stk.grid.emplace_back(std::move(a), std::move(b));
  }
  return stk;
}

// ------------------------------ file helpers -------------------------------

template <typename T>
void save_file(const std::string& path, const T& object) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  save(os, object);
  if (!os) throw IoError("write failure on " + path);
}

template <typename Loader>
auto load_file(const std::string& path, Loader&& loader) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return loader(is);
}

inline SecretKey load_secret_key_file(const std::string& path) {
  return load_file(path, [](std::istream& is) { return load_secret_key(is); });
}
inline PublicKey load_public_key_file(const std::string& path) {
  return load_file(path, [](std::istream& is) { return load_public_key(is); });
}
inline Ciphertext load_ciphertext_file(const std::string& path) {
  return load_file(path, [](std::istream& is) { return load_ciphertext(is); });
}
inline RelinKey load_relin_key_file(const std::string& path) {
  return load_file(path, [](std::istream& is) { return load_relin_key(is); });
}
inline StructureKey load_structure_key_file(const std::string& path) {
  return load_file(path,
                   [](std::istream& is) { return load_structure_key(is); });
}

inline std::string to_bytes(const auto& object) {
  std::ostringstream os(std::ios::binary);
  save(os, object);
  return os.str();
}

}  // namespace mrlwe
