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
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mrlwe/errors.hpp"
#include "mrlwe/modmath.hpp"

namespace mrlwe {

// ---------------------------------------------------------------------------
// Exact arithmetic in multivariate negacyclic rings Z_M[x_1..x_m]/(x_i^{n_i}+1).
//
// Coefficient tensors are flat, row-major, first variable slowest. All
// operations are pure functions of their inputs; every type here is an
// immutable value.
// ---------------------------------------------------------------------------

/// The ring Z_q[x_1..x_m]/(x_i^{n_i}+1) together with the plaintext modulus t.
struct RingParams {
  std::vector<size_t> degrees;  // n_i, each a power of two >= 1
  uint64_t q = 0;               // coefficient modulus: odd prime, q ≡ 1 (mod 2 max n_i)
  uint64_t t = 0;               // plaintext modulus: 2 <= t < q, gcd(t, q) = 1

  size_t var_count() const { return degrees.size(); }

  size_t max_degree() const {
    size_t m = 1;
    for (size_t d : degrees) m = std::max(m, d);
    return m;
  }

  // Always recomputed from the degrees, never stored.
  size_t n() const {
    size_t p = 1;
    for (size_t d : degrees) p *= d;
    return p;
  }

  void validate() const {
    if (degrees.empty())
      throw ParameterError("RingParams: at least one variable required");
    for (size_t i = 0; i < degrees.size(); ++i) {
      if (!is_power_of_two(degrees[i]))
        throw ParameterError("RingParams: degree of variable " +
                             std::to_string(i + 1) + " is not a power of two");
    }
    if (q < 3 || q % 2 == 0 || q >= kModulusCeiling || !is_prime(q))
      throw ParameterError("RingParams: q must be an odd prime below 2^62");
    if ((q - 1) % (2 * max_degree()) != 0)
      throw ParameterError(
          "RingParams: q must satisfy q ≡ 1 (mod 2·max degree) = mod " +
          std::to_string(2 * max_degree()));
    if (t < 2 || t >= q) throw ParameterError("RingParams: need 2 <= t < q");
    if (std::gcd(t, q) != 1)
      throw ParameterError("RingParams: gcd(t, q) must be 1");
  }

  bool operator==(const RingParams&) const = default;
};

/// A multivariate polynomial: flat residue tensor modulo `modulus`.
struct MultiPoly {
  std::vector<size_t> shape;
  uint64_t modulus = 0;
  std::vector<uint64_t> coeffs;  // row-major, first variable slowest

  static MultiPoly zero(std::vector<size_t> shape, uint64_t modulus) {
    MultiPoly p;
    p.shape = std::move(shape);
    p.modulus = modulus;
    size_t n = 1;
    for (size_t d : p.shape) n *= d;
    p.coeffs.assign(n, 0);
    return p;
  }

  static MultiPoly constant(std::vector<size_t> shape, uint64_t modulus,
                            uint64_t value) {
    MultiPoly p = zero(std::move(shape), modulus);
    p.coeffs[0] = value % modulus;
    return p;
  }

  size_t size() const { return coeffs.size(); }

  bool is_zero() const {
    for (uint64_t c : coeffs)
      if (c != 0) return false;
    return true;
  }

  void validate() const {
    if (modulus < 2) throw StructuralError("MultiPoly: modulus must be >= 2");
    size_t n = 1;
    for (size_t d : shape) n *= d;
    if (coeffs.size() != n)
      throw StructuralError("MultiPoly: coefficient count does not match shape");
    for (uint64_t c : coeffs)
      if (c >= modulus)
        throw StructuralError("MultiPoly: residue out of range");
  }

  bool operator==(const MultiPoly&) const = default;
};

namespace detail {

inline std::string shape_str(const std::vector<size_t>& s) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

inline void check_compatible(const MultiPoly& a, const MultiPoly& b,
                             const char* op) {
  if (a.shape != b.shape)
    throw StructuralError(std::string(op) + ": shape mismatch " +
                          shape_str(a.shape) + " vs " + shape_str(b.shape));
  if (a.modulus != b.modulus)
    throw StructuralError(std::string(op) + ": modulus mismatch " +
                          std::to_string(a.modulus) + " vs " +
                          std::to_string(b.modulus));
}

// Advance a row-major multi-index; returns false after the last one.
inline bool next_index(std::vector<size_t>& idx,
                       const std::vector<size_t>& shape) {
  for (size_t a = idx.size(); a-- > 0;) {
    if (++idx[a] < shape[a]) return true;
    idx[a] = 0;
  }
  return false;
}

}  // namespace detail

// --------------------------- basic coefficient ops -------------------------

inline MultiPoly add(const MultiPoly& a, const MultiPoly& b) {
  detail::check_compatible(a, b, "add");
  MultiPoly out = a;
  for (size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = add_mod(a.coeffs[i], b.coeffs[i], a.modulus);
  return out;
}

inline MultiPoly sub(const MultiPoly& a, const MultiPoly& b) {
  detail::check_compatible(a, b, "sub");
  MultiPoly out = a;
  for (size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = sub_mod(a.coeffs[i], b.coeffs[i], a.modulus);
  return out;
}

inline MultiPoly negate(const MultiPoly& a) {
  MultiPoly out = a;
  for (auto& c : out.coeffs) c = neg_mod(c, a.modulus);
  return out;
}

inline MultiPoly scalar_mul(const MultiPoly& a, uint64_t s) {
  MultiPoly out = a;
  s %= a.modulus;
  for (auto& c : out.coeffs) c = mul_mod(c, s, a.modulus);
  return out;
}

// ------------------------------- roots -------------------------------------

enum class RootKind { unity, neg_one };

/// Smallest residue x with x^order ≡ 1 (kind unity, with exact order: every
/// x^i - 1, 0 < i < order, is a unit) or x^order ≡ -1 (kind neg_one).
inline uint64_t find_root(uint64_t modulus, uint64_t order, RootKind kind) {
  if (!is_prime(modulus)) throw ParameterError("find_root: modulus must be prime");
  if (order == 0) throw ParameterError("find_root: order must be positive");
  if (kind == RootKind::unity) {
    if ((modulus - 1) % order != 0)
      throw ExistenceError("find_root: order " + std::to_string(order) +
                           " does not divide modulus-1 = " +
                           std::to_string(modulus - 1));
    auto primes = distinct_prime_factors(order);
    for (uint64_t x = 1; x < modulus; ++x) {
      if (pow_mod(x, order, modulus) != 1) continue;
      bool exact = true;
      for (uint64_t p : primes) {
        if (pow_mod(x, order / p, modulus) == 1) {
          exact = false;
          break;
        }
      }
      if (exact) return x;
    }
    throw ExistenceError("find_root: no residue of exact order " +
                         std::to_string(order));
  }
  // neg_one
  if ((modulus - 1) % (2 * order) != 0)
    throw ExistenceError("find_root: 2·order = " + std::to_string(2 * order) +
                         " does not divide modulus-1 = " +
                         std::to_string(modulus - 1));
  for (uint64_t x = 1; x < modulus; ++x) {
    if (pow_mod(x, order, modulus) == modulus - 1) return x;
  }
  throw ExistenceError("find_root: no residue with x^order = -1 found");
}

// ------------------------------ axis NTT ------------------------------------

enum class NttDirection { forward, inverse };

namespace detail {

inline size_t bit_reverse(size_t v, unsigned bits) {
  size_t r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | (v & 1);
    v >>= 1;
  }
  return r;
}

// Precomputed tables for the length-n negacyclic transform modulo `modulus`.
// psi is a 2n-th root of unity with psi^n = -1; merging its powers into the
// butterflies makes pointwise products realize negacyclic convolution.
struct NttPlan {
  uint64_t modulus = 0;
  size_t n = 0;
  std::vector<uint64_t> psi_br;      // psi^bitrev(i)
  std::vector<uint64_t> inv_psi_br;  // psi^-bitrev(i)
  uint64_t n_inv = 1;
};

inline const NttPlan& ntt_plan(uint64_t modulus, size_t n) {
  static std::map<std::pair<uint64_t, size_t>, std::unique_ptr<NttPlan>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(modulus, n);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto plan = std::make_unique<NttPlan>();
  plan->modulus = modulus;
  plan->n = n;
  if (n > 1) {
    if ((modulus - 1) % (2 * n) != 0)
      throw ParameterError(
          "ntt: modulus " + std::to_string(modulus) +
          " lacks a 2n-th root of unity for n = " + std::to_string(n));
    if (!is_prime(modulus))
      throw ParameterError("ntt: modulus " + std::to_string(modulus) +
                           " is not prime");
    // Deterministic psi with psi^n = -1: raise successive small bases to
    // (modulus-1)/2n until one lands outside the index-2 subgroup. A linear
    // scan for the smallest such residue would be infeasible at 60-bit q.
    uint64_t exp = (modulus - 1) / (2 * n);
    uint64_t psi = 0;
    for (uint64_t base = 2; base < modulus; ++base) {
      uint64_t cand = pow_mod(base, exp, modulus);
      if (pow_mod(cand, n, modulus) == modulus - 1) {
        psi = cand;
        break;
      }
    }
    if (psi == 0)
      throw ExistenceError("ntt: no 2n-th root of -1 found");
    uint64_t psi_inv = inv_mod(psi, modulus);
    unsigned bits = log2_exact(n);
    plan->psi_br.resize(n);
    plan->inv_psi_br.resize(n);
    for (size_t i = 0; i < n; ++i) {
      size_t r = bit_reverse(i, bits);
      plan->psi_br[i] = pow_mod(psi, r, modulus);
      plan->inv_psi_br[i] = pow_mod(psi_inv, r, modulus);
    }
    plan->n_inv = inv_mod(n, modulus);
  }
  const NttPlan& ref = *plan;
  cache.emplace(key, std::move(plan));
  return ref;
}

// In-place negacyclic NTT on one fiber. Forward input is in standard order,
// output in bit-reversed order; the inverse undoes exactly that.
inline void ntt_fiber(uint64_t* a, const NttPlan& plan, NttDirection dir) {
  const uint64_t q = plan.modulus;
  const size_t n = plan.n;
  if (n == 1) return;
  if (dir == NttDirection::forward) {
    size_t t = n;
    for (size_t m = 1; m < n; m <<= 1) {
      t >>= 1;
      for (size_t i = 0; i < m; ++i) {
        size_t j1 = 2 * i * t;
        uint64_t s = plan.psi_br[m + i];
        for (size_t j = j1; j < j1 + t; ++j) {
          uint64_t u = a[j];
          uint64_t v = mul_mod(a[j + t], s, q);
          a[j] = add_mod(u, v, q);
          a[j + t] = sub_mod(u, v, q);
        }
      }
    }
  } else {
    size_t t = 1;
    for (size_t m = n; m > 1; m >>= 1) {
      size_t j1 = 0;
      size_t h = m >> 1;
      for (size_t i = 0; i < h; ++i) {
        uint64_t s = plan.inv_psi_br[h + i];
        for (size_t j = j1; j < j1 + t; ++j) {
          uint64_t u = a[j];
          uint64_t v = a[j + t];
          a[j] = add_mod(u, v, q);
          a[j + t] = mul_mod(sub_mod(u, v, q), s, q);
        }
        j1 += 2 * t;
      }
      t <<= 1;
    }
    for (size_t j = 0; j < n; ++j) a[j] = mul_mod(a[j], plan.n_inv, q);
  }
}

// Apply a length-n transform along `axis` of a flat row-major tensor.
template <typename FiberFn>
inline void for_each_fiber(std::vector<uint64_t>& data,
                           const std::vector<size_t>& shape, size_t axis,
                           FiberFn&& fn) {
  size_t len = shape[axis];
  size_t stride = 1;
  for (size_t a = axis + 1; a < shape.size(); ++a) stride *= shape[a];
  size_t outer = 1;
  for (size_t a = 0; a < axis; ++a) outer *= shape[a];
  std::vector<uint64_t> buf(len);
  for (size_t hi = 0; hi < outer; ++hi) {
    for (size_t lo = 0; lo < stride; ++lo) {
      size_t base = hi * len * stride + lo;
      for (size_t k = 0; k < len; ++k) buf[k] = data[base + k * stride];
      fn(buf.data());
      for (size_t k = 0; k < len; ++k) data[base + k * stride] = buf[k];
    }
  }
}

}  // namespace detail

/// Negacyclic (twisted) transform along one axis. inverse(forward(p)) = p;
/// transforming every axis forward, multiplying pointwise and transforming
/// every axis back equals negacyclic_mul.
inline MultiPoly axis_ntt(const MultiPoly& p, size_t axis, NttDirection dir) {
  if (axis >= p.shape.size())
    throw StructuralError("axis_ntt: axis index out of range");
  const auto& plan = detail::ntt_plan(p.modulus, p.shape[axis]);
  MultiPoly out = p;
  detail::for_each_fiber(out.coeffs, out.shape, axis, [&](uint64_t* fiber) {
    detail::ntt_fiber(fiber, plan, dir);
  });
  return out;
}

// --------------------------- multiplication --------------------------------

enum class MulPath { ntt, schoolbook };

namespace detail {

inline MultiPoly schoolbook_negacyclic(const MultiPoly& a, const MultiPoly& b) {
  const uint64_t m = a.modulus;
  const auto& shape = a.shape;
  const size_t rank = shape.size();
  MultiPoly out = MultiPoly::zero(shape, m);

  std::vector<size_t> ia(rank, 0);
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] != 0) {
      std::vector<size_t> jb(rank, 0);
      std::vector<size_t> k(ia);  // k[ax] = (ia[ax] + jb[ax]) mod shape[ax]
      for (size_t j = 0; j < b.coeffs.size(); ++j) {
        if (b.coeffs[j] != 0) {
          // Axis ax wrapped iff k[ax] < ia[ax]; each wrap negates (x^n = -1).
          bool flip = false;
          size_t flat = 0;
          for (size_t ax = 0; ax < rank; ++ax) {
            flip ^= (k[ax] < ia[ax]);
            flat = flat * shape[ax] + k[ax];
          }
          uint64_t prod = mul_mod(a.coeffs[i], b.coeffs[j], m);
          out.coeffs[flat] = flip ? sub_mod(out.coeffs[flat], prod, m)
                                  : add_mod(out.coeffs[flat], prod, m);
        }
        for (size_t ax = rank; ax-- > 0;) {
          ++jb[ax];
          if (++k[ax] == shape[ax]) k[ax] = 0;
          if (jb[ax] < shape[ax]) break;
          jb[ax] = 0;
          k[ax] = ia[ax];
        }
      }
    }
    detail::next_index(ia, shape);
  }
  return out;
}

inline bool ntt_shape_supported(uint64_t modulus, const std::vector<size_t>& shape) {
  if (!is_prime(modulus)) return false;
  for (size_t d : shape)
    if (d > 1 && (modulus - 1) % (2 * d) != 0) return false;
  return true;
}

}  // namespace detail

/// Product in Z_M[x]/(x_i^{n_i}+1). The NTT path requires a prime modulus
/// with 2·n_i | modulus-1 on every axis; callers must ask for the schoolbook
/// path explicitly when the modulus lacks those roots. Both paths are
/// bit-identical.
inline MultiPoly negacyclic_mul(const MultiPoly& a, const MultiPoly& b,
                                MulPath path = MulPath::ntt) {
  detail::check_compatible(a, b, "negacyclic_mul");
  if (path == MulPath::schoolbook) return detail::schoolbook_negacyclic(a, b);
  if (!detail::ntt_shape_supported(a.modulus, a.shape))
    throw ParameterError(
        "negacyclic_mul: modulus " + std::to_string(a.modulus) +
        " lacks the required 2n-th roots; request the schoolbook path for "
        "arbitrary moduli");
  MultiPoly fa = a, fb = b;
  for (size_t ax = 0; ax < a.shape.size(); ++ax) {
    const auto& plan = detail::ntt_plan(a.modulus, a.shape[ax]);
    detail::for_each_fiber(fa.coeffs, fa.shape, ax, [&](uint64_t* f) {
      detail::ntt_fiber(f, plan, NttDirection::forward);
    });
    detail::for_each_fiber(fb.coeffs, fb.shape, ax, [&](uint64_t* f) {
      detail::ntt_fiber(f, plan, NttDirection::forward);
    });
  }
  for (size_t i = 0; i < fa.coeffs.size(); ++i)
    fa.coeffs[i] = mul_mod(fa.coeffs[i], fb.coeffs[i], a.modulus);
  for (size_t ax = 0; ax < a.shape.size(); ++ax) {
    const auto& plan = detail::ntt_plan(a.modulus, a.shape[ax]);
    detail::for_each_fiber(fa.coeffs, fa.shape, ax, [&](uint64_t* f) {
      detail::ntt_fiber(f, plan, NttDirection::inverse);
    });
  }
  return fa;
}

/// Product with the monomial Π x_a^{e_a}, where (e_1..e_m) is the row-major
/// decomposition of `exponent`. Coefficients that wrap past x_a^{n_a} re-enter
/// negated, independently per axis. Column j of the block skew-circulant
/// matrix of p equals monomial_mul(p, j).
inline MultiPoly monomial_mul(const MultiPoly& p, size_t exponent) {
  const auto& shape = p.shape;
  const size_t rank = shape.size();
  if (exponent >= p.coeffs.size())
    throw StructuralError("monomial_mul: exponent out of range");
  std::vector<size_t> e(rank);
  {
    size_t r = exponent;
    for (size_t ax = rank; ax-- > 0;) {
      e[ax] = r % shape[ax];
      r /= shape[ax];
    }
  }
  MultiPoly out = MultiPoly::zero(shape, p.modulus);
  std::vector<size_t> idx(rank, 0);
  for (size_t flat = 0; flat < p.coeffs.size(); ++flat) {
    bool flip = false;
    size_t target = 0;
    for (size_t ax = 0; ax < rank; ++ax) {
      size_t k = idx[ax] + e[ax];
      if (k >= shape[ax]) {
        k -= shape[ax];
        flip = !flip;
      }
      target = target * shape[ax] + k;
    }
    uint64_t c = p.coeffs[flat];
    out.coeffs[target] = flip ? neg_mod(c, p.modulus) : c;
    detail::next_index(idx, shape);
  }
  return out;
}

// --------------------------- base decomposition ----------------------------

/// Digit polynomials of p in base T: Σ_i digits[i]·T^i reconstructs p
/// coefficientwise, every digit residue lies in [0, T).
struct BaseDecomposition {
  uint64_t base = 0;
  std::vector<MultiPoly> digits;
};

inline size_t decomposition_levels(uint64_t modulus, uint64_t base) {
  size_t levels = 0;
  u128 pw = 1;
  while (pw < modulus) {
    pw *= base;
    ++levels;
  }
  return levels;  // = ceil(log_base(modulus))
}

inline BaseDecomposition base_decompose(const MultiPoly& p, uint64_t base) {
  if (base < 2 || base >= p.modulus)
    throw ParameterError("base_decompose: need 2 <= T < modulus");
  size_t levels = decomposition_levels(p.modulus, base);
  BaseDecomposition out;
  out.base = base;
  out.digits.assign(levels, MultiPoly::zero(p.shape, p.modulus));
  for (size_t k = 0; k < p.coeffs.size(); ++k) {
    uint64_t r = p.coeffs[k];
    for (size_t i = 0; i < levels; ++i) {
      out.digits[i].coeffs[k] = r % base;
      r /= base;
    }
  }
  return out;
}

// ------------------------------- remapping ---------------------------------

/// A reversible coefficient reordering between two ring shapes with equal
/// total degree. remap(p, m).coeffs[j] = p.coeffs[m.perm[j]]. This is a
/// module reindexing, not a ring homomorphism.
struct RingMapping {
  std::vector<size_t> source_shape;
  std::vector<size_t> target_shape;
  std::vector<uint64_t> perm;  // permutation of {0..n-1}

  static RingMapping identity(std::vector<size_t> shape) {
    return reshape(shape, shape);
  }

  // Row-major reinterpretation: coefficient at flat index r keeps index r.
  // Splitting (n) into (n1, n2) makes each length-n2 run of consecutive
  // coefficients one slice of the slow variable.
  static RingMapping reshape(std::vector<size_t> src, std::vector<size_t> dst) {
    RingMapping m;
    m.source_shape = std::move(src);
    m.target_shape = std::move(dst);
    size_t n = 1;
    for (size_t d : m.source_shape) n *= d;
    m.perm.resize(n);
    for (size_t i = 0; i < n; ++i) m.perm[i] = i;
    m.validate();
    return m;
  }

  RingMapping inverse() const {
    RingMapping inv;
    inv.source_shape = target_shape;
    inv.target_shape = source_shape;
    inv.perm.assign(perm.size(), 0);
    for (size_t j = 0; j < perm.size(); ++j) inv.perm[perm[j]] = j;
    return inv;
  }

  // Mapping equal to applying `first`, then `second`.
  static RingMapping compose(const RingMapping& first,
                             const RingMapping& second) {
    if (first.target_shape != second.source_shape)
      throw StructuralError("RingMapping::compose: shapes do not chain");
    RingMapping m;
    m.source_shape = first.source_shape;
    m.target_shape = second.target_shape;
    m.perm.resize(first.perm.size());
    for (size_t j = 0; j < m.perm.size(); ++j)
      m.perm[j] = first.perm[second.perm[j]];
    return m;
  }

  void validate() const {
    size_t ns = 1, nt = 1;
    for (size_t d : source_shape) ns *= d;
    for (size_t d : target_shape) nt *= d;
    if (ns != nt)
      throw StructuralError("RingMapping: source and target sizes differ");
    if (perm.size() != ns)
      throw StructuralError("RingMapping: permutation length mismatch");
    std::vector<bool> seen(ns, false);
    for (uint64_t v : perm) {
      if (v >= ns || seen[v])
        throw StructuralError("RingMapping: perm is not a bijection");
      seen[v] = true;
    }
  }
};

inline MultiPoly remap(const MultiPoly& p, const RingMapping& mapping) {
  if (p.shape != mapping.source_shape)
    throw StructuralError("remap: polynomial shape does not match mapping source");
  MultiPoly out;
  out.shape = mapping.target_shape;
  out.modulus = p.modulus;
  out.coeffs.resize(p.coeffs.size());
  for (size_t j = 0; j < out.coeffs.size(); ++j)
    out.coeffs[j] = p.coeffs[mapping.perm[j]];
  return out;
}

}  // namespace mrlwe
