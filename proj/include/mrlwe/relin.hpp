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
#include <string>
#include <utility>
#include <vector>

#include "mrlwe/she.hpp"

namespace mrlwe {

// ---------------------------------------------------------------------------
// Key homomorphisms ("pseudoencryptions" of key material in base T) and the
// two operations built on them:
//
//   relinearize      gamma 3 -> 2 after a homomorphic product
//   switch_structure change the ring shape of a ciphertext unattended
//
// A homomorphism pair h_i = (a_i, b_i = -(s_dst a_i + T e_i) + T^i src)
// satisfies b_i + s_dst a_i = T^i src - T e_i, so accumulating base-T digits
// against it moves `src` terms of a decryption circuit under the key s_dst
// while only adding multiples of T to the noise.
// ---------------------------------------------------------------------------

/// Degree-reduction key: pseudoencryptions of one source secret (typically
/// s^2) under the destination key, one pair per base-T digit level.
struct RelinKey {
  uint64_t base = 0;  // T; defaults to t at generation time
  std::vector<std::pair<MultiPoly, MultiPoly>> hom;  // (a_i, b_i), i ascending
  RingParams params;

  size_t levels() const { return hom.size(); }
};

namespace detail {

inline std::pair<MultiPoly, MultiPoly> make_hom(const MultiPoly& dst_key,
                                                const MultiPoly& source_term,
                                                const RingParams& params,
                                                uint64_t base,
                                                const GaussianSampler& sampler,
                                                Rng& rng) {
  MultiPoly a = uniform_poly(params, rng);
  MultiPoly e = MultiPoly::zero(params.degrees, params.q);
  for (auto& c : e.coeffs) c = mod_into(sampler.sample(rng), params.q);
  MultiPoly b = add(
      negate(add(negacyclic_mul(dst_key, a), scalar_mul(e, base % params.q))),
      source_term);
  return {std::move(a), std::move(b)};
}

}  // namespace detail

/// Pseudoencrypts `src_secret` (a ring element; pass square_key(sk) for the
/// post-multiplication cleanup key) under `dst`. base_T = 0 selects T = t.
inline RelinKey gen_relin_key(const MultiPoly& src_secret, const SecretKey& dst,
                              uint64_t base_T, const NoiseParams& np,
                              Rng& rng) {
  if (src_secret.shape != dst.params.degrees ||
      src_secret.modulus != dst.params.q)
    throw StructuralError("gen_relin_key: source secret not in the key ring");
  uint64_t T = base_T == 0 ? dst.params.t : base_T;
  if (T < 2 || T >= dst.params.q)
    throw ParameterError("gen_relin_key: need 2 <= T < q");
  GaussianSampler sampler(np);
  RelinKey rk;
  rk.base = T;
  rk.params = dst.params;
  size_t levels = decomposition_levels(dst.params.q, T);
  uint64_t t_pow = 1;
  for (size_t i = 0; i < levels; ++i) {
    rk.hom.push_back(detail::make_hom(dst.s, scalar_mul(src_secret, t_pow),
                                      dst.params, T, sampler, rng));
    t_pow = mul_mod(t_pow, T, dst.params.q);
  }
  return rk;
}

inline MultiPoly square_key(const SecretKey& sk) {
  return negacyclic_mul(sk.s, sk.s);
}

/// Relin key for cleaning up one multiplication: s^2 pseudoencrypted under s.
inline RelinKey gen_mul_relin_key(const SecretKey& sk, uint64_t base_T,
                                  const NoiseParams& np, Rng& rng) {
  return gen_relin_key(square_key(sk), sk, base_T, np, rng);
}

/// (c0, c1, c2) -> (c0', c1') decrypting to the same plaintext, given a key
/// pseudoencrypting the square of the decryption key.
inline Ciphertext relinearize(const Ciphertext& ct, const RelinKey& rk) {
  if (ct.gamma() != 3)
    throw StructuralError("relinearize: expected a 3-component ciphertext");
  if (ct.params != rk.params)
    throw StructuralError("relinearize: key and ciphertext parameters differ");
  BaseDecomposition digits = base_decompose(ct.comps[2], rk.base);
  MultiPoly c0 = ct.comps[0];
  MultiPoly c1 = ct.comps[1];
  for (size_t i = 0; i < digits.digits.size(); ++i) {
    c0 = add(c0, negacyclic_mul(digits.digits[i], rk.hom[i].second));
    c1 = add(c1, negacyclic_mul(digits.digits[i], rk.hom[i].first));
  }
  Ciphertext out;
  out.params = ct.params;
  out.depth = ct.depth;
  out.max_depth = ct.max_depth;
  out.comps = {std::move(c0), std::move(c1)};
  return out;
}

/// Structure-switching key: for every coefficient s_j of the source secret,
/// pseudoencryptions of T^i s_j under the remapped key. Stored j-outer,
/// i-inner, the order the switching accumulation consumes.
struct StructureKey {
  uint64_t base = 0;
  RingMapping mapping;
  RingParams source;
  RingParams target;
  std::vector<std::pair<MultiPoly, MultiPoly>> grid;  // index j*levels + i

  size_t levels() const {
    return mapping.perm.empty() ? 0 : grid.size() / mapping.perm.size();
  }
};

inline SecretKey remap_key(const SecretKey& sk, const RingMapping& mapping) {
  RingParams target = sk.params;
  target.degrees = mapping.target_shape;
  target.validate();
  return SecretKey{remap(sk.s, mapping), target};
}

/// dst must be exactly the remapped source key (circular security across the
/// two rings is assumed). base_T = 0 selects T = t.
inline StructureKey gen_structure_key(const SecretKey& src,
                                      const SecretKey& dst,
                                      const RingMapping& mapping,
                                      uint64_t base_T, const NoiseParams& np,
                                      Rng& rng) {
  mapping.validate();
  if (src.params.degrees != mapping.source_shape)
    throw StructuralError("gen_structure_key: source key not in mapping source ring");
  if (dst.params.degrees != mapping.target_shape ||
      dst.params.q != src.params.q || dst.params.t != src.params.t)
    throw StructuralError("gen_structure_key: target key ring mismatch");
  if (remap(src.s, mapping) != dst.s)
    throw StructuralError(
        "gen_structure_key: destination key must be the remapped source key");
  uint64_t T = base_T == 0 ? src.params.t : base_T;
  if (T < 2 || T >= src.params.q)
    throw ParameterError("gen_structure_key: need 2 <= T < q");
  GaussianSampler sampler(np);
  StructureKey stk;
  stk.base = T;
  stk.mapping = mapping;
  stk.source = src.params;
  stk.target = dst.params;
  size_t n = src.params.n();
  size_t levels = decomposition_levels(src.params.q, T);
  stk.grid.reserve(n * levels);
  for (size_t j = 0; j < n; ++j) {
    uint64_t t_pow = 1;
    for (size_t i = 0; i < levels; ++i) {
      MultiPoly src_term = MultiPoly::constant(
          dst.params.degrees, dst.params.q,
          mul_mod(t_pow, src.s.coeffs[j], src.params.q));
      stk.grid.push_back(detail::make_hom(dst.s, src_term, dst.params, T,
                                          sampler, rng));
      t_pow = mul_mod(t_pow, T, src.params.q);
    }
  }
  return stk;
}

/// Re-expresses a 2-component ciphertext under the remapped key and ring
/// shape. Decomposes c1 into its skew-circulant columns c1^(j) =
/// monomial_mul(c1, j), remaps each into the target ring and accumulates
/// base-T digits against the key grid. Accumulation order is fixed (j outer,
/// i inner), so outputs are bit-identical across runs.
inline Ciphertext switch_structure(const Ciphertext& ct,
                                   const StructureKey& stk) {
  if (ct.gamma() != 2)
    throw StructuralError(
        "switch_structure: gamma must be 2; relinearize first");
  if (ct.params != stk.source)
    throw StructuralError("switch_structure: ciphertext ring does not match key");
  size_t n = stk.source.n();
  size_t levels = stk.levels();
  MultiPoly acc0 = remap(ct.comps[0], stk.mapping);
  MultiPoly acc1 = MultiPoly::zero(stk.target.degrees, stk.target.q);
  for (size_t j = 0; j < n; ++j) {
    MultiPoly column = remap(monomial_mul(ct.comps[1], j), stk.mapping);
    BaseDecomposition digits = base_decompose(column, stk.base);
    for (size_t i = 0; i < levels; ++i) {
      const auto& hom = stk.grid[j * levels + i];
      acc0 = add(acc0, negacyclic_mul(digits.digits[i], hom.second));
      acc1 = add(acc1, negacyclic_mul(digits.digits[i], hom.first));
    }
  }
  Ciphertext out;
  out.params = stk.target;
  out.depth = ct.depth;
  out.max_depth = ct.max_depth;
  out.comps = {std::move(acc0), std::move(acc1)};
  return out;
}

}  // namespace mrlwe
