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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "mrlwe/ring.hpp"
#include "mrlwe/rng.hpp"

namespace mrlwe {

// ---------------------------------------------------------------------------
// Somewhat-homomorphic cryptosystem over the multivariate negacyclic ring.
//
//   KeyGen:  s, e <- chi;  a1 uniform;  sk = s,  pk = (a0 = -(a1 s + t e), a1)
//   Enc:     u, f, g <- chi;  c = (a0 u + t g + m,  a1 u + t f)
//   Dec:     m = centered(sum_i c_i s^i mod q) mod t
//
// Ciphertexts carry gamma >= 2 components; multiplication grows gamma and
// consumes one level of the depth budget.
// ---------------------------------------------------------------------------

/// Truncated discrete Gaussian noise distribution chi.
struct NoiseParams {
  double sigma = 1.0;        // per-coefficient standard deviation
  double trunc_bound = 6.0;  // truncation, in units of sigma

  // The Gaussian parameter s = sigma * sqrt(2*pi).
  double s() const { return sigma * std::sqrt(2.0 * 3.14159265358979323846); }

  void validate() const {
    if (!(sigma > 0.0)) throw ParameterError("NoiseParams: sigma must be > 0");
    if (!(trunc_bound > 0.0))
      throw ParameterError("NoiseParams: trunc_bound must be > 0");
  }
};

// Cumulative-table sampler for the discrete Gaussian on [-tail, tail] with
// weights exp(-k^2 / (2 sigma^2)). Exact truncation, deterministic given the
// Rng stream.
class GaussianSampler {
 public:
  explicit GaussianSampler(const NoiseParams& np) {
    np.validate();
    tail_ = static_cast<int64_t>(np.trunc_bound * np.sigma);
    long double total = 0.0L;
    std::vector<long double> weights;
    weights.reserve(2 * tail_ + 1);
    for (int64_t k = -tail_; k <= tail_; ++k) {
      long double w =
          expl(-static_cast<long double>(k) * k / (2.0L * np.sigma * np.sigma));
      weights.push_back(w);
      total += w;
    }
    cdt_.reserve(weights.size());
    long double acc = 0.0L;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      long double frac = acc / total;
      cdt_.push_back(i + 1 == weights.size()
                         ? ~uint64_t{0}
                         : static_cast<uint64_t>(frac * 18446744073709551615.0L));
    }
  }

  int64_t sample(Rng& rng) const {
    uint64_t u = rng.next();
    size_t lo = 0, hi = cdt_.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (u <= cdt_[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    return static_cast<int64_t>(lo) - tail_;
  }

  int64_t tail() const { return tail_; }

 private:
  std::vector<uint64_t> cdt_;
  int64_t tail_;
};

/// One chi-distributed ring element: i.i.d. truncated discrete Gaussian
/// coefficients, stored centered-reduced into [0, q).
inline MultiPoly sample_noise(const RingParams& ring, const NoiseParams& np,
                              Rng& rng) {
  GaussianSampler sampler(np);
  MultiPoly p = MultiPoly::zero(ring.degrees, ring.q);
  for (auto& c : p.coeffs) c = mod_into(sampler.sample(rng), ring.q);
  return p;
}

inline MultiPoly uniform_poly(const RingParams& ring, Rng& rng) {
  MultiPoly p = MultiPoly::zero(ring.degrees, ring.q);
  for (auto& c : p.coeffs) c = rng.below(ring.q);
  return p;
}

struct SecretKey {
  MultiPoly s;  // small-norm, drawn from chi
  RingParams params;
};

struct PublicKey {
  MultiPoly a0;  // -(a1 s + t e)
  MultiPoly a1;
  RingParams params;
};

struct Ciphertext {
  std::vector<MultiPoly> comps;  // gamma >= 2 ring elements mod q
  RingParams params;
  uint32_t depth = 0;      // multiplications consumed
  uint32_t max_depth = 1;  // configured budget D

  size_t gamma() const { return comps.size(); }
};

// Counts homomorphic ciphertext-by-ciphertext products, for operation-count
// instrumentation.
inline std::atomic<uint64_t>& ciphertext_product_count() {
  static std::atomic<uint64_t> count{0};
  return count;
}

inline void reset_ciphertext_product_count() { ciphertext_product_count() = 0; }

inline std::pair<SecretKey, PublicKey> keygen(const RingParams& params,
                                              const NoiseParams& np, Rng& rng) {
  params.validate();
  GaussianSampler sampler(np);
  auto chi = [&] {
    MultiPoly p = MultiPoly::zero(params.degrees, params.q);
    for (auto& c : p.coeffs) c = mod_into(sampler.sample(rng), params.q);
    return p;
  };
  MultiPoly s = chi();
  MultiPoly e = chi();
  MultiPoly a1 = uniform_poly(params, rng);
  MultiPoly a0 = negate(add(negacyclic_mul(a1, s), scalar_mul(e, params.t)));
  return {SecretKey{s, params}, PublicKey{std::move(a0), std::move(a1), params}};
}

/// Fresh two-component encryption of a plaintext mod t.
inline Ciphertext encrypt(const PublicKey& pk, const MultiPoly& msg,
                          const NoiseParams& np, Rng& rng,
                          uint32_t max_depth = 1) {
  if (msg.shape != pk.params.degrees)
    throw StructuralError("encrypt: message shape does not match ring");
  if (msg.modulus != pk.params.t)
    throw StructuralError("encrypt: message modulus must equal t");
  GaussianSampler sampler(np);
  auto chi = [&] {
    MultiPoly p = MultiPoly::zero(pk.params.degrees, pk.params.q);
    for (auto& c : p.coeffs) c = mod_into(sampler.sample(rng), pk.params.q);
    return p;
  };
  MultiPoly u = chi();
  MultiPoly f = chi();
  MultiPoly g = chi();
  // Message residues embed directly: t < q.
  MultiPoly m_lift = MultiPoly::zero(pk.params.degrees, pk.params.q);
  m_lift.coeffs = msg.coeffs;
  Ciphertext ct;
  ct.params = pk.params;
  ct.depth = 0;
  ct.max_depth = max_depth;
  ct.comps.push_back(
      add(add(negacyclic_mul(pk.a0, u), scalar_mul(g, pk.params.t)), m_lift));
  ct.comps.push_back(add(negacyclic_mul(pk.a1, u), scalar_mul(f, pk.params.t)));
  return ct;
}

// sum_i c_i s^i mod q, the raw decryption accumulator.
inline MultiPoly decrypt_accumulator(const SecretKey& sk, const Ciphertext& ct) {
  if (ct.params != sk.params)
    throw StructuralError("decrypt: ciphertext and key parameters differ");
  if (ct.gamma() < 2) throw StructuralError("decrypt: gamma must be >= 2");
  MultiPoly acc = ct.comps[0];
  MultiPoly s_pow = sk.s;
  for (size_t i = 1; i < ct.gamma(); ++i) {
    acc = add(acc, negacyclic_mul(ct.comps[i], s_pow));
    if (i + 1 < ct.gamma()) s_pow = negacyclic_mul(s_pow, sk.s);
  }
  return acc;
}

/// Decryption: centered lift into (-q/2, q/2], then reduction mod t.
inline MultiPoly decrypt(const SecretKey& sk, const Ciphertext& ct) {
  MultiPoly acc = decrypt_accumulator(sk, ct);
  MultiPoly msg = MultiPoly::zero(sk.params.degrees, sk.params.t);
  for (size_t k = 0; k < acc.coeffs.size(); ++k)
    msg.coeffs[k] = mod_into(centered(acc.coeffs[k], sk.params.q), sk.params.t);
  return msg;
}

/// Componentwise sum; the smaller ciphertext is zero-padded first.
inline Ciphertext he_add(const Ciphertext& c1, const Ciphertext& c2) {
  if (c1.params != c2.params)
    throw StructuralError("he_add: ciphertext parameters differ");
  Ciphertext out;
  out.params = c1.params;
  out.depth = std::max(c1.depth, c2.depth);
  out.max_depth = std::min(c1.max_depth, c2.max_depth);
  size_t gamma = std::max(c1.gamma(), c2.gamma());
  out.comps.reserve(gamma);
  for (size_t i = 0; i < gamma; ++i) {
    if (i < c1.gamma() && i < c2.gamma())
      out.comps.push_back(add(c1.comps[i], c2.comps[i]));
    else
      out.comps.push_back(i < c1.gamma() ? c1.comps[i] : c2.comps[i]);
  }
  return out;
}

/// Homomorphic product: treating components as coefficients of a symbolic
/// variable v, output component k = sum_{i+j=k} c1_i * c2_j. gamma grows to
/// gamma1 + gamma2 - 1 and one depth level is consumed.
inline Ciphertext he_mul(const Ciphertext& c1, const Ciphertext& c2) {
  if (c1.params != c2.params)
    throw StructuralError("he_mul: ciphertext parameters differ");
  uint32_t depth = std::max(c1.depth, c2.depth) + 1;
  uint32_t budget = std::min(c1.max_depth, c2.max_depth);
  if (depth > budget)
    throw DepthError("he_mul: depth budget exceeded (D = " +
                     std::to_string(budget) + ")");
  Ciphertext out;
  out.params = c1.params;
  out.depth = depth;
  out.max_depth = budget;
  size_t gamma = c1.gamma() + c2.gamma() - 1;
  out.comps.assign(gamma, MultiPoly::zero(c1.params.degrees, c1.params.q));
  for (size_t i = 0; i < c1.gamma(); ++i)
    for (size_t j = 0; j < c2.gamma(); ++j)
      out.comps[i + j] =
          add(out.comps[i + j], negacyclic_mul(c1.comps[i], c2.comps[j]));
  ciphertext_product_count()++;
  return out;
}

/// Product with a cleartext ring element mod t. Does not consume depth; the
/// noise scales with the plaintext norm instead.
inline Ciphertext plain_mul(const Ciphertext& ct, const MultiPoly& p) {
  if (p.shape != ct.params.degrees)
    throw StructuralError("plain_mul: plaintext shape does not match ring");
  if (p.modulus != ct.params.t)
    throw StructuralError("plain_mul: plaintext modulus must equal t");
  MultiPoly lifted = MultiPoly::zero(ct.params.degrees, ct.params.q);
  lifted.coeffs = p.coeffs;
  Ciphertext out = ct;
  for (auto& comp : out.comps) comp = negacyclic_mul(comp, lifted);
  return out;
}

/// Infinity norm of the noise term carried by a ciphertext: the centered
/// residue of (sum c_i s^i - m) mod q. Decryption is correct while this stays
/// below q/2. Valid only while the true message is still recoverable.
inline uint64_t noise_norm(const SecretKey& sk, const Ciphertext& ct) {
  MultiPoly acc = decrypt_accumulator(sk, ct);
  uint64_t worst = 0;
  for (uint64_t w : acc.coeffs) {
    uint64_t m = mod_into(centered(w, sk.params.q), sk.params.t);
    int64_t v = centered(sub_mod(w, m, sk.params.q), sk.params.q);
    uint64_t mag = v < 0 ? static_cast<uint64_t>(-v) : static_cast<uint64_t>(v);
    worst = std::max(worst, mag);
  }
  return worst;
}

}  // namespace mrlwe
