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

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "mrlwe/errors.hpp"
#include "mrlwe/modmath.hpp"

namespace mrlwe {

// Estimator arithmetic runs in 100-decimal-digit floats so that the printed
// security figures are limited by the model, not by rounding.
using Real = boost::multiprecision::cpp_bin_float_100;

// ---------------------------------------------------------------------------
// Parameter selection and security estimation.
//
//   modulus bound      q >= 4 (2 t sigma^2 sqrt(n))^(D+1) (2n)^(D/2) sqrt(A)
//   root Hermite       log2(delta) = log2(c q / s)^2 / (4 n log2 q),
//                      c = sqrt(ln(1/eps) / pi)
//   bit security       t_BKZ = 1.8 / log2(delta) - 110
// ---------------------------------------------------------------------------

namespace detail {
inline const Real& pi_real() {
  static const Real pi(
      "3.1415926535897932384626433832795028841971693993751058209749445923");
  return pi;
}
}  // namespace detail

struct QBound {
  Real value;
  unsigned bit_length = 0;  // ceil(log2 value)
};

/// Smallest q admitting correct decryption after D successive products of
/// fresh ciphertexts and A additions.
inline QBound min_q_bound(uint64_t t, double sigma, uint64_t n, unsigned D,
                          uint64_t A) {
  if (t < 2 || n == 0 || A == 0 || !(sigma > 0.0))
    throw ParameterError("min_q_bound: all inputs must be positive");
  Real base = Real(2) * t * Real(sigma) * Real(sigma) * sqrt(Real(n));
  Real bound = Real(4) * pow(base, static_cast<int>(D) + 1) *
               pow(Real(2) * n, Real(D) / 2) * sqrt(Real(A));
  QBound out;
  out.value = bound;
  Real bits = ceil(log2(bound));
  out.bit_length = bits.convert_to<unsigned>();
  return out;
}

/// Smallest prime >= bound with q ≡ 1 (mod 2 max degrees). Rejects results at
/// or above the 2^62 arithmetic ceiling.
inline uint64_t choose_prime(const Real& bound,
                             const std::vector<size_t>& degrees) {
  if (bound < 2) throw ParameterError("choose_prime: bound must be >= 2");
  size_t max_degree = 1;
  for (size_t d : degrees) max_degree = std::max(max_degree, d);
  uint64_t congruence = 2 * static_cast<uint64_t>(max_degree);
  boost::multiprecision::cpp_int start =
      ceil(bound).convert_to<boost::multiprecision::cpp_int>();
  if (start >= kModulusCeiling)
    throw ParameterError("choose_prime: bound exceeds the 2^62 arithmetic ceiling");
  uint64_t candidate = start.convert_to<uint64_t>();
  uint64_t rem = candidate % congruence;
  candidate += (congruence + 1 - rem) % congruence;
  while (true) {
    if (candidate >= kModulusCeiling)
      throw ParameterError(
          "choose_prime: no admissible prime below the 2^62 arithmetic ceiling");
    if (is_prime(candidate)) return candidate;
    candidate += congruence;
  }
}

inline uint64_t choose_prime(const QBound& bound,
                             const std::vector<size_t>& degrees) {
  return choose_prime(bound.value, degrees);
}

inline uint64_t choose_prime(uint64_t bound, const std::vector<size_t>& degrees) {
  return choose_prime(Real(bound), degrees);
}

/// Root Hermite factor of the best basis-reduction distinguishing attack
/// against dimension-n samples with modulus q and Gaussian parameter s.
inline double hermite_factor(uint64_t n, uint64_t q, double s, double epsilon) {
  if (q == 0 || !(s > 0.0) || q <= s)
    throw ParameterError("hermite_factor: need q > s > 0");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw ParameterError("hermite_factor: need 0 < epsilon < 1");
  Real c = sqrt(log(Real(1) / Real(epsilon)) / detail::pi_real());
  Real l = log2(c * Real(q) / Real(s));
  Real log2_delta = l * l / (Real(4) * n * log2(Real(q)));
  return pow(Real(2), log2_delta).convert_to<double>();
}

/// log2 of the BKZ attack time for root Hermite factor delta.
inline double bit_security(double delta) {
  if (!(delta > 1.0)) throw ParameterError("bit_security: delta must exceed 1");
  Real log2_delta = log2(Real(delta));
  return (Real("1.8") / log2_delta - 110).convert_to<double>();
}

struct SecurityEstimate {
  double delta = 0.0;    // root Hermite factor
  double bit_sec = 0.0;  // log2 attack time
  double epsilon = 0.0;  // attacker advantage used
  double c = 0.0;        // the sqrt(ln(1/eps)/pi) constant
};

inline SecurityEstimate make_security_estimate(uint64_t n, uint64_t q, double s,
                                               double epsilon) {
  SecurityEstimate est;
  est.delta = hermite_factor(n, q, s, epsilon);
  est.bit_sec = bit_security(est.delta);
  est.epsilon = epsilon;
  est.c = sqrt(log(Real(1) / Real(epsilon)) / detail::pi_real())
              .convert_to<double>();
  return est;
}

// ------------------------------ cost models --------------------------------

enum class CostScenario { correlation, filtering };

struct SchemeCost {
  uint64_t ring_degree = 0;  // n
  uint64_t ciphertexts = 0;
  uint64_t products = 0;  // ciphertext-by-ciphertext ring products
};

/// Closed-form operation counts for processing I pairs of N x N images
/// (filters F x F in the filtering scenario), per scheme family.
struct CostModel {
  SchemeCost univariate;
  SchemeCost bivariate;
  SchemeCost trivariate;
};

inline CostModel cost_model(CostScenario scenario, uint64_t N, uint64_t F,
                            uint64_t I, uint64_t h_uni, uint64_t h_bi,
                            uint64_t h_tri) {
  if (N == 0 || I == 0 || h_uni == 0 || h_bi == 0 || h_tri == 0)
    throw ParameterError("cost_model: dims and slack must be positive");
  CostModel cm;
  if (scenario == CostScenario::correlation) {
    uint64_t side = 2 * N - 1;
    cm.univariate = {side * h_uni, 2 * N * I, N * N * I};
    cm.bivariate = {side * side * h_bi, 2 * I, I};
    cm.trivariate = {side * side * h_tri * I, 2, 1};
  } else {
    if (F == 0 || F >= N)
      throw ParameterError("cost_model: filtering requires 0 < F < N");
    uint64_t side = N + F - 1;
    cm.univariate = {side * h_uni, (N + F) * I, N * F * I};
    cm.bivariate = {side * side * h_bi, 2 * I, I};
    cm.trivariate = {side * side * h_tri * I, 2, 1};
  }
  return cm;
}

}  // namespace mrlwe
