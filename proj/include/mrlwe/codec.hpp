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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "mrlwe/ring.hpp"
#include "mrlwe/tensor.hpp"

namespace mrlwe {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Payload encodings: one signal sample per polynomial coefficient, so that
// the ring product of two encodings is their multidimensional linear
// convolution whenever the supports fit; plus a fixed-point encoding of reals
// in a dedicated variable.
// ---------------------------------------------------------------------------

enum class EncodeMode { convolution, correlation };

/// Placement descriptor for a signal inside a ring. Offsets default to the
/// origin; `centered` marks signed payloads (decoded via centered lift).
struct SignalEncoding {
  std::vector<size_t> dims;
  std::vector<size_t> offsets;
  bool centered = false;
};

/// One sample per coefficient, signed values reduced mod t. Correlation mode
/// stores the tensor index-reversed so the ring product realizes correlation
/// (full surface, shifted to non-negative lags).
inline MultiPoly encode_signal(const Tensor& x, const RingParams& ring,
                               EncodeMode mode = EncodeMode::convolution) {
  if (x.dims.size() != ring.degrees.size())
    throw SizingError("encode_signal: tensor rank " +
                      std::to_string(x.dims.size()) +
                      " does not match ring rank " +
                      std::to_string(ring.degrees.size()));
  for (size_t a = 0; a < x.dims.size(); ++a) {
    if (x.dims[a] > ring.degrees[a])
      throw SizingError("encode_signal: axis " + std::to_string(a + 1) +
                        " extent " + std::to_string(x.dims[a]) +
                        " exceeds ring degree " +
                        std::to_string(ring.degrees[a]));
  }
  const uint64_t t = ring.t;
  MultiPoly p = MultiPoly::zero(ring.degrees, t);
  std::vector<size_t> idx(x.dims.size(), 0);
  for (size_t flat = 0; flat < x.data.size(); ++flat) {
    int64_t v = x.data[flat];
    // Signed samples must stay above -t/2; raw residues may use all of
    // [0, t). Either way the residue determines the sample unambiguously.
    if (v >= 0 ? static_cast<uint64_t>(v) >= t
               : static_cast<uint64_t>(-v) * 2 >= t)
      throw ParameterError("encode_signal: value " + std::to_string(v) +
                           " outside (-t/2, t)");
    size_t target = 0;
    for (size_t a = 0; a < x.dims.size(); ++a) {
      size_t coord = mode == EncodeMode::correlation
                         ? x.dims[a] - 1 - idx[a]
                         : idx[a];
      target = target * ring.degrees[a] + coord;
    }
    p.coeffs[target] = mod_into(v, t);
    detail::next_index(idx, x.dims);
  }
  return p;
}

/// Reads a dims-shaped corner of the coefficient tensor; centered lift when
/// the payload is signed.
inline Tensor decode_signal(const MultiPoly& p, const std::vector<size_t>& dims,
                            bool signed_values) {
  if (dims.size() != p.shape.size())
    throw SizingError("decode_signal: rank mismatch");
  for (size_t a = 0; a < dims.size(); ++a)
    if (dims[a] > p.shape[a])
      throw SizingError("decode_signal: axis " + std::to_string(a + 1) +
                        " exceeds polynomial shape");
  Tensor out = Tensor::zeros(dims);
  std::vector<size_t> idx(dims.size(), 0);
  for (size_t flat = 0; flat < out.data.size(); ++flat) {
    size_t src = 0;
    for (size_t a = 0; a < dims.size(); ++a)
      src = src * p.shape[a] + idx[a];
    uint64_t c = p.coeffs[src];
    out.data[flat] =
        signed_values ? centered(c, p.modulus) : static_cast<int64_t>(c);
    detail::next_index(idx, dims);
  }
  return out;
}

// ------------------------------ fixed point ---------------------------------

/// Fixed-point layout in one dedicated variable v of degree var_degree:
/// integer digit b_k sits at v^k, fractional digit b_{-k} sits negated at
/// v^(var_degree - k) (the negacyclic wrap restores its sign and weight,
/// because v^{-k} = -v^{var_degree-k}).
struct FixedPointEncoding {
  uint64_t base = 2;      // b
  size_t var_degree = 8;  // n_v
  size_t int_digits = 3;  // budget N+
  size_t frac_digits = 2; // budget N-

  void validate() const {
    if (base < 2) throw ParameterError("FixedPointEncoding: base must be >= 2");
    if (int_digits + frac_digits >= var_degree)
      throw ParameterError(
          "FixedPointEncoding: digit budgets must satisfy N+ + N- < n_v");
  }

  // Budgets of a single product of two encoded values. Digit positions add
  // and never carry, so the extreme positions are the sums of the operands'.
  static FixedPointEncoding product(const FixedPointEncoding& a,
                                    const FixedPointEncoding& b) {
    if (a.base != b.base || a.var_degree != b.var_degree)
      throw StructuralError("FixedPointEncoding: incompatible operand layouts");
    FixedPointEncoding out = a;
    out.int_digits = a.int_digits + b.int_digits;
    out.frac_digits = a.frac_digits + b.frac_digits;
    out.validate();
    return out;
  }
};

inline MultiPoly encode_fixed(const Rational& x,
                              const FixedPointEncoding& enc, uint64_t t) {
  enc.validate();
  if (enc.base >= t)
    throw ParameterError("encode_fixed: base must be smaller than t");
  MultiPoly p = MultiPoly::zero({enc.var_degree}, t);
  if (x == 0) return p;
  bool negative = x < 0;
  Rational mag = negative ? Rational(-x) : x;
  BigInt scale = boost::multiprecision::pow(BigInt(enc.base),
                                            static_cast<unsigned>(enc.frac_digits));
  Rational scaled = mag * Rational(scale);
  if (boost::multiprecision::denominator(scaled) != 1)
    throw ParameterError(
        "encode_fixed: value has no exact base-" + std::to_string(enc.base) +
        " expansion within " + std::to_string(enc.frac_digits) +
        " fractional digits");
  BigInt v = boost::multiprecision::numerator(scaled);
  for (size_t k = 0; v != 0; ++k) {
    uint64_t digit = static_cast<uint64_t>(v % enc.base);
    v /= enc.base;
    if (digit == 0) continue;
    // digit position relative to the radix point
    int64_t pos = static_cast<int64_t>(k) - static_cast<int64_t>(enc.frac_digits);
    if (pos > static_cast<int64_t>(enc.int_digits))
      throw ParameterError("encode_fixed: integer digit budget overflow");
    bool store_negated = pos < 0;  // fractional digits live negated at the top
    size_t slot = pos >= 0 ? static_cast<size_t>(pos)
                           : enc.var_degree - static_cast<size_t>(-pos);
    uint64_t residue = (store_negated != negative) ? neg_mod(digit % t, t)
                                                   : digit % t;
    p.coeffs[slot] = residue;
  }
  return p;
}

/// Positional read-back: coefficients below var_degree - frac_digits carry
/// weight base^k, the top frac_digits coefficients carry weight
/// -base^(k - var_degree). Digits may exceed base-1 or be negative after ring
/// products; they are interpreted positionally, without carry recovery.
inline Rational decode_fixed(const MultiPoly& p, const FixedPointEncoding& enc) {
  enc.validate();
  if (p.shape != std::vector<size_t>{enc.var_degree})
    throw StructuralError("decode_fixed: polynomial is not in the dedicated variable");
  Rational acc = 0;
  for (size_t k = 0; k < enc.var_degree; ++k) {
    int64_t digit = centered(p.coeffs[k], p.modulus);
    if (digit == 0) continue;
    if (k < enc.var_degree - enc.frac_digits) {
      BigInt weight =
          boost::multiprecision::pow(BigInt(enc.base), static_cast<unsigned>(k));
      acc += Rational(BigInt(digit) * weight);
    } else {
      BigInt denom = boost::multiprecision::pow(
          BigInt(enc.base), static_cast<unsigned>(enc.var_degree - k));
      acc -= Rational(BigInt(digit), denom);
    }
  }
  return acc;
}

}  // namespace mrlwe
