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

#include <catch2/catch_amalgamated.hpp>

#include "mrlwe/codec.hpp"
#include "mrlwe/rng.hpp"
#include "oracles.hpp"

using namespace mrlwe;

namespace {

// direct 2-D linear convolution over the integers, reduced mod t at the end
Tensor conv2d_oracle(const Tensor& x, const Tensor& h, uint64_t t) {
  size_t oh = x.dims[0] + h.dims[0] - 1, ow = x.dims[1] + h.dims[1] - 1;
  Tensor out = Tensor::zeros({oh, ow});
  for (size_t i = 0; i < x.dims[0]; ++i)
    for (size_t j = 0; j < x.dims[1]; ++j)
      for (size_t k = 0; k < h.dims[0]; ++k)
        for (size_t l = 0; l < h.dims[1]; ++l) {
          oracle::BigInt acc = out.at({i + k, j + l});
          acc += oracle::BigInt(x.at({i, j})) * h.at({k, l});
          acc %= t;
          if (acc < 0) acc += t;
          out.at({i + k, j + l}) = acc.convert_to<int64_t>();
        }
  return out;
}

}  // namespace

TEST_CASE("encode_signal basics", "[codec]") {
  RingParams rp{{8, 8}, 257, 17};

  // 1x1 impulse at the origin is the constant polynomial 1
  Tensor impulse = Tensor::zeros({1, 1});
  impulse.data[0] = 1;
  MultiPoly p = encode_signal(impulse, rp);
  REQUIRE(p == MultiPoly::constant({8, 8}, 17, 1));

  // sobel-style signed kernel lands row-major with mod-t negatives
  Tensor sobel = Tensor::zeros({3, 3});
  int64_t gx[9] = {-1, 0, 1, -2, 0, 2, -1, 0, 1};
  for (size_t i = 0; i < 9; ++i) sobel.data[i] = gx[i];
  MultiPoly ps = encode_signal(sobel, rp);
  REQUIRE(ps.coeffs[0 * 8 + 0] == 16);  // -1 mod 17
  REQUIRE(ps.coeffs[0 * 8 + 2] == 1);
  REQUIRE(ps.coeffs[1 * 8 + 0] == 15);  // -2 mod 17
  REQUIRE(ps.coeffs[1 * 8 + 2] == 2);

  // sizing errors name the axis
  Tensor wide = Tensor::zeros({3, 9});
  try {
    encode_signal(wide, rp);
    FAIL("expected SizingError");
  } catch (const SizingError& e) {
    REQUIRE(std::string(e.what()).find("axis 2") != std::string::npos);
  }
  REQUIRE_THROWS_AS(encode_signal(Tensor::zeros({3}), rp), SizingError);
}

TEST_CASE("decode inverts encode", "[codec]") {
  Rng rng(1);
  RingParams rp{{64, 64}, 12289, 257};
  Tensor x = Tensor::zeros({32, 32});
  for (auto& v : x.data) v = int64_t(rng.below(257));
  MultiPoly p = encode_signal(x, rp);
  REQUIRE(decode_signal(p, {32, 32}, false) == x);

  // signed roundtrip through the centered lift
  Tensor s = Tensor::zeros({2, 2});
  s.data = {-3, 128, -128, 0};
  MultiPoly ps = encode_signal(s, rp);
  REQUIRE(decode_signal(ps, {2, 2}, true) == s);

  REQUIRE_THROWS_AS(decode_signal(p, {65, 2}, false), SizingError);
}

TEST_CASE("plaintext ring product is linear convolution", "[codec]") {
  Rng rng(2);
  RingParams rp{{8, 8}, 257, 41};
  Tensor x = Tensor::zeros({4, 4});
  Tensor h = Tensor::zeros({2, 2});
  for (auto& v : x.data) v = int64_t(rng.below(41));
  for (auto& v : h.data) v = int64_t(rng.below(41));
  MultiPoly prod = negacyclic_mul(encode_signal(x, rp), encode_signal(h, rp),
                                  MulPath::schoolbook);
  Tensor got = decode_signal(prod, {5, 5}, false);
  REQUIRE(got == conv2d_oracle(x, h, 41));
}

TEST_CASE("correlation encoding realizes correlation", "[codec]") {
  Rng rng(3);
  RingParams rp{{16, 16}, 257, 41};
  Tensor x = Tensor::zeros({4, 4});
  Tensor h = Tensor::zeros({3, 3});
  for (auto& v : x.data) v = int64_t(rng.below(41));
  for (auto& v : h.data) v = int64_t(rng.below(41));
  MultiPoly prod =
      negacyclic_mul(encode_signal(x, rp, EncodeMode::convolution),
                     encode_signal(h, rp, EncodeMode::correlation),
                     MulPath::schoolbook);
  Tensor got = decode_signal(prod, {6, 6}, false);
  // correlation = convolution with the reversed kernel, shifted by F-1
  Tensor hrev = Tensor::zeros({3, 3});
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) hrev.at({i, j}) = h.at({2 - i, 2 - j});
  REQUIRE(got == conv2d_oracle(x, hrev, 41));
}

TEST_CASE("fixed-point encode hand cases", "[codec]") {
  const uint64_t t = 12289;
  FixedPointEncoding enc{2, 8, 2, 1};

  MultiPoly zero = encode_fixed(Rational(0), enc, t);
  REQUIRE(zero.is_zero());

  // 2.5 in base 2: integer bit b_1, fractional bit b_-1 negated at v^7
  MultiPoly x = encode_fixed(Rational(5, 2), enc, t);
  std::vector<uint64_t> expected(8, 0);
  expected[1] = 1;
  expected[7] = t - 1;
  REQUIRE(x.coeffs == expected);
  REQUIRE(decode_fixed(x, enc) == Rational(5, 2));

  // negative values negate every digit
  MultiPoly neg = encode_fixed(Rational(-5, 2), enc, t);
  REQUIRE(neg.coeffs[1] == t - 1);
  REQUIRE(neg.coeffs[7] == 1);
  REQUIRE(decode_fixed(neg, enc) == Rational(-5, 2));

  // 2.5 * 1.5 = 3.75 through one ring product
  MultiPoly y = encode_fixed(Rational(3, 2), enc, t);
  MultiPoly prod = negacyclic_mul(x, y, MulPath::schoolbook);
  FixedPointEncoding wide = FixedPointEncoding::product(enc, enc);
  REQUIRE(decode_fixed(prod, wide) == Rational(15, 4));
}

TEST_CASE("fixed-point budget checks", "[codec]") {
  const uint64_t t = 12289;
  FixedPointEncoding enc{2, 8, 3, 2};
  // 1/3 has no finite base-2 expansion
  REQUIRE_THROWS_AS(encode_fixed(Rational(1, 3), enc, t), ParameterError);
  // integer budget overflow: 16 needs b_4
  REQUIRE_THROWS_AS(encode_fixed(Rational(16), enc, t), ParameterError);
  // fractional overflow: 1/8 needs three fractional digits
  REQUIRE_THROWS_AS(encode_fixed(Rational(1, 8), enc, t), ParameterError);
  // budgets must leave room in the variable
  FixedPointEncoding bad{2, 8, 5, 3};
  REQUIRE_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("homomorphic fixed-point products over randomized grids", "[codec]") {
  const uint64_t t = 12289;
  Rng rng(4);
  for (uint64_t base : {2ull, 16ull}) {
    FixedPointEncoding enc{base, 16, 3, 2};
    FixedPointEncoding wide = FixedPointEncoding::product(enc, enc);
    uint64_t num_range = 1;
    for (int i = 0; i < 5; ++i) num_range *= base;  // |x| < b^(3+2)
    for (int trial = 0; trial < 300; ++trial) {
      int64_t nx = int64_t(rng.below(num_range)) - int64_t(num_range / 2);
      int64_t ny = int64_t(rng.below(num_range)) - int64_t(num_range / 2);
      Rational x(nx, int64_t(num_range / (base * base * base)));
      Rational y(ny, int64_t(num_range / (base * base * base)));
      MultiPoly prod = negacyclic_mul(encode_fixed(x, enc, t),
                                      encode_fixed(y, enc, t));
      REQUIRE(decode_fixed(prod, wide) == x * y);
    }
  }
}
