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

#include "mrlwe/pack.hpp"
#include "mrlwe/rng.hpp"
#include "oracles.hpp"

using namespace mrlwe;

namespace {

BlockTensor random_blocks(std::vector<size_t> dims, uint64_t t, Rng& rng) {
  BlockTensor bt = BlockTensor::zeros(std::move(dims), t);
  for (auto& v : bt.data) v = rng.below(t);
  return bt;
}

// direct evaluation of the pre-encryption map on one fiber:
// y[l] = eta^l N^-1 sum_k x[k] alpha^(-lk)
std::vector<uint64_t> direct_pre_fiber(const std::vector<uint64_t>& x,
                                       const SlotLayout& lay) {
  const uint64_t t = lay.t;
  const size_t n = lay.slot_count;
  uint64_t alpha_inv = inv_mod(lay.alpha, t);
  std::vector<uint64_t> y(n);
  for (size_t l = 0; l < n; ++l) {
    uint64_t acc = 0;
    for (size_t k = 0; k < n; ++k)
      acc = add_mod(acc, mul_mod(x[k], pow_mod(alpha_inv, l * k, t), t), t);
    acc = mul_mod(acc, lay.slot_inv, t);
    y[l] = mul_mod(acc, pow_mod(lay.eta, l, t), t);
  }
  return y;
}

// per-slot negacyclic block product of two packed tensors, via the oracle
BlockTensor slotwise_product(const BlockTensor& a, const BlockTensor& b,
                             const std::vector<size_t>& content_shape) {
  size_t slots = a.slots();
  BlockTensor out = BlockTensor::zeros(a.dims, a.t);
  size_t block = a.data.size() / slots;
  for (size_t l = 0; l < slots; ++l) {
    MultiPoly pa = MultiPoly::zero(content_shape, a.t);
    MultiPoly pb = MultiPoly::zero(content_shape, a.t);
    for (size_t i = 0; i < block; ++i) {
      pa.coeffs[i] = a.data[i * slots + l];
      pb.coeffs[i] = b.data[i * slots + l];
    }
    MultiPoly prod = oracle::negacyclic_mul(pa, pb);
    for (size_t i = 0; i < block; ++i) out.data[i * slots + l] = prod.coeffs[i];
  }
  return out;
}

}  // namespace

TEST_CASE("make_layout existence cases", "[pack]") {
  SlotLayout a = make_layout(12289, 8, 0);
  REQUIRE(pow_mod(a.eta, 8, 12289) == 12288);
  REQUIRE(a.alpha == mul_mod(a.eta, a.eta, 12289));
  REQUIRE(mul_mod(a.slot_inv, 8, 12289) == 1);

  SlotLayout b = make_layout(257, 4, 0);
  REQUIRE(pow_mod(b.eta, 4, 257) == 256);

  REQUIRE_THROWS_AS(make_layout(257, 256, 0), ExistenceError);
  REQUIRE_THROWS_AS(make_layout(257, 3, 0), ParameterError);  // not a power of 2

  // brute-force smallest-eta oracle
  uint64_t expected = 0;
  for (uint64_t x = 1; x < 257; ++x) {
    if (pow_mod(x, 4, 257) == 256) {
      expected = x;
      break;
    }
  }
  REQUIRE(b.eta == expected);

  // N = 1 layout is trivially valid
  SlotLayout unit = make_layout(257, 1, 0);
  REQUIRE(unit.eta == 256);
  REQUIRE(unit.slot_inv == 1);
}

TEST_CASE("pre/post roundtrip and N=1 identity", "[pack]") {
  Rng rng(1);
  SlotLayout lay = make_layout(12289, 8, 2);
  std::vector<size_t> ring_shape{4, 4, 8};
  for (int trial = 0; trial < 50; ++trial) {
    BlockTensor x = random_blocks({4, 4, 8}, 12289, rng);
    MultiPoly p = pre_process(x, lay, ring_shape);
    REQUIRE(post_process(p, lay, {4, 4}) == x);
  }

  SlotLayout unit = make_layout(12289, 1, 1);
  BlockTensor one = random_blocks({4, 1}, 12289, rng);
  MultiPoly p = pre_process(one, unit, {4, 1});
  for (size_t i = 0; i < 4; ++i) REQUIRE(p.coeffs[i] == one.data[i]);
}

TEST_CASE("single nonzero slot spreads per the direct transform", "[pack]") {
  SlotLayout lay = make_layout(257, 4, 1);
  BlockTensor x = BlockTensor::zeros({1, 4}, 257);
  x.data[2] = 123;  // slot 2 of a scalar block
  MultiPoly p = pre_process(x, lay, {1, 4});
  std::vector<uint64_t> fiber{x.data[0], x.data[1], x.data[2], x.data[3]};
  std::vector<uint64_t> expected = direct_pre_fiber(fiber, lay);
  for (size_t l = 0; l < 4; ++l) REQUIRE(p.coeffs[l] == expected[l]);
  // genuinely spread: more than one nonzero slot after the transform
  size_t nonzero = 0;
  for (uint64_t v : p.coeffs) nonzero += v != 0;
  REQUIRE(nonzero > 1);
}

TEST_CASE("slot convolution theorem", "[pack]") {
  Rng rng(2);
  SlotLayout lay = make_layout(12289, 4, 2);
  std::vector<size_t> ring_shape{8, 8, 4};
  for (int trial = 0; trial < 25; ++trial) {
    BlockTensor x = random_blocks({8, 8, 4}, 12289, rng);
    BlockTensor h = random_blocks({8, 8, 4}, 12289, rng);
    MultiPoly px = pre_process(x, lay, ring_shape);
    MultiPoly ph = pre_process(h, lay, ring_shape);
    MultiPoly prod = negacyclic_mul(px, ph);
    BlockTensor got = post_process(prod, lay);
    REQUIRE(got == slotwise_product(x, h, {8, 8}));
  }
}

TEST_CASE("impulse filter passes blocks through", "[pack]") {
  Rng rng(3);
  SlotLayout lay = make_layout(12289, 4, 2);
  std::vector<size_t> ring_shape{8, 8, 4};
  BlockTensor x = random_blocks({8, 8, 4}, 12289, rng);
  // impulse at the content origin of every slot
  BlockTensor h = BlockTensor::zeros({8, 8, 4}, 12289);
  for (size_t l = 0; l < 4; ++l) h.data[l] = 1;
  MultiPoly prod = negacyclic_mul(pre_process(x, lay, ring_shape),
                                  pre_process(h, lay, ring_shape));
  REQUIRE(post_process(prod, lay) == x);
}

TEST_CASE("slot independence under perturbation", "[pack]") {
  Rng rng(4);
  SlotLayout lay = make_layout(12289, 4, 2);
  std::vector<size_t> ring_shape{8, 8, 4};
  BlockTensor x = random_blocks({8, 8, 4}, 12289, rng);
  BlockTensor h = random_blocks({8, 8, 4}, 12289, rng);
  auto run = [&](const BlockTensor& xs) {
    MultiPoly prod = negacyclic_mul(pre_process(xs, lay, ring_shape),
                                    pre_process(h, lay, ring_shape));
    return post_process(prod, lay);
  };
  BlockTensor base = run(x);
  BlockTensor perturbed_in = x;
  perturbed_in.data[5 * 4 + 2] = add_mod(perturbed_in.data[5 * 4 + 2], 1, 12289);
  BlockTensor changed = run(perturbed_in);
  for (size_t i = 0; i < base.data.size(); ++i) {
    size_t slot = i % 4;
    if (slot != 2) REQUIRE(base.data[i] == changed.data[i]);
  }
  REQUIRE(base != changed);
}

TEST_CASE("slot transforms are linear over Z_t", "[pack]") {
  Rng rng(5);
  SlotLayout lay = make_layout(257, 8, 1);
  std::vector<size_t> ring_shape{16, 8};
  for (int trial = 0; trial < 20; ++trial) {
    BlockTensor x = random_blocks({16, 8}, 257, rng);
    BlockTensor y = random_blocks({16, 8}, 257, rng);
    uint64_t a = rng.below(257), b = rng.below(257);
    BlockTensor combo = BlockTensor::zeros({16, 8}, 257);
    for (size_t i = 0; i < combo.data.size(); ++i)
      combo.data[i] = add_mod(mul_mod(a, x.data[i], 257),
                              mul_mod(b, y.data[i], 257), 257);
    MultiPoly lhs = pre_process(combo, lay, ring_shape);
    MultiPoly rhs = add(scalar_mul(pre_process(x, lay, ring_shape), a),
                        scalar_mul(pre_process(y, lay, ring_shape), b));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("pack_blocks raster order and roundtrip", "[pack]") {
  // 16x16 image in 8x8 blocks: 4 blocks in raster order
  Tensor img = Tensor::zeros({16, 16});
  for (size_t i = 0; i < 256; ++i) img.data[i] = int64_t(i % 251);
  BlockTensor bt = pack_blocks(img, 8, 8, 257);
  REQUIRE(bt.dims == std::vector<size_t>{8, 8, 4});
  // block 0 is the top-left 8x8 slice
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = 0; j < 8; ++j)
      REQUIRE(int64_t(bt.data[(i * 8 + j) * 4 + 0]) == img.at({i, j}));
  // block 1 is the top-right slice
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = 0; j < 8; ++j)
      REQUIRE(int64_t(bt.data[(i * 8 + j) * 4 + 1]) == img.at({i, j + 8}));
  REQUIRE(unpack_blocks(bt, 16, 16) == img);

  // checkerboard block content against a manual slice
  Tensor board = Tensor::zeros({4, 4});
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) board.at({i, j}) = int64_t((i + j) % 2);
  BlockTensor cb = pack_blocks(board, 2, 2, 257);
  REQUIRE(cb.data[(0 * 2 + 0) * 4 + 0] == 0);
  REQUIRE(cb.data[(0 * 2 + 1) * 4 + 0] == 1);
  REQUIRE(cb.data[(1 * 2 + 0) * 4 + 0] == 1);
  REQUIRE(cb.data[(1 * 2 + 1) * 4 + 0] == 0);

  REQUIRE_THROWS_AS(pack_blocks(img, 5, 8, 257), ParameterError);
  REQUIRE_NOTHROW(pack_blocks(img, 5, 8, 257, true));
  REQUIRE_THROWS_AS(unpack_blocks(bt, 8, 8), StructuralError);
}

TEST_CASE("composite plaintext modulus without roots is rejected", "[pack]") {
  // 15 has no element with x^2 = -1
  REQUIRE_THROWS_AS(make_layout(15, 2, 0), ExistenceError);
  // gcd(N, t) must be 1
  REQUIRE_THROWS_AS(make_layout(256, 4, 0), ExistenceError);
}
