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
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mrlwe/ring.hpp"
#include "mrlwe/tensor.hpp"

namespace mrlwe {

// ---------------------------------------------------------------------------
// Slot semantics over one designated "index" variable.
//
// The ring product convolves negacyclically along every axis. Along the index
// axis we want the slots to multiply componentwise instead, so that one
// homomorphic product runs N independent block convolutions. Two classical
// identities compose to give exactly that:
//
//   twist(a) *neg twist(b) = twist(a *cyc b)        (eta^N = -1 twist)
//   INTT(a)  *cyc INTT(b)  = INTT(a o b)            (convolution theorem)
//
// Hence pre-processing places each slot fiber through the inverse length-N
// transform and then twists slot l by eta^l; post-processing untwists and
// applies the forward transform. Everything is exact in Z_t.
// ---------------------------------------------------------------------------

/// Designation of one variable as block index, with the roots that make slot
/// products componentwise.
struct SlotLayout {
  size_t index_axis = 0;
  uint64_t slot_count = 0;  // N, a power of two
  uint64_t t = 0;
  uint64_t eta = 0;      // 2N-th root: eta^N = -1 (mod t)
  uint64_t alpha = 0;    // eta^2, an N-th root of unity
  uint64_t slot_inv = 0; // N^-1 mod t
};

/// Finds the roots for N slots in Z_t, or reports which existence condition
/// fails. Prime t needs 2N | t-1; composite t is scanned exhaustively for an
/// eta meeting the unit conditions.
inline SlotLayout make_layout(uint64_t t, uint64_t slot_count,
                              size_t index_axis) {
  if (t < 2) throw ParameterError("make_layout: t must be >= 2");
  if (!is_power_of_two(slot_count))
    throw ParameterError("make_layout: slot count must be a power of two");
  if (std::gcd(slot_count, t) != 1)
    throw ExistenceError("make_layout: gcd(N, t) must be 1");
  SlotLayout lay;
  lay.index_axis = index_axis;
  lay.slot_count = slot_count;
  lay.t = t;
  lay.slot_inv = inv_mod(slot_count % t, t);
  if (slot_count == 1) {
    lay.eta = (t - 1) % t;
    lay.alpha = 1 % t;
    return lay;
  }
  if (is_prime(t)) {
    lay.eta = find_root(t, slot_count, RootKind::neg_one);
    lay.alpha = mul_mod(lay.eta, lay.eta, t);
    return lay;
  }
  for (uint64_t eta = 2; eta < t; ++eta) {
    if (std::gcd(eta, t) != 1) continue;
    if (pow_mod(eta, slot_count, t) != t - 1) continue;
    uint64_t alpha = mul_mod(eta, eta, t);
    bool ok = true;
    uint64_t pw = 1;
    for (uint64_t i = 1; i < slot_count && ok; ++i) {
      pw = mul_mod(pw, alpha, t);
      if (std::gcd(sub_mod(pw, 1 % t, t), t) != 1) ok = false;
    }
    if (ok) {
      lay.eta = eta;
      lay.alpha = alpha;
      return lay;
    }
  }
  throw ExistenceError(
      "make_layout: no 2N-th root with the required unit conditions exists in "
      "Z_" + std::to_string(t));
}

/// A stack of equally-shaped blocks: tensor of shape (block dims..., N) with
/// residues mod t, block index on the last axis.
struct BlockTensor {
  std::vector<size_t> dims;
  uint64_t t = 0;
  std::vector<uint64_t> data;

  static BlockTensor zeros(std::vector<size_t> dims, uint64_t t) {
    BlockTensor b;
    b.dims = std::move(dims);
    b.t = t;
    size_t n = 1;
    for (size_t d : b.dims) n *= d;
    b.data.assign(n, 0);
    return b;
  }

  size_t slots() const { return dims.empty() ? 0 : dims.back(); }

  void validate() const {
    if (dims.size() < 2)
      throw StructuralError("BlockTensor: need block dims plus index axis");
    size_t n = 1;
    for (size_t d : dims) n *= d;
    if (data.size() != n)
      throw StructuralError("BlockTensor: data size does not match dims");
    for (uint64_t v : data)
      if (v >= t) throw StructuralError("BlockTensor: entry not reduced mod t");
  }

  bool operator==(const BlockTensor&) const = default;
};

namespace detail {

// Slot transform along the index axis: direction +1 applies
// y[l] = eta^l * N^-1 * sum_k x[k] alpha^(-lk) (the pre-encryption map),
// direction -1 applies its inverse X[k] = sum_l x[l] eta^(-l) alpha^(lk).
inline void slot_transform(MultiPoly& p, const SlotLayout& lay, int direction) {
  const uint64_t t = lay.t;
  const size_t n = lay.slot_count;
  if (n == 1) return;
  std::vector<uint64_t> eta_pow(n), root_pow(n);
  uint64_t eta = direction > 0 ? lay.eta : inv_mod(lay.eta, t);
  uint64_t root = direction > 0 ? inv_mod(lay.alpha, t) : lay.alpha;
  eta_pow[0] = 1 % t;
  root_pow[0] = 1 % t;
  for (size_t i = 1; i < n; ++i) {
    eta_pow[i] = mul_mod(eta_pow[i - 1], eta, t);
    root_pow[i] = mul_mod(root_pow[i - 1], root, t);
  }
  std::vector<uint64_t> out(n);
  for_each_fiber(p.coeffs, p.shape, lay.index_axis, [&](uint64_t* fiber) {
    if (direction > 0) {
      for (size_t l = 0; l < n; ++l) {
        uint64_t acc = 0;
        for (size_t k = 0; k < n; ++k)
          acc = add_mod(acc, mul_mod(fiber[k], root_pow[(l * k) % n], t), t);
        out[l] = mul_mod(mul_mod(acc, lay.slot_inv, t), eta_pow[l], t);
      }
    } else {
      for (size_t k = 0; k < n; ++k) {
        uint64_t acc = 0;
        for (size_t l = 0; l < n; ++l)
          acc = add_mod(acc, mul_mod(mul_mod(fiber[l], eta_pow[l], t),
                                     root_pow[(l * k) % n], t),
                        t);
        out[k] = acc;
      }
    }
    for (size_t i = 0; i < n; ++i) fiber[i] = out[i];
  });
}

inline void check_layout_shape(const BlockTensor& x, const SlotLayout& lay,
                               const std::vector<size_t>& ring_shape) {
  if (lay.index_axis >= ring_shape.size())
    throw StructuralError("pack: index axis outside ring shape");
  if (ring_shape[lay.index_axis] != lay.slot_count)
    throw StructuralError("pack: ring degree on index axis must equal N");
  if (x.dims.back() != lay.slot_count)
    throw StructuralError("pack: block tensor slot count does not match layout");
  if (x.dims.size() != ring_shape.size())
    throw StructuralError("pack: block tensor rank does not match ring");
  size_t b = 0;
  for (size_t a = 0; a < ring_shape.size(); ++a) {
    if (a == lay.index_axis) continue;
    if (x.dims[b] > ring_shape[a])
      throw SizingError("pack: block axis " + std::to_string(b + 1) +
                        " extent " + std::to_string(x.dims[b]) +
                        " exceeds ring degree " + std::to_string(ring_shape[a]));
    ++b;
  }
}

}  // namespace detail

/// Embeds the blocks into the ring (zero-padded) and applies the slot
/// transform, so that one ring product afterwards acts slotwise.
inline MultiPoly pre_process(const BlockTensor& x, const SlotLayout& lay,
                             const std::vector<size_t>& ring_shape) {
  x.validate();
  if (x.t != lay.t) throw StructuralError("pre_process: modulus mismatch");
  detail::check_layout_shape(x, lay, ring_shape);
  MultiPoly p = MultiPoly::zero(ring_shape, lay.t);
  const size_t rank = ring_shape.size();
  std::vector<size_t> idx(x.dims.size(), 0);
  for (size_t flat = 0; flat < x.data.size(); ++flat) {
    size_t ring_flat = 0;
    size_t b = 0;
    for (size_t a = 0; a < rank; ++a) {
      size_t coord = a == lay.index_axis ? idx.back() : idx[b++];
      ring_flat = ring_flat * ring_shape[a] + coord;
    }
    p.coeffs[ring_flat] = x.data[flat];
    detail::next_index(idx, x.dims);
  }
  detail::slot_transform(p, lay, +1);
  return p;
}

/// Inverse of pre_process; crops each block to block_dims (defaults to the
/// full non-index ring extents).
inline BlockTensor post_process(const MultiPoly& p, const SlotLayout& lay,
                                std::vector<size_t> block_dims = {}) {
  if (p.modulus != lay.t) throw StructuralError("post_process: modulus mismatch");
  if (lay.index_axis >= p.shape.size() ||
      p.shape[lay.index_axis] != lay.slot_count)
    throw StructuralError("post_process: ring shape does not match layout");
  if (block_dims.empty()) {
    for (size_t a = 0; a < p.shape.size(); ++a)
      if (a != lay.index_axis) block_dims.push_back(p.shape[a]);
  }
  if (block_dims.size() + 1 != p.shape.size())
    throw StructuralError("post_process: block rank does not match ring");
  MultiPoly q = p;
  detail::slot_transform(q, lay, -1);
  std::vector<size_t> out_dims = block_dims;
  out_dims.push_back(lay.slot_count);
  BlockTensor bt = BlockTensor::zeros(out_dims, lay.t);
  std::vector<size_t> idx(out_dims.size(), 0);
  for (size_t flat = 0; flat < bt.data.size(); ++flat) {
    size_t ring_flat = 0;
    size_t b = 0;
    bool in_range = true;
    for (size_t a = 0; a < p.shape.size(); ++a) {
      size_t coord = a == lay.index_axis ? idx.back() : idx[b++];
      if (coord >= p.shape[a]) in_range = false;
      ring_flat = ring_flat * p.shape[a] + coord;
    }
    if (!in_range)
      throw SizingError("post_process: block dims exceed ring extents");
    bt.data[flat] = q.coeffs[ring_flat];
    detail::next_index(idx, out_dims);
  }
  return bt;
}

/// Non-overlapping tiling of a 2-D image into block_h x block_w blocks in
/// raster order along the index axis.
inline BlockTensor pack_blocks(const Tensor& image, size_t block_h,
                               size_t block_w, uint64_t t, bool pad = false) {
  if (image.dims.size() != 2)
    throw StructuralError("pack_blocks: expected a 2-D image");
  size_t h = image.dims[0], w = image.dims[1];
  if (block_h == 0 || block_w == 0)
    throw ParameterError("pack_blocks: block dims must be positive");
  if (!pad && (h % block_h != 0 || w % block_w != 0))
    throw ParameterError(
        "pack_blocks: image dims not divisible by block dims (pass pad=true "
        "to zero-pad)");
  size_t rows = (h + block_h - 1) / block_h;
  size_t cols = (w + block_w - 1) / block_w;
  BlockTensor bt = BlockTensor::zeros({block_h, block_w, rows * cols}, t);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      size_t slot = r * cols + c;
      for (size_t i = 0; i < block_h; ++i) {
        for (size_t j = 0; j < block_w; ++j) {
          size_t y = r * block_h + i, x = c * block_w + j;
          int64_t v = (y < h && x < w) ? image.at({y, x}) : 0;
          if (v < 0 || static_cast<uint64_t>(v) >= t)
            throw ParameterError("pack_blocks: pixel value not in [0, t)");
          bt.data[(i * block_w + j) * (rows * cols) + slot] =
              static_cast<uint64_t>(v);
        }
      }
    }
  }
  return bt;
}

/// Exact inverse of pack_blocks for the stated image dims.
inline Tensor unpack_blocks(const BlockTensor& bt, size_t height,
                            size_t width) {
  bt.validate();
  if (bt.dims.size() != 3)
    throw StructuralError("unpack_blocks: expected (block_h, block_w, N)");
  size_t block_h = bt.dims[0], block_w = bt.dims[1], slots = bt.dims[2];
  size_t rows = (height + block_h - 1) / block_h;
  size_t cols = (width + block_w - 1) / block_w;
  if (rows * cols != slots)
    throw StructuralError(
        "unpack_blocks: image dims inconsistent with slot count");
  Tensor img = Tensor::zeros({height, width});
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      size_t slot = r * cols + c;
      for (size_t i = 0; i < block_h; ++i) {
        for (size_t j = 0; j < block_w; ++j) {
          size_t y = r * block_h + i, x = c * block_w + j;
          if (y < height && x < width)
            img.at({y, x}) = static_cast<int64_t>(
                bt.data[(i * block_w + j) * slots + slot]);
        }
      }
    }
  }
  return img;
}

}  // namespace mrlwe
