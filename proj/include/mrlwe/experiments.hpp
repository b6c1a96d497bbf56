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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrlwe/codec.hpp"
#include "mrlwe/pack.hpp"
#include "mrlwe/params.hpp"
#include "mrlwe/relin.hpp"
#include "mrlwe/she.hpp"

namespace mrlwe {

// ---------------------------------------------------------------------------
// Experiment runners: end-to-end encrypted filtering / correlation /
// structure switching, parameter table reports and benchmarks. Every
// encrypted run recomputes its result in the clear and records whether the
// two agree exactly; timings are reported but never asserted.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string scenario = "filter";  // filter | correlate | switch | bench
  int scheme = 2;                   // 1 row-decomposed, 2 whole-signal, 3 packed
  size_t image_n = 64;              // N (square images / blocks)
  size_t image_nz = 1;              // N_z > 1 selects 3-D volumes
  size_t filter_f = 3;              // F
  size_t blocks = 1;                // I
  uint64_t t = 12289;
  double sigma = 1.0;
  double trunc_bound = 6.0;
  unsigned depth = 1;   // D
  uint64_t adds = 1;    // A
  double epsilon = 0x1p-32;
  uint64_t seed = 1;
  bool public_kernel = false;
  std::string kernel = "random";  // random | sobelx | sobely
  std::string input_path;         // optional PGM / raw3d image
  std::string output_path;        // optional result file
  bool verify = true;

  // Collects every violation instead of stopping at the first.
  std::vector<std::string> validate_errors() const {
    std::vector<std::string> errs;
    if (scheme < 1 || scheme > 3) errs.push_back("scheme must be 1, 2 or 3");
    if (image_n == 0) errs.push_back("image size N must be positive");
    if (filter_f == 0) errs.push_back("filter size F must be positive");
    if (scenario == "filter" && filter_f >= image_n && image_n > 0)
      errs.push_back("filtering requires F < N");
    if (blocks == 0) errs.push_back("block count I must be positive");
    if (scheme == 1 && image_nz > 1)
      errs.push_back("row decomposition supports 2-D images only");
    if (t < 2) errs.push_back("plaintext modulus t must be >= 2");
    if (!(sigma > 0.0)) errs.push_back("sigma must be positive");
    if (!(trunc_bound > 0.0)) errs.push_back("truncation bound must be positive");
    if (adds == 0) errs.push_back("A must be positive");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
      errs.push_back("epsilon must lie in (0, 1)");
    size_t side = next_power_of_two(
        scenario == "correlate" ? 2 * image_n - 1 : image_n + filter_f - 1);
    size_t n = side * side;
    if (image_nz > 1) n *= next_power_of_two(image_nz + filter_f - 1);
    if (scheme == 3 && image_nz <= 1) n *= next_power_of_two(blocks);
    if (n > (size_t{1} << 20))
      errs.push_back("total ring degree " + std::to_string(n) +
                     " exceeds the desk-scale guardrail 2^20");
    return errs;
  }

  void validate() const {
    auto errs = validate_errors();
    if (errs.empty()) return;
    std::string msg = "invalid experiment config:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ParameterError(msg);
  }
};

struct ExperimentReport {
  std::string scenario;
  std::string scheme_name;
  std::vector<size_t> degrees;
  uint64_t n = 0;
  uint64_t q = 0;
  uint64_t t = 0;
  unsigned log2_q = 0;
  double delta = 0.0;
  double bit_sec = 0.0;
  uint64_t products = 0;
  double keygen_ms = 0.0;
  double encrypt_ms = 0.0;
  double eval_ms = 0.0;
  double decrypt_ms = 0.0;
  bool reference_match = false;
  std::vector<Tensor> outputs;  // decoded result per pair / block
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

inline const char* scheme_name(int scheme) {
  switch (scheme) {
    case 1: return "RLWE";
    case 2: return "2-RLWE";
    default: return "3-RLWE";
  }
}

}  // namespace detail

// --------------------------- cleartext references ---------------------------

/// Full linear convolution mod t, any rank; output extent N_i + F_i - 1.
inline Tensor reference_convolution(const Tensor& x, const Tensor& h,
                                    uint64_t t) {
  if (x.dims.size() != h.dims.size())
    throw StructuralError("reference_convolution: rank mismatch");
  std::vector<size_t> out_dims(x.dims.size());
  for (size_t a = 0; a < x.dims.size(); ++a)
    out_dims[a] = x.dims[a] + h.dims[a] - 1;
  Tensor out = Tensor::zeros(out_dims);
  std::vector<size_t> xi(x.dims.size(), 0);
  for (size_t i = 0; i < x.data.size(); ++i) {
    if (x.data[i] != 0) {
      std::vector<size_t> hj(h.dims.size(), 0);
      for (size_t j = 0; j < h.data.size(); ++j) {
        if (h.data[j] != 0) {
          size_t flat = 0;
          for (size_t a = 0; a < out_dims.size(); ++a)
            flat = flat * out_dims[a] + (xi[a] + hj[a]);
          uint64_t term = mul_mod(mod_into(x.data[i], t),
                                  mod_into(h.data[j], t), t);
          out.data[flat] = static_cast<int64_t>(
              add_mod(static_cast<uint64_t>(out.data[flat]), term, t));
        }
        detail::next_index(hj, h.dims);
      }
    }
    detail::next_index(xi, x.dims);
  }
  return out;
}

/// Full correlation surface mod t, lags shifted by F_i - 1 so the result has
/// non-negative indices; output extent N_i + F_i - 1.
inline Tensor reference_correlation(const Tensor& x, const Tensor& h,
                                    uint64_t t) {
  Tensor reversed = h;
  std::vector<size_t> hj(h.dims.size(), 0);
  for (size_t j = 0; j < h.data.size(); ++j) {
    size_t flat = 0;
    for (size_t a = 0; a < h.dims.size(); ++a)
      flat = flat * h.dims[a] + (h.dims[a] - 1 - hj[a]);
    reversed.data[flat] = h.data[j];
    detail::next_index(hj, h.dims);
  }
  return reference_convolution(x, reversed, t);
}

// ------------------------------ pipelines -----------------------------------

inline Tensor random_tensor(std::vector<size_t> dims, uint64_t t, Rng& rng) {
  Tensor out = Tensor::zeros(std::move(dims));
  for (auto& v : out.data) v = static_cast<int64_t>(rng.below(t));
  return out;
}

inline Tensor kernel_preset(const std::string& name, size_t f, uint64_t t,
                            Rng& rng) {
  if (name == "sobelx" || name == "sobely") {
    if (f != 3) throw ParameterError("sobel kernels are 3x3; pass F = 3");
    Tensor k = Tensor::zeros({3, 3});
    const int64_t gx[9] = {-1, 0, 1, -2, 0, 2, -1, 0, 1};
    for (size_t i = 0; i < 9; ++i)
      k.data[i] = name == "sobelx" ? gx[i] : gx[(i % 3) * 3 + i / 3];
    return k;
  }
  if (name == "random") return random_tensor({f, f}, t, rng);
  throw ParameterError("unknown kernel preset: " + name);
}

/// Encrypted filtering, one homomorphic product per packed unit.
/// scheme 2: the whole image (and volume, when N_z > 1) in one ciphertext.
/// scheme 3: I block/kernel pairs packed along an index variable with slot
///           semantics; each block meets its own kernel.
/// scheme 1: row-decomposed univariate model.
/// Images/kernels are drawn from the seeded rng unless supplied.
inline ExperimentReport run_filter(const ExperimentConfig& cfg,
                                   std::optional<Tensor> image = {},
                                   std::optional<std::vector<Tensor>> kernels = {});

/// Encrypted correlation between I pairs of N x N images.
inline ExperimentReport run_correlate(const ExperimentConfig& cfg);

namespace detail {

struct TimedKeys {
  SecretKey sk;
  PublicKey pk;
};

inline TimedKeys timed_keygen(const RingParams& rp, const NoiseParams& np,
                              Rng& rng, ExperimentReport& rep) {
  auto t0 = Clock::now();
  auto [sk, pk] = keygen(rp, np, rng);
  rep.keygen_ms = ms_since(t0);
  return {std::move(sk), std::move(pk)};
}

inline void fill_estimate(ExperimentReport& rep, const RingParams& rp,
                          double sigma, double epsilon) {
  rep.degrees = rp.degrees;
  rep.n = rp.n();
  rep.q = rp.q;
  rep.t = rp.t;
  rep.log2_q = static_cast<unsigned>(
      std::ceil(std::log2(static_cast<double>(rp.q))));
  NoiseParams np{sigma, 6.0};
  SecurityEstimate est = make_security_estimate(rep.n, rp.q, np.s(), epsilon);
  rep.delta = est.delta;
  rep.bit_sec = est.bit_sec;
}

}  // namespace detail

inline ExperimentReport run_filter(const ExperimentConfig& cfg,
                                   std::optional<Tensor> image,
                                   std::optional<std::vector<Tensor>> kernels) {
  cfg.validate();
  const size_t N = cfg.image_n, F = cfg.filter_f;
  const uint64_t t = cfg.t;
  Rng rng(cfg.seed);
  NoiseParams np{cfg.sigma, cfg.trunc_bound};
  ExperimentReport rep;
  rep.scenario = "filter";
  rep.scheme_name = detail::scheme_name(cfg.scheme);
  reset_ciphertext_product_count();

  const size_t side = next_power_of_two(N + F - 1);
  const bool volume = cfg.image_nz > 1;
  const size_t side_z = volume ? next_power_of_two(cfg.image_nz + F - 1) : 1;

  if (cfg.scheme == 2 || (cfg.scheme == 3 && volume)) {
    // One signal per ciphertext; for volumes the ring simply gains an axis.
    std::vector<size_t> degrees =
        volume ? std::vector<size_t>{side, side, side_z}
               : std::vector<size_t>{side, side};
    size_t n = side * side * (volume ? side_z : 1);
    RingParams rp{degrees, choose_prime(min_q_bound(t, cfg.sigma, n, cfg.depth,
                                                    cfg.adds),
                                        degrees),
                  t};
    rp.validate();
    detail::fill_estimate(rep, rp, cfg.sigma, cfg.epsilon);
    auto keys = detail::timed_keygen(rp, np, rng, rep);
    std::vector<size_t> img_dims =
        volume ? std::vector<size_t>{N, N, cfg.image_nz}
               : std::vector<size_t>{N, N};
    std::vector<size_t> ker_dims =
        volume ? std::vector<size_t>{F, F, F} : std::vector<size_t>{F, F};
    std::vector<size_t> out_dims;
    for (size_t a = 0; a < img_dims.size(); ++a)
      out_dims.push_back(img_dims[a] + ker_dims[a] - 1);

    rep.reference_match = true;
    for (size_t pair = 0; pair < cfg.blocks; ++pair) {
      Tensor img = image && pair == 0
                       ? *image
                       : random_tensor(img_dims, t, rng);
      Tensor ker;
      if (kernels && pair < kernels->size())
        ker = (*kernels)[pair];
      else if (volume)
        ker = random_tensor(ker_dims, t, rng);
      else
        ker = kernel_preset(cfg.kernel, F, t, rng);

      MultiPoly pimg = encode_signal(img, rp, EncodeMode::convolution);
      MultiPoly pker = encode_signal(ker, rp, EncodeMode::convolution);
      auto t0 = detail::Clock::now();
      Ciphertext cimg = encrypt(keys.pk, pimg, np, rng, cfg.depth);
      Ciphertext result;
      if (cfg.public_kernel) {
        rep.encrypt_ms += detail::ms_since(t0);
        t0 = detail::Clock::now();
        result = plain_mul(cimg, pker);
      } else {
        Ciphertext cker = encrypt(keys.pk, pker, np, rng, cfg.depth);
        rep.encrypt_ms += detail::ms_since(t0);
        t0 = detail::Clock::now();
        result = he_mul(cimg, cker);
      }
      rep.eval_ms += detail::ms_since(t0);
      t0 = detail::Clock::now();
      MultiPoly dec = decrypt(keys.sk, result);
      rep.decrypt_ms += detail::ms_since(t0);
      Tensor out = decode_signal(dec, out_dims, false);
      Tensor ref = reference_convolution(img, ker, t);
      rep.reference_match = rep.reference_match && out == ref;
      rep.outputs.push_back(std::move(out));
    }
  } else if (cfg.scheme == 3) {
    // Packed blocks: index variable with slot semantics, one product total.
    const size_t slots = next_power_of_two(cfg.blocks);
    SlotLayout layout = make_layout(t, slots, 2);
    std::vector<size_t> degrees{side, side, slots};
    size_t n = side * side * slots;
    RingParams rp{degrees, choose_prime(min_q_bound(t, cfg.sigma, n, cfg.depth,
                                                    cfg.adds),
                                        degrees),
                  t};
    rp.validate();
    detail::fill_estimate(rep, rp, cfg.sigma, cfg.epsilon);
    auto keys = detail::timed_keygen(rp, np, rng, rep);

    BlockTensor xb = BlockTensor::zeros({N, N, slots}, t);
    BlockTensor hb = BlockTensor::zeros({F, F, slots}, t);
    std::vector<Tensor> imgs, kers;
    for (size_t l = 0; l < cfg.blocks; ++l) {
      Tensor img = image && l == 0 ? *image : random_tensor({N, N}, t, rng);
      Tensor ker = kernels && l < kernels->size()
                       ? (*kernels)[l]
                       : kernel_preset(cfg.kernel, F, t, rng);
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j)
          xb.data[(i * N + j) * slots + l] =
              mod_into(img.at({i, j}), t);
      for (size_t i = 0; i < F; ++i)
        for (size_t j = 0; j < F; ++j)
          hb.data[(i * F + j) * slots + l] =
              mod_into(ker.at({i, j}), t);
      imgs.push_back(std::move(img));
      kers.push_back(std::move(ker));
    }
    MultiPoly px = pre_process(xb, layout, degrees);
    MultiPoly ph = pre_process(hb, layout, degrees);
    auto t0 = detail::Clock::now();
    Ciphertext cx = encrypt(keys.pk, px, np, rng, cfg.depth);
    Ciphertext result;
    if (cfg.public_kernel) {
      rep.encrypt_ms = detail::ms_since(t0);
      t0 = detail::Clock::now();
      result = plain_mul(cx, ph);
    } else {
      Ciphertext ch = encrypt(keys.pk, ph, np, rng, cfg.depth);
      rep.encrypt_ms = detail::ms_since(t0);
      t0 = detail::Clock::now();
      result = he_mul(cx, ch);
    }
    rep.eval_ms = detail::ms_since(t0);
    t0 = detail::Clock::now();
    MultiPoly dec = decrypt(keys.sk, result);
    rep.decrypt_ms = detail::ms_since(t0);
    BlockTensor out_blocks = post_process(dec, layout);
    rep.reference_match = true;
    for (size_t l = 0; l < slots; ++l) {
      Tensor out = Tensor::zeros({N + F - 1, N + F - 1});
      for (size_t i = 0; i < N + F - 1; ++i)
        for (size_t j = 0; j < N + F - 1; ++j)
          out.at({i, j}) = static_cast<int64_t>(
              out_blocks.data[(i * side + j) * slots + l]);
      if (l < cfg.blocks) {
        Tensor ref = reference_convolution(imgs[l], kers[l], t);
        rep.reference_match = rep.reference_match && out == ref;
        rep.outputs.push_back(std::move(out));
      } else {
        // padding slots must stay identically zero
        for (int64_t v : out.data)
          rep.reference_match = rep.reference_match && v == 0;
      }
    }
  } else {
    // Univariate row decomposition: one ciphertext per signal row, N*F
    // products per image pair.
    std::vector<size_t> degrees{side};
    RingParams rp{degrees,
                  choose_prime(min_q_bound(t, cfg.sigma, side, cfg.depth,
                                           std::max<uint64_t>(cfg.adds, F)),
                               degrees),
                  t};
    rp.validate();
    detail::fill_estimate(rep, rp, cfg.sigma, cfg.epsilon);
    auto keys = detail::timed_keygen(rp, np, rng, rep);
    rep.reference_match = true;
    for (size_t pair = 0; pair < cfg.blocks; ++pair) {
      Tensor img = image && pair == 0 ? *image : random_tensor({N, N}, t, rng);
      Tensor ker = kernels && pair < kernels->size()
                       ? (*kernels)[pair]
                       : kernel_preset(cfg.kernel, F, t, rng);
      auto t0 = detail::Clock::now();
      std::vector<Ciphertext> img_rows, ker_rows;
      for (size_t r = 0; r < N; ++r) {
        Tensor row = Tensor::zeros({N});
        for (size_t c = 0; c < N; ++c) row.data[c] = img.at({r, c});
        img_rows.push_back(encrypt(
            keys.pk, encode_signal(row, rp, EncodeMode::convolution), np, rng,
            cfg.depth));
      }
      for (size_t r = 0; r < F; ++r) {
        Tensor row = Tensor::zeros({F});
        for (size_t c = 0; c < F; ++c) row.data[c] = ker.at({r, c});
        ker_rows.push_back(encrypt(
            keys.pk, encode_signal(row, rp, EncodeMode::convolution), np, rng,
            cfg.depth));
      }
      rep.encrypt_ms += detail::ms_since(t0);
      t0 = detail::Clock::now();
      std::vector<std::optional<Ciphertext>> out_rows(N + F - 1);
      for (size_t rx = 0; rx < N; ++rx) {
        for (size_t rh = 0; rh < F; ++rh) {
          Ciphertext prod = he_mul(img_rows[rx], ker_rows[rh]);
          auto& slot = out_rows[rx + rh];
          slot = slot ? he_add(*slot, prod) : std::move(prod);
        }
      }
      rep.eval_ms += detail::ms_since(t0);
      t0 = detail::Clock::now();
      Tensor out = Tensor::zeros({N + F - 1, N + F - 1});
      for (size_t r = 0; r < N + F - 1; ++r) {
        MultiPoly dec = decrypt(keys.sk, *out_rows[r]);
        Tensor row = decode_signal(dec, {N + F - 1}, false);
        for (size_t c = 0; c < N + F - 1; ++c) out.at({r, c}) = row.data[c];
      }
      rep.decrypt_ms += detail::ms_since(t0);
      Tensor ref = reference_convolution(img, ker, t);
      rep.reference_match = rep.reference_match && out == ref;
      rep.outputs.push_back(std::move(out));
    }
  }
  rep.products = ciphertext_product_count();
  if (cfg.verify && !rep.reference_match)
    throw std::runtime_error(
        "filter: decrypted output disagrees with the cleartext reference "
        "(noise overflow or parameter fault); ring n = " +
        std::to_string(rep.n) + ", q = " + std::to_string(rep.q));
  return rep;
}

inline ExperimentReport run_correlate(const ExperimentConfig& cfg) {
  cfg.validate();
  const size_t N = cfg.image_n;
  const uint64_t t = cfg.t;
  Rng rng(cfg.seed);
  NoiseParams np{cfg.sigma, cfg.trunc_bound};
  ExperimentReport rep;
  rep.scenario = "correlate";
  rep.scheme_name = detail::scheme_name(cfg.scheme);
  reset_ciphertext_product_count();

  const size_t side = next_power_of_two(2 * N - 1);
  const size_t out_n = 2 * N - 1;

  auto make_pair = [&](size_t) {
    Tensor x = random_tensor({N, N}, t, rng);
    Tensor h = random_tensor({N, N}, t, rng);
    return std::make_pair(std::move(x), std::move(h));
  };

  if (cfg.scheme == 2) {
    std::vector<size_t> degrees{side, side};
    RingParams rp{degrees,
                  choose_prime(min_q_bound(t, cfg.sigma, side * side,
                                           cfg.depth, cfg.adds),
                               degrees),
                  t};
    detail::fill_estimate(rep, rp, cfg.sigma, cfg.epsilon);
    auto keys = detail::timed_keygen(rp, np, rng, rep);
    rep.reference_match = true;
    for (size_t pair = 0; pair < cfg.blocks; ++pair) {
      auto [x, h] = make_pair(pair);
      Ciphertext cx = encrypt(keys.pk,
                              encode_signal(x, rp, EncodeMode::convolution),
                              np, rng, cfg.depth);
      Ciphertext ch = encrypt(keys.pk,
                              encode_signal(h, rp, EncodeMode::correlation),
                              np, rng, cfg.depth);
      Ciphertext prod = he_mul(cx, ch);
      Tensor out =
          decode_signal(decrypt(keys.sk, prod), {out_n, out_n}, false);
      Tensor ref = reference_correlation(x, h, t);
      rep.reference_match = rep.reference_match && out == ref;
      rep.outputs.push_back(std::move(out));
    }
  } else if (cfg.scheme == 3) {
    const size_t slots = next_power_of_two(cfg.blocks);
    SlotLayout layout = make_layout(t, slots, 2);
    std::vector<size_t> degrees{side, side, slots};
    RingParams rp{degrees,
                  choose_prime(min_q_bound(t, cfg.sigma, side * side * slots,
                                           cfg.depth, cfg.adds),
                               degrees),
                  t};
    detail::fill_estimate(rep, rp, cfg.sigma, cfg.epsilon);
    auto keys = detail::timed_keygen(rp, np, rng, rep);
    BlockTensor xb = BlockTensor::zeros({N, N, slots}, t);
    BlockTensor hb = BlockTensor::zeros({N, N, slots}, t);
    std::vector<Tensor> xs, hs;
    for (size_t l = 0; l < cfg.blocks; ++l) {
      auto [x, h] = make_pair(l);
      for (size_t i = 0; i < N; ++i) {
        for (size_t j = 0; j < N; ++j) {
          xb.data[(i * N + j) * slots + l] = mod_into(x.at({i, j}), t);
          // correlation: kernel content index-reversed
          hb.data[((N - 1 - i) * N + (N - 1 - j)) * slots + l] =
              mod_into(h.at({i, j}), t);
        }
      }
      xs.push_back(std::move(x));
      hs.push_back(std::move(h));
    }
    Ciphertext cx = encrypt(keys.pk, pre_process(xb, layout, degrees), np, rng,
                            cfg.depth);
    Ciphertext ch = encrypt(keys.pk, pre_process(hb, layout, degrees), np, rng,
                            cfg.depth);
    auto t0 = detail::Clock::now();
    Ciphertext prod = he_mul(cx, ch);
    rep.eval_ms = detail::ms_since(t0);
    BlockTensor out_blocks = post_process(decrypt(keys.sk, prod), layout);
    rep.reference_match = true;
    for (size_t l = 0; l < cfg.blocks; ++l) {
      Tensor out = Tensor::zeros({out_n, out_n});
      for (size_t i = 0; i < out_n; ++i)
        for (size_t j = 0; j < out_n; ++j)
          out.at({i, j}) = static_cast<int64_t>(
              out_blocks.data[(i * side + j) * slots + l]);
      Tensor ref = reference_correlation(xs[l], hs[l], t);
      rep.reference_match = rep.reference_match && out == ref;
      rep.outputs.push_back(std::move(out));
    }
  } else {
    // Univariate decomposition: N^2 row products per image pair.
    std::vector<size_t> degrees{side};
    RingParams rp{degrees,
                  choose_prime(min_q_bound(t, cfg.sigma, side, cfg.depth,
                                           std::max<uint64_t>(cfg.adds, N)),
                               degrees),
                  t};
    detail::fill_estimate(rep, rp, cfg.sigma, cfg.epsilon);
    auto keys = detail::timed_keygen(rp, np, rng, rep);
    rep.reference_match = true;
    for (size_t pair = 0; pair < cfg.blocks; ++pair) {
      auto [x, h] = make_pair(pair);
      std::vector<Ciphertext> x_rows, h_rows;
      for (size_t r = 0; r < N; ++r) {
        Tensor xrow = Tensor::zeros({N}), hrow = Tensor::zeros({N});
        for (size_t c = 0; c < N; ++c) {
          xrow.data[c] = x.at({r, c});
          hrow.data[c] = h.at({r, c});
        }
        x_rows.push_back(encrypt(
            keys.pk, encode_signal(xrow, rp, EncodeMode::convolution), np, rng,
            cfg.depth));
        h_rows.push_back(encrypt(
            keys.pk, encode_signal(hrow, rp, EncodeMode::correlation), np, rng,
            cfg.depth));
      }
      std::vector<std::optional<Ciphertext>> out_rows(out_n);
      for (size_t rx = 0; rx < N; ++rx) {
        for (size_t rh = 0; rh < N; ++rh) {
          Ciphertext prod = he_mul(x_rows[rx], h_rows[rh]);
          auto& slot = out_rows[rx - rh + N - 1];
          slot = slot ? he_add(*slot, prod) : std::move(prod);
        }
      }
      Tensor out = Tensor::zeros({out_n, out_n});
      for (size_t r = 0; r < out_n; ++r) {
        Tensor row =
            decode_signal(decrypt(keys.sk, *out_rows[r]), {out_n}, false);
        for (size_t c = 0; c < out_n; ++c) out.at({r, c}) = row.data[c];
      }
      Tensor ref = reference_correlation(x, h, t);
      rep.reference_match = rep.reference_match && out == ref;
      rep.outputs.push_back(std::move(out));
    }
  }
  rep.products = ciphertext_product_count();
  if (cfg.verify && !rep.reference_match)
    throw std::runtime_error(
        "correlate: decrypted output disagrees with the cleartext reference");
  return rep;
}

// ---------------------------- parameter tables ------------------------------

struct ParamsRow {
  std::string table;    // filtering | smoothing3d
  std::string config;   // human-readable dims
  std::string scheme;   // RLWE | 2-RLWE | 3-RLWE
  std::vector<size_t> degrees;
  uint64_t h = 1;
  uint64_t n = 0;
  uint64_t q = 0;
  unsigned log2_q = 0;
  double delta = 0.0;
  double bit_sec = 0.0;
  uint64_t ciphertexts = 0;
  double size_bits = 0.0;
};

namespace detail {

inline ParamsRow params_row(const std::string& table, const std::string& config,
                            const std::string& scheme,
                            std::vector<size_t> degrees, uint64_t h,
                            uint64_t ciphertexts, uint64_t t, double sigma,
                            unsigned D, uint64_t A, double eps) {
  ParamsRow row;
  row.table = table;
  row.config = config;
  row.scheme = scheme;
  row.degrees = std::move(degrees);
  row.h = h;
  row.n = 1;
  for (size_t d : row.degrees) row.n *= d;
  QBound qb = min_q_bound(t, sigma, row.n, D, A);
  row.q = choose_prime(qb, row.degrees);
  row.log2_q = static_cast<unsigned>(
      ceil(log2(Real(row.q))).convert_to<unsigned>());
  NoiseParams np{sigma, 6.0};
  SecurityEstimate est = make_security_estimate(row.n, row.q, np.s(), eps);
  row.delta = est.delta;
  row.bit_sec = est.bit_sec;
  row.ciphertexts = ciphertexts;
  row.size_bits = static_cast<double>(ciphertexts) * 2.0 *
                  static_cast<double>(row.n) *
                  std::log2(static_cast<double>(row.q));
  return row;
}

}  // namespace detail

struct FilterTableConfig {
  uint64_t blocks;   // I
  uint64_t image_n;  // N
  uint64_t filter_f = 11;
  uint64_t h_uni = 4;  // slack for the univariate scheme
};

/// Parameter report for encrypted filtering among I pairs of N x N images,
/// all signals encrypted. Three rows (3-RLWE, 2-RLWE, RLWE) per config.
inline std::vector<ParamsRow> filtering_table(
    const std::vector<FilterTableConfig>& configs, uint64_t t = 12289,
    double sigma = 1.0, unsigned D = 1, uint64_t A = 1,
    double eps = 0x1p-32) {
  std::vector<ParamsRow> rows;
  for (const auto& c : configs) {
    size_t side = next_power_of_two(c.image_n + c.filter_f - 1);
    size_t slots = next_power_of_two(c.blocks);
    std::string config =
        "I=" + std::to_string(c.blocks) + ",N=" + std::to_string(c.image_n);
    rows.push_back(detail::params_row("filtering", config, "3-RLWE",
                                      {side, side, slots}, 1, 2, t, sigma, D,
                                      A, eps));
    rows.push_back(detail::params_row("filtering", config, "2-RLWE",
                                      {side, side}, 1, 2 * c.blocks, t, sigma,
                                      D, A, eps));
    rows.push_back(detail::params_row(
        "filtering", config, "RLWE", {side * c.h_uni}, c.h_uni,
        (c.image_n + c.filter_f) * c.blocks, t, sigma, D, A, eps));
  }
  return rows;
}

struct SmoothingTableConfig {
  uint64_t image_n;       // N_x = N_y
  uint64_t image_nz = 12; // N_z
  uint64_t filter_f = 5;
  uint64_t h_uni = 8;
};

/// Parameter report for 3-D smoothing of an N x N x N_z volume with a public
/// F^3 kernel; only the volume is encrypted.
inline std::vector<ParamsRow> smoothing_table(
    const std::vector<SmoothingTableConfig>& configs, uint64_t t = 12289,
    double sigma = 1.0, unsigned D = 1, uint64_t A = 1,
    double eps = 0x1p-32) {
  std::vector<ParamsRow> rows;
  for (const auto& c : configs) {
    size_t side = next_power_of_two(c.image_n + c.filter_f - 1);
    size_t side_z = next_power_of_two(c.image_nz + c.filter_f - 1);
    std::string config = std::to_string(c.image_n) + "x" +
                         std::to_string(c.image_n) + "x" +
                         std::to_string(c.image_nz);
    rows.push_back(detail::params_row("smoothing3d", config, "3-RLWE",
                                      {side, side, side_z}, 1, 1, t, sigma, D,
                                      A, eps));
    rows.push_back(detail::params_row("smoothing3d", config, "2-RLWE",
                                      {side, side}, 1, c.image_nz, t, sigma, D,
                                      A, eps));
    rows.push_back(detail::params_row(
        "smoothing3d", config, "RLWE", {side * c.h_uni}, c.h_uni,
        c.image_n * c.image_nz, t, sigma, D, A, eps));
  }
  return rows;
}

inline std::vector<FilterTableConfig> default_filtering_configs() {
  return {{4, 246, 11, 8}, {2, 502, 11, 4}, {4, 502, 11, 4}};
}

inline std::vector<SmoothingTableConfig> default_smoothing_configs() {
  return {{60, 12, 5, 32}, {124, 12, 5, 16}, {252, 12, 5, 8}};
}

// ------------------------------- reports ------------------------------------

inline nlohmann::json rows_to_json(const std::vector<ParamsRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["table"] = r.table;
    j["config"] = r.config;
    j["scheme"] = r.scheme;
    j["degrees"] = r.degrees;
    j["h"] = r.h;
    j["n"] = r.n;
    j["q"] = r.q;
    j["log2_q"] = r.log2_q;
    j["delta"] = r.delta;
    j["bit_security"] = r.bit_sec;
    j["ciphertexts"] = r.ciphertexts;
    j["size_bits"] = r.size_bits;
    out.push_back(std::move(j));
  }
  return out;
}

inline std::string rows_to_csv(const std::vector<ParamsRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "table,config,scheme,degrees,h,n,q,log2_q,delta,bit_security,"
        "ciphertexts,size_bits\n";
  for (const auto& r : rows) {
    os << r.table << "," << r.config << "," << r.scheme << ",";
    for (size_t i = 0; i < r.degrees.size(); ++i)
      os << (i ? "x" : "") << r.degrees[i];
    os << "," << r.h << "," << r.n << "," << r.q << "," << r.log2_q << ","
       << r.delta << "," << r.bit_sec << "," << r.ciphertexts << ","
       << r.size_bits << "\n";
  }
  return os.str();
}

inline nlohmann::json report_to_json(const ExperimentReport& rep,
                                     bool with_timings = true) {
  nlohmann::json j;
  j["scenario"] = rep.scenario;
  j["scheme"] = rep.scheme_name;
  j["degrees"] = rep.degrees;
  j["n"] = rep.n;
  j["q"] = rep.q;
  j["t"] = rep.t;
  j["log2_q"] = rep.log2_q;
  j["delta"] = rep.delta;
  j["bit_security"] = rep.bit_sec;
  j["ciphertext_products"] = rep.products;
  j["reference_match"] = rep.reference_match;
  if (with_timings) {
    j["timings_ms"] = {{"keygen", rep.keygen_ms},
                       {"encrypt", rep.encrypt_ms},
                       {"eval", rep.eval_ms},
                       {"decrypt", rep.decrypt_ms}};
  }
  return j;
}

}  // namespace mrlwe
