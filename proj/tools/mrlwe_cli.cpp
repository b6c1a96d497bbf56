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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mrlwe/mrlwe.hpp"

namespace {

using namespace mrlwe;

std::vector<size_t> parse_dims(const std::string& spec) {
  std::vector<size_t> dims;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t v = std::stoull(item);
    if (v == 0) throw ParameterError("dimension must be positive: " + spec);
    dims.push_back(v);
  }
  if (dims.empty()) throw ParameterError("empty dimension list");
  return dims;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << text;
}

RingMapping make_mapping(const std::vector<size_t>& src,
                         const std::vector<size_t>& dst, bool shuffle,
                         uint64_t shuffle_seed) {
  RingMapping m = RingMapping::reshape(src, dst);
  if (shuffle) {
    Rng rng(shuffle_seed);
    for (size_t i = m.perm.size(); i > 1; --i)
      std::swap(m.perm[i - 1], m.perm[rng.below(i)]);
    m.validate();
  }
  return m;
}

void emit_report(const ExperimentReport& rep, const std::string& json_path) {
  nlohmann::json j = report_to_json(rep);
  std::cout << j.dump(2) << "\n";
  if (!json_path.empty()) write_text(json_path, j.dump(2));
}

void write_result_image(const ExperimentReport& rep, uint64_t t,
                        const std::string& path) {
  if (path.empty() || rep.outputs.empty()) return;
  const Tensor& out = rep.outputs.front();
  if (out.dims.size() == 2 && t - 1 <= 65535) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path);
    write_pgm(os, out, t - 1);
  } else if (out.dims.size() == 3) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path);
    write_raw3d(os, out);
  } else {
    throw IoError("no signal format fits the result; use the JSON report");
  }
}

int cmd_params(const std::string& scenario, uint64_t t, double sigma,
               unsigned depth, uint64_t adds, double epsilon,
               const std::string& csv_path, const std::string& json_path) {
  std::vector<ParamsRow> rows;
  if (scenario == "filtering" || scenario == "both") {
    auto r = filtering_table(default_filtering_configs(), t, sigma, depth,
                             adds, epsilon);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (scenario == "smoothing3d" || scenario == "both") {
    auto r = smoothing_table(default_smoothing_configs(), t, sigma, depth,
                             adds, epsilon);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (rows.empty())
    throw ParameterError("unknown scenario: " + scenario +
                         " (expected filtering, smoothing3d or both)");
  std::string csv = rows_to_csv(rows);
  std::cout << csv;
  if (!csv_path.empty()) write_text(csv_path, csv);
  if (!json_path.empty()) write_text(json_path, rows_to_json(rows).dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mrlwe: somewhat-homomorphic encryption over multivariate negacyclic "
      "rings; encrypted multidimensional filtering, block packing, structure "
      "switching and a parameter/security estimator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file");

  // ---- params ----
  std::string scenario = "both", csv_path, json_path;
  uint64_t t = 12289, adds = 1, seed = 1;
  double sigma = 1.0, epsilon = 0x1p-32;
  unsigned depth = 1;
  auto* params = app.add_subcommand(
      "params", "parameter tables and security estimates");
  params->add_option("--scenario", scenario, "filtering | smoothing3d | both");
  params->add_option("--t", t, "plaintext modulus");
  params->add_option("--sigma", sigma, "noise standard deviation");
  params->add_option("--depth", depth, "multiplicative depth D");
  params->add_option("--adds", adds, "addition count A");
  params->add_option("--epsilon", epsilon, "attacker advantage");
  params->add_option("--csv", csv_path, "CSV output path");
  params->add_option("--json", json_path, "JSON output path");

  // ---- keygen ----
  std::string degrees_spec = "64", out_prefix = "key", mapping_spec;
  bool gen_relin = false, map_shuffle = false;
  uint64_t map_seed = 0;
  unsigned switches = 0;
  auto* kg = app.add_subcommand("keygen", "generate and serialize keys");
  kg->add_option("--degrees", degrees_spec, "ring degrees, e.g. 64 or 32,32,4");
  kg->add_option("--t", t, "plaintext modulus");
  kg->add_option("--sigma", sigma, "noise standard deviation");
  kg->add_option("--depth", depth, "multiplicative depth budget D");
  kg->add_option("--adds", adds, "addition count A for the modulus bound");
  kg->add_option("--switches", switches,
                 "structure switches to budget in the modulus bound");
  kg->add_option("--seed", seed, "rng seed");
  kg->add_option("--out-prefix", out_prefix, "output path prefix");
  kg->add_flag("--relin", gen_relin, "also emit a relinearization key");
  kg->add_option("--mapping", mapping_spec,
                 "target shape for a structure key, e.g. 8,8");
  kg->add_flag("--map-shuffle", map_shuffle,
               "randomize the mapping permutation");
  kg->add_option("--map-seed", map_seed, "seed for --map-shuffle");

  // ---- encrypt ----
  std::string pk_path, in_path, out_path;
  std::string mode = "conv";
  bool packed = false;
  size_t block_h = 0, block_w = 0;
  auto* enc = app.add_subcommand("encrypt", "encrypt a PGM / raw3d signal");
  enc->add_option("--pk", pk_path, "public key file")->required();
  enc->add_option("--in", in_path, "input signal")->required();
  enc->add_option("--out", out_path, "output ciphertext")->required();
  enc->add_option("--mode", mode, "conv | corr encoding");
  enc->add_option("--seed", seed, "rng seed");
  enc->add_flag("--packed", packed, "pack 2-D image into index-variable blocks");
  enc->add_option("--block-h", block_h, "block height for --packed");
  enc->add_option("--block-w", block_w, "block width for --packed");

  // ---- decrypt ----
  std::string sk_path, dims_spec;
  bool signed_out = false;
  auto* dec = app.add_subcommand("decrypt", "decrypt to a PGM / raw3d signal");
  dec->add_option("--sk", sk_path, "secret key file")->required();
  dec->add_option("--in", in_path, "input ciphertext")->required();
  dec->add_option("--out", out_path, "output signal")->required();
  dec->add_option("--dims", dims_spec, "result dims, e.g. 74,74")->required();
  dec->add_flag("--signed", signed_out, "centered lift the payload");
  dec->add_flag("--packed", packed, "slot post-processing before decode");

  // ---- filter / correlate ----
  ExperimentConfig cfg;
  auto add_experiment_flags = [&](CLI::App* cmd) {
    cmd->add_option("--scheme", cfg.scheme, "1 | 2 | 3 variables");
    cmd->add_option("--image-n", cfg.image_n, "image side N");
    cmd->add_option("--nz", cfg.image_nz, "volume depth N_z (3-D signals)");
    cmd->add_option("--filter-f", cfg.filter_f, "filter side F");
    cmd->add_option("--blocks", cfg.blocks, "pair / block count I");
    cmd->add_option("--t", cfg.t, "plaintext modulus");
    cmd->add_option("--sigma", cfg.sigma, "noise standard deviation");
    cmd->add_option("--depth", cfg.depth, "multiplicative depth D");
    cmd->add_option("--adds", cfg.adds, "addition count A");
    cmd->add_option("--epsilon", cfg.epsilon, "attacker advantage");
    cmd->add_option("--seed", cfg.seed, "rng seed");
    cmd->add_option("--json", json_path, "JSON report path");
    cmd->add_option("--out", cfg.output_path, "result signal path");
    cmd->add_flag("--no-verify",
                  [&](size_t) { cfg.verify = false; },
                  "skip the cleartext reference assertion");
  };
  auto* filter = app.add_subcommand("filter", "encrypted filtering experiment");
  add_experiment_flags(filter);
  filter->add_option("--kernel", cfg.kernel, "random | sobelx | sobely");
  filter->add_flag("--public-kernel", cfg.public_kernel,
                   "keep the kernel in the clear");
  filter->add_option("--in", cfg.input_path, "input image (PGM / raw3d)");

  auto* correlate =
      app.add_subcommand("correlate", "encrypted correlation experiment");
  add_experiment_flags(correlate);

  // ---- switch ----
  std::string key_path;
  bool verify_switch = false;
  auto* sw = app.add_subcommand("switch",
                                "change a ciphertext's ring structure");
  sw->add_option("--in", in_path, "input ciphertext")->required();
  sw->add_option("--key", key_path, "structure key file")->required();
  sw->add_option("--out", out_path, "output ciphertext")->required();
  sw->add_flag("--verify", verify_switch,
               "check the remapped plaintext (needs --sk)");
  sw->add_option("--sk", sk_path, "source secret key, for --verify");

  // ---- bench ----
  std::string bench_scheme = "3";
  uint64_t bench_max_n = uint64_t{1} << 18;
  auto* bench = app.add_subcommand(
      "bench", "timed keygen/encrypt/product/decrypt at table sizes");
  bench->add_option("--seed", seed, "rng seed")->required();
  bench->add_option("--scenario", scenario, "filtering | smoothing3d | both");
  bench->add_option("--schemes", bench_scheme,
                    "comma list of scheme arities to run, e.g. 2,3");
  bench->add_option("--max-n", bench_max_n,
                    "skip rows with ring degree above this");
  bench->add_option("--t", t, "plaintext modulus");
  bench->add_option("--sigma", sigma, "noise standard deviation");
  bench->add_option("--csv", csv_path, "CSV output path");
  bench->add_option("--json", json_path, "JSON output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*params)
      return cmd_params(scenario, t, sigma, depth, adds, epsilon, csv_path,
                        json_path);

    if (*kg) {
      auto degrees = parse_dims(degrees_spec);
      std::vector<size_t> all_degrees = degrees;
      std::optional<RingMapping> mapping;
      if (!mapping_spec.empty()) {
        auto target = parse_dims(mapping_spec);
        mapping = make_mapping(degrees, target, map_shuffle, map_seed);
        all_degrees.insert(all_degrees.end(), target.begin(), target.end());
      }
      size_t n = 1;
      for (size_t d : degrees) n *= d;
      uint64_t q = choose_prime(
          min_q_bound(t, sigma, n, depth + switches, adds), all_degrees);
      RingParams rp{degrees, q, t};
      rp.validate();
      NoiseParams np{sigma, 6.0};
      Rng rng(seed);
      auto [sk, pk] = keygen(rp, np, rng);
      save_file(out_prefix + ".sk", sk);
      save_file(out_prefix + ".pk", pk);
      std::cout << "ring " << detail::shape_str(degrees) << " q=" << q
                << " (" << static_cast<unsigned>(
                               std::ceil(std::log2(double(q))))
                << " bits)\n";
      if (gen_relin) {
        RelinKey rk = gen_mul_relin_key(sk, 0, np, rng);
        save_file(out_prefix + ".rlk", rk);
      }
      if (mapping) {
        SecretKey dst = remap_key(sk, *mapping);
        StructureKey stk = gen_structure_key(sk, dst, *mapping, 0, np, rng);
        save_file(out_prefix + ".stk", stk);
        save_file(out_prefix + ".dst.sk", dst);
      }
      return 0;
    }

    if (*enc) {
      PublicKey pk = load_public_key_file(pk_path);
      Tensor img = ingest(in_path, format_from_path(in_path), pk.params.t);
      Rng rng(seed);
      NoiseParams np{sigma, 6.0};
      MultiPoly plain;
      if (packed) {
        if (block_h == 0 || block_w == 0)
          throw ParameterError("--packed requires --block-h and --block-w");
        size_t slots = pk.params.degrees.back();
        BlockTensor bt = pack_blocks(img, block_h, block_w, pk.params.t);
        if (bt.slots() != slots)
          throw ParameterError("block count " + std::to_string(bt.slots()) +
                               " does not match ring slot count " +
                               std::to_string(slots));
        SlotLayout lay =
            make_layout(pk.params.t, slots, pk.params.degrees.size() - 1);
        plain = pre_process(bt, lay, pk.params.degrees);
      } else {
        if (pk.params.degrees.size() == 1 && img.dims.size() == 2) {
          // univariate ring: flatten the image row-major
          Tensor flat = Tensor::zeros({img.data.size()});
          flat.data = img.data;
          img = std::move(flat);
        }
        plain = encode_signal(img, pk.params,
                              mode == "corr" ? EncodeMode::correlation
                                             : EncodeMode::convolution);
      }
      Ciphertext ct = encrypt(pk, plain, np, rng, depth);
      save_file(out_path, ct);
      return 0;
    }

    if (*dec) {
      SecretKey sk = load_secret_key_file(sk_path);
      Ciphertext ct = load_ciphertext_file(in_path);
      MultiPoly plain = decrypt(sk, ct);
      auto dims = parse_dims(dims_spec);
      Tensor out;
      if (packed) {
        size_t slots = sk.params.degrees.back();
        SlotLayout lay =
            make_layout(sk.params.t, slots, sk.params.degrees.size() - 1);
        BlockTensor bt = post_process(plain, lay, dims);
        out = Tensor::zeros(bt.dims);
        for (size_t i = 0; i < bt.data.size(); ++i)
          out.data[i] = static_cast<int64_t>(bt.data[i]);
      } else {
        out = decode_signal(plain, dims, signed_out);
      }
      if (signed_out)
        for (auto& v : out.data) v = mod_into(v, sk.params.t);
      if (out.dims.size() == 2 && sk.params.t - 1 <= 65535) {
        std::ofstream os(out_path, std::ios::binary);
        write_pgm(os, out, sk.params.t - 1);
      } else {
        std::ofstream os(out_path, std::ios::binary);
        write_raw3d(os, out);
      }
      return 0;
    }

    if (*filter || *correlate) {
      std::optional<Tensor> image;
      if (!cfg.input_path.empty())
        image = ingest(cfg.input_path, format_from_path(cfg.input_path), cfg.t);
      ExperimentReport rep =
          *filter ? run_filter(cfg, image) : run_correlate(cfg);
      emit_report(rep, json_path);
      write_result_image(rep, cfg.t, cfg.output_path);
      return rep.reference_match ? 0 : 1;
    }

    if (*sw) {
      Ciphertext ct = load_ciphertext_file(in_path);
      StructureKey stk = load_structure_key_file(key_path);
      Ciphertext out = switch_structure(ct, stk);
      save_file(out_path, out);
      if (verify_switch) {
        if (sk_path.empty())
          throw ParameterError("--verify requires --sk");
        SecretKey sk = load_secret_key_file(sk_path);
        SecretKey dst = remap_key(sk, stk.mapping);
        MultiPoly before = decrypt(sk, ct);
        MultiPoly after = decrypt(dst, out);
        bool ok = after == remap(before, stk.mapping);
        std::cout << (ok ? "verify: remapped plaintext matches\n"
                         : "verify: MISMATCH\n");
        return ok ? 0 : 1;
      }
      return 0;
    }

    if (*bench) {
      std::vector<ParamsRow> rows;
      if (scenario == "filtering" || scenario == "both") {
        auto r = filtering_table(default_filtering_configs(), t, sigma, 1, 1,
                                 0x1p-32);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      if (scenario == "smoothing3d" || scenario == "both") {
        auto r = smoothing_table(default_smoothing_configs(), t, sigma, 1, 1,
                                 0x1p-32);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      std::ostringstream csv;
      csv << "table,config,scheme,n,log2_q,delta,bit_security,size_bits,"
             "keygen_ms,encrypt_ms,product_ms,decrypt_ms\n";
      nlohmann::json jrows = nlohmann::json::array();
      Rng rng(seed);
      NoiseParams np{sigma, 6.0};
      for (const auto& row : rows) {
        std::string arity = std::to_string(row.degrees.size());
        if (bench_scheme.find(arity) == std::string::npos) continue;
        if (row.n > bench_max_n) continue;
        RingParams rp{row.degrees, row.q, t};
        auto t0 = std::chrono::steady_clock::now();
        auto [sk, pk] = keygen(rp, np, rng);
        double kg_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        MultiPoly msg = MultiPoly::zero(rp.degrees, rp.t);
        for (auto& c : msg.coeffs) c = rng.below(rp.t);
        t0 = std::chrono::steady_clock::now();
        Ciphertext c1 = encrypt(pk, msg, np, rng);
        double enc_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        Ciphertext c2 = encrypt(pk, msg, np, rng);
        t0 = std::chrono::steady_clock::now();
        Ciphertext prod = he_mul(c1, c2);
        double mul_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        t0 = std::chrono::steady_clock::now();
        MultiPoly dec = decrypt(sk, prod);
        double dec_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        csv << row.table << "," << row.config << "," << row.scheme << ","
            << row.n << "," << row.log2_q << "," << row.delta << ","
            << row.bit_sec << "," << row.size_bits << "," << kg_ms << ","
            << enc_ms << "," << mul_ms << "," << dec_ms << "\n";
        nlohmann::json j;
        j["table"] = row.table;
        j["config"] = row.config;
        j["scheme"] = row.scheme;
        j["n"] = row.n;
        j["log2_q"] = row.log2_q;
        j["delta"] = row.delta;
        j["bit_security"] = row.bit_sec;
        j["size_bits"] = row.size_bits;
        j["timings_ms"] = {{"keygen", kg_ms},
                           {"encrypt", enc_ms},
                           {"product", mul_ms},
                           {"decrypt", dec_ms}};
        jrows.push_back(std::move(j));
      }
      std::cout << csv.str();
      if (!csv_path.empty()) write_text(csv_path, csv.str());
      if (!json_path.empty()) write_text(json_path, jrows.dump(2));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
