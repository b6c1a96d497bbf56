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
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "mrlwe/errors.hpp"
#include "mrlwe/tensor.hpp"

namespace mrlwe {

// Signal file formats:
//   pgm    binary P5, 1 byte per sample below maxval 256, else 2 bytes
//          big-endian (the PGM convention)
//   raw3d  12-byte header of three u32 LE dims, then u16 LE samples
//          in row-major order

namespace detail {

inline uint64_t pgm_token(std::istream& is) {
  // skip whitespace and '#' comments
  int ch = is.peek();
  while (ch == '#' || std::isspace(ch)) {
    if (ch == '#')
      is.ignore(1 << 20, '\n');
    else
      is.get();
    ch = is.peek();
  }
  uint64_t v = 0;
  if (!(is >> v)) throw IoError("pgm: malformed header token");
  return v;
}

}  // namespace detail

inline Tensor read_pgm(std::istream& is) {
  char p, five;
  if (!is.get(p) || !is.get(five) || p != 'P' || five != '5')
    throw IoError("pgm: not a binary P5 file");
  uint64_t width = detail::pgm_token(is);
  uint64_t height = detail::pgm_token(is);
  uint64_t maxval = detail::pgm_token(is);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535)
    throw IoError("pgm: implausible header");
  is.get();  // the single whitespace byte before the raster
  Tensor img = Tensor::zeros({static_cast<size_t>(height),
                              static_cast<size_t>(width)});
  bool wide = maxval > 255;
  for (auto& v : img.data) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), wide ? 2 : 1))
      throw IoError("pgm: truncated raster");
    uint64_t sample = wide ? (uint64_t(b[0]) << 8 | b[1]) : b[0];
    if (sample > maxval) throw IoError("pgm: sample exceeds maxval");
    v = static_cast<int64_t>(sample);
  }
  return img;
}

inline void write_pgm(std::ostream& os, const Tensor& img, uint64_t maxval) {
  if (img.dims.size() != 2) throw IoError("pgm: expected a 2-D tensor");
  if (maxval == 0 || maxval > 65535) throw IoError("pgm: bad maxval");
  os << "P5\n" << img.dims[1] << " " << img.dims[0] << "\n" << maxval << "\n";
  bool wide = maxval > 255;
  for (int64_t v : img.data) {
    if (v < 0 || static_cast<uint64_t>(v) > maxval)
      throw IoError("pgm: sample out of range for maxval");
    if (wide) {
      char b[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
      os.write(b, 2);
    } else {
      char b = static_cast<char>(v);
      os.write(&b, 1);
    }
  }
  if (!os) throw IoError("pgm: write failure");
}

inline Tensor read_raw3d(std::istream& is) {
  unsigned char hdr[12];
  if (!is.read(reinterpret_cast<char*>(hdr), 12))
    throw IoError("raw3d: truncated header");
  size_t dims[3];
  for (int d = 0; d < 3; ++d) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(hdr[4 * d + i]) << (8 * i);
    if (v == 0 || v > (1u << 24)) throw IoError("raw3d: implausible dimension");
    dims[d] = v;
  }
  Tensor t = Tensor::zeros({dims[0], dims[1], dims[2]});
  for (auto& v : t.data) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), 2))
      throw IoError("raw3d: truncated samples");
    v = static_cast<int64_t>(uint64_t(b[0]) | (uint64_t(b[1]) << 8));
  }
  return t;
}

inline void write_raw3d(std::ostream& os, const Tensor& t) {
  if (t.dims.size() != 3) throw IoError("raw3d: expected a 3-D tensor");
  for (size_t d : t.dims) {
    if (d > (1u << 24)) throw IoError("raw3d: dimension too large");
    uint32_t v = static_cast<uint32_t>(d);
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
  }
  for (int64_t v : t.data) {
    if (v < 0 || v > 65535) throw IoError("raw3d: sample out of u16 range");
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    os.write(b, 2);
  }
  if (!os) throw IoError("raw3d: write failure");
}

enum class SignalFormat { pgm, raw3d };

inline SignalFormat format_from_path(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "pgm") return SignalFormat::pgm;
  if (ext == "raw3d" || ext == "raw") return SignalFormat::raw3d;
  throw IoError("cannot infer signal format from path: " + path);
}

/// Reads a signal file and checks every sample lies below t.
inline Tensor ingest(const std::string& path, SignalFormat format, uint64_t t) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  Tensor out = format == SignalFormat::pgm ? read_pgm(is) : read_raw3d(is);
  for (int64_t v : out.data)
    if (v < 0 || static_cast<uint64_t>(v) >= t)
      throw IoError("ingest: sample value " + std::to_string(v) +
                    " not below t = " + std::to_string(t));
  return out;
}

inline void write_signal(const std::string& path, const Tensor& t,
                         uint64_t maxval) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  if (t.dims.size() == 2 && maxval <= 65535)
    write_pgm(os, t, maxval);
  else
    write_raw3d(os, t);
}

}  // namespace mrlwe
