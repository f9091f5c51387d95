// Copyright 2026 The spikelab Authors
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

// JSON and binary persistence for signals and instances.
//
// JSON documents carry a "format" tag, the dimensions, optional sparsity
// metadata and every real number as a decimal string with 17 significant
// digits (round-trips doubles exactly):
//
//   {"format": "spikelab.signal",  "n": 4, "sparsity": {"rho": "1/2", "A": 1},
//    "entries": ["0.70710678118654757", ...]}
//   {"format": "spikelab.wigner",  "n": 3, "upper": [...]}        row-major upper triangle
//   {"format": "spikelab.wishart", "n": 3, "N": 5, "samples": [[...], ...]}
//
// Binary layout (little-endian): the 5 magic bytes "SPKL1", u32 rank, rank u32
// extents, then the f64 payload in row-major order. Signals have rank 1 [n],
// Wigner matrices rank 2 [n, n] (full matrix), Wishart samples rank 2 [N, n].

#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelab/model.hpp"

namespace spikelab {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad decimal string '" + s + "'");
  return v;
}

// --- JSON -----------------------------------------------------------------

inline nlohmann::json to_json(const Signal& x, const std::optional<SparsityParams>& sp = std::nullopt) {
  nlohmann::json j;
  j["format"] = "spikelab.signal";
  j["n"] = x.n();
  if (sp) j["sparsity"] = {{"rho", to_string(sp->rho())}, {"A", sp->A()}};
  auto& e = j["entries"] = nlohmann::json::array();
  for (double v : x.entries()) e.push_back(format_double(v));
  return j;
}

inline void expect_format(const nlohmann::json& j, const char* tag) {
  if (!j.contains("format") || j.at("format") != tag) {
    throw std::invalid_argument(std::string("expected JSON document with format '") + tag + "'");
  }
}

inline Signal signal_from_json(const nlohmann::json& j) {
  expect_format(j, "spikelab.signal");
  const auto n = j.at("n").get<std::size_t>();
  const auto& e = j.at("entries");
  if (e.size() != n) throw std::invalid_argument("signal JSON: entries length != n");
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = parse_double(e[i].get<std::string>());
  return Signal(std::move(x));
}

inline nlohmann::json to_json(const WignerInstance& inst) {
  nlohmann::json j;
  j["format"] = "spikelab.wigner";
  j["n"] = inst.n();
  auto& u = j["upper"] = nlohmann::json::array();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    for (std::size_t k = i; k < inst.n(); ++k) u.push_back(format_double(inst.Y(i, k)));
  }
  return j;
}

inline WignerInstance wigner_from_json(const nlohmann::json& j) {
  expect_format(j, "spikelab.wigner");
  const auto n = j.at("n").get<std::size_t>();
  const auto& u = j.at("upper");
  if (u.size() != n * (n + 1) / 2) throw std::invalid_argument("wigner JSON: wrong upper-triangle length");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = i; k < m.cols(); ++k) m(i, k) = parse_double(u[pos++].get<std::string>());
  }
  return {SymmetricMatrix::from_upper(std::move(m))};
}

inline nlohmann::json to_json(const WishartInstance& inst) {
  nlohmann::json j;
  j["format"] = "spikelab.wishart";
  j["n"] = inst.n();
  j["N"] = inst.N();
  auto& rows = j["samples"] = nlohmann::json::array();
  for (Eigen::Index s = 0; s < inst.samples().rows(); ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index i = 0; i < inst.samples().cols(); ++i) row.push_back(format_double(inst.samples()(s, i)));
    rows.push_back(std::move(row));
  }
  return j;
}

inline WishartInstance wishart_from_json(const nlohmann::json& j) {
  expect_format(j, "spikelab.wishart");
  const auto n = j.at("n").get<std::size_t>();
  const auto N = j.at("N").get<std::size_t>();
  const auto& rows = j.at("samples");
  if (rows.size() != N) throw std::invalid_argument("wishart JSON: samples length != N");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < N; ++s) {
    if (rows[s].size() != n) throw std::invalid_argument("wishart JSON: sample length != n");
    for (std::size_t i = 0; i < n; ++i) {
      m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = parse_double(rows[s][i].get<std::string>());
    }
  }
  return WishartInstance(std::move(m));
}

// --- binary ---------------------------------------------------------------

inline constexpr std::array<char, 5> kBinaryMagic{'S', 'P', 'K', 'L', '1'};

struct BinaryArray {
  std::vector<std::uint32_t> extents;
  std::vector<double> data;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

inline void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}
  std::uint64_t take(int width) {
    if (pos_ + static_cast<std::size_t>(width) > bytes_.size()) {
      throw std::runtime_error("binary payload truncated");
    }
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * b);
    }
    return v;
  }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t k) { pos_ += k; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string encode_binary(const BinaryArray& a) {
  std::size_t count = 1;
  for (auto e : a.extents) count *= e;
  if (count != a.data.size()) throw std::invalid_argument("encode_binary: extents do not match payload");
  std::string out(kBinaryMagic.begin(), kBinaryMagic.end());
  detail::put_u32(out, static_cast<std::uint32_t>(a.extents.size()));
  for (auto e : a.extents) detail::put_u32(out, e);
  for (double d : a.data) detail::put_f64(out, d);
  return out;
}

inline BinaryArray decode_binary(const std::string& bytes) {
  if (bytes.size() < kBinaryMagic.size() ||
      !std::equal(kBinaryMagic.begin(), kBinaryMagic.end(), bytes.begin())) {
    throw std::runtime_error("not a SPKL1 file (bad magic)");
  }
  detail::Reader r(bytes);
  r.skip(kBinaryMagic.size());
  BinaryArray a;
  const auto rank = static_cast<std::uint32_t>(r.take(4));
  if (rank == 0 || rank > 8) throw std::runtime_error("SPKL1: unsupported rank");
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    a.extents.push_back(static_cast<std::uint32_t>(r.take(4)));
    count *= a.extents.back();
  }
  if (bytes.size() - r.pos() != count * 8) throw std::runtime_error("SPKL1: payload size mismatch");
  a.data.reserve(count);
  for (std::size_t i = 0; i < count; ++i) a.data.push_back(std::bit_cast<double>(r.take(8)));
  return a;
}

inline std::string to_binary(const Signal& x) {
  return encode_binary({{static_cast<std::uint32_t>(x.n())}, {x.entries().begin(), x.entries().end()}});
}

inline Signal signal_from_binary(const std::string& bytes) {
  BinaryArray a = decode_binary(bytes);
  if (a.extents.size() != 1) throw std::runtime_error("SPKL1: signal must have rank 1");
  return Signal(Eigen::Map<const Eigen::VectorXd>(a.data.data(), static_cast<Eigen::Index>(a.data.size())));
}

inline std::string to_binary(const WignerInstance& inst) {
  const auto n = static_cast<std::uint32_t>(inst.n());
  BinaryArray a{{n, n}, {}};
  a.data.reserve(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < n; ++k) a.data.push_back(inst.Y(i, k));
  }
  return encode_binary(a);
}

inline WignerInstance wigner_from_binary(const std::string& bytes) {
  BinaryArray a = decode_binary(bytes);
  if (a.extents.size() != 2 || a.extents[0] != a.extents[1]) {
    throw std::runtime_error("SPKL1: Wigner matrix must have rank 2 and be square");
  }
  const auto n = static_cast<Eigen::Index>(a.extents[0]);
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return {SymmetricMatrix(Eigen::MatrixXd(Eigen::Map<const RowMajor>(a.data.data(), n, n)))};
}

inline std::string to_binary(const WishartInstance& inst) {
  BinaryArray a{{static_cast<std::uint32_t>(inst.N()), static_cast<std::uint32_t>(inst.n())}, {}};
  a.data.reserve(inst.N() * inst.n());
  for (Eigen::Index s = 0; s < inst.samples().rows(); ++s) {
    for (Eigen::Index i = 0; i < inst.samples().cols(); ++i) a.data.push_back(inst.samples()(s, i));
  }
  return encode_binary(a);
}

inline WishartInstance wishart_from_binary(const std::string& bytes) {
  BinaryArray a = decode_binary(bytes);
  if (a.extents.size() != 2) throw std::runtime_error("SPKL1: Wishart samples must have rank 2");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return WishartInstance(Eigen::MatrixXd(Eigen::Map<const RowMajor>(
      a.data.data(), static_cast<Eigen::Index>(a.extents[0]), static_cast<Eigen::Index>(a.extents[1]))));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spikelab
