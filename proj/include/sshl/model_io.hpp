#pragma once

// Binary model file, all integers and floats little-endian:
//
//   "SSHL" | version u8
//   B, G, M, N, D                        u32 each
//   theta                                B x M f64 (bit major)
//   eta                                  B x N f64
//   beta                                 B f64
//   codewords                            G x B i8 (+1 / -1)
//   kernels                              M x (tag u8, params f64...)
//                                        tag 0 linear, 1 poly(degree, bias),
//                                        2 gauss(sigma), 3 gauss-gamma(gamma)
//   training features                    N x D f64 (row major)
//   C, p                                 f64
//   standardization mean, scale          D f64 each
//   label values                         G i64

#include "sshl/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sshl {

inline constexpr std::uint8_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(const std::vector<std::uint8_t>& bytes);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

namespace io {

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void i8(std::int8_t v) { bytes_.push_back(static_cast<std::uint8_t>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v);
  void raw(const std::string& s);
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint8_t u8();
  std::int8_t i8() { return static_cast<std::int8_t>(u8()); }
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  std::string raw(std::size_t n);
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const;
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace io

}  // namespace sshl
