#include "sshl/model_io.hpp"

#include <bit>
#include <fstream>
#include <iterator>

namespace sshl {

namespace io {

void Writer::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void Writer::raw(const std::string& s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

void Reader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) throw ParseError("model file is truncated");
}

std::uint8_t Reader::u8() {
  need(1);
  return bytes_[pos_++];
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
  return v;
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

std::string Reader::raw(std::size_t n) {
  need(n);
  std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return s;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError("failed writing '" + path + "'");
}

}  // namespace io

namespace {

void write_kernel(io::Writer& w, const KernelDescriptor& k) {
  if (std::holds_alternative<NormalizedLinear>(k)) {
    w.u8(0);
  } else if (const auto* p = std::get_if<NormalizedPolynomial>(&k)) {
    w.u8(1);
    w.f64(static_cast<double>(p->degree));
    w.f64(p->bias);
  } else if (const auto* g = std::get_if<Gaussian>(&k)) {
    w.u8(2);
    w.f64(g->sigma);
  } else if (const auto* gg = std::get_if<GaussianGamma>(&k)) {
    w.u8(3);
    w.f64(gg->gamma);
  }
}

KernelDescriptor read_kernel(io::Reader& r) {
  switch (const std::uint8_t tag = r.u8()) {
    case 0:
      return NormalizedLinear{};
    case 1: {
      const double degree = r.f64();
      const double bias = r.f64();
      return NormalizedPolynomial{static_cast<int>(degree), bias};
    }
    case 2:
      return Gaussian{r.f64()};
    case 3:
      return GaussianGamma{r.f64()};
    default:
      throw ParseError("model file has unknown kernel tag " + std::to_string(tag));
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
  model.validate();
  const auto B = model.num_bits();
  const auto G = model.groups();
  const auto M = model.num_kernels();
  const auto N = model.num_train();
  const auto D = model.dim();
  io::Writer w;
  w.raw("SSHL");
  w.u8(kModelFormatVersion);
  for (std::size_t v : {B, G, M, N, D}) w.u32(static_cast<std::uint32_t>(v));
  for (const auto& bit : model.bits) {
    for (Eigen::Index m = 0; m < bit.theta.size(); ++m) w.f64(bit.theta[m]);
  }
  for (const auto& bit : model.bits) {
    for (Eigen::Index n = 0; n < bit.eta.size(); ++n) w.f64(bit.eta[n]);
  }
  for (const auto& bit : model.bits) w.f64(bit.beta);
  for (const auto& code : model.codebook.codewords) {
    for (std::size_t b = 0; b < B; ++b) w.i8(static_cast<std::int8_t>(code[b]));
  }
  for (const auto& k : model.kernels) write_kernel(w, k);
  for (Eigen::Index n = 0; n < model.training_features.rows(); ++n) {
    for (Eigen::Index d = 0; d < model.training_features.cols(); ++d) w.f64(model.training_features(n, d));
  }
  w.f64(model.c);
  w.f64(model.p);
  for (Eigen::Index d = 0; d < static_cast<Eigen::Index>(D); ++d) w.f64(model.standardization.mean[d]);
  for (Eigen::Index d = 0; d < static_cast<Eigen::Index>(D); ++d) w.f64(model.standardization.scale[d]);
  for (std::size_t g = 0; g < G; ++g) {
    w.i64(model.label_values.empty() ? static_cast<std::int64_t>(g + 1) : model.label_values[g]);
  }
  return w.bytes();
}

Model deserialize_model(const std::vector<std::uint8_t>& bytes) {
  io::Reader r(bytes);
  if (bytes.size() < 5 || r.raw(4) != "SSHL") throw ParseError("not a model file (bad magic)");
  const std::uint8_t version = r.u8();
  if (version != kModelFormatVersion) {
    throw ParseError("unsupported model format version " + std::to_string(version));
  }
  const std::uint32_t B = r.u32(), G = r.u32(), M = r.u32(), N = r.u32(), D = r.u32();
  Model model;
  model.bits.resize(B);
  for (auto& bit : model.bits) {
    bit.theta.resize(M);
    for (std::uint32_t m = 0; m < M; ++m) bit.theta[m] = r.f64();
  }
  for (auto& bit : model.bits) {
    bit.eta.resize(N);
    for (std::uint32_t n = 0; n < N; ++n) bit.eta[n] = r.f64();
  }
  for (auto& bit : model.bits) bit.beta = r.f64();
  model.codebook.codewords.assign(G, HashCode(B));
  for (auto& code : model.codebook.codewords) {
    for (std::uint32_t b = 0; b < B; ++b) {
      const std::int8_t s = r.i8();
      if (s != 1 && s != -1) throw ParseError("model file has a codeword entry other than +1 / -1");
      code.set(b, s);
    }
  }
  for (std::uint32_t m = 0; m < M; ++m) model.kernels.push_back(read_kernel(r));
  model.training_features.resize(N, D);
  for (std::uint32_t n = 0; n < N; ++n) {
    for (std::uint32_t d = 0; d < D; ++d) model.training_features(n, d) = r.f64();
  }
  model.c = r.f64();
  model.p = r.f64();
  model.standardization.mean.resize(D);
  model.standardization.scale.resize(D);
  for (std::uint32_t d = 0; d < D; ++d) model.standardization.mean[d] = r.f64();
  for (std::uint32_t d = 0; d < D; ++d) model.standardization.scale[d] = r.f64();
  model.label_values.resize(G);
  for (auto& v : model.label_values) v = static_cast<long>(r.i64());
  if (!r.done()) throw ParseError("model file has trailing bytes");
  model.validate();
  return model;
}

void save_model(const Model& model, const std::string& path) { io::write_file(path, serialize_model(model)); }

Model load_model(const std::string& path) { return deserialize_model(io::read_file(path)); }

}  // namespace sshl
