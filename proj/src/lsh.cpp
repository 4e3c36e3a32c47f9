#include "sshl/lsh.hpp"

#include "sshl/model_io.hpp"

#include <random>

namespace sshl {

LshModel lsh_train(std::size_t dim, std::size_t bits, std::uint64_t seed) {
  if (dim < 1 || bits < 1) throw ConfigError("lsh needs at least one bit and one feature");
  LshModel model;
  model.seed = seed;
  model.standardization = Standardization::identity(dim);
  model.projections.resize(static_cast<Eigen::Index>(bits), static_cast<Eigen::Index>(dim));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index b = 0; b < model.projections.rows(); ++b) {
    for (Eigen::Index d = 0; d < model.projections.cols(); ++d) model.projections(b, d) = normal(rng);
  }
  return model;
}

std::vector<HashCode> lsh_hash(const LshModel& model, const Matrix& queries) {
  if (static_cast<std::size_t>(queries.cols()) != model.dim()) {
    throw DimensionError("lsh: queries have " + std::to_string(queries.cols()) + " features, model expects " +
                         std::to_string(model.dim()));
  }
  const Matrix x = model.standardization.apply(queries);
  const Matrix proj = x * model.projections.transpose();  // N' x B
  std::vector<HashCode> codes(static_cast<std::size_t>(proj.rows()));
  const auto rows = proj.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) {
    HashCode code(model.bits());
    for (Eigen::Index b = 0; b < proj.cols(); ++b) code.set(static_cast<std::size_t>(b), sgn(proj(i, b)));
    codes[static_cast<std::size_t>(i)] = std::move(code);
  }
  return codes;
}

void save_lsh_model(const LshModel& model, const std::string& path) {
  io::Writer w;
  w.raw("SLSH");
  w.u8(1);
  w.u32(static_cast<std::uint32_t>(model.bits()));
  w.u32(static_cast<std::uint32_t>(model.dim()));
  w.u64(model.seed);
  for (Eigen::Index b = 0; b < model.projections.rows(); ++b) {
    for (Eigen::Index d = 0; d < model.projections.cols(); ++d) w.f64(model.projections(b, d));
  }
  for (Eigen::Index d = 0; d < model.projections.cols(); ++d) w.f64(model.standardization.mean[d]);
  for (Eigen::Index d = 0; d < model.projections.cols(); ++d) w.f64(model.standardization.scale[d]);
  io::write_file(path, w.bytes());
}

LshModel load_lsh_model(const std::string& path) {
  const auto bytes = io::read_file(path);
  io::Reader r(bytes);
  if (bytes.size() < 5 || r.raw(4) != "SLSH") throw ParseError("'" + path + "' is not an LSH model file");
  if (r.u8() != 1) throw ParseError("unsupported LSH model version");
  const std::uint32_t B = r.u32(), D = r.u32();
  LshModel model;
  model.seed = r.u64();
  model.projections.resize(B, D);
  for (std::uint32_t b = 0; b < B; ++b) {
    for (std::uint32_t d = 0; d < D; ++d) model.projections(b, d) = r.f64();
  }
  model.standardization.mean.resize(D);
  model.standardization.scale.resize(D);
  for (std::uint32_t d = 0; d < D; ++d) model.standardization.mean[d] = r.f64();
  for (std::uint32_t d = 0; d < D; ++d) model.standardization.scale[d] = r.f64();
  if (!r.done()) throw ParseError("LSH model file has trailing bytes");
  return model;
}

}  // namespace sshl
