#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sembed/encoder/embedding.hpp"
#include "sembed/encoder/featurizer.hpp"
#include "sembed/error.hpp"
#include "sembed/util/io.hpp"
#include "sembed/util/rng.hpp"

namespace sembed {

// Hashed featurizer plus a trainable linear projection. This is the whole
// trainable encoder: sentence -> sparse hashed features -> projection row.
struct EncoderModel {
  FeaturizerConfig featurizer;
  std::uint32_t out_dim = 64;
  bool normalize_output = false;
  std::vector<float> projection;  // hash_dim x out_dim, row-major

  void validate() const {
    featurizer.validate();
    if (out_dim == 0) throw ValidationError("out_dim must be positive");
    std::size_t expected =
        static_cast<std::size_t>(featurizer.hash_dim) * out_dim;
    if (projection.size() != expected) {
      throw ValidationError("projection has " +
                            std::to_string(projection.size()) +
                            " entries, expected " + std::to_string(expected));
    }
    for (float v : projection) {
      if (!std::isfinite(v)) {
        throw ValidationError("projection contains a non-finite entry");
      }
    }
  }

  std::span<const float> projection_row(std::uint32_t feature_index) const {
    return std::span<const float>(projection)
        .subspan(static_cast<std::size_t>(feature_index) * out_dim, out_dim);
  }
};

// Projects one featurized sentence; double accumulation, fixed order.
inline std::vector<double> embed_features(const EncoderModel& model,
                                          const SparseVec& features) {
  std::vector<double> out(model.out_dim, 0.0);
  for (std::size_t k = 0; k < features.nnz(); ++k) {
    double v = features.value[k];
    std::span<const float> w = model.projection_row(features.index[k]);
    for (std::uint32_t j = 0; j < model.out_dim; ++j) {
      out[j] += v * static_cast<double>(w[j]);
    }
  }
  return out;
}

// Encodes sentences in order. With normalize_output, rows are scaled to
// unit L2 norm; a zero row cannot be normalized and is an error.
inline EmbeddingMatrix encode(const EncoderModel& model,
                              std::span<const std::string> sentences) {
  model.validate();
  EmbeddingMatrix m;
  m.rows = static_cast<std::uint32_t>(sentences.size());
  m.dim = model.out_dim;
  m.values.resize(static_cast<std::size_t>(m.rows) * m.dim);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SparseVec features = featurize(sentences[i], model.featurizer);
    std::vector<double> e = embed_features(model, features);
    if (model.normalize_output) {
      double norm2 = 0.0;
      for (double v : e) norm2 += v * v;
      if (norm2 == 0.0) {
        throw ValidationError("cannot normalize zero embedding at row " +
                              std::to_string(i));
      }
      double inv = 1.0 / std::sqrt(norm2);
      for (double& v : e) v *= inv;
    }
    for (std::uint32_t j = 0; j < m.dim; ++j) {
      float f = static_cast<float>(e[j]);
      if (!std::isfinite(f)) {
        throw ValidationError("non-finite embedding at row " +
                              std::to_string(i));
      }
      m.values[i * m.dim + j] = f;
    }
  }
  return m;
}

// Untrained baseline: projection entries drawn i.i.d. uniform in
// [-1/sqrt(hash_dim), +1/sqrt(hash_dim)] in row-major order from the
// seeded generator.
inline EncoderModel random_baseline_model(std::uint64_t seed,
                                          const FeaturizerConfig& config,
                                          std::uint32_t out_dim) {
  config.validate();
  if (out_dim == 0) throw ValidationError("out_dim must be positive");
  EncoderModel model;
  model.featurizer = config;
  model.out_dim = out_dim;
  model.projection.resize(static_cast<std::size_t>(config.hash_dim) * out_dim);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hash_dim));
  Rng rng(seed);
  for (float& w : model.projection) {
    w = static_cast<float>(rng.uniform(-bound, bound));
  }
  return model;
}

constexpr std::uint32_t kModelVersion = 1;

// Model file: magic STPM, u32 version, u32 hash_dim, u32 out_dim,
// 1 normalize byte, then hash_dim*out_dim float32 LE row-major.
inline std::string model_to_bytes(const EncoderModel& model) {
  model.validate();
  std::string out;
  out.reserve(17 + model.projection.size() * 4);
  out.append("STPM", 4);
  detail::put_u32(out, kModelVersion);
  detail::put_u32(out, model.featurizer.hash_dim);
  detail::put_u32(out, model.out_dim);
  out.push_back(model.normalize_output ? '\x01' : '\x00');
  for (float v : model.projection) detail::put_f32(out, v);
  return out;
}

inline void save_model(const std::filesystem::path& path,
                       const EncoderModel& model) {
  atomic_write_file(path, model_to_bytes(model));
}

inline EncoderModel model_from_bytes(std::string_view bytes) {
  if (bytes.size() < 17 || bytes.substr(0, 4) != std::string_view("STPM", 4)) {
    throw FormatError("not a model file: bad magic");
  }
  std::uint32_t version = detail::get_u32(bytes, 4);
  if (version != kModelVersion) {
    throw FormatError("unsupported model file version " +
                      std::to_string(version));
  }
  EncoderModel model;
  model.featurizer.hash_dim = detail::get_u32(bytes, 8);
  model.out_dim = detail::get_u32(bytes, 12);
  unsigned char flag = static_cast<unsigned char>(bytes[16]);
  if (flag > 1) throw FormatError("bad normalize flag in model file");
  model.normalize_output = (flag == 1);
  if (model.featurizer.hash_dim == 0 ||
      (model.featurizer.hash_dim & (model.featurizer.hash_dim - 1)) != 0 ||
      model.out_dim == 0) {
    throw FormatError("model file declares an invalid shape: hash_dim=" +
                      std::to_string(model.featurizer.hash_dim) +
                      " out_dim=" + std::to_string(model.out_dim));
  }
  std::size_t expected =
      static_cast<std::size_t>(model.featurizer.hash_dim) * model.out_dim * 4;
  std::size_t actual = bytes.size() - 17;
  if (expected != actual) {
    throw FormatError("model payload size mismatch: expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(actual));
  }
  model.projection.resize(expected / 4);
  for (std::size_t i = 0; i < model.projection.size(); ++i) {
    model.projection[i] = detail::get_f32(bytes, 17 + i * 4);
  }
  model.validate();
  return model;
}

inline EncoderModel load_model(const std::filesystem::path& path) {
  return model_from_bytes(read_file_bytes(path));
}

}  // namespace sembed
