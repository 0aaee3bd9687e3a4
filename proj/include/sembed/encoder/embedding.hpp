#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sembed/error.hpp"
#include "sembed/util/io.hpp"

namespace sembed {

// N rows of d-dimensional single-precision vectors, row i aligned with
// sentence i of a companion record file.
struct EmbeddingMatrix {
  std::uint32_t rows = 0;
  std::uint32_t dim = 0;
  std::vector<float> values;  // row-major, rows * dim entries

  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(values).subspan(i * dim, dim);
  }
  std::span<float> row(std::size_t i) {
    return std::span<float>(values).subspan(i * dim, dim);
  }

  void check_finite() const {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw ValidationError("embedding matrix has a non-finite entry at row " +
                              std::to_string(i / dim));
      }
    }
  }
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

inline std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

inline void put_f32(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

inline float get_f32(std::string_view in, std::size_t at) {
  std::uint32_t bits = get_u32(in, at);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

inline std::string format_f32(float v) {
  char buf[48];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace detail

constexpr char kEmbeddingMagic[4] = {'S', 'E', 'M', 'B'};
constexpr std::uint32_t kEmbeddingVersion = 1;

inline std::string embedding_to_bytes(const EmbeddingMatrix& m) {
  std::string out;
  out.reserve(16 + m.values.size() * 4);
  out.append(kEmbeddingMagic, 4);
  detail::put_u32(out, kEmbeddingVersion);
  detail::put_u32(out, m.rows);
  detail::put_u32(out, m.dim);
  for (float v : m.values) detail::put_f32(out, v);
  return out;
}

inline void save_embeddings(const std::filesystem::path& path,
                            const EmbeddingMatrix& m) {
  atomic_write_file(path, embedding_to_bytes(m));
}

inline EmbeddingMatrix embedding_from_bytes(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != std::string_view("SEMB", 4)) {
    throw FormatError("not an embedding file: bad magic");
  }
  std::uint32_t version = detail::get_u32(bytes, 4);
  if (version != kEmbeddingVersion) {
    throw FormatError("unsupported embedding file version " +
                      std::to_string(version));
  }
  EmbeddingMatrix m;
  m.rows = detail::get_u32(bytes, 8);
  m.dim = detail::get_u32(bytes, 12);
  std::size_t expected = static_cast<std::size_t>(m.rows) * m.dim * 4;
  std::size_t actual = bytes.size() - 16;
  if (expected != actual) {
    throw FormatError("embedding payload size mismatch: expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(actual));
  }
  m.values.resize(static_cast<std::size_t>(m.rows) * m.dim);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    m.values[i] = detail::get_f32(bytes, 16 + i * 4);
  }
  return m;
}

inline EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  return embedding_from_bytes(read_file_bytes(path));
}

// Tab-separated text alternative; values round-trip at single precision.
inline std::string embedding_to_tsv(const EmbeddingMatrix& m) {
  std::string out;
  for (std::uint32_t r = 0; r < m.rows; ++r) {
    for (std::uint32_t c = 0; c < m.dim; ++c) {
      if (c) out.push_back('\t');
      out += detail::format_f32(m.values[static_cast<std::size_t>(r) * m.dim + c]);
    }
    out.push_back('\n');
  }
  return out;
}

inline EmbeddingMatrix import_embeddings_tsv(std::string_view bytes) {
  EmbeddingMatrix m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) eol = bytes.size();
    std::string_view line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<float> row;
    std::size_t field_start = 0;
    while (field_start <= line.size()) {
      std::size_t tab = line.find('\t', field_start);
      if (tab == std::string_view::npos) tab = line.size();
      std::string_view field = line.substr(field_start, tab - field_start);
      float v = 0.0f;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError("non-numeric field '" + std::string(field) +
                          "' at line " + std::to_string(line_no));
      }
      row.push_back(v);
      if (tab == line.size()) break;
      field_start = tab + 1;
    }
    if (m.rows == 0) {
      m.dim = static_cast<std::uint32_t>(row.size());
    } else if (row.size() != m.dim) {
      throw FormatError("ragged row at line " + std::to_string(line_no) +
                        ": expected " + std::to_string(m.dim) +
                        " fields, got " + std::to_string(row.size()));
    }
    m.values.insert(m.values.end(), row.begin(), row.end());
    ++m.rows;
  }
  return m;
}

inline EmbeddingMatrix import_embeddings(const std::filesystem::path& path) {
  return import_embeddings_tsv(read_file_bytes(path));
}

// Loads either format, sniffing the binary magic.
inline EmbeddingMatrix load_embeddings_any(const std::filesystem::path& path) {
  std::string bytes = read_file_bytes(path);
  if (bytes.size() >= 4 && bytes.substr(0, 4) == "SEMB") {
    return embedding_from_bytes(bytes);
  }
  return import_embeddings_tsv(bytes);
}

}  // namespace sembed
