#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sembed/error.hpp"
#include "sembed/util/io.hpp"
#include "sembed/util/text.hpp"

namespace sembed {

// Configuration of the hashed bag-of-tokens featurizer.
struct FeaturizerConfig {
  std::uint32_t hash_dim = 32768;  // must be a power of two
  bool lowercase = true;

  void validate() const {
    if (hash_dim == 0 || (hash_dim & (hash_dim - 1)) != 0) {
      throw ValidationError("hash_dim must be a positive power of two, got " +
                            std::to_string(hash_dim));
    }
  }
};

// Tokens are maximal alphanumeric runs plus the literal @table / @fig
// markers produced by text cleaning.
inline std::vector<std::string> tokenize(std::string_view text,
                                         bool lowercase) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  auto marker_at = [&](std::string_view m) {
    if (text.substr(i, m.size()) != m) return false;
    std::size_t after = i + m.size();
    return after >= text.size() || !ascii_alnum(text[after]);
  };
  while (i < text.size()) {
    if (text[i] == '@') {
      if (marker_at("@table")) {
        tokens.emplace_back("@table");
        i += 6;
        continue;
      }
      if (marker_at("@fig")) {
        tokens.emplace_back("@fig");
        i += 4;
        continue;
      }
      ++i;
      continue;
    }
    if (!ascii_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t b = i;
    while (i < text.size() && ascii_alnum(text[i])) ++i;
    std::string tok(text.substr(b, i - b));
    if (lowercase) tok = to_lower(tok);
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

// Sparse vector with strictly increasing indices.
struct SparseVec {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
};

// Mean of signed one-hot hashed token vectors. The hash is FNV-1a 64 over
// the token bytes; the coordinate is the hash masked to hash_dim-1 and
// the sign comes from bit 63. Empty token sequences give the zero vector.
inline SparseVec featurize(std::string_view text,
                           const FeaturizerConfig& config) {
  config.validate();
  std::vector<std::string> tokens = tokenize(text, config.lowercase);
  SparseVec out;
  if (tokens.empty()) return out;

  std::unordered_map<std::uint32_t, double> accum;
  for (const std::string& tok : tokens) {
    std::uint64_t h = fnv1a64(tok);
    auto idx = static_cast<std::uint32_t>(h & (config.hash_dim - 1));
    double sign = (h >> 63) ? -1.0 : 1.0;
    accum[idx] += sign;
  }
  const double inv_n = 1.0 / static_cast<double>(tokens.size());
  out.index.reserve(accum.size());
  for (const auto& [idx, v] : accum) out.index.push_back(idx);
  std::sort(out.index.begin(), out.index.end());
  out.value.reserve(out.index.size());
  for (std::uint32_t idx : out.index) out.value.push_back(accum[idx] * inv_n);
  return out;
}

}  // namespace sembed
