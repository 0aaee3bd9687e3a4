#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "sembed/corpus/record.hpp"
#include "sembed/error.hpp"
#include "sembed/util/rng.hpp"

namespace sembed {

struct CorpusSplit {
  Corpus train;
  Corpus validation;
  Corpus test;
  std::array<double, 3> ratios{};
  std::uint64_t seed = 0;
};

namespace detail {

// Largest-remainder apportionment of `count` items over three ratios;
// remainder ties go to the lower part index.
inline std::array<std::size_t, 3> apportion(std::size_t count,
                                            const std::array<double, 3>& r) {
  std::array<std::size_t, 3> alloc{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int p = 0; p < 3; ++p) {
    double quota = static_cast<double>(count) * r[p];
    alloc[p] = static_cast<std::size_t>(std::floor(quota));
    frac[p] = quota - std::floor(quota);
    assigned += alloc[p];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t leftover = count - assigned, i = 0; i < leftover; ++i) {
    ++alloc[order[i % 3]];
  }
  return alloc;
}

}  // namespace detail

// Seeded stratified partition into train/validation/test. Within each
// label stratum membership is shuffled with the seeded generator and
// apportioned by largest remainder, so per-label counts are within one
// sample of exact proportionality. Output preserves input order inside
// each part.
inline CorpusSplit stratified_split(const Corpus& corpus,
                                    const std::array<double, 3>& ratios,
                                    std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0.0) throw ValidationError("split ratios must be non-negative");
    sum += r;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ValidationError("split ratios must sum to 1");
  }
  std::size_t nonzero_parts = 0;
  for (double r : ratios) nonzero_parts += (r > 0.0) ? 1 : 0;

  std::map<Label, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    strata[corpus[i].label].push_back(i);
  }

  Rng rng(seed);
  std::array<std::vector<std::size_t>, 3> part_indices;
  for (Label label : all_labels()) {
    auto it = strata.find(label);
    if (it == strata.end()) continue;
    std::vector<std::size_t>& members = it->second;
    if (members.size() < nonzero_parts) {
      throw ValidationError("label '" + std::string(label_name(label)) +
                            "' has " + std::to_string(members.size()) +
                            " samples, fewer than the " +
                            std::to_string(nonzero_parts) +
                            " split parts with nonzero ratio");
    }
    rng.shuffle(members);
    auto alloc = detail::apportion(members.size(), ratios);
    std::size_t at = 0;
    for (int p = 0; p < 3; ++p) {
      for (std::size_t i = 0; i < alloc[p]; ++i) {
        part_indices[p].push_back(members[at++]);
      }
    }
  }

  CorpusSplit split;
  split.ratios = ratios;
  split.seed = seed;
  Corpus* parts[3] = {&split.train, &split.validation, &split.test};
  for (int p = 0; p < 3; ++p) {
    std::sort(part_indices[p].begin(), part_indices[p].end());
    parts[p]->reserve(part_indices[p].size());
    for (std::size_t i : part_indices[p]) parts[p]->push_back(corpus[i]);
  }
  return split;
}

}  // namespace sembed
