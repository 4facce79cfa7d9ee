#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgwalk/rng.hpp"

namespace kgwalk {

// Token statistics plus the cumulative negative-sampling table. Ids are
// dense, ordered by descending count with ties in first-seen order.
class Vocabulary {
 public:
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  const std::string& token(std::uint32_t id) const { return tokens_.at(id); }
  std::uint64_t count(std::uint32_t id) const { return counts_.at(id); }
  std::optional<std::uint32_t> find(std::string_view token) const;

  // P(id) under the smoothed unigram distribution.
  double probability(std::uint32_t id) const;
  std::span<const double> cumulative() const noexcept { return cumulative_; }
  std::uint32_t sample(Rng& rng) const;

  std::uint64_t total_count() const noexcept { return total_; }

  // Builds from raw counts in first-seen order. Throws NumericError
  // ("no trainable tokens") when nothing survives min_count.
  static Vocabulary from_counts(std::span<const std::pair<std::string, std::uint64_t>> counts,
                                std::uint64_t min_count, double exponent);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> cumulative_;
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
  std::uint64_t total_ = 0;
};

Vocabulary build_vocab(std::span<const std::string> lines, std::uint64_t min_count, double exponent);
Vocabulary build_vocab(const std::filesystem::path& corpus, std::uint64_t min_count, double exponent);

using Sentence = std::vector<std::uint32_t>;

// Maps corpus lines to id sequences; tokens missing from the vocabulary are dropped.
std::vector<Sentence> encode_corpus(std::span<const std::string> lines, const Vocabulary& vocab);
std::vector<Sentence> encode_corpus(const std::filesystem::path& corpus, const Vocabulary& vocab);

}  // namespace kgwalk
