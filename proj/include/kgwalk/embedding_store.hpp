#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgwalk {

struct CosineResult {
  double score = 0.0;
  // Set when either input has zero norm; score is then 0.
  bool zero_norm = false;
};

// u.v / (|u||v|). Throws ContractViolation on a dimension mismatch.
CosineResult cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string token;
  double score;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Immutable token -> vector map in file order.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  // Throws FormatError on duplicate tokens, wrong widths or non-finite values.
  EmbeddingStore(std::size_t dim, std::vector<std::string> tokens, std::vector<double> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  bool contains(std::string_view token) const { return index_.contains(token); }
  std::optional<std::size_t> index_of(std::string_view token) const;
  std::span<const double> vector(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  // Throws LookupError with close lexical matches as a hint.
  std::span<const double> vector(std::string_view token) const;
  double norm(std::size_t i) const { return norms_[i]; }

  // Top-k by descending cosine, query excluded, ties by token.
  std::vector<Neighbor> nearest(std::string_view query, std::size_t k) const;
  // Top-k by cosine to an arbitrary vector, skipping `excluded` tokens.
  std::vector<Neighbor> nearest_to(std::span<const double> target, std::size_t k,
                                   std::span<const std::string_view> excluded = {}) const;
  // 3CosAdd: rank t not in {a, a_star, b} by cos(t, a_star - a + b).
  std::vector<Neighbor> analogy(std::string_view a, std::string_view a_star, std::string_view b,
                                std::size_t k) const;

  double similarity(std::string_view x, std::string_view y) const;

  // word2vec text format, 9 significant digits; `.gz` paths are compressed.
  void save(const std::filesystem::path& path) const;
  std::string to_text() const;
  static EmbeddingStore load(const std::filesystem::path& path);
  static EmbeddingStore parse(std::string_view text);

  // Same tokens (order included) with every component scaled.
  EmbeddingStore scaled(double factor) const;

 private:
  [[noreturn]] void throw_unknown(std::string_view token) const;

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> values_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

// Levenshtein distance, used for "did you mean" hints.
std::size_t edit_distance(std::string_view a, std::string_view b);
std::vector<std::string> closest_matches(std::string_view query, std::span<const std::string> candidates,
                                         std::size_t limit);

}  // namespace kgwalk
