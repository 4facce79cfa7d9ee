#include "kgwalk/vocabulary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgwalk/errors.hpp"
#include "kgwalk/text_io.hpp"
#include "kgwalk/walk.hpp"

namespace kgwalk {

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

double Vocabulary::probability(std::uint32_t id) const {
  if (id >= size()) throw ContractViolation("token id out of range");
  return id == 0 ? cumulative_[0] : cumulative_[id] - cumulative_[id - 1];
}

std::uint32_t Vocabulary::sample(Rng& rng) const {
  const double u = uniform_unit(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::uint32_t>(it - cumulative_.begin());
}

Vocabulary Vocabulary::from_counts(std::span<const std::pair<std::string, std::uint64_t>> counts,
                                   std::uint64_t min_count, double exponent) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].second >= min_count && counts[i].second > 0) order.push_back(i);
  }
  if (order.empty()) throw NumericError("no trainable tokens");
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a].second > counts[b].second; });

  Vocabulary v;
  v.tokens_.reserve(order.size());
  v.counts_.reserve(order.size());
  for (std::size_t i : order) {
    v.tokens_.push_back(counts[i].first);
    v.counts_.push_back(counts[i].second);
    v.total_ += counts[i].second;
  }
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    v.index_.emplace(v.tokens_[i], static_cast<std::uint32_t>(i));
  }

  v.cumulative_.resize(v.counts_.size());
  double norm = 0.0;
  for (auto c : v.counts_) norm += std::pow(static_cast<double>(c), exponent);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.counts_.size(); ++i) {
    acc += std::pow(static_cast<double>(v.counts_[i]), exponent) / norm;
    v.cumulative_[i] = acc;
  }
  v.cumulative_.back() = 1.0;
  return v;
}

namespace {

class Counter {
 public:
  void add_line(std::string_view line) {
    for (std::string_view tok : split_tokens(line)) {
      auto it = index_.find(std::string(tok));
      if (it == index_.end()) {
        index_.emplace(std::string(tok), counts_.size());
        counts_.emplace_back(std::string(tok), 1);
      } else {
        ++counts_[it->second].second;
      }
    }
  }

  Vocabulary finish(std::uint64_t min_count, double exponent) const {
    return Vocabulary::from_counts(counts_, min_count, exponent);
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::uint64_t>> counts_;
};

Sentence encode_line(std::string_view line, const Vocabulary& vocab) {
  Sentence s;
  for (std::string_view tok : split_tokens(line)) {
    if (auto id = vocab.find(tok)) s.push_back(*id);
  }
  return s;
}

}  // namespace

Vocabulary build_vocab(std::span<const std::string> lines, std::uint64_t min_count, double exponent) {
  Counter c;
  for (const auto& line : lines) c.add_line(line);
  return c.finish(min_count, exponent);
}

Vocabulary build_vocab(const std::filesystem::path& corpus, std::uint64_t min_count, double exponent) {
  Counter c;
  LineReader reader(corpus);
  while (auto line = reader.next()) c.add_line(*line);
  return c.finish(min_count, exponent);
}

std::vector<Sentence> encode_corpus(std::span<const std::string> lines, const Vocabulary& vocab) {
  std::vector<Sentence> out;
  out.reserve(lines.size());
  for (const auto& line : lines) {
    Sentence s = encode_line(line, vocab);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sentence> encode_corpus(const std::filesystem::path& corpus, const Vocabulary& vocab) {
  std::vector<Sentence> out;
  LineReader reader(corpus);
  while (auto line = reader.next()) {
    Sentence s = encode_line(*line, vocab);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace kgwalk
