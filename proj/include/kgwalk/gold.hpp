#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kgwalk {

struct LabeledEntity {
  std::string token;
  std::string label;
  friend bool operator==(const LabeledEntity&, const LabeledEntity&) = default;
};

struct NumericTarget {
  std::string token;
  double value;
  friend bool operator==(const NumericTarget&, const NumericTarget&) = default;
};

// Comparison entities ordered from most to least related to the anchor.
struct GoldRanking {
  std::string anchor;
  std::vector<std::string> ranked;
  friend bool operator==(const GoldRanking&, const GoldRanking&) = default;
};

// a is to a_star as b is to b_star.
struct AnalogyQuad {
  std::string a;
  std::string a_star;
  std::string b;
  std::string b_star;
  friend bool operator==(const AnalogyQuad&, const AnalogyQuad&) = default;
};

struct WeightedEntity {
  std::string token;
  double weight;
  friend bool operator==(const WeightedEntity&, const WeightedEntity&) = default;
};

struct DocumentPair {
  std::vector<WeightedEntity> first;
  std::vector<WeightedEntity> second;
  double gold;
  friend bool operator==(const DocumentPair&, const DocumentPair&) = default;
};

// Tab-separated `token<TAB>label`.
std::vector<LabeledEntity> parse_labels(std::string_view text);
std::string format_labels(const std::vector<LabeledEntity>& labels);
// Tab-separated `token<TAB>number`.
std::vector<NumericTarget> parse_numeric(std::string_view text);
std::string format_numeric(const std::vector<NumericTarget>& targets);
// Blocks separated by blank lines: anchor line, then ranked tokens one per line.
std::vector<GoldRanking> parse_rankings(std::string_view text);
std::string format_rankings(const std::vector<GoldRanking>& rankings);
// Four whitespace-separated tokens per line.
std::vector<AnalogyQuad> parse_quads(std::string_view text);
std::string format_quads(const std::vector<AnalogyQuad>& quads);
// `tok:w tok:w | tok:w ... | gold`; the weight follows the last ':' of an entry.
std::vector<DocumentPair> parse_document_pairs(std::string_view text);
std::string format_document_pairs(const std::vector<DocumentPair>& pairs);

}  // namespace kgwalk
