#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kgwalk/gold.hpp"
#include "kgwalk/graph.hpp"

namespace kgwalk {

// Shape of the generated graph. Core entities are arranged in a
// classes x entities_per_class grid; entity i of every class joins
// neighborhood group (i mod hubs).
struct SyntheticGraphSpec {
  std::size_t classes = 4;
  std::size_t entities_per_class = 25;
  // Attribute predicates in each class signature; every core entity points
  // through each of them to a leaf of its own.
  std::size_t predicates_per_class = 3;
  std::size_t hubs = 5;
  // Country/capital pairs in the relational block.
  std::size_t analogy_pairs = 12;
  std::size_t cities_per_country = 3;
  std::size_t continents = 3;
  std::uint64_t seed = 42;

  // Throws ConfigError when the disjointness constraints cannot be met.
  void validate() const;
};

struct SyntheticKg {
  KnowledgeGraph graph;
  std::vector<std::string> core_entities;
  // Same class, different neighborhood group.
  std::vector<std::pair<std::string, std::string>> structural_twins;
  // Same neighborhood group, different class.
  std::vector<std::pair<std::string, std::string>> contextual_partners;
  std::vector<AnalogyQuad> analogies;
  std::vector<LabeledEntity> class_labels;
  std::vector<LabeledEntity> group_labels;
  std::vector<NumericTarget> numeric_targets;
  std::vector<GoldRanking> rankings;
  std::vector<DocumentPair> documents;
};

std::string synthetic_iri(std::string_view local);

SyntheticKg generate_synthetic_kg(const SyntheticGraphSpec& spec);

}  // namespace kgwalk
