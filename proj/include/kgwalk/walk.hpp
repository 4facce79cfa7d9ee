#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kgwalk/graph.hpp"
#include "kgwalk/rng.hpp"

namespace kgwalk {

enum class WalkMode { kClassic, kPredicate, kEntity };

std::string_view to_string(WalkMode mode);
// Accepts "classic", "p", "e"; throws ConfigError otherwise.
WalkMode parse_walk_mode(std::string_view name);

struct Token {
  enum class Kind : std::uint8_t { kEntity, kPredicate };
  Kind kind;
  std::uint32_t id;

  static Token entity(EntityId e) { return {Kind::kEntity, e.value}; }
  static Token predicate(PredicateId p) { return {Kind::kPredicate, p.value}; }
  bool is_entity() const noexcept { return kind == Kind::kEntity; }
  friend bool operator==(const Token&, const Token&) = default;
};

// Token sequence with the position of the focus entity. Classic walks
// alternate entity/predicate and start and end on an entity; p-walks keep
// only predicates plus the focus; e-walks keep only entities.
struct Walk {
  std::vector<Token> tokens;
  std::size_t focus_index = 0;
  WalkMode kind = WalkMode::kClassic;

  friend bool operator==(const Walk&, const Walk&) = default;
};

struct WalkConfig {
  std::size_t walks_per_node = 500;
  std::size_t backward_hops = 2;
  std::size_t forward_hops = 2;
  WalkMode mode = WalkMode::kClassic;
  std::uint64_t seed = 0;
  bool dedup = true;
  unsigned threads = 1;

  // Throws ConfigError when a field is out of range.
  void validate() const;
};

// Centered random walk around `focus`: up to forward_hops uniformly sampled
// out-edges appended, then up to backward_hops in-edges prepended. A side
// without edges stops early.
Walk generate_centered_walk(const KnowledgeGraph& g, EntityId focus, const WalkConfig& cfg, Rng& rng);

Walk derive_p_walk(const Walk& classic);
Walk derive_e_walk(const Walk& classic);
Walk project(const Walk& classic, WalkMode mode);

std::string render_walk(const KnowledgeGraph& g, const Walk& w);

// Seed of the generator used for one focus entity.
std::uint64_t entity_walk_seed(std::uint64_t seed, EntityId focus);

// All walks of one focus entity after projection and (optional) dedup,
// in generation order.
std::vector<Walk> walks_for_entity(const KnowledgeGraph& g, EntityId focus, const WalkConfig& cfg);

struct CorpusStats {
  std::size_t nodes_processed = 0;
  std::size_t walks_emitted = 0;
  std::size_t duplicates_dropped = 0;
};

// One line per walk, grouped by focus entity in handle order. The output
// does not depend on cfg.threads.
CorpusStats extract_corpus(const KnowledgeGraph& g, const WalkConfig& cfg, std::ostream& out);
CorpusStats extract_corpus(const KnowledgeGraph& g, const WalkConfig& cfg,
                           const std::filesystem::path& path);

// Splits a corpus line into tokens on single spaces.
std::vector<std::string_view> split_tokens(std::string_view line);

}  // namespace kgwalk
