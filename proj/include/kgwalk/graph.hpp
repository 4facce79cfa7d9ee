#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgwalk {

struct EntityId {
  std::uint32_t value = 0;
  friend bool operator==(EntityId, EntityId) = default;
  friend auto operator<=>(EntityId, EntityId) = default;
};

struct PredicateId {
  std::uint32_t value = 0;
  friend bool operator==(PredicateId, PredicateId) = default;
  friend auto operator<=>(PredicateId, PredicateId) = default;
};

// Bijective map between lexical forms and dense handles, assigned in
// first-seen order.
class Interner {
 public:
  std::uint32_t intern(std::string_view lexical);
  std::optional<std::uint32_t> find(std::string_view lexical) const;
  const std::string& lexical(std::uint32_t handle) const { return forms_.at(handle); }
  std::size_t size() const noexcept { return forms_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
  std::vector<std::string> forms_;
};

struct Triple {
  EntityId subject;
  PredicateId predicate;
  EntityId object;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct OutEdge {
  PredicateId predicate;
  EntityId object;
  friend bool operator==(const OutEdge&, const OutEdge&) = default;
};

struct InEdge {
  EntityId subject;
  PredicateId predicate;
  friend bool operator==(const InEdge&, const InEdge&) = default;
};

// Directed labeled graph with compressed out/in adjacency. Entities and
// predicates live in separate identifier spaces. Immutable once built.
class KnowledgeGraph {
 public:
  class Builder;

  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_predicates() const noexcept { return predicates_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return entities_.size() == 0; }

  std::span<const Triple> edges() const noexcept { return edges_; }

  // Both throw LookupError for ids outside the graph.
  std::span<const OutEdge> out_edges(EntityId v) const;
  std::span<const InEdge> in_edges(EntityId v) const;

  const std::string& entity_name(EntityId e) const { return entities_.lexical(e.value); }
  const std::string& predicate_name(PredicateId p) const { return predicates_.lexical(p.value); }
  EntityId entity(std::string_view lexical) const;
  PredicateId predicate(std::string_view lexical) const;
  std::optional<EntityId> find_entity(std::string_view lexical) const;

 private:
  Interner entities_;
  Interner predicates_;
  std::vector<Triple> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<OutEdge> out_;
  std::vector<std::size_t> in_offsets_;
  std::vector<InEdge> in_;
};

class KnowledgeGraph::Builder {
 public:
  EntityId add_entity(std::string_view lexical);
  PredicateId add_predicate(std::string_view lexical);
  // Returns false when the triple was already present.
  bool add_triple(std::string_view subject, std::string_view predicate, std::string_view object);
  bool add_triple(EntityId s, PredicateId p, EntityId o);
  KnowledgeGraph build() &&;

 private:
  struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
      std::uint64_t h = (std::uint64_t{t.subject.value} << 32) ^ t.object.value;
      return std::hash<std::uint64_t>{}(h * 0x9e3779b97f4a7c15ULL ^ t.predicate.value);
    }
  };
  KnowledgeGraph graph_;
  std::unordered_set<Triple, TripleHash> seen_;
};

struct ParseOptions {
  bool skip_literals = true;
  // Predicates (lexical form) whose triples are dropped, e.g. rdf:type.
  std::vector<std::string> excluded_predicates;
};

KnowledgeGraph parse_ntriples(std::istream& in, const ParseOptions& options = {});
KnowledgeGraph parse_ntriples(std::string_view text, const ParseOptions& options = {});
// Reads a plain or `.gz` N-Triples file.
KnowledgeGraph load_ntriples(const std::filesystem::path& path, const ParseOptions& options = {});
// Union of several files; duplicates across files collapse as well.
KnowledgeGraph load_ntriples(std::span<const std::filesystem::path> paths, const ParseOptions& options = {});

// One line per edge, in edge order. Entities without edges are not written.
void write_ntriples(const KnowledgeGraph& g, std::ostream& out);
std::string to_ntriples(const KnowledgeGraph& g);

}  // namespace kgwalk
