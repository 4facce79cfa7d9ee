#include "kgwalk/graph.hpp"

#include <algorithm>

#include "kgwalk/errors.hpp"

namespace kgwalk {

std::uint32_t Interner::intern(std::string_view lexical) {
  if (auto it = index_.find(lexical); it != index_.end()) return it->second;
  auto handle = static_cast<std::uint32_t>(forms_.size());
  forms_.emplace_back(lexical);
  index_.emplace(forms_.back(), handle);
  return handle;
}

std::optional<std::uint32_t> Interner::find(std::string_view lexical) const {
  if (auto it = index_.find(lexical); it != index_.end()) return it->second;
  return std::nullopt;
}

std::span<const OutEdge> KnowledgeGraph::out_edges(EntityId v) const {
  if (v.value >= num_entities()) {
    throw LookupError("entity handle " + std::to_string(v.value) + " not in graph");
  }
  return std::span(out_).subspan(out_offsets_[v.value],
                                 out_offsets_[v.value + 1] - out_offsets_[v.value]);
}

std::span<const InEdge> KnowledgeGraph::in_edges(EntityId v) const {
  if (v.value >= num_entities()) {
    throw LookupError("entity handle " + std::to_string(v.value) + " not in graph");
  }
  return std::span(in_).subspan(in_offsets_[v.value],
                                in_offsets_[v.value + 1] - in_offsets_[v.value]);
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view lexical) const {
  if (auto h = entities_.find(lexical)) return EntityId{*h};
  return std::nullopt;
}

EntityId KnowledgeGraph::entity(std::string_view lexical) const {
  if (auto h = entities_.find(lexical)) return EntityId{*h};
  throw LookupError("unknown entity: " + std::string(lexical));
}

PredicateId KnowledgeGraph::predicate(std::string_view lexical) const {
  if (auto h = predicates_.find(lexical)) return PredicateId{*h};
  throw LookupError("unknown predicate: " + std::string(lexical));
}

EntityId KnowledgeGraph::Builder::add_entity(std::string_view lexical) {
  return EntityId{graph_.entities_.intern(lexical)};
}

PredicateId KnowledgeGraph::Builder::add_predicate(std::string_view lexical) {
  return PredicateId{graph_.predicates_.intern(lexical)};
}

bool KnowledgeGraph::Builder::add_triple(std::string_view subject, std::string_view predicate,
                                         std::string_view object) {
  EntityId s = add_entity(subject);
  PredicateId p = add_predicate(predicate);
  EntityId o = add_entity(object);
  return add_triple(s, p, o);
}

bool KnowledgeGraph::Builder::add_triple(EntityId s, PredicateId p, EntityId o) {
  if (s.value >= graph_.entities_.size() || o.value >= graph_.entities_.size() ||
      p.value >= graph_.predicates_.size()) {
    throw ContractViolation("triple references an id that was never added");
  }
  Triple t{s, p, o};
  if (!seen_.insert(t).second) return false;
  graph_.edges_.push_back(t);
  return true;
}

KnowledgeGraph KnowledgeGraph::Builder::build() && {
  KnowledgeGraph g = std::move(graph_);
  seen_.clear();
  const std::size_t n = g.entities_.size();

  // Counting sort keeps insertion order within each adjacency list.
  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (const Triple& t : g.edges_) {
    ++g.out_offsets_[t.subject.value + 1];
    ++g.in_offsets_[t.object.value + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.out_offsets_[i + 1] += g.out_offsets_[i];
    g.in_offsets_[i + 1] += g.in_offsets_[i];
  }
  g.out_.resize(g.edges_.size());
  g.in_.resize(g.edges_.size());
  std::vector<std::size_t> out_fill(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (const Triple& t : g.edges_) {
    g.out_[out_fill[t.subject.value]++] = OutEdge{t.predicate, t.object};
    g.in_[in_fill[t.object.value]++] = InEdge{t.subject, t.predicate};
  }
  return g;
}

}  // namespace kgwalk
