#include <gtest/gtest.h>

#include <map>
#include <set>

#include "kgwalk/errors.hpp"
#include "kgwalk/synthetic.hpp"

namespace kgwalk {
namespace {

std::multiset<std::string> out_predicates(const KnowledgeGraph& g, const std::string& entity) {
  std::multiset<std::string> out;
  for (const auto& e : g.out_edges(g.entity(entity))) out.insert(g.predicate_name(e.predicate));
  return out;
}

TEST(Synthetic, PredicateSignatures) {
  SyntheticGraphSpec spec;
  spec.classes = 2;
  spec.entities_per_class = 2;
  spec.predicates_per_class = 2;
  spec.hubs = 2;
  spec.analogy_pairs = 2;
  SyntheticKg kg = generate_synthetic_kg(spec);
  ASSERT_EQ(kg.class_labels.size(), 4u);
  for (const auto& x : kg.class_labels) {
    for (const auto& y : kg.class_labels) {
      if (x.token == y.token) continue;
      auto px = out_predicates(kg.graph, x.token), py = out_predicates(kg.graph, y.token);
      if (x.label == y.label) {
        EXPECT_EQ(px, py);
      } else {
        std::vector<std::string> shared;
        std::set_intersection(px.begin(), px.end(), py.begin(), py.end(), std::back_inserter(shared));
        EXPECT_TRUE(shared.empty()) << x.token << " " << y.token;
      }
    }
  }
}

TEST(Synthetic, TwinsShareClassButNotNeighbors) {
  SyntheticKg kg = generate_synthetic_kg(SyntheticGraphSpec{});
  std::map<std::string, std::string> cls, grp;
  for (const auto& l : kg.class_labels) cls[l.token] = l.label;
  for (const auto& l : kg.group_labels) grp[l.token] = l.label;
  ASSERT_FALSE(kg.structural_twins.empty());
  ASSERT_FALSE(kg.contextual_partners.empty());
  auto neighbors = [&](const std::string& e) {
    std::set<std::uint32_t> n;
    for (const auto& o : kg.graph.out_edges(kg.graph.entity(e))) n.insert(o.object.value);
    return n;
  };
  for (const auto& [a, b] : kg.structural_twins) {
    EXPECT_EQ(cls[a], cls[b]);
    EXPECT_NE(grp[a], grp[b]);
    auto na = neighbors(a), nb = neighbors(b);
    std::vector<std::uint32_t> shared;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(shared));
    EXPECT_TRUE(shared.empty());
  }
  for (const auto& [a, b] : kg.contextual_partners) {
    EXPECT_NE(cls[a], cls[b]);
    EXPECT_EQ(grp[a], grp[b]);
  }
}

TEST(Synthetic, DefaultSizeAndDeterminism) {
  SyntheticKg a = generate_synthetic_kg(SyntheticGraphSpec{});
  SyntheticKg b = generate_synthetic_kg(SyntheticGraphSpec{});
  EXPECT_EQ(to_ntriples(a.graph), to_ntriples(b.graph));
  EXPECT_GE(a.graph.num_entities(), 400u);
  EXPECT_LE(a.graph.num_entities(), 600u);
}

TEST(Synthetic, AnalogyQuadCount) {
  SyntheticGraphSpec spec;
  spec.analogy_pairs = 3;
  SyntheticKg kg = generate_synthetic_kg(spec);
  EXPECT_EQ(kg.analogies.size(), 6u);
  for (const auto& q : kg.analogies) {
    std::set<std::string> distinct = {q.a, q.a_star, q.b, q.b_star};
    EXPECT_EQ(distinct.size(), 4u);
    // a is the capital of a_star, b the capital of b_star.
    const auto capital_of = kg.graph.predicate(synthetic_iri("capitalOf"));
    auto linked = [&](const std::string& s, const std::string& o) {
      for (const auto& e : kg.graph.out_edges(kg.graph.entity(s))) {
        if (e.predicate == capital_of && e.object == kg.graph.entity(o)) return true;
      }
      return false;
    };
    EXPECT_TRUE(linked(q.a, q.a_star));
    EXPECT_TRUE(linked(q.b, q.b_star));
  }
}

TEST(Synthetic, TooSmallSpecRejected) {
  SyntheticGraphSpec spec;
  spec.classes = 1;
  EXPECT_THROW(generate_synthetic_kg(spec), ConfigError);
  spec = SyntheticGraphSpec{};
  spec.hubs = spec.entities_per_class + 1;
  EXPECT_THROW(generate_synthetic_kg(spec), ConfigError);
  spec = SyntheticGraphSpec{};
  spec.analogy_pairs = 1;
  EXPECT_THROW(generate_synthetic_kg(spec), ConfigError);
}

}  // namespace
}  // namespace kgwalk
