#include "kgwalk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kgwalk/errors.hpp"
#include "kgwalk/rng.hpp"

namespace kgwalk {

namespace {

std::string name(std::string_view kind, std::size_t a) {
  return synthetic_iri(std::string(kind) + std::to_string(a));
}

std::string name(std::string_view kind, std::size_t a, std::size_t b) {
  return synthetic_iri(std::string(kind) + std::to_string(a) + "_" + std::to_string(b));
}

std::string name(std::string_view kind, std::size_t a, std::size_t b, std::size_t c) {
  return synthetic_iri(std::string(kind) + std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(c));
}

}  // namespace

std::string synthetic_iri(std::string_view local) { return "http://synthetic.kg/" + std::string(local); }

void SyntheticGraphSpec::validate() const {
  if (classes < 2) throw ConfigError("synthetic graph needs at least 2 classes");
  if (entities_per_class < 2) throw ConfigError("synthetic graph needs at least 2 entities per class");
  if (predicates_per_class < 1) throw ConfigError("synthetic graph needs at least 1 predicate per class");
  if (hubs < 2) throw ConfigError("synthetic graph needs at least 2 hubs");
  if (hubs > entities_per_class) {
    throw ConfigError("hubs (" + std::to_string(hubs) + ") exceed entities per class (" +
                      std::to_string(entities_per_class) + "): some neighborhood groups would be empty");
  }
  if (analogy_pairs < 2) throw ConfigError("analogy block needs at least 2 country/capital pairs");
  if (continents < 1) throw ConfigError("synthetic graph needs at least 1 continent");
}

SyntheticKg generate_synthetic_kg(const SyntheticGraphSpec& spec) {
  spec.validate();
  Rng rng(sub_seed(spec.seed, "synthetic"));
  KnowledgeGraph::Builder b;
  SyntheticKg out;

  const std::string has_member = synthetic_iri("hasMember");
  auto core = [&](std::size_t c, std::size_t i) { return name("entity", c, i); };
  auto group_of = [&](std::size_t i) { return i % spec.hubs; };

  // Core entities: class signature predicates to private leaves, plus a
  // class-specific link to the group hub which links back to its members.
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < spec.entities_per_class; ++i) {
      const std::string e = core(c, i);
      out.core_entities.push_back(e);
      for (std::size_t p = 0; p < spec.predicates_per_class; ++p) {
        b.add_triple(e, name("attribute", c, p), name("value", c, i, p));
      }
      const std::string hub = name("hub", group_of(i));
      b.add_triple(e, name("linkedVia", c), hub);
      b.add_triple(hub, has_member, e);
    }
  }

  // Country/capital block.
  for (std::size_t k = 0; k < spec.analogy_pairs; ++k) {
    const std::string country = name("country", k);
    const std::string capital = name("capital", k);
    b.add_triple(capital, synthetic_iri("capitalOf"), country);
    b.add_triple(country, synthetic_iri("hasCapital"), capital);
    b.add_triple(country, synthetic_iri("partOf"), name("continent", k % spec.continents));
    b.add_triple(name("mayor", k), synthetic_iri("mayorOf"), capital);
    b.add_triple(country, synthetic_iri("type"), synthetic_iri("Country"));
    b.add_triple(capital, synthetic_iri("type"), synthetic_iri("City"));
    for (std::size_t t = 0; t < spec.cities_per_country; ++t) {
      b.add_triple(name("city", k, t), synthetic_iri("locatedIn"), country);
      b.add_triple(name("district", k, t), synthetic_iri("districtOf"), capital);
    }
  }
  for (std::size_t i = 0; i < spec.analogy_pairs; ++i) {
    for (std::size_t j = 0; j < spec.analogy_pairs; ++j) {
      if (i == j) continue;
      out.analogies.push_back({name("capital", i), name("country", i), name("capital", j), name("country", j)});
    }
  }

  // Gold pairs and labels over the core grid.
  for (std::size_t c1 = 0; c1 < spec.classes; ++c1) {
    for (std::size_t i1 = 0; i1 < spec.entities_per_class; ++i1) {
      for (std::size_t c2 = c1; c2 < spec.classes; ++c2) {
        for (std::size_t i2 = (c2 == c1 ? i1 + 1 : 0); i2 < spec.entities_per_class; ++i2) {
          const bool same_class = c1 == c2;
          const bool same_group = group_of(i1) == group_of(i2);
          if (same_class && !same_group) out.structural_twins.emplace_back(core(c1, i1), core(c2, i2));
          if (!same_class && same_group) out.contextual_partners.emplace_back(core(c1, i1), core(c2, i2));
        }
      }
      const std::size_t g = group_of(i1);
      out.class_labels.push_back({core(c1, i1), "class" + std::to_string(c1)});
      out.group_labels.push_back({core(c1, i1), "group" + std::to_string(g)});
      out.numeric_targets.push_back({core(c1, i1), 10.0 * static_cast<double>(c1) + static_cast<double>(g)});
    }
  }

  // Relatedness: own hub, then a partner, then an entity sharing neither
  // class nor group.
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < spec.entities_per_class; ++i) {
      const std::size_t other_class = (c + 1 + uniform_index(rng, spec.classes - 1)) % spec.classes;
      const std::size_t partner_c = (c + 1 + uniform_index(rng, spec.classes - 1)) % spec.classes;
      std::vector<std::size_t> same_group, other_group;
      for (std::size_t j = 0; j < spec.entities_per_class; ++j) {
        (group_of(j) == group_of(i) ? same_group : other_group).push_back(j);
      }
      const std::size_t partner_i = same_group[uniform_index(rng, same_group.size())];
      const std::size_t unrelated_i = other_group[uniform_index(rng, other_group.size())];
      out.rankings.push_back({core(c, i),
                              {name("hub", group_of(i)), core(partner_c, partner_i), core(other_class, unrelated_i)}});
    }
  }

  // Documents: a few weighted core entities each; gold is the cosine of the
  // documents' weighted group histograms.
  const std::size_t num_docs = 2 * spec.hubs * 3;
  std::vector<std::vector<WeightedEntity>> docs;
  std::vector<std::vector<double>> histograms;
  for (std::size_t d = 0; d < num_docs; ++d) {
    std::vector<WeightedEntity> doc;
    std::vector<double> hist(spec.hubs, 0.0);
    const std::size_t topic = d % spec.hubs;
    for (std::size_t m = 0; m < 3; ++m) {
      const std::size_t c = uniform_index(rng, spec.classes);
      std::size_t i = uniform_index(rng, spec.entities_per_class);
      // Two of three members come from the document's topic group.
      if (m < 2) i = topic + spec.hubs * uniform_index(rng, (spec.entities_per_class - topic + spec.hubs - 1) / spec.hubs);
      const double w = 1.0 + static_cast<double>(uniform_index(rng, 3));
      doc.push_back({core(c, i), w});
      hist[group_of(i)] += w;
    }
    docs.push_back(std::move(doc));
    histograms.push_back(std::move(hist));
  }
  for (std::size_t d = 0; d + 1 < num_docs; d += 2) {
    for (std::size_t e = d + 1; e < std::min(num_docs, d + 4); ++e) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t g = 0; g < spec.hubs; ++g) {
        dot += histograms[d][g] * histograms[e][g];
        na += histograms[d][g] * histograms[d][g];
        nb += histograms[e][g] * histograms[e][g];
      }
      out.documents.push_back({docs[d], docs[e], dot / std::sqrt(na * nb)});
    }
  }

  out.graph = std::move(b).build();
  return out;
}

}  // namespace kgwalk
