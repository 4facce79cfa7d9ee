#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "kgwalk/errors.hpp"
#include "kgwalk/graph.hpp"
#include "kgwalk/text_io.hpp"
#include "test_util.hpp"

namespace kgwalk {
namespace {

using testing::graph_of;
using testing::iri;
using testing::nt;

std::set<std::tuple<std::string, std::string, std::string>> edge_set(const KnowledgeGraph& g) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const Triple& t : g.edges()) {
    out.emplace(g.entity_name(t.subject), g.predicate_name(t.predicate), g.entity_name(t.object));
  }
  return out;
}

TEST(ParseNTriples, EmptyInput) {
  KnowledgeGraph g = parse_ntriples("");
  EXPECT_EQ(g.num_entities(), 0u);
  EXPECT_EQ(g.num_predicates(), 0u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(ParseNTriples, TwoTriplesSetSemantics) {
  KnowledgeGraph g = parse_ntriples(nt("a", "p", "b") + nt("a", "q", "c"));
  EXPECT_EQ(g.num_entities(), 3u);
  EXPECT_EQ(g.num_predicates(), 2u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.entity_name(EntityId{0}), iri("a"));
}

TEST(ParseNTriples, LiteralObjectSkippedButSubjectMaterialized) {
  KnowledgeGraph g = parse_ntriples("<" + iri("a") + "> <" + iri("p") + "> \"some text\"@en .\n");
  EXPECT_EQ(g.num_entities(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
  EXPECT_EQ(g.num_predicates(), 0u);
  EXPECT_EQ(g.entity_name(EntityId{0}), iri("a"));
  EXPECT_TRUE(g.out_edges(EntityId{0}).empty());
}

TEST(ParseNTriples, LiteralsKeptWhenRequested) {
  ParseOptions opts;
  opts.skip_literals = false;
  KnowledgeGraph g = parse_ntriples("<" + iri("a") + "> <" + iri("p") + "> \"two words\"^^<" + iri("t") + "> .\n", opts);
  ASSERT_EQ(g.num_edges(), 1u);
  const std::string& lit = g.entity_name(g.edges()[0].object);
  EXPECT_EQ(lit.find(' '), std::string::npos) << lit;
  // Serialized form stays parseable.
  KnowledgeGraph again = parse_ntriples(to_ntriples(g), opts);
  EXPECT_EQ(edge_set(again), edge_set(g));
}

TEST(ParseNTriples, MissingDotIsLineError) {
  try {
    parse_ntriples("<" + iri("a") + "> <" + iri("p") + "> <" + iri("b") + ">");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(e.text().find(iri("a")), std::string::npos);
  }
}

TEST(ParseNTriples, ReportsLineNumberOfBadLine) {
  const std::string text = "# header\n\n" + nt("a", "p", "b") + "<" + iri("a") + "> oops <" + iri("b") + "> .\n";
  try {
    parse_ntriples(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseNTriples, RelativeIriRejected) {
  EXPECT_THROW(parse_ntriples("<a> <p> <b> .\n"), ParseError);
  EXPECT_THROW(parse_ntriples("<" + iri("a") + "> <p> <" + iri("b") + "> .\n"), ParseError);
}

TEST(ParseNTriples, BlankNodesAreEntities) {
  KnowledgeGraph g = parse_ntriples("_:b1 <" + iri("p") + "> _:b2 .\n_:b2 <" + iri("p") + "> <" + iri("x") + ">.\n");
  EXPECT_EQ(g.num_entities(), 3u);
  EXPECT_EQ(g.entity_name(EntityId{0}), "_:b1");
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(ParseNTriples, DuplicatesCollapse) {
  KnowledgeGraph g = parse_ntriples(nt("a", "p", "b") + nt("a", "p", "b") + nt("a", "p", "b"));
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(ParseNTriples, ExcludedPredicates) {
  ParseOptions opts;
  opts.excluded_predicates = {iri("type")};
  KnowledgeGraph g = parse_ntriples(nt("a", "type", "C") + nt("a", "p", "b"), opts);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_FALSE(g.find_entity(iri("C")).has_value());
}

TEST(ParseNTriples, TrailingCommentAllowed) {
  KnowledgeGraph g = parse_ntriples("<" + iri("a") + "> <" + iri("p") + "> <" + iri("b") + "> . # note\n");
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(ParseNTriples, GzipFile) {
  testing::TempDir dir;
  const auto path = dir / "g.nt.gz";
  write_file(path, nt("a", "p", "b") + nt("b", "q", "c"));
  KnowledgeGraph g = load_ntriples(path);
  EXPECT_EQ(g.num_edges(), 2u);
  // Really compressed: gzip magic bytes.
  std::ifstream raw(path, std::ios::binary);
  unsigned char magic[2] = {};
  raw.read(reinterpret_cast<char*>(magic), 2);
  EXPECT_EQ(magic[0], 0x1f);
  EXPECT_EQ(magic[1], 0x8b);
}

TEST(ParseNTriples, MissingFileIsIoError) {
  EXPECT_THROW(load_ntriples("/nonexistent/graph.nt"), IoError);
}

TEST(Adjacency, OutEdges) {
  KnowledgeGraph g = graph_of({{"a", "p", "b"}, {"a", "q", "c"}});
  auto a = g.entity(iri("a"));
  auto out = g.out_edges(a);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (OutEdge{g.predicate(iri("p")), g.entity(iri("b"))}));
  EXPECT_EQ(out[1], (OutEdge{g.predicate(iri("q")), g.entity(iri("c"))}));
  EXPECT_TRUE(g.out_edges(g.entity(iri("b"))).empty());
}

TEST(Adjacency, InEdges) {
  KnowledgeGraph g = graph_of({{"a", "p", "c"}, {"b", "p", "c"}});
  auto in = g.in_edges(g.entity(iri("c")));
  ASSERT_EQ(in.size(), 2u);
  EXPECT_EQ(in[0], (InEdge{g.entity(iri("a")), g.predicate(iri("p"))}));
  EXPECT_EQ(in[1], (InEdge{g.entity(iri("b")), g.predicate(iri("p"))}));
  EXPECT_TRUE(g.in_edges(g.entity(iri("a"))).empty());
}

TEST(Adjacency, UnknownEntityIsLookupError) {
  KnowledgeGraph g = graph_of({{"a", "p", "b"}});
  EXPECT_THROW(g.out_edges(EntityId{7}), LookupError);
  EXPECT_THROW(g.in_edges(EntityId{7}), LookupError);
  EXPECT_THROW(g.entity(iri("zzz")), LookupError);
}

TEST(Interner, Bijective) {
  Interner in;
  EXPECT_EQ(in.intern("x"), 0u);
  EXPECT_EQ(in.intern("y"), 1u);
  EXPECT_EQ(in.intern("x"), 0u);
  EXPECT_EQ(in.lexical(1), "y");
  EXPECT_EQ(in.find("y"), 1u);
  EXPECT_FALSE(in.find("z").has_value());
}

TEST(GraphProperties, DegreeSumsMatchEdgeCount) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    KnowledgeGraph g = testing::random_graph(rng);
    std::size_t out = 0, in = 0;
    for (std::uint32_t v = 0; v < g.num_entities(); ++v) {
      for (const auto& e : g.out_edges(EntityId{v})) {
        EXPECT_NE(std::find(g.edges().begin(), g.edges().end(), Triple{EntityId{v}, e.predicate, e.object}),
                  g.edges().end());
        ++out;
      }
      for (const auto& e : g.in_edges(EntityId{v})) {
        EXPECT_NE(std::find(g.edges().begin(), g.edges().end(), Triple{e.subject, e.predicate, EntityId{v}}),
                  g.edges().end());
        ++in;
      }
    }
    EXPECT_EQ(out, g.num_edges());
    EXPECT_EQ(in, g.num_edges());
  }
}

TEST(GraphProperties, SerializeParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    KnowledgeGraph g = testing::random_graph(rng);
    KnowledgeGraph again = parse_ntriples(to_ntriples(g));
    EXPECT_EQ(edge_set(again), edge_set(g));
  }
}

TEST(GraphProperties, LineOrderDoesNotMatter) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    KnowledgeGraph g = testing::random_graph(rng);
    std::vector<std::string> lines;
    std::istringstream in(to_ntriples(g));
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    KnowledgeGraph permuted = parse_ntriples(text);
    EXPECT_EQ(edge_set(permuted), edge_set(g));
    EXPECT_EQ(permuted.num_edges(), g.num_edges());
  }
}

}  // namespace
}  // namespace kgwalk
