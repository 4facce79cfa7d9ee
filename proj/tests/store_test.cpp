#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "kgwalk/embedding_store.hpp"
#include "kgwalk/errors.hpp"
#include "kgwalk/text_io.hpp"
#include "test_util.hpp"

namespace kgwalk {
namespace {

EmbeddingStore store_of(std::vector<std::pair<std::string, std::vector<double>>> rows) {
  std::vector<std::string> tokens;
  std::vector<double> values;
  const std::size_t dim = rows.front().second.size();
  for (auto& [t, v] : rows) {
    tokens.push_back(t);
    values.insert(values.end(), v.begin(), v.end());
  }
  return EmbeddingStore(dim, std::move(tokens), std::move(values));
}

EmbeddingStore random_store(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> d;
  std::vector<std::string> tokens;
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back("t" + std::to_string(i));
    for (std::size_t j = 0; j < dim; ++j) values.push_back(d(rng));
  }
  return EmbeddingStore(dim, std::move(tokens), std::move(values));
}

TEST(Cosine, Examples) {
  std::vector<double> x{1, 0}, y{0, 1}, two{2, 0}, diag{1, 1};
  EXPECT_DOUBLE_EQ(cosine(x, y).score, 0.0);
  EXPECT_DOUBLE_EQ(cosine(two, x).score, 1.0);
  EXPECT_NEAR(cosine(diag, x).score, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(cosine(diag, x).zero_norm);
}

TEST(Cosine, ZeroNormFlagged) {
  std::vector<double> z{0, 0}, x{1, 0};
  auto r = cosine(z, x);
  EXPECT_EQ(r.score, 0.0);
  EXPECT_TRUE(r.zero_norm);
}

TEST(Cosine, DimensionMismatch) {
  std::vector<double> a{1, 0}, b{1, 0, 0};
  EXPECT_THROW(cosine(a, b), ContractViolation);
}

TEST(Nearest, Examples) {
  auto s = store_of({{"a", {1, 0}}, {"b", {1, 0}}, {"c", {0, 1}}});
  EXPECT_EQ(s.nearest("a", 1), (std::vector<Neighbor>{{"b", 1.0}}));
  EXPECT_EQ(s.nearest("a", 2), (std::vector<Neighbor>{{"b", 1.0}, {"c", 0.0}}));
}

TEST(Nearest, LexicographicTieBreak) {
  auto s = store_of({{"d", {1, 0}}, {"a", {1, 0}}, {"b", {1, 0}}});
  auto n = s.nearest("a", 1);
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0].token, "b");
}

TEST(Nearest, UnknownTokenHintsCloseMatches) {
  auto s = store_of({{"paris", {1, 0}}, {"parks", {1, 0}}, {"zebra", {0, 1}}});
  try {
    s.nearest("pariss", 1);
    FAIL();
  } catch (const LookupError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("pariss"), std::string::npos);
    EXPECT_NE(msg.find("paris"), std::string::npos);
  }
}

TEST(Nearest, ScaleInvariance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_store(rng, 20, 5);
    auto big = s.scaled(3.5);
    for (const auto& t : s.tokens()) {
      auto a = s.nearest(t, 5), b = big.nearest(t, 5);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].token, b[i].token);
    }
  }
}

TEST(Analogy, HandComputedExample) {
  auto s = store_of({{"a", {1, 0}}, {"a*", {1, 1}}, {"b", {3, 0}}, {"x", {3, 1}}, {"y", {0, -1}}});
  auto r = s.analogy("a", "a*", "b", 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].token, "x");
  EXPECT_NEAR(r[0].score, 1.0, 1e-12);
  EXPECT_NEAR(r[1].score, -1 / std::sqrt(10.0), 1e-12);
}

TEST(Analogy, QueryTokensExcluded) {
  auto s = store_of({{"a", {1, 0}}, {"a*", {1, 0.01}}, {"b", {0, 1}}, {"c", {1, 1}}});
  auto r = s.analogy("a", "a*", "b", 10);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].token, "c");
}

TEST(Analogy, IdentityOffsetIsNearest) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_store(rng, 15, 4);
    const std::string a = "t0", b = "t1";
    auto r = s.analogy(a, a, b, 5);
    std::vector<Neighbor> expected;
    for (const auto& n : s.nearest(b, 6)) {
      if (n.token != a && expected.size() < 5) expected.push_back(n);
    }
    ASSERT_EQ(r.size(), expected.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_EQ(r[i].token, expected[i].token);
      EXPECT_NEAR(r[i].score, expected[i].score, 1e-12);
    }
  }
}

TEST(Analogy, MissingToken) {
  auto s = store_of({{"a", {1, 0}}, {"b", {0, 1}}});
  EXPECT_THROW(s.analogy("a", "zz", "b", 1), LookupError);
}

TEST(StoreFormat, RoundTrip) {
  testing::TempDir dir;
  auto s = store_of({{"a", {0.1, -2.5, 3e-7}}, {"b", {1, 2, 3}}, {"c", {-0.333333333, 0, 7}}});
  for (const char* name : {"e.txt", "e.txt.gz"}) {
    s.save(dir / name);
    auto back = EmbeddingStore::load(dir / name);
    ASSERT_EQ(back.tokens(), s.tokens());
    ASSERT_EQ(back.dim(), 3u);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(back.vector(i)[d], s.vector(i)[d], 1e-6);
    }
  }
  std::ifstream raw(dir / "e.txt.gz", std::ios::binary);
  EXPECT_EQ(raw.get(), 0x1f);
  EXPECT_EQ(raw.get(), 0x8b);
}

TEST(StoreFormat, SecondSaveIsByteIdentical) {
  testing::TempDir dir;
  std::mt19937_64 rng(7);
  auto s = random_store(rng, 10, 6);
  s.save(dir / "1.txt");
  EmbeddingStore::load(dir / "1.txt").save(dir / "2.txt");
  EmbeddingStore::load(dir / "2.txt").save(dir / "3.txt");
  EXPECT_EQ(read_file(dir / "2.txt"), read_file(dir / "3.txt"));
}

TEST(StoreFormat, HeaderBodyMismatch) {
  EXPECT_THROW(EmbeddingStore::parse("2 3\na 1 2 3\nb 1 2 3\nc 1 2 3\n"), FormatError);
  EXPECT_THROW(EmbeddingStore::parse("2 3\na 1 2 3\n"), FormatError);
  EXPECT_THROW(EmbeddingStore::parse("1 3\na 1 2\n"), FormatError);
}

TEST(StoreFormat, BadValues) {
  try {
    EmbeddingStore::parse("2 2\na 1 2\nb nan 1\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(EmbeddingStore::parse("2 2\na 1 2\na 1 2\n"), FormatError);
  EXPECT_THROW(EmbeddingStore::parse("1 2\na 1 x\n"), FormatError);
}

}  // namespace
}  // namespace kgwalk
