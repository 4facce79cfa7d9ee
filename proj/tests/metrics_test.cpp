#include <gtest/gtest.h>

#include <random>

#include "kgwalk/errors.hpp"
#include "kgwalk/gold.hpp"
#include "kgwalk/metrics.hpp"
#include "oracles.hpp"

namespace kgwalk {
namespace {

struct Instance {
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> vecs;
  EmbeddingStore store;
};

Instance make_instance(std::vector<std::vector<double>> vecs) {
  Instance in;
  in.vecs = std::move(vecs);
  std::vector<double> flat;
  for (std::size_t i = 0; i < in.vecs.size(); ++i) {
    in.tokens.push_back("e" + std::to_string(i < 10 ? 0 : 1) + std::to_string(i));
    flat.insert(flat.end(), in.vecs[i].begin(), in.vecs[i].end());
  }
  in.store = EmbeddingStore(in.vecs.front().size(), in.tokens, flat);
  return in;
}

Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t dim, int levels = 0) {
  std::normal_distribution<double> d;
  std::uniform_int_distribution<int> q(-levels, levels);
  std::vector<std::vector<double>> vecs(n, std::vector<double>(dim));
  for (auto& v : vecs) {
    for (auto& x : v) x = levels > 0 ? q(rng) : d(rng);
    if (levels > 0 && std::all_of(v.begin(), v.end(), [](double x) { return x == 0; })) v[0] = 1;
  }
  return make_instance(std::move(vecs));
}

TEST(Classification, SeparatedClusters) {
  auto in = make_instance({{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}});
  std::vector<LabeledEntity> gold;
  for (std::size_t i = 0; i < 6; ++i) gold.push_back({in.tokens[i], i < 3 ? "A" : "B"});
  auto r = knn_classify_loo(in.store, gold, 1);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_EQ(r.evaluated, 6u);
}

TEST(Classification, IdenticalVectorsFollowTieBreak) {
  auto in = make_instance({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  std::vector<LabeledEntity> gold;
  std::vector<std::string> labels = {"A", "B", "A", "B"};
  for (std::size_t i = 0; i < 4; ++i) gold.push_back({in.tokens[i], labels[i]});
  // Item 0's nearest is item 1 (B), every other item's nearest is item 0 (A):
  // only item 2 is right.
  const double expected = oracle::knn_accuracy(in.vecs, in.tokens, labels, 1);
  EXPECT_DOUBLE_EQ(expected, 0.25);
  EXPECT_DOUBLE_EQ(knn_classify_loo(in.store, gold, 1).value, expected);
}

TEST(Classification, LargeKIsMajorityVote) {
  std::mt19937_64 rng(1);
  auto in = random_instance(rng, 8, 3);
  std::vector<std::string> labels = {"A", "B", "A", "B", "A", "B", "A", "B"};
  std::vector<LabeledEntity> gold;
  for (std::size_t i = 0; i < 8; ++i) gold.push_back({in.tokens[i], labels[i]});
  EXPECT_DOUBLE_EQ(knn_classify_loo(in.store, gold, 7).value, oracle::knn_accuracy(in.vecs, in.tokens, labels, 7));
}

TEST(Classification, MissingTokensExcluded) {
  auto in = make_instance({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  std::vector<LabeledEntity> gold = {{in.tokens[0], "A"}, {in.tokens[1], "A"}, {in.tokens[2], "B"},
                                     {in.tokens[3], "B"}, {"ghost", "B"}};
  auto r = knn_classify_loo(in.store, gold, 1);
  EXPECT_EQ(r.evaluated, 4u);
  EXPECT_EQ(r.excluded, std::vector<std::string>{"ghost"});
}

TEST(Classification, TooFewItems) {
  auto in = make_instance({{1, 0}, {0, 1}});
  std::vector<LabeledEntity> gold = {{in.tokens[0], "A"}, {in.tokens[1], "B"}};
  EXPECT_THROW(knn_classify_loo(in.store, gold, 2), ContractViolation);
}

TEST(Classification, MatchesOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + rng() % 17;
    auto in = random_instance(rng, n, 1 + rng() % 4, trial % 2 ? 2 : 0);
    std::vector<std::string> labels;
    std::vector<LabeledEntity> gold;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(std::string(1, static_cast<char>('A' + rng() % 3)));
      gold.push_back({in.tokens[i], labels.back()});
    }
    const std::size_t k = 1 + rng() % (n - 1);
    EXPECT_NEAR(knn_classify_loo(in.store, gold, k).value, oracle::knn_accuracy(in.vecs, in.tokens, labels, k), 1e-9);
  }
}

TEST(Regression, Examples) {
  auto dup = make_instance({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  std::vector<NumericTarget> same = {{dup.tokens[0], 3}, {dup.tokens[1], 3}, {dup.tokens[2], 7}, {dup.tokens[3], 7}};
  EXPECT_DOUBLE_EQ(knn_regress_loo(dup.store, same, 1).value, 0.0);

  auto two = make_instance({{1, 0}, {0, 1}});
  std::vector<NumericTarget> t = {{two.tokens[0], 0}, {two.tokens[1], 1}};
  EXPECT_DOUBLE_EQ(knn_regress_loo(two.store, t, 1).value, 1.0);
}

TEST(Regression, MatchesOracle) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(5, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 18;
    auto in = random_instance(rng, n, 1 + rng() % 4, trial % 2 ? 2 : 0);
    std::vector<double> targets;
    std::vector<NumericTarget> gold;
    for (std::size_t i = 0; i < n; ++i) {
      targets.push_back(d(rng));
      gold.push_back({in.tokens[i], targets.back()});
    }
    const std::size_t k = 1 + rng() % (n - 1);
    EXPECT_NEAR(knn_regress_loo(in.store, gold, k).value, oracle::knn_rmse(in.vecs, in.tokens, targets, k), 1e-12);
  }
}

TEST(Clustering, FarClusters) {
  auto in = make_instance({{10, 0}, {10.1, 0}, {10, 0.2}, {-10, 0}, {-10, 0.1}, {-10.2, 0}});
  std::vector<LabeledEntity> gold;
  for (std::size_t i = 0; i < 6; ++i) gold.push_back({in.tokens[i], i < 3 ? "x" : "y"});
  EXPECT_DOUBLE_EQ(kmeans_cluster_accuracy(in.store, gold, 2, 10, 1).value, 1.0);
}

TEST(Clustering, OneDimensional) {
  std::vector<std::vector<double>> pts = {{0}, {0.1}, {10}, {10.1}};
  auto r = kmeans(pts, 2, 10, 5);
  EXPECT_EQ(r.assignment[0], r.assignment[1]);
  EXPECT_EQ(r.assignment[2], r.assignment[3]);
  EXPECT_NE(r.assignment[0], r.assignment[2]);
  EXPECT_NEAR(r.inertia, 4 * 0.05 * 0.05, 1e-12);
  std::vector<std::size_t> labels = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(matched_accuracy(r.assignment, labels), 1.0);
}

TEST(Clustering, Deterministic) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d;
  std::vector<std::vector<double>> pts(40, std::vector<double>(3));
  for (auto& p : pts) {
    for (auto& x : p) x = d(rng);
  }
  auto a = kmeans(pts, 4, 5, 9), b = kmeans(pts, 4, 5, 9);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(Clustering, RelabelInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto in = random_instance(rng, 12, 3);
    std::vector<LabeledEntity> gold, renamed;
    const char* names[] = {"a", "b", "c"};
    const char* others[] = {"zz", "mm", "aa"};
    for (std::size_t i = 0; i < 12; ++i) {
      gold.push_back({in.tokens[i], names[i % 3]});
      renamed.push_back({in.tokens[i], others[i % 3]});
    }
    EXPECT_DOUBLE_EQ(kmeans_cluster_accuracy(in.store, gold, 3, 5, 11).value,
                     kmeans_cluster_accuracy(in.store, renamed, 3, 5, 11).value);
  }
}

TEST(Clustering, TooManyClusters) {
  std::vector<std::vector<double>> pts = {{0}, {1}};
  EXPECT_THROW(kmeans(pts, 3, 1, 1), ContractViolation);
}

TEST(MatchedAccuracy, MatchesPermutationOracle) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 19, kc = 1 + rng() % 5, kl = 1 + rng() % 5;
    std::vector<std::size_t> clusters(n), labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      clusters[i] = rng() % kc;
      labels[i] = rng() % kl;
    }
    EXPECT_NEAR(matched_accuracy(clusters, labels), oracle::matched_accuracy(clusters, labels), 1e-12);
  }
}

TEST(MatchedAccuracy, PermutedClusterIds) {
  std::vector<std::size_t> labels = {0, 0, 1, 1, 2, 2, 2};
  std::vector<std::size_t> clusters = {2, 2, 0, 1, 1, 1, 1};
  std::vector<std::size_t> renamed = {0, 0, 1, 2, 2, 2, 2};
  EXPECT_DOUBLE_EQ(matched_accuracy(clusters, labels), matched_accuracy(renamed, labels));
  EXPECT_NEAR(matched_accuracy(clusters, labels), 6.0 / 7.0, 1e-12);
}

TEST(Analogies, ExactOffsets) {
  auto in = make_instance({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {0, 0, -1}});
  std::vector<AnalogyQuad> quads = {{in.tokens[0], in.tokens[1], in.tokens[2], in.tokens[3]},
                                    {in.tokens[0], in.tokens[2], in.tokens[1], in.tokens[3]}};
  EXPECT_DOUBLE_EQ(analogy_accuracy(in.store, quads).value, 1.0);
}

TEST(Analogies, MissingAnswerCountsAsFailure) {
  auto in = make_instance({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
  std::vector<AnalogyQuad> quads = {{in.tokens[0], in.tokens[1], in.tokens[2], in.tokens[3]},
                                    {in.tokens[0], in.tokens[1], in.tokens[2], "absent"}};
  auto r = analogy_accuracy(in.store, quads);
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_EQ(r.excluded.size(), 1u);
}

TEST(Analogies, MatchesOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 6 + rng() % 15;
    auto in = random_instance(rng, n, 2 + rng() % 3);
    std::vector<AnalogyQuad> quads;
    std::size_t correct = 0;
    for (int q = 0; q < 10; ++q) {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      quads.push_back({in.tokens[idx[0]], in.tokens[idx[1]], in.tokens[idx[2]], in.tokens[idx[3]]});
      std::vector<double> target(in.vecs[0].size());
      for (std::size_t d = 0; d < target.size(); ++d) {
        target[d] = in.vecs[idx[1]][d] - in.vecs[idx[0]][d] + in.vecs[idx[2]][d];
      }
      std::size_t best = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == idx[0] || j == idx[1] || j == idx[2]) continue;
        if (best == n) {
          best = j;
          continue;
        }
        const double cj = oracle::cos(in.vecs[j], target), cb = oracle::cos(in.vecs[best], target);
        if (cj > cb || (cj == cb && in.tokens[j] < in.tokens[best])) best = j;
      }
      correct += best == idx[3];
    }
    EXPECT_NEAR(analogy_accuracy(in.store, quads).value, correct / 10.0, 1e-9);
  }
}

TEST(Kendall, Examples) {
  std::vector<std::string> g = {"a", "b", "c", "d"};
  EXPECT_DOUBLE_EQ(kendall_tau(g, g), 1.0);
  std::vector<std::string> three = {"a", "b", "c"}, rev = {"c", "b", "a"};
  EXPECT_DOUBLE_EQ(kendall_tau(three, rev), -1.0);
  std::vector<std::string> swap = {"a", "c", "b", "d"};
  EXPECT_NEAR(kendall_tau(g, swap), 1 - 2.0 / 6.0, 1e-12);
}

TEST(Kendall, SetMismatch) {
  std::vector<std::string> a = {"a", "b"}, b = {"a", "c"};
  EXPECT_THROW(kendall_tau(a, b), ContractViolation);
}

TEST(Kendall, MatchesOracle) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> g;
    const std::size_t n = 2 + rng() % 19;
    for (std::size_t i = 0; i < n; ++i) g.push_back("t" + std::to_string(i));
    auto p = g;
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_NEAR(kendall_tau(g, p), oracle::kendall_tau_a(g, p), 1e-12);
  }
}

TEST(Relatedness, CosineRankingWithTies) {
  auto in = make_instance({{1, 0}, {1, 0}, {1, 0}, {0, 1}});
  std::vector<std::string> comps = {in.tokens[3], in.tokens[2], in.tokens[1]};
  auto ranked = rank_by_cosine(in.store, in.tokens[0], comps);
  EXPECT_EQ(ranked, (std::vector<std::string>{in.tokens[1], in.tokens[2], in.tokens[3]}));
  std::vector<GoldRanking> gold = {{in.tokens[0], {in.tokens[1], in.tokens[2], in.tokens[3]}},
                                   {in.tokens[0], {in.tokens[3], in.tokens[2], in.tokens[1]}}};
  EXPECT_NEAR(relatedness_tau(in.store, gold).value, 0.0, 1e-12);
}

TEST(Correlation, Examples) {
  std::vector<double> g = {0.1, 0.5, 0.3, 0.9}, neg = {-0.1, -0.5, -0.3, -0.9};
  EXPECT_NEAR(correlation_harmonic_mean(g, g), 1.0, 1e-12);
  EXPECT_NEAR(correlation_harmonic_mean(neg, g), -1.0, 1e-12);
  std::vector<double> flat = {1, 1, 1, 1};
  EXPECT_THROW(correlation_harmonic_mean(flat, g), NumericError);
  // Pearson negative, Spearman positive: no meaningful harmonic mean.
  std::vector<double> x = {1, 2, 3, 4, 5, 6}, y = {2, 3, 4, 5, 6, -100};
  ASSERT_LT(pearson(x, y), 0.0);
  ASSERT_GT(spearman(x, y), 0.0);
  EXPECT_THROW(correlation_harmonic_mean(x, y), NumericError);
}

TEST(Correlation, MatchesOracle) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 18;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = trial % 2 ? std::round(d(rng) * 2) : d(rng);
      y[i] = 0.7 * x[i] + d(rng);
    }
    EXPECT_NEAR(pearson(x, y), oracle::pearson(x, y), 1e-9);
    EXPECT_NEAR(spearman(x, y), oracle::pearson(oracle::ranks(x), oracle::ranks(y)), 1e-9);
    EXPECT_EQ(average_ranks(x), oracle::ranks(x));
    const double r = oracle::pearson(x, y), rho = oracle::pearson(oracle::ranks(x), oracle::ranks(y));
    if (r * rho < 0) {
      EXPECT_THROW(correlation_harmonic_mean(x, y), NumericError);
    } else if (std::abs(r + rho) > 1e-6) {
      const double h = correlation_harmonic_mean(x, y);
      EXPECT_NEAR(h, oracle::harmonic(x, y), 1e-9);
      EXPECT_LE(std::abs(h), 1.0);
    }
  }
}

TEST(Documents, MatchesOracle) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto in = random_instance(rng, 10, 3);
    std::vector<DocumentPair> pairs;
    std::vector<double> predicted, gold;
    for (int p = 0; p < 6; ++p) {
      DocumentPair pair;
      std::vector<double> da(3, 0), db(3, 0);
      double wa = 0, wb = 0;
      for (int e = 0; e < 3; ++e) {
        const std::size_t i = rng() % 10, j = rng() % 10;
        const double x = w(rng), y = w(rng);
        pair.first.push_back({in.tokens[i], x});
        pair.second.push_back({in.tokens[j], y});
        for (int d = 0; d < 3; ++d) {
          da[d] += x * in.vecs[i][d];
          db[d] += y * in.vecs[j][d];
        }
        wa += x;
        wb += y;
      }
      for (int d = 0; d < 3; ++d) {
        da[d] /= wa;
        db[d] /= wb;
      }
      pair.gold = static_cast<double>(p) + 0.5 * (rng() % 3);
      gold.push_back(pair.gold);
      predicted.push_back(oracle::cos(da, db));
      pairs.push_back(pair);
    }
    const double r = oracle::pearson(predicted, gold), rho = oracle::pearson(oracle::ranks(predicted), oracle::ranks(gold));
    if (r * rho < 0 || std::abs(r + rho) < 1e-6) continue;
    EXPECT_NEAR(document_similarity(in.store, pairs).value, oracle::harmonic(predicted, gold), 1e-9);
  }
}

TEST(GoldFormats, RoundTrips) {
  std::vector<LabeledEntity> labels = {{"http://x/a", "A"}, {"http://x/b", "B"}};
  EXPECT_EQ(parse_labels(format_labels(labels)), labels);
  std::vector<NumericTarget> nums = {{"http://x/a", 1.5}, {"http://x/b", -2}};
  EXPECT_EQ(parse_numeric(format_numeric(nums)), nums);
  std::vector<GoldRanking> ranks = {{"a", {"b", "c"}}, {"d", {"e", "f", "g"}}};
  EXPECT_EQ(parse_rankings(format_rankings(ranks)), ranks);
  std::vector<AnalogyQuad> quads = {{"a", "b", "c", "d"}};
  EXPECT_EQ(parse_quads(format_quads(quads)), quads);
  std::vector<DocumentPair> docs = {{{{"http://x/a", 1}, {"http://x/b", 0.5}}, {{"http://x/c", 2}}, 0.25}};
  EXPECT_EQ(parse_document_pairs(format_document_pairs(docs)), docs);
}

TEST(GoldFormats, Errors) {
  EXPECT_THROW(parse_labels("a\n"), ParseError);
  EXPECT_THROW(parse_numeric("a\tx\n"), ParseError);
  EXPECT_THROW(parse_quads("a b c a\n"), ParseError);
  EXPECT_THROW(parse_rankings("anchor\nonly\n"), ParseError);
  EXPECT_THROW(parse_rankings("anchor\nb\nb\n"), ParseError);
  EXPECT_THROW(parse_document_pairs("a:1 | b:-1 | 0.5\n"), ParseError);
  EXPECT_THROW(parse_document_pairs(" | b:1 | 0.5\n"), ParseError);
}

}  // namespace
}  // namespace kgwalk
