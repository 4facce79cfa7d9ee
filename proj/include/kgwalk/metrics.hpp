#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgwalk/embedding_store.hpp"
#include "kgwalk/gold.hpp"

namespace kgwalk {

// Metric value plus the gold items that could not be evaluated because a
// token is missing from the store.
struct EvalOutcome {
  double value = 0.0;
  std::size_t evaluated = 0;
  std::vector<std::string> excluded;
};

// Leave-one-out kNN vote by cosine among the labeled entities. Neighbor ties
// go to the smaller token, vote ties to the smaller label.
EvalOutcome knn_classify_loo(const EmbeddingStore& store, std::span<const LabeledEntity> gold, std::size_t k);

// Leave-one-out kNN mean prediction; returns RMSE.
EvalOutcome knn_regress_loo(const EmbeddingStore& store, std::span<const NumericTarget> gold, std::size_t k);

struct KMeansResult {
  std::vector<std::size_t> assignment;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
};

// Lloyd's algorithm with k-means++ seeding; the restart with the lowest
// inertia is kept.
KMeansResult kmeans(std::span<const std::vector<double>> points, std::size_t k, std::size_t restarts,
                    std::uint64_t seed, std::size_t max_iterations = 300);

// Fraction of items on the diagonal after the best one-to-one mapping of
// clusters onto labels (Hungarian method on the confusion matrix).
double matched_accuracy(std::span<const std::size_t> clusters, std::span<const std::size_t> labels);

EvalOutcome kmeans_cluster_accuracy(const EmbeddingStore& store, std::span<const LabeledEntity> gold,
                                    std::size_t k, std::size_t restarts, std::uint64_t seed);

// Fraction of quads whose 3CosAdd top-1 answer is b_star. Quads with missing
// tokens count as failures and are listed in `excluded`.
EvalOutcome analogy_accuracy(const EmbeddingStore& store, std::span<const AnalogyQuad> quads);

// Tau-a between two orderings of the same tokens. Throws ContractViolation
// when the sets differ.
double kendall_tau(std::span<const std::string> gold, std::span<const std::string> predicted);

// Comparison tokens sorted by descending cosine to the anchor, ties by token.
std::vector<std::string> rank_by_cosine(const EmbeddingStore& store, const std::string& anchor,
                                        std::span<const std::string> comparisons);

// Mean tau over rankings whose tokens are all present.
EvalOutcome relatedness_tau(const EmbeddingStore& store, std::span<const GoldRanking> rankings);

double pearson(std::span<const double> x, std::span<const double> y);
// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);
std::vector<double> average_ranks(std::span<const double> x);
// 2 r rho / (r + rho); throws NumericError when undefined (constant input,
// r and rho of opposite sign, or r + rho = 0).
double correlation_harmonic_mean(std::span<const double> predicted, std::span<const double> gold);

// Cosine of weight-normalized mean document vectors against gold scores.
EvalOutcome document_similarity(const EmbeddingStore& store, std::span<const DocumentPair> pairs);

}  // namespace kgwalk
