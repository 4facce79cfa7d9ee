#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kgwalk/embedding_store.hpp"
#include "kgwalk/gold.hpp"
#include "kgwalk/graph.hpp"
#include "kgwalk/walk.hpp"
#include "kgwalk/word2vec.hpp"

namespace kgwalk {

struct SyntheticKg;

struct Variant {
  WalkMode walk = WalkMode::kClassic;
  ModelKind model = ModelKind::kSkipGram;
  friend bool operator==(const Variant&, const Variant&) = default;
};

// "classic/sg", "e/cbow_oa", ...
std::string variant_name(const Variant& v);
Variant parse_variant(std::string_view name);
// The 12 walk x model combinations, grouped by walk kind (classic, e, p).
std::vector<Variant> all_variants();

template <class Item>
struct Dataset {
  std::string name;
  std::vector<Item> items;
};

struct EvalTasks {
  std::vector<Dataset<LabeledEntity>> classification;
  std::vector<Dataset<LabeledEntity>> clustering;
  std::vector<Dataset<NumericTarget>> regression;
  std::vector<Dataset<AnalogyQuad>> analogies;
  std::vector<Dataset<GoldRanking>> relatedness;
  std::vector<Dataset<DocumentPair>> documents;
};

EvalTasks synthetic_tasks(const SyntheticKg& kg);

struct EvalConfig {
  std::size_t knn_k = 5;
  std::size_t kmeans_restarts = 10;
  std::uint64_t seed = 0;
};

enum class Direction { kHigherIsBetter, kLowerIsBetter };

struct TaskResult {
  std::string task;
  std::string metric;
  std::string dataset;
  std::optional<double> value;
  std::string error;
  // The metric has no value for these embeddings (e.g. a correlation of a
  // constant prediction); reported, but not a pipeline failure.
  bool undefined = false;
  std::size_t evaluated = 0;
  std::vector<std::string> excluded;
};

Direction direction_of(const std::string& metric);

// Evaluates every dataset; a failing task is recorded, not thrown.
std::vector<TaskResult> evaluate(const EmbeddingStore& store, const EvalTasks& tasks, const EvalConfig& cfg);

struct BenchmarkConfig {
  WalkConfig walk;
  TrainConfig train;
  EvalConfig eval;
  std::vector<Variant> variants = all_variants();
  // Extra provenance lines written into the report header.
  std::vector<std::string> provenance;
};

class BenchmarkReport {
 public:
  struct Row {
    std::string task;
    std::string metric;
    std::string dataset;
    std::vector<std::optional<double>> cells;  // one per variant
  };

  std::vector<Variant> variants;
  std::vector<Row> rows;
  std::vector<std::string> variant_errors;  // empty string when the variant succeeded
  std::vector<std::string> undefined;       // "<variant> <task>/<dataset>: reason"
  std::vector<std::string> header;

  // Variant indices holding the best value of the row (all tied cells).
  std::vector<std::size_t> best(std::size_t row) const;
  // Aligned table; best cells carry a trailing '*'.
  std::string to_text() const;
  // Tab-separated: task, metric, dataset, one column per variant, best.
  std::string to_tsv() const;
  bool all_succeeded() const;
};

using ProgressFn = std::function<void(const std::string&)>;

// For each variant: extract walks, train, evaluate. A failing variant is
// recorded and the others continue.
BenchmarkReport run_benchmark(const KnowledgeGraph& g, const EvalTasks& tasks, const BenchmarkConfig& cfg,
                              const ProgressFn& progress = {});

// Walk corpus of a graph as in-memory lines.
std::vector<std::string> corpus_lines(const KnowledgeGraph& g, const WalkConfig& cfg);

}  // namespace kgwalk
