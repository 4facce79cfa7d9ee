#include "kgwalk/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "kgwalk/errors.hpp"
#include "kgwalk/metrics.hpp"
#include "kgwalk/synthetic.hpp"

namespace kgwalk {

std::string variant_name(const Variant& v) {
  return std::string(to_string(v.walk)) + "/" + std::string(to_string(v.model));
}

Variant parse_variant(std::string_view name) {
  const auto slash = name.find('/');
  if (slash == std::string_view::npos) {
    throw ConfigError("invalid variant '" + std::string(name) + "', expected <walk>/<model>");
  }
  return {parse_walk_mode(name.substr(0, slash)), parse_model_kind(name.substr(slash + 1))};
}

std::vector<Variant> all_variants() {
  std::vector<Variant> out;
  for (WalkMode w : {WalkMode::kClassic, WalkMode::kEntity, WalkMode::kPredicate}) {
    for (ModelKind m : {ModelKind::kSkipGram, ModelKind::kSkipGramOrdered, ModelKind::kCbow, ModelKind::kCbowOrdered}) {
      out.push_back({w, m});
    }
  }
  return out;
}

EvalTasks synthetic_tasks(const SyntheticKg& kg) {
  EvalTasks t;
  t.classification.push_back({"classes", kg.class_labels});
  t.classification.push_back({"groups", kg.group_labels});
  t.clustering.push_back({"classes", kg.class_labels});
  t.clustering.push_back({"groups", kg.group_labels});
  t.regression.push_back({"class-group score", kg.numeric_targets});
  t.analogies.push_back({"capital country entities", kg.analogies});
  t.relatedness.push_back({"hub-partner-other", kg.rankings});
  t.documents.push_back({"group topics", kg.documents});
  return t;
}

Direction direction_of(const std::string& metric) {
  return metric == "RMSE" ? Direction::kLowerIsBetter : Direction::kHigherIsBetter;
}

namespace {

template <class Item, class Fn>
void run_tasks(std::vector<TaskResult>& out, const std::string& task, const std::string& metric,
               const std::vector<Dataset<Item>>& datasets, Fn&& fn) {
  for (const auto& d : datasets) {
    TaskResult r{task, metric, d.name, std::nullopt, {}, false, 0, {}};
    try {
      EvalOutcome o = fn(d.items);
      r.value = o.value;
      r.evaluated = o.evaluated;
      r.excluded = std::move(o.excluded);
    } catch (const NumericError& e) {
      r.error = e.what();
      r.undefined = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
}

std::size_t distinct_labels(const std::vector<LabeledEntity>& items, const EmbeddingStore& store) {
  std::vector<std::string> labels;
  for (const auto& i : items) {
    if (store.contains(i.token)) labels.push_back(i.label);
  }
  std::sort(labels.begin(), labels.end());
  return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

}  // namespace

std::vector<TaskResult> evaluate(const EmbeddingStore& store, const EvalTasks& tasks, const EvalConfig& cfg) {
  std::vector<TaskResult> out;
  run_tasks(out, "Classification", "ACC", tasks.classification,
            [&](const auto& items) { return knn_classify_loo(store, items, cfg.knn_k); });
  run_tasks(out, "Clustering", "ACC", tasks.clustering, [&](const auto& items) {
    return kmeans_cluster_accuracy(store, items, distinct_labels(items, store), cfg.kmeans_restarts, cfg.seed);
  });
  run_tasks(out, "Regression", "RMSE", tasks.regression,
            [&](const auto& items) { return knn_regress_loo(store, items, cfg.knn_k); });
  run_tasks(out, "Semantic Analogies", "ACC", tasks.analogies,
            [&](const auto& items) { return analogy_accuracy(store, items); });
  run_tasks(out, "Entity Relatedness", "Kendall Tau", tasks.relatedness,
            [&](const auto& items) { return relatedness_tau(store, items); });
  run_tasks(out, "Document Similarity", "Harmonic Mean", tasks.documents,
            [&](const auto& items) { return document_similarity(store, items); });
  return out;
}

std::vector<std::size_t> BenchmarkReport::best(std::size_t row) const {
  const Row& r = rows.at(row);
  const bool lower = direction_of(r.metric) == Direction::kLowerIsBetter;
  std::optional<double> best_value;
  for (const auto& c : r.cells) {
    if (!c) continue;
    if (!best_value || (lower ? *c < *best_value : *c > *best_value)) best_value = c;
  }
  std::vector<std::size_t> out;
  if (!best_value) return out;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    if (r.cells[i] && *r.cells[i] == *best_value) out.push_back(i);
  }
  return out;
}

bool BenchmarkReport::all_succeeded() const {
  return std::all_of(variant_errors.begin(), variant_errors.end(), [](const auto& e) { return e.empty(); });
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string BenchmarkReport::to_text() const {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> head{"Task", "Metric", "Dataset"};
  for (const auto& v : variants) head.push_back(variant_name(v));
  table.push_back(head);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> line{rows[r].task, rows[r].metric, rows[r].dataset};
    auto b = best(r);
    for (std::size_t i = 0; i < rows[r].cells.size(); ++i) {
      std::string cell = rows[r].cells[i] ? fixed3(*rows[r].cells[i]) : "n/a";
      cell += std::find(b.begin(), b.end(), i) != b.end() ? "*" : " ";
      line.push_back(cell);
    }
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& line : table) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  for (const auto& h : header) out << "# " << h << "\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t c = 0; c < table[i].size(); ++c) {
      if (c > 0) out << " | ";
      const bool numeric = c >= 3;
      std::string pad(width[c] - table[i][c].size(), ' ');
      out << (numeric ? pad + table[i][c] : table[i][c] + pad);
    }
    out << "\n";
    if (i == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) out << (c > 0 ? "-+-" : "") << std::string(width[c], '-');
      out << "\n";
    }
  }
  out << "(* = best value in row)\n";
  for (const auto& u : undefined) out << "n/a " << u << "\n";
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (!variant_errors[i].empty()) out << "! " << variant_name(variants[i]) << ": " << variant_errors[i] << "\n";
  }
  return out.str();
}

std::string BenchmarkReport::to_tsv() const {
  std::ostringstream out;
  for (const auto& h : header) out << "# " << h << "\n";
  out << "task\tmetric\tdataset";
  for (const auto& v : variants) out << "\t" << variant_name(v);
  out << "\tbest\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r].task << "\t" << rows[r].metric << "\t" << rows[r].dataset;
    for (const auto& c : rows[r].cells) out << "\t" << (c ? full(*c) : "NA");
    out << "\t";
    auto b = best(r);
    for (std::size_t i = 0; i < b.size(); ++i) out << (i > 0 ? "," : "") << variant_name(variants[b[i]]);
    out << "\n";
  }
  for (const auto& u : undefined) out << "# n/a " << u << "\n";
  return out.str();
}

std::vector<std::string> corpus_lines(const KnowledgeGraph& g, const WalkConfig& cfg) {
  std::ostringstream buf;
  extract_corpus(g, cfg, buf);
  std::vector<std::string> lines;
  std::istringstream in(buf.str());
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return lines;
}

BenchmarkReport run_benchmark(const KnowledgeGraph& g, const EvalTasks& tasks, const BenchmarkConfig& cfg,
                              const ProgressFn& progress) {
  if (cfg.variants.empty()) throw ConfigError("benchmark needs at least one variant");
  BenchmarkReport report;
  report.variants = cfg.variants;
  report.variant_errors.assign(cfg.variants.size(), "");
  report.header = cfg.provenance;

  std::vector<std::vector<TaskResult>> results(cfg.variants.size());
  for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
    const Variant& v = cfg.variants[i];
    if (progress) progress("variant " + variant_name(v) + ": walks");
    try {
      WalkConfig wc = cfg.walk;
      wc.mode = v.walk;
      auto lines = corpus_lines(g, wc);
      if (progress) progress("variant " + variant_name(v) + ": training on " + std::to_string(lines.size()) + " walks");
      TrainConfig tc = cfg.train;
      tc.model = v.model;
      EmbeddingStore store = train(lines, tc);
      if (progress) progress("variant " + variant_name(v) + ": evaluating");
      results[i] = evaluate(store, tasks, cfg.eval);
      for (const auto& r : results[i]) {
        if (r.undefined) {
          report.undefined.push_back(variant_name(v) + " " + r.task + "/" + r.dataset + ": " + r.error);
        } else if (!r.error.empty()) {
          auto& err = report.variant_errors[i];
          err += (err.empty() ? "" : "; ") + r.task + "/" + r.dataset + ": " + r.error;
        }
      }
    } catch (const std::exception& e) {
      report.variant_errors[i] = e.what();
    }
  }

  // Row layout comes from the task list so failed variants still line up.
  std::vector<std::tuple<std::string, std::string, std::string>> keys;
  auto add_keys = [&](const std::string& task, const std::string& metric, const auto& datasets) {
    for (const auto& d : datasets) keys.emplace_back(task, metric, d.name);
  };
  add_keys("Classification", "ACC", tasks.classification);
  add_keys("Clustering", "ACC", tasks.clustering);
  add_keys("Regression", "RMSE", tasks.regression);
  add_keys("Semantic Analogies", "ACC", tasks.analogies);
  add_keys("Entity Relatedness", "Kendall Tau", tasks.relatedness);
  add_keys("Document Similarity", "Harmonic Mean", tasks.documents);
  for (const auto& [task, metric, dataset] : keys) {
    BenchmarkReport::Row row{task, metric, dataset, {}};
    for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
      std::optional<double> cell;
      for (const auto& r : results[i]) {
        if (r.task == task && r.dataset == dataset) cell = r.value;
      }
      row.cells.push_back(cell);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace kgwalk
