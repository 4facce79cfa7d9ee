#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>

#include "kgwalk/benchmark.hpp"
#include "kgwalk/config.hpp"
#include "kgwalk/digest.hpp"
#include "kgwalk/embedding_store.hpp"
#include "kgwalk/errors.hpp"
#include "kgwalk/gold.hpp"
#include "kgwalk/graph.hpp"
#include "kgwalk/metrics.hpp"
#include "kgwalk/synthetic.hpp"
#include "kgwalk/text_io.hpp"
#include "kgwalk/walk.hpp"
#include "kgwalk/word2vec.hpp"

namespace kgwalk::cli {

namespace fs = std::filesystem;

namespace {

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

std::string input_digest(const PipelineConfig& cfg) {
  if (cfg.inputs.empty()) return "none";
  std::string all;
  for (const auto& p : cfg.inputs) all += sha256_file(p);
  return cfg.inputs.size() == 1 ? all : sha256_hex(all);
}

void write_provenance(const fs::path& artifact, const PipelineConfig& cfg, const std::string& digest,
                      const std::vector<std::string>& extra = {}) {
  std::string text;
  for (const auto& line : provenance_lines(cfg, digest)) text += line + "\n";
  for (const auto& line : extra) text += line + "\n";
  write_file(fs::path(artifact.string() + ".provenance"), text);
}

void echo_config(const PipelineConfig& cfg) {
  write_file(cfg.output_dir / "resolved_config.txt", render_config(cfg));
}

KnowledgeGraph load_inputs(const PipelineConfig& cfg) {
  if (cfg.inputs.empty()) throw StageError("load", "no input graph given (set --input)");
  try {
    return load_ntriples(cfg.inputs, cfg.parse);
  } catch (const ParseError& e) {
    throw StageError("load", std::string("parse error: ") + e.what());
  }
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void print_listing(std::ostream& out, const std::string& title, const std::vector<Neighbor>& rows) {
  std::size_t width = std::string("token").size();
  for (const auto& r : rows) width = std::max(width, r.token.size());
  out << "# | " << title << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (i + 1) << " | " << rows[i].token << std::string(width - rows[i].token.size(), ' ') << " | "
        << format_score(rows[i].score) << "\n";
  }
}

EvalTasks tasks_from_gold(const PipelineConfig& cfg) {
  EvalTasks t;
  auto name = [](const fs::path& p) { return p.filename().string(); };
  if (!cfg.gold.labels.empty()) {
    auto labels = parse_labels(read_file(cfg.gold.labels));
    if (cfg.task_enabled("classification")) t.classification.push_back({name(cfg.gold.labels), labels});
    if (cfg.task_enabled("clustering")) t.clustering.push_back({name(cfg.gold.labels), labels});
  }
  if (!cfg.gold.numeric.empty() && cfg.task_enabled("regression")) {
    t.regression.push_back({name(cfg.gold.numeric), parse_numeric(read_file(cfg.gold.numeric))});
  }
  if (!cfg.gold.analogies.empty() && cfg.task_enabled("analogies")) {
    t.analogies.push_back({name(cfg.gold.analogies), parse_quads(read_file(cfg.gold.analogies))});
  }
  if (!cfg.gold.rankings.empty() && cfg.task_enabled("relatedness")) {
    t.relatedness.push_back({name(cfg.gold.rankings), parse_rankings(read_file(cfg.gold.rankings))});
  }
  if (!cfg.gold.documents.empty() && cfg.task_enabled("documents")) {
    t.documents.push_back({name(cfg.gold.documents), parse_document_pairs(read_file(cfg.gold.documents))});
  }
  return t;
}

EvalTasks filter_tasks(EvalTasks t, const PipelineConfig& cfg) {
  if (!cfg.task_enabled("classification")) t.classification.clear();
  if (!cfg.task_enabled("clustering")) t.clustering.clear();
  if (!cfg.task_enabled("regression")) t.regression.clear();
  if (!cfg.task_enabled("analogies")) t.analogies.clear();
  if (!cfg.task_enabled("relatedness")) t.relatedness.clear();
  if (!cfg.task_enabled("documents")) t.documents.clear();
  return t;
}

bool has_gold(const PipelineConfig& cfg) {
  const auto& g = cfg.gold;
  return !g.labels.empty() || !g.numeric.empty() || !g.rankings.empty() || !g.analogies.empty() ||
         !g.documents.empty();
}

int cmd_synth(const PipelineConfig& cfg, std::ostream& out) {
  SyntheticKg kg = generate_synthetic_kg(cfg.synthetic);
  const fs::path dir = cfg.output_dir;
  write_file(dir / "synthetic.nt", to_ntriples(kg.graph));
  write_file(dir / "gold_classes.tsv", format_labels(kg.class_labels));
  write_file(dir / "gold_groups.tsv", format_labels(kg.group_labels));
  write_file(dir / "gold_numeric.tsv", format_numeric(kg.numeric_targets));
  write_file(dir / "gold_rankings.txt", format_rankings(kg.rankings));
  write_file(dir / "gold_analogies.txt", format_quads(kg.analogies));
  write_file(dir / "gold_documents.txt", format_document_pairs(kg.documents));
  std::string twins, partners;
  for (const auto& [a, b] : kg.structural_twins) twins += a + "\t" + b + "\n";
  for (const auto& [a, b] : kg.contextual_partners) partners += a + "\t" + b + "\n";
  write_file(dir / "gold_structural_twins.tsv", twins);
  write_file(dir / "gold_contextual_partners.tsv", partners);
  write_provenance(dir / "synthetic.nt", cfg, "none");
  out << "synthetic graph: " << kg.graph.num_entities() << " entities, " << kg.graph.num_predicates()
      << " predicates, " << kg.graph.num_edges() << " edges -> " << (dir / "synthetic.nt").string() << "\n";
  return 0;
}

int cmd_walk(const PipelineConfig& cfg, std::ostream& out) {
  KnowledgeGraph g = load_inputs(cfg);
  const std::string digest = input_digest(cfg);
  CorpusStats stats;
  try {
    stats = extract_corpus(g, cfg.walk, cfg.corpus);
  } catch (const IoError& e) {
    throw StageError("walk", std::string(e.what()) + " after " + std::to_string(e.progress()) + " walks");
  }
  write_provenance(cfg.corpus, cfg, digest,
                   {"nodes_processed: " + std::to_string(stats.nodes_processed),
                    "walks_emitted: " + std::to_string(stats.walks_emitted),
                    "duplicates_dropped: " + std::to_string(stats.duplicates_dropped)});
  out << "graph: " << g.num_entities() << " entities, " << g.num_predicates() << " predicates, "
      << g.num_edges() << " edges\n";
  out << "corpus: " << cfg.corpus.string() << "\n";
  out << "nodes_processed " << stats.nodes_processed << "\nwalks_emitted " << stats.walks_emitted
      << "\nduplicates_dropped " << stats.duplicates_dropped << "\n";
  return 0;
}

int cmd_train(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!fs::exists(cfg.corpus)) throw StageError("train", "corpus not found: " + cfg.corpus.string());
  if (cfg.train.threads > 1) {
    err << "note: training with " << cfg.train.threads
        << " threads uses lock-free shared updates; results are not reproducible (use --deterministic true)\n";
  }
  std::vector<EpochStats> epochs;
  EmbeddingStore store = train(cfg.corpus, cfg.train, &epochs);
  store.save(cfg.embeddings);
  std::vector<std::string> extra;
  extra.push_back("corpus sha256: " + sha256_file(cfg.corpus));
  for (const auto& e : epochs) {
    extra.push_back("epoch " + std::to_string(e.epoch) + " mean_loss " + format_score(e.mean_loss));
  }
  write_provenance(cfg.embeddings, cfg, input_digest(cfg), extra);
  for (const auto& e : epochs) {
    out << "epoch " << e.epoch << " mean_loss " << format_score(e.mean_loss) << " examples " << e.examples << "\n";
  }
  out << "embeddings: " << store.size() << " x " << store.dim() << " -> " << cfg.embeddings.string() << "\n";
  return 0;
}

EmbeddingStore load_store(const PipelineConfig& cfg) {
  if (!fs::exists(cfg.embeddings)) throw StageError("load", "embeddings not found: " + cfg.embeddings.string());
  return EmbeddingStore::load(cfg.embeddings);
}

int cmd_nearest(const PipelineConfig& cfg, const std::string& query, std::size_t k, std::ostream& out) {
  EmbeddingStore store = load_store(cfg);
  print_listing(out, query, store.nearest(query, k));
  return 0;
}

int cmd_analogy(const PipelineConfig& cfg, const std::vector<std::string>& q, std::size_t k, std::ostream& out) {
  EmbeddingStore store = load_store(cfg);
  print_listing(out, q[0] + " : " + q[1] + " :: " + q[2] + " : ?", store.analogy(q[0], q[1], q[2], k));
  return 0;
}

std::string eval_report(const std::vector<TaskResult>& results, const std::vector<std::string>& header) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  out += "task\tmetric\tdataset\tvalue\tevaluated\texcluded\terror\n";
  for (const auto& r : results) {
    char buf[32];
    if (r.value) std::snprintf(buf, sizeof buf, "%.9g", *r.value);
    out += r.task + "\t" + r.metric + "\t" + r.dataset + "\t" + (r.value ? buf : "NA") + "\t" +
           std::to_string(r.evaluated) + "\t" + std::to_string(r.excluded.size()) + "\t" + r.error + "\n";
  }
  return out;
}

int cmd_eval(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  EmbeddingStore store = load_store(cfg);
  if (!has_gold(cfg)) throw StageError("eval", "no gold files configured (gold_labels, gold_numeric, ...)");
  auto results = evaluate(store, tasks_from_gold(cfg), cfg.eval);
  auto header = provenance_lines(cfg, sha256_file(cfg.embeddings));
  const std::string report = eval_report(results, header);
  write_file(cfg.output_dir / "eval_report.tsv", report);
  bool ok = true;
  for (const auto& r : results) {
    out << r.task << " / " << r.dataset << " (" << r.metric << "): ";
    if (r.value) {
      out << format_score(*r.value);
    } else if (r.undefined) {
      out << "undefined (" << r.error << ")";
    } else {
      out << "FAILED";
      ok = false;
      err << "error: eval " << r.task << "/" << r.dataset << ": " << r.error << "\n";
    }
    if (!r.excluded.empty()) out << " [" << r.excluded.size() << " excluded]";
    out << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_benchmark(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<SyntheticKg> synthetic;
  KnowledgeGraph graph;
  EvalTasks tasks;
  std::string digest;
  if (cfg.inputs.empty()) {
    synthetic = generate_synthetic_kg(cfg.synthetic);
    digest = sha256_hex(to_ntriples(synthetic->graph));
    tasks = filter_tasks(synthetic_tasks(*synthetic), cfg);
    graph = std::move(synthetic->graph);
  } else {
    graph = load_inputs(cfg);
    digest = input_digest(cfg);
    tasks = tasks_from_gold(cfg);
  }
  BenchmarkConfig bc;
  bc.walk = cfg.walk;
  bc.train = cfg.train;
  bc.eval = cfg.eval;
  bc.variants = cfg.variants;
  bc.provenance = provenance_lines(cfg, digest);
  bc.provenance.push_back(std::string("graph: ") + (synthetic ? "synthetic" : "input") + ", " +
                          std::to_string(graph.num_entities()) + " entities, " + std::to_string(graph.num_edges()) +
                          " edges");
  auto start = std::chrono::steady_clock::now();
  BenchmarkReport report = run_benchmark(graph, tasks, bc, [&](const std::string& msg) { err << msg << "\n"; });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(cfg.output_dir / "benchmark.txt", report.to_text());
  write_file(cfg.output_dir / "benchmark.tsv", report.to_tsv());
  out << report.to_text();
  err << "benchmark finished in " << format_score(seconds) << " s\n";
  if (!report.all_succeeded()) {
    for (std::size_t i = 0; i < report.variants.size(); ++i) {
      if (!report.variant_errors[i].empty()) {
        err << "error: variant " << variant_name(report.variants[i]) << ": " << report.variant_errors[i] << "\n";
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Walk-based knowledge graph embeddings: classic, p- and e-walks with word2vec training"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file, "key = value configuration file");
  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<std::string, CLI::Option*>> flag_options;
  for (const auto& key : config_keys()) {
    flag_options.emplace_back(key, app.add_option("--" + key, flag_values[key], "config key " + key));
  }

  auto* synth = app.add_subcommand("synth", "write the synthetic benchmark graph and its gold files");
  auto* walk = app.add_subcommand("walk", "extract a walk corpus from N-Triples input");
  auto* train_cmd = app.add_subcommand("train", "train embeddings from a walk corpus");
  auto* nearest = app.add_subcommand("nearest", "list nearest neighbors of a token");
  auto* analogy = app.add_subcommand("analogy", "solve a : a* :: b : ? by 3CosAdd");
  auto* eval = app.add_subcommand("eval", "evaluate an embedding file against gold files");
  auto* bench = app.add_subcommand("benchmark", "run the walk x model variant matrix end to end");
  for (auto* sub : {synth, walk, train_cmd, nearest, analogy, eval, bench}) sub->fallthrough();

  std::string query;
  std::size_t k = 5;
  nearest->add_option("token", query, "query token")->required();
  nearest->add_option("-k", k, "number of neighbors");
  std::vector<std::string> quad;
  analogy->add_option("tokens", quad, "a a_star b")->required()->expected(3);
  analogy->add_option("-k", k, "number of candidates");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    KeyValues flags;
    for (const auto& [key, opt] : flag_options) {
      if (opt->count() > 0) flags.emplace_back(key, flag_values[key]);
    }
    std::string file_text;
    if (!config_file.empty()) {
      if (!fs::exists(config_file)) throw ConfigError("config file not found: " + config_file);
      file_text = read_file(config_file);
    }
    PipelineConfig cfg = parse_config(file_text, flags);
    for (const auto& n : cfg.notices) err << "notice: " << n << "\n";
    fs::create_directories(cfg.output_dir);
    echo_config(cfg);

    if (*synth) return cmd_synth(cfg, out);
    if (*walk) return cmd_walk(cfg, out);
    if (*train_cmd) return cmd_train(cfg, out, err);
    if (*nearest) return cmd_nearest(cfg, query, k, out);
    if (*analogy) return cmd_analogy(cfg, quad, k, out);
    if (*eval) return cmd_eval(cfg, out, err);
    if (*bench) return cmd_benchmark(cfg, out, err);
  } catch (const StageError& e) {
    err << "error: [" << e.stage() << "] " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    err << "error: [config] " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace kgwalk::cli
