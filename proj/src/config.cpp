#include "kgwalk/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>

#include "kgwalk/embedding_store.hpp"
#include "kgwalk/errors.hpp"

namespace kgwalk {

namespace {

const std::vector<std::string> kTaskNames = {"classification", "clustering", "regression",
                                             "analogies",      "relatedness", "documents"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    std::size_t comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    std::string item = trim(std::string_view(v).substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

template <class T>
T to_unsigned(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("invalid value for " + key + ": '" + v + "' (expected a non-negative integer)");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ConfigError("invalid value for " + key + ": '" + v + "' (expected a number)");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid value for " + key + ": '" + v + "' (expected true or false)");
}

std::string default_threads() {
  if (const char* env = std::getenv(std::string(kThreadsEnv).c_str()); env != nullptr && *env != '\0') {
    return env;
  }
  return "1";
}

struct Key {
  std::string name;
  std::function<std::string()> fallback;
  std::function<void(PipelineConfig&, const std::string&)> apply;
};

const std::vector<Key>& key_table() {
  using C = PipelineConfig;
  auto fixed = [](std::string v) { return [v] { return v; }; };
  static const std::vector<Key> keys = {
      {"input", fixed(""),
       [](C& c, const std::string& v) {
         c.inputs.clear();
         for (auto& p : split_list(v)) c.inputs.emplace_back(p);
       }},
      {"output_dir", fixed("kgwalk-out"), [](C& c, const std::string& v) { c.output_dir = v; }},
      {"corpus", fixed(""), [](C& c, const std::string& v) { c.corpus = v; }},
      {"embeddings", fixed(""), [](C& c, const std::string& v) { c.embeddings = v; }},
      {"skip_literals", fixed("true"),
       [](C& c, const std::string& v) { c.parse.skip_literals = to_bool("skip_literals", v); }},
      {"exclude_predicates", fixed(""),
       [](C& c, const std::string& v) { c.parse.excluded_predicates = split_list(v); }},
      {"walks_per_node", fixed("500"),
       [](C& c, const std::string& v) { c.walk.walks_per_node = to_unsigned<std::size_t>("walks_per_node", v); }},
      {"backward_hops", fixed("2"),
       [](C& c, const std::string& v) { c.walk.backward_hops = to_unsigned<std::size_t>("backward_hops", v); }},
      {"forward_hops", fixed("2"),
       [](C& c, const std::string& v) { c.walk.forward_hops = to_unsigned<std::size_t>("forward_hops", v); }},
      {"walk_mode", fixed("classic"), [](C& c, const std::string& v) { c.walk.mode = parse_walk_mode(v); }},
      {"dedup", fixed("true"), [](C& c, const std::string& v) { c.walk.dedup = to_bool("dedup", v); }},
      {"dim", fixed("200"), [](C& c, const std::string& v) { c.train.dim = to_unsigned<std::size_t>("dim", v); }},
      {"window", fixed("5"),
       [](C& c, const std::string& v) { c.train.window = to_unsigned<std::size_t>("window", v); }},
      {"epochs", fixed("5"),
       [](C& c, const std::string& v) { c.train.epochs = to_unsigned<std::size_t>("epochs", v); }},
      {"learning_rate", fixed("0"),
       [](C& c, const std::string& v) { c.train.learning_rate = to_double("learning_rate", v); }},
      {"negatives", fixed("5"),
       [](C& c, const std::string& v) { c.train.negatives = to_unsigned<std::size_t>("negatives", v); }},
      {"exponent", fixed("0.75"), [](C& c, const std::string& v) { c.train.exponent = to_double("exponent", v); }},
      {"min_count", fixed("0"),
       [](C& c, const std::string& v) { c.train.min_count = to_unsigned<std::uint64_t>("min_count", v); }},
      {"subsample", fixed("0"), [](C& c, const std::string& v) { c.train.subsample = to_double("subsample", v); }},
      {"model", fixed("sg"), [](C& c, const std::string& v) { c.train.model = parse_model_kind(v); }},
      {"seed", fixed("42"), [](C& c, const std::string& v) { c.seed = to_unsigned<std::uint64_t>("seed", v); }},
      {"threads", default_threads,
       [](C& c, const std::string& v) { c.threads = to_unsigned<unsigned>("threads", v); }},
      {"deterministic", fixed("false"),
       [](C& c, const std::string& v) { c.deterministic = to_bool("deterministic", v); }},
      {"variants", fixed("all"),
       [](C& c, const std::string& v) {
         c.variants.clear();
         if (v == "all") {
           c.variants = all_variants();
           return;
         }
         for (auto& name : split_list(v)) c.variants.push_back(parse_variant(name));
       }},
      {"tasks", fixed("all"),
       [](C& c, const std::string& v) {
         c.tasks.clear();
         if (v == "all") {
           c.tasks = kTaskNames;
           return;
         }
         for (auto& t : split_list(v)) {
           if (std::find(kTaskNames.begin(), kTaskNames.end(), t) == kTaskNames.end()) {
             throw ConfigError("unknown task '" + t +
                               "', expected one of {classification,clustering,regression,analogies,relatedness,documents}");
           }
           c.tasks.push_back(t);
         }
       }},
      {"knn_k", fixed("5"), [](C& c, const std::string& v) { c.eval.knn_k = to_unsigned<std::size_t>("knn_k", v); }},
      {"kmeans_restarts", fixed("10"),
       [](C& c, const std::string& v) { c.eval.kmeans_restarts = to_unsigned<std::size_t>("kmeans_restarts", v); }},
      {"gold_labels", fixed(""), [](C& c, const std::string& v) { c.gold.labels = v; }},
      {"gold_numeric", fixed(""), [](C& c, const std::string& v) { c.gold.numeric = v; }},
      {"gold_rankings", fixed(""), [](C& c, const std::string& v) { c.gold.rankings = v; }},
      {"gold_analogies", fixed(""), [](C& c, const std::string& v) { c.gold.analogies = v; }},
      {"gold_documents", fixed(""), [](C& c, const std::string& v) { c.gold.documents = v; }},
      {"synthetic_classes", fixed("4"),
       [](C& c, const std::string& v) { c.synthetic.classes = to_unsigned<std::size_t>("synthetic_classes", v); }},
      {"synthetic_entities_per_class", fixed("25"),
       [](C& c, const std::string& v) {
         c.synthetic.entities_per_class = to_unsigned<std::size_t>("synthetic_entities_per_class", v);
       }},
      {"synthetic_predicates_per_class", fixed("3"),
       [](C& c, const std::string& v) {
         c.synthetic.predicates_per_class = to_unsigned<std::size_t>("synthetic_predicates_per_class", v);
       }},
      {"synthetic_hubs", fixed("5"),
       [](C& c, const std::string& v) { c.synthetic.hubs = to_unsigned<std::size_t>("synthetic_hubs", v); }},
      {"synthetic_analogy_pairs", fixed("12"),
       [](C& c, const std::string& v) {
         c.synthetic.analogy_pairs = to_unsigned<std::size_t>("synthetic_analogy_pairs", v);
       }},
  };
  return keys;
}

const Key* find_key(std::string_view name) {
  for (const Key& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void check_known(const KeyValues& kv, std::string_view source) {
  for (const auto& [key, value] : kv) {
    if (find_key(key) != nullptr) continue;
    auto names = config_keys();
    auto hint = closest_matches(key, names, 1);
    throw ConfigError("unknown " + std::string(source) + " key '" + key + "'" +
                      (hint.empty() ? "" : " (did you mean '" + hint[0] + "'?)"));
  }
}

}  // namespace

bool PipelineConfig::task_enabled(std::string_view task) const {
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : key_table()) out.push_back(k.name);
  return out;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value, got '" + t + "'");
    }
    out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

PipelineConfig parse_config(const KeyValues& file, const KeyValues& flags) {
  check_known(file, "config");
  check_known(flags, "flag");

  std::map<std::string, std::string> values;
  for (const Key& k : key_table()) values[k.name] = k.fallback();
  std::map<std::string, std::string> from_file;
  for (const auto& [k, v] : file) {
    values[k] = v;
    from_file[k] = v;
  }
  PipelineConfig cfg;
  for (const auto& [k, v] : flags) {
    if (auto it = from_file.find(k); it != from_file.end() && it->second != v) {
      cfg.notices.push_back("flag --" + k + "=" + v + " overrides config file value '" + it->second + "'");
    }
    values[k] = v;
  }
  for (const Key& k : key_table()) {
    k.apply(cfg, values[k.name]);
    cfg.resolved.emplace_back(k.name, values[k.name]);
  }

  // Named sub-seeds keep components independent of each other.
  cfg.walk.seed = sub_seed(cfg.seed, "walk");
  cfg.train.seed = sub_seed(cfg.seed, "train");
  cfg.eval.seed = sub_seed(cfg.seed, "eval");
  cfg.synthetic.seed = sub_seed(cfg.seed, "synthetic");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  cfg.walk.threads = cfg.threads;
  cfg.train.threads = cfg.deterministic ? 1 : cfg.threads;
  if (cfg.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (cfg.corpus.empty()) cfg.corpus = cfg.output_dir / "walks.txt";
  if (cfg.embeddings.empty()) cfg.embeddings = cfg.output_dir / "embeddings.txt";

  cfg.walk.validate();
  cfg.train.validate();
  if (cfg.eval.knn_k < 1) throw ConfigError("knn_k must be >= 1");

  for (const auto& p : cfg.inputs) {
    if (!std::filesystem::exists(p)) throw ConfigError("input not found: " + p.string());
  }
  for (const auto* p : {&cfg.gold.labels, &cfg.gold.numeric, &cfg.gold.rankings, &cfg.gold.analogies,
                        &cfg.gold.documents}) {
    if (!p->empty() && !std::filesystem::exists(*p)) throw ConfigError("gold file not found: " + p->string());
  }
  return cfg;
}

PipelineConfig parse_config(std::string_view file_text, const KeyValues& flags) {
  return parse_config(parse_key_values(file_text), flags);
}

std::string render_config(const PipelineConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.resolved) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> provenance_lines(const PipelineConfig& cfg, std::string_view input_digest) {
  std::vector<std::string> out;
  out.push_back("tool: " + std::string(kToolVersion));
  out.push_back("seed: " + std::to_string(cfg.seed));
  out.push_back("input sha256: " + std::string(input_digest));
  if (cfg.train.threads > 1) out.push_back("training threads: " + std::to_string(cfg.train.threads) + " (not reproducible)");
  for (const auto& [k, v] : cfg.resolved) out.push_back("config " + k + " = " + v);
  return out;
}

}  // namespace kgwalk
