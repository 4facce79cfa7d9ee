#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgwalk/benchmark.hpp"
#include "kgwalk/graph.hpp"
#include "kgwalk/synthetic.hpp"
#include "kgwalk/walk.hpp"
#include "kgwalk/word2vec.hpp"

namespace kgwalk {

inline constexpr std::string_view kToolVersion = "kgwalk 1.0.0";
// Environment variable consulted for the default thread count.
inline constexpr std::string_view kThreadsEnv = "KGWALK_THREADS";

struct GoldPaths {
  std::filesystem::path labels;
  std::filesystem::path numeric;
  std::filesystem::path rankings;
  std::filesystem::path analogies;
  std::filesystem::path documents;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output_dir;
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  ParseOptions parse;
  WalkConfig walk;
  TrainConfig train;
  EvalConfig eval;
  std::vector<std::string> tasks;
  std::vector<Variant> variants;
  GoldPaths gold;
  SyntheticGraphSpec synthetic;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool deterministic = false;

  // Every key with its resolved value, in key-table order.
  std::vector<std::pair<std::string, std::string>> resolved;
  // Precedence conflicts (flag overriding a file value).
  std::vector<std::string> notices;

  bool task_enabled(std::string_view task) const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines; '#' starts a comment. Throws ConfigError.
KeyValues parse_key_values(std::string_view text);

// Defaults < file < flags. Unknown keys fail with the closest valid key.
PipelineConfig parse_config(const KeyValues& file, const KeyValues& flags);
PipelineConfig parse_config(std::string_view file_text, const KeyValues& flags);

std::vector<std::string> config_keys();
std::string render_config(const PipelineConfig& cfg);

// Header lines for artifacts: version, resolved config, seed, input digest.
std::vector<std::string> provenance_lines(const PipelineConfig& cfg, std::string_view input_digest);

}  // namespace kgwalk
