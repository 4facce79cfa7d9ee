#include "kgwalk/word2vec.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

#include "kgwalk/embedding_store.hpp"
#include "kgwalk/text_io.hpp"

namespace kgwalk {

std::string_view to_string(ModelKind model) {
  switch (model) {
    case ModelKind::kSkipGram:
      return "sg";
    case ModelKind::kCbow:
      return "cbow";
    case ModelKind::kSkipGramOrdered:
      return "sg_oa";
    case ModelKind::kCbowOrdered:
      return "cbow_oa";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "sg") return ModelKind::kSkipGram;
  if (name == "cbow") return ModelKind::kCbow;
  if (name == "sg_oa") return ModelKind::kSkipGramOrdered;
  if (name == "cbow_oa") return ModelKind::kCbowOrdered;
  throw ConfigError("invalid model '" + std::string(name) + "', expected one of {sg,cbow,sg_oa,cbow_oa}");
}

void TrainConfig::validate() const {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (negatives < 1) throw ConfigError("negatives must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

double TrainConfig::initial_learning_rate() const {
  if (learning_rate > 0.0) return learning_rate;
  return is_skip_gram(model) ? 0.025 : 0.05;
}

std::vector<TrainingPair> extract_pairs(std::span<const std::uint32_t> sentence, std::size_t window) {
  std::vector<TrainingPair> pairs;
  const auto n = static_cast<std::ptrdiff_t>(sentence.size());
  const auto w = static_cast<std::ptrdiff_t>(window);
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    for (std::ptrdiff_t r = -w; r <= w; ++r) {
      if (r == 0 || t + r < 0 || t + r >= n) continue;
      pairs.push_back({sentence[static_cast<std::size_t>(t)], sentence[static_cast<std::size_t>(t + r)],
                       static_cast<int>(r)});
    }
  }
  return pairs;
}

namespace {

constexpr double kMinRateFraction = 1e-4;

struct Worker {
  const Vocabulary& vocab;
  const TrainConfig& cfg;
  EmbeddingMatrices<float>& m;
  Rng rng;
  std::vector<double> keep_probability;  // empty when subsampling is off

  ExampleGradient<float> grad;
  std::vector<InputSlot> slots;
  std::vector<std::uint32_t> negatives;
  std::vector<std::uint32_t> kept;
  double loss_sum = 0.0;
  std::size_t examples = 0;

  void draw_negatives(std::uint32_t positive) {
    negatives.clear();
    for (std::size_t i = 0; i < cfg.negatives; ++i) {
      std::uint32_t n = vocab.sample(rng);
      for (int tries = 0; n == positive && tries < 16 && vocab.size() > 1; ++tries) n = vocab.sample(rng);
      negatives.push_back(n);
    }
  }

  void step(std::uint32_t target, float lr) {
    draw_negatives(target);
    Example ex{slots, target, negatives};
    const float loss = compute_gradient(m, ex, grad);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "non-finite loss after " << examples << " examples (target '" << vocab.token(target)
          << "', learning rate " << lr << ")";
      throw NumericError(msg.str());
    }
    apply_gradient(m, ex, grad, lr);
    loss_sum += loss;
    ++examples;
  }

  void sentence(const Sentence& raw, float lr) {
    const Sentence* s = &raw;
    if (!keep_probability.empty()) {
      kept.clear();
      for (std::uint32_t id : raw) {
        if (uniform_unit(rng) < keep_probability[id]) kept.push_back(id);
      }
      s = &kept;
    }
    const auto n = static_cast<std::ptrdiff_t>(s->size());
    const auto w = static_cast<std::ptrdiff_t>(cfg.window);
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      const std::uint32_t center = (*s)[static_cast<std::size_t>(t)];
      if (is_skip_gram(cfg.model)) {
        for (std::ptrdiff_t r = -w; r <= w; ++r) {
          if (r == 0 || t + r < 0 || t + r >= n) continue;
          slots.assign(1, InputSlot{center, static_cast<int>(r)});
          step((*s)[static_cast<std::size_t>(t + r)], lr);
        }
      } else {
        slots.clear();
        for (std::ptrdiff_t r = -w; r <= w; ++r) {
          if (r == 0 || t + r < 0 || t + r >= n) continue;
          // Offset of the context token relative to the center.
          slots.push_back({(*s)[static_cast<std::size_t>(t + r)], static_cast<int>(r)});
        }
        if (!slots.empty()) step(center, lr);
      }
    }
  }
};

}  // namespace

TrainResult train_model(const Vocabulary& vocab, std::span<const Sentence> sentences,
                        const TrainConfig& cfg) {
  cfg.validate();
  if (vocab.empty()) throw NumericError("no trainable tokens");

  TrainResult result{vocab, EmbeddingMatrices<float>(vocab.size(), cfg.dim, cfg.window, cfg.model), {}};
  EmbeddingMatrices<float>& m = result.matrices;
  {
    Rng init(sub_seed(cfg.seed, "init"));
    const double half = 0.5 / static_cast<double>(cfg.dim);
    for (float& x : m.input) x = static_cast<float>((uniform_unit(init) * 2.0 - 1.0) * half);
  }

  std::vector<double> keep;
  if (cfg.subsample > 0.0) {
    keep.resize(vocab.size());
    const double total = static_cast<double>(vocab.total_count());
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
      const double f = static_cast<double>(vocab.count(i)) / total;
      keep[i] = std::min(1.0, (std::sqrt(f / cfg.subsample) + 1.0) * cfg.subsample / f);
    }
  }

  std::size_t tokens_per_epoch = 0;
  for (const auto& s : sentences) tokens_per_epoch += s.size();
  const double total_tokens = static_cast<double>(std::max<std::size_t>(1, tokens_per_epoch * cfg.epochs));
  const double lr0 = cfg.initial_learning_rate();
  auto rate_at = [&](std::size_t processed) {
    return lr0 * std::max(kMinRateFraction, 1.0 - static_cast<double>(processed) / total_tokens);
  };

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(sub_seed(cfg.seed, "shuffle"));
  std::atomic<std::size_t> processed{0};
  const unsigned threads = std::max(1u, cfg.threads);

  std::vector<Worker> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.push_back(Worker{vocab, cfg, m, Rng(mix_seed(sub_seed(cfg.seed, "negatives"), t)), keep,
                             {}, {}, {}, {}, 0.0, 0});
  }

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with the portable index sampler.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
    }
    for (auto& w : workers) {
      w.loss_sum = 0.0;
      w.examples = 0;
    }
    auto run = [&](unsigned t) {
      Worker& w = workers[t];
      const std::size_t begin = order.size() * t / threads;
      const std::size_t end = order.size() * (t + 1) / threads;
      for (std::size_t i = begin; i < end; ++i) {
        const Sentence& s = sentences[order[i]];
        w.sentence(s, static_cast<float>(rate_at(processed.load(std::memory_order_relaxed))));
        processed.fetch_add(s.size(), std::memory_order_relaxed);
      }
    };
    if (threads == 1) {
      run(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    double loss = 0.0;
    for (const auto& w : workers) {
      loss += w.loss_sum;
      stats.examples += w.examples;
    }
    stats.mean_loss = stats.examples ? loss / static_cast<double>(stats.examples) : 0.0;
    stats.final_learning_rate = rate_at(processed.load());
    result.epochs.push_back(stats);
  }
  for (float x : m.input) {
    if (!std::isfinite(x)) throw NumericError("training produced non-finite embeddings");
  }
  return result;
}

namespace {

EmbeddingStore to_store(const TrainResult& r) {
  std::vector<std::string> tokens;
  tokens.reserve(r.vocab.size());
  for (std::uint32_t i = 0; i < r.vocab.size(); ++i) tokens.push_back(r.vocab.token(i));
  std::vector<double> values(r.matrices.input.begin(), r.matrices.input.end());
  return EmbeddingStore(r.matrices.dim, std::move(tokens), std::move(values));
}

}  // namespace

EmbeddingStore train(std::span<const std::string> corpus_lines, const TrainConfig& cfg,
                     std::vector<EpochStats>* epochs) {
  cfg.validate();
  Vocabulary vocab = build_vocab(corpus_lines, cfg.min_count, cfg.exponent);
  auto sentences = encode_corpus(corpus_lines, vocab);
  TrainResult r = train_model(vocab, sentences, cfg);
  if (epochs) *epochs = r.epochs;
  return to_store(r);
}

EmbeddingStore train(const std::filesystem::path& corpus, const TrainConfig& cfg,
                     std::vector<EpochStats>* epochs) {
  cfg.validate();
  Vocabulary vocab = build_vocab(corpus, cfg.min_count, cfg.exponent);
  auto sentences = encode_corpus(corpus, vocab);
  TrainResult r = train_model(vocab, sentences, cfg);
  if (epochs) *epochs = r.epochs;
  return to_store(r);
}

}  // namespace kgwalk
