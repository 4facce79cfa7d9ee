#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgwalk/errors.hpp"
#include "kgwalk/rng.hpp"
#include "kgwalk/vocabulary.hpp"

namespace kgwalk {

class EmbeddingStore;

enum class ModelKind { kSkipGram, kCbow, kSkipGramOrdered, kCbowOrdered };

std::string_view to_string(ModelKind model);
// Accepts "sg", "cbow", "sg_oa", "cbow_oa".
ModelKind parse_model_kind(std::string_view name);

inline bool is_ordered(ModelKind m) {
  return m == ModelKind::kSkipGramOrdered || m == ModelKind::kCbowOrdered;
}
inline bool is_skip_gram(ModelKind m) {
  return m == ModelKind::kSkipGram || m == ModelKind::kSkipGramOrdered;
}

struct TrainConfig {
  std::size_t dim = 200;
  std::size_t window = 5;
  std::size_t epochs = 5;
  // 0 selects the model default: 0.025 for skip-gram, 0.05 for CBOW.
  double learning_rate = 0.0;
  std::size_t negatives = 5;
  double exponent = 0.75;
  std::uint64_t min_count = 0;
  // Frequent-token subsampling threshold; 0 disables it.
  double subsample = 0.0;
  ModelKind model = ModelKind::kSkipGram;
  std::uint64_t seed = 0;
  // 1 is the deterministic mode. More workers update shared rows without
  // locks and are not reproducible.
  unsigned threads = 1;

  void validate() const;
  double initial_learning_rate() const;
};

struct TrainingPair {
  std::uint32_t center;
  std::uint32_t context;
  int offset;  // position of context relative to center, nonzero
  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

// Every (t, t+r) with 0 < |r| <= window inside the sentence; fixed window.
std::vector<TrainingPair> extract_pairs(std::span<const std::uint32_t> sentence, std::size_t window);

// Row `id` of an input matrix combined with the offset that selects the
// output matrix in the ordered models.
struct InputSlot {
  std::uint32_t id;
  int offset;
};

// One prediction: the input slots predict `target`; every id in `negatives`
// is scored as noise. Skip-gram has a single slot (center, r) and the context
// token as target; CBOW has one slot per context token and the center as target.
struct Example {
  std::span<const InputSlot> inputs;
  std::uint32_t target;
  std::span<const std::uint32_t> negatives;
};

// Input matrix plus one output matrix (plain models) or 2*window
// offset-indexed output matrices (ordered models), row-major.
template <class Real>
struct EmbeddingMatrices {
  std::size_t vocab = 0;
  std::size_t dim = 0;
  std::size_t window = 0;
  ModelKind model = ModelKind::kSkipGram;
  std::vector<Real> input;
  std::vector<std::vector<Real>> outputs;

  EmbeddingMatrices() = default;
  EmbeddingMatrices(std::size_t vocab_size, std::size_t width, std::size_t window_size, ModelKind kind)
      : vocab(vocab_size), dim(width), window(window_size), model(kind), input(vocab_size * width) {
    outputs.assign(is_ordered(kind) ? 2 * window_size : 1, std::vector<Real>(vocab_size * width));
  }

  // Output matrix used for a slot with the given offset.
  std::size_t output_index(int offset) const {
    if (!is_ordered(model)) return 0;
    if (offset == 0 || static_cast<std::size_t>(std::abs(offset)) > window) {
      throw ContractViolation("offset " + std::to_string(offset) + " outside window");
    }
    return offset < 0 ? static_cast<std::size_t>(offset + static_cast<int>(window))
                      : static_cast<std::size_t>(offset + static_cast<int>(window) - 1);
  }

  Real* in_row(std::uint32_t id) { return input.data() + std::size_t{id} * dim; }
  const Real* in_row(std::uint32_t id) const { return input.data() + std::size_t{id} * dim; }
  Real* out_row(std::size_t m, std::uint32_t id) { return outputs[m].data() + std::size_t{id} * dim; }
  const Real* out_row(std::size_t m, std::uint32_t id) const {
    return outputs[m].data() + std::size_t{id} * dim;
  }
};

// Gradient of one Example, in sparse form. Output-row gradients are stored as
// scale * source, where source is the mean input vector (plain models) or an
// input row (ordered models); the source rows are not modified before the
// output terms are applied.
template <class Real>
struct ExampleGradient {
  struct OutputTerm {
    std::size_t matrix;
    std::uint32_t row;
    Real scale;
    const Real* source;
  };
  Real loss = 0;
  std::vector<Real> hidden;
  std::vector<Real> input_grad;  // inputs.size() x dim
  std::vector<OutputTerm> output_terms;
  std::vector<Real> scores;
};

namespace detail {

template <class Real>
inline Real dot(const Real* a, const Real* b, std::size_t n) {
  Real s = 0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <class Real>
inline void axpy(Real alpha, const Real* x, Real* y, std::size_t n) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// log(1 + exp(-x)) without overflow.
template <class Real>
inline Real log1p_exp_neg(Real x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

template <class Real>
inline Real sigmoid(Real x) {
  if (x >= 0) return Real(1) / (Real(1) + std::exp(-x));
  Real e = std::exp(x);
  return e / (Real(1) + e);
}

}  // namespace detail

// Negative-sampling loss of one example and its gradient:
//   score(t) = (1/|S|) * sum_s out_{m(s)}[t] . in[id_s]
//   loss     = -log sigmoid(score(target)) - sum_neg log sigmoid(-score(neg))
// with m(s) = 0 for plain models and the offset-selected matrix otherwise.
template <class Real>
Real compute_gradient(const EmbeddingMatrices<Real>& m, const Example& ex, ExampleGradient<Real>& g) {
  const std::size_t dim = m.dim;
  const std::size_t slots = ex.inputs.size();
  if (slots == 0) throw ContractViolation("example without input slots");
  if (ex.target >= m.vocab) throw ContractViolation("target id out of range");
  for (const InputSlot& s : ex.inputs) {
    if (s.id >= m.vocab) throw ContractViolation("input id out of range");
  }
  for (std::uint32_t n : ex.negatives) {
    if (n >= m.vocab) throw ContractViolation("negative id out of range");
  }

  const Real inv = Real(1) / static_cast<Real>(slots);
  const bool ordered = is_ordered(m.model);
  const std::size_t targets = 1 + ex.negatives.size();
  auto target_at = [&](std::size_t k) { return k == 0 ? ex.target : ex.negatives[k - 1]; };

  g.loss = 0;
  g.output_terms.clear();
  g.input_grad.assign(slots * dim, Real(0));
  g.scores.resize(targets);

  if (!ordered) {
    g.hidden.assign(dim, Real(0));
    for (const InputSlot& s : ex.inputs) detail::axpy(inv, m.in_row(s.id), g.hidden.data(), dim);
    // Input gradient is shared by all slots: (1/|S|) sum_t coeff_t out[t].
    Real* shared = g.input_grad.data();
    for (std::size_t k = 0; k < targets; ++k) {
      const std::uint32_t t = target_at(k);
      const Real score = detail::dot(g.hidden.data(), m.out_row(0, t), dim);
      const Real label = k == 0 ? Real(1) : Real(0);
      g.loss += k == 0 ? detail::log1p_exp_neg(score) : detail::log1p_exp_neg(-score);
      const Real coeff = detail::sigmoid(score) - label;
      g.scores[k] = score;
      g.output_terms.push_back({0, t, coeff, g.hidden.data()});
      detail::axpy(coeff * inv, m.out_row(0, t), shared, dim);
    }
    for (std::size_t s = 1; s < slots; ++s) {
      std::copy(shared, shared + dim, g.input_grad.data() + s * dim);
    }
    return g.loss;
  }

  for (std::size_t k = 0; k < targets; ++k) {
    const std::uint32_t t = target_at(k);
    Real score = 0;
    for (const InputSlot& s : ex.inputs) {
      score += detail::dot(m.in_row(s.id), m.out_row(m.output_index(s.offset), t), dim);
    }
    score *= inv;
    const Real label = k == 0 ? Real(1) : Real(0);
    g.loss += k == 0 ? detail::log1p_exp_neg(score) : detail::log1p_exp_neg(-score);
    const Real coeff = detail::sigmoid(score) - label;
    g.scores[k] = score;
    for (std::size_t si = 0; si < slots; ++si) {
      const InputSlot& s = ex.inputs[si];
      const std::size_t mat = m.output_index(s.offset);
      g.output_terms.push_back({mat, t, coeff * inv, m.in_row(s.id)});
      detail::axpy(coeff * inv, m.out_row(mat, t), g.input_grad.data() + si * dim, dim);
    }
  }
  return g.loss;
}

// Gradient step: rows -= lr * gradient. Output rows first, then input rows.
template <class Real>
void apply_gradient(EmbeddingMatrices<Real>& m, const Example& ex, const ExampleGradient<Real>& g,
                    Real lr) {
  const std::size_t dim = m.dim;
  for (const auto& term : g.output_terms) {
    detail::axpy(-lr * term.scale, term.source, m.out_row(term.matrix, term.row), dim);
  }
  for (std::size_t si = 0; si < ex.inputs.size(); ++si) {
    detail::axpy(-lr, g.input_grad.data() + si * dim, m.in_row(ex.inputs[si].id), dim);
  }
}

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  std::size_t examples = 0;
  double final_learning_rate = 0.0;
};

struct TrainResult {
  Vocabulary vocab;
  EmbeddingMatrices<float> matrices;
  std::vector<EpochStats> epochs;
};

// Runs epochs x passes of SGD with linear learning-rate decay down to
// 1e-4 of the initial rate.
TrainResult train_model(const Vocabulary& vocab, std::span<const Sentence> sentences,
                        const TrainConfig& cfg);

// Vocabulary + encoding + training; the store holds the input matrix.
EmbeddingStore train(std::span<const std::string> corpus_lines, const TrainConfig& cfg,
                     std::vector<EpochStats>* epochs = nullptr);
EmbeddingStore train(const std::filesystem::path& corpus, const TrainConfig& cfg,
                     std::vector<EpochStats>* epochs = nullptr);

}  // namespace kgwalk
