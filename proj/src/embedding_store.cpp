#include "kgwalk/embedding_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "kgwalk/errors.hpp"
#include "kgwalk/text_io.hpp"
#include "kgwalk/walk.hpp"

namespace kgwalk {

CosineResult cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ContractViolation("cosine of vectors with dimensions " + std::to_string(u.size()) +
                            " and " + std::to_string(v.size()));
  }
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return {0.0, true};
  double c = uv / (std::sqrt(uu) * std::sqrt(vv));
  return {std::clamp(c, -1.0, 1.0), false};
}

EmbeddingStore::EmbeddingStore(std::size_t dim, std::vector<std::string> tokens, std::vector<double> values)
    : dim_(dim), tokens_(std::move(tokens)), values_(std::move(values)) {
  if (values_.size() != tokens_.size() * dim_) {
    throw FormatError(0, "store has " + std::to_string(values_.size()) + " values for " +
                             std::to_string(tokens_.size()) + " tokens of dimension " +
                             std::to_string(dim_));
  }
  norms_.resize(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw FormatError(i + 2, "duplicate token " + tokens_[i]);
    }
    double n = 0.0;
    for (double x : vector(i)) {
      if (!std::isfinite(x)) throw FormatError(i + 2, "non-finite value for token " + tokens_[i]);
      n += x * x;
    }
    norms_[i] = std::sqrt(n);
  }
}

std::optional<std::size_t> EmbeddingStore::index_of(std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

void EmbeddingStore::throw_unknown(std::string_view token) const {
  std::string msg = "unknown token: " + std::string(token);
  auto hints = closest_matches(token, tokens_, 3);
  if (!hints.empty()) {
    msg += " (closest:";
    for (const auto& h : hints) msg += " " + h;
    msg += ")";
  }
  throw LookupError(msg);
}

std::span<const double> EmbeddingStore::vector(std::string_view token) const {
  auto i = index_of(token);
  if (!i) throw_unknown(token);
  return vector(*i);
}

double EmbeddingStore::similarity(std::string_view x, std::string_view y) const {
  return cosine(vector(x), vector(y)).score;
}

namespace {

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.token < b.token;
}

}  // namespace

std::vector<Neighbor> EmbeddingStore::nearest_to(std::span<const double> target, std::size_t k,
                                                 std::span<const std::string_view> excluded) const {
  if (k == 0) throw ContractViolation("k must be >= 1");
  if (target.size() != dim_) throw ContractViolation("query dimension mismatch");
  double tn = 0.0;
  for (double x : target) tn += x * x;
  tn = std::sqrt(tn);

  std::vector<Neighbor> all;
  all.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), std::string_view(tokens_[i])) != excluded.end()) {
      continue;
    }
    double score = 0.0;
    if (tn > 0.0 && norms_[i] > 0.0) {
      auto v = vector(i);
      double d = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) d += v[j] * target[j];
      score = std::clamp(d / (tn * norms_[i]), -1.0, 1.0);
    }
    all.push_back({tokens_[i], score});
  }
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), ranks_before);
  all.resize(take);
  return all;
}

std::vector<Neighbor> EmbeddingStore::nearest(std::string_view query, std::size_t k) const {
  auto q = vector(query);
  std::string_view excluded[] = {query};
  return nearest_to(q, k, excluded);
}

std::vector<Neighbor> EmbeddingStore::analogy(std::string_view a, std::string_view a_star,
                                              std::string_view b, std::size_t k) const {
  auto va = vector(a);
  auto vs = vector(a_star);
  auto vb = vector(b);
  std::vector<double> target(dim_);
  for (std::size_t j = 0; j < dim_; ++j) target[j] = vs[j] - va[j] + vb[j];
  std::string_view excluded[] = {a, a_star, b};
  return nearest_to(target, k, excluded);
}

std::string EmbeddingStore::to_text() const {
  std::string out = std::to_string(tokens_.size()) + " " + std::to_string(dim_) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += tokens_[i];
    for (double x : vector(i)) {
      int n = std::snprintf(buf, sizeof buf, " %.9g", x);
      out.append(buf, static_cast<std::size_t>(n));
    }
    out += '\n';
  }
  return out;
}

void EmbeddingStore::save(const std::filesystem::path& path) const { write_file(path, to_text()); }

namespace {

std::size_t parse_size(std::string_view s, std::size_t line, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw FormatError(line, std::string("invalid ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  std::string tmp(s);
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw FormatError(line, "invalid number '" + tmp + "'");
  }
  if (!std::isfinite(v)) throw FormatError(line, "non-finite value '" + tmp + "'");
  return v;
}

template <class NextLine>
EmbeddingStore parse_lines(NextLine&& next) {
  auto header = next();
  if (!header) throw FormatError(1, "missing header");
  auto head = split_tokens(*header);
  if (head.size() != 2) throw FormatError(1, "header must be 'vocab_size dim'");
  const std::size_t count = parse_size(head[0], 1, "vocabulary size");
  const std::size_t dim = parse_size(head[1], 1, "dimension");
  if (dim == 0) throw FormatError(1, "dimension must be >= 1");

  std::vector<std::string> tokens;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (auto line = next()) {
    ++line_no;
    if (line->empty()) continue;
    if (tokens.size() == count) {
      throw FormatError(line_no, "more body lines than the header's " + std::to_string(count));
    }
    auto fields = split_tokens(*line);
    if (fields.size() != dim + 1) {
      throw FormatError(line_no, "expected " + std::to_string(dim) + " components, got " +
                                     std::to_string(fields.size() - 1));
    }
    tokens.emplace_back(fields[0]);
    for (std::size_t j = 1; j < fields.size(); ++j) values.push_back(parse_double(fields[j], line_no));
  }
  if (tokens.size() != count) {
    throw FormatError(line_no, "header declares " + std::to_string(count) + " tokens, body has " +
                                   std::to_string(tokens.size()));
  }
  return EmbeddingStore(dim, std::move(tokens), std::move(values));
}

}  // namespace

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path) {
  LineReader reader(path);
  return parse_lines([&] { return reader.next(); });
}

EmbeddingStore EmbeddingStore::parse(std::string_view text) {
  std::size_t pos = 0;
  return parse_lines([&]() -> std::optional<std::string> {
    if (pos >= text.size()) return std::nullopt;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    return line;
  });
}

EmbeddingStore EmbeddingStore::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return EmbeddingStore(dim_, tokens_, std::move(v));
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> closest_matches(std::string_view query, std::span<const std::string> candidates,
                                         std::size_t limit) {
  std::vector<std::pair<std::size_t, std::string_view>> scored;
  scored.reserve(candidates.size());
  for (const auto& c : candidates) scored.emplace_back(edit_distance(query, c), c);
  const std::size_t take = std::min(limit, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < take; ++i) out.emplace_back(scored[i].second);
  return out;
}

}  // namespace kgwalk
