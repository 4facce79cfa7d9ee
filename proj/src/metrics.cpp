#include "kgwalk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "kgwalk/errors.hpp"
#include "kgwalk/rng.hpp"

namespace kgwalk {

namespace {

// Present entries of `gold` with their store index; the rest go to `excluded`.
template <class Item>
std::vector<std::pair<const Item*, std::size_t>> resolve(const EmbeddingStore& store, std::span<const Item> gold,
                                                         std::vector<std::string>& excluded) {
  std::vector<std::pair<const Item*, std::size_t>> out;
  for (const Item& item : gold) {
    if (auto i = store.index_of(item.token)) {
      out.emplace_back(&item, *i);
    } else {
      excluded.push_back(item.token);
    }
  }
  return out;
}

// Positions (into `items`) of the k nearest other items, best first.
template <class Item>
std::vector<std::size_t> loo_neighbors(const EmbeddingStore& store,
                                       const std::vector<std::pair<const Item*, std::size_t>>& items,
                                       std::size_t query, std::size_t k) {
  struct Cand {
    double score;
    const std::string* token;
    std::size_t pos;
  };
  std::vector<Cand> cands;
  cands.reserve(items.size());
  auto qv = store.vector(items[query].second);
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (j == query) continue;
    cands.push_back({cosine(qv, store.vector(items[j].second)).score, &items[j].first->token, j});
  }
  auto before = [](const Cand& a, const Cand& b) {
    if (a.score != b.score) return a.score > b.score;
    return *a.token < *b.token;
  };
  const std::size_t take = std::min(k, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(), before);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(cands[i].pos);
  return out;
}

}  // namespace

EvalOutcome knn_classify_loo(const EmbeddingStore& store, std::span<const LabeledEntity> gold, std::size_t k) {
  if (k == 0) throw ContractViolation("k must be >= 1");
  EvalOutcome result;
  auto items = resolve(store, gold, result.excluded);
  if (items.size() < k + 1) {
    throw ContractViolation("classification needs at least k+1 = " + std::to_string(k + 1) +
                            " labeled entities, got " + std::to_string(items.size()));
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::map<std::string, std::size_t> votes;
    for (std::size_t j : loo_neighbors(store, items, i, k)) ++votes[items[j].first->label];
    // std::map iterates labels in ascending order, so the first maximum wins ties.
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    if (best->first == items[i].first->label) ++correct;
  }
  result.evaluated = items.size();
  result.value = static_cast<double>(correct) / static_cast<double>(items.size());
  return result;
}

EvalOutcome knn_regress_loo(const EmbeddingStore& store, std::span<const NumericTarget> gold, std::size_t k) {
  if (k == 0) throw ContractViolation("k must be >= 1");
  EvalOutcome result;
  auto items = resolve(store, gold, result.excluded);
  if (items.size() < k + 1) {
    throw ContractViolation("regression needs at least k+1 = " + std::to_string(k + 1) +
                            " entities, got " + std::to_string(items.size()));
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto nn = loo_neighbors(store, items, i, k);
    double mean = 0.0;
    for (std::size_t j : nn) mean += items[j].first->value;
    mean /= static_cast<double>(nn.size());
    const double err = mean - items[i].first->value;
    sq += err * err;
  }
  result.evaluated = items.size();
  result.value = std::sqrt(sq / static_cast<double>(items.size()));
  return result;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

KMeansResult kmeans_once(std::span<const std::vector<double>> points, std::size_t k, Rng& rng,
                         std::size_t max_iterations) {
  const std::size_t n = points.size();
  KMeansResult r;
  // k-means++ seeding.
  r.centroids.push_back(points[uniform_index(rng, n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], r.centroids[0]);
  while (r.centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = uniform_index(rng, n);
    } else {
      double u = uniform_unit(rng) * total;
      for (pick = 0; pick + 1 < n; ++pick) {
        if (u < d2[pick]) break;
        u -= d2[pick];
      }
    }
    r.centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], r.centroids.back()));
  }

  r.assignment.assign(n, k);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(points[i], r.centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(points[i], r.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (r.assignment[i] != best) {
        r.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    const std::size_t dim = points[0].size();
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++sizes[r.assignment[i]];
      for (std::size_t j = 0; j < dim; ++j) sums[r.assignment[i]][j] += points[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) {
        // Empty cluster: move it onto the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = squared_distance(points[i], r.centroids[r.assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        r.centroids[c] = points[far];
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j) r.centroids[c][j] = sums[c][j] / static_cast<double>(sizes[c]);
    }
  }
  r.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) r.inertia += squared_distance(points[i], r.centroids[r.assignment[i]]);
  return r;
}

// Minimum-cost perfect assignment on a square matrix (Hungarian method,
// potentials formulation). Returns column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

KMeansResult kmeans(std::span<const std::vector<double>> points, std::size_t k, std::size_t restarts,
                    std::uint64_t seed, std::size_t max_iterations) {
  if (k == 0) throw ContractViolation("k must be >= 1");
  if (k > points.size()) {
    throw ContractViolation("k = " + std::to_string(k) + " exceeds population " + std::to_string(points.size()));
  }
  Rng rng(sub_seed(seed, "kmeans"));
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, restarts); ++r) {
    KMeansResult cur = kmeans_once(points, k, rng, max_iterations);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

double matched_accuracy(std::span<const std::size_t> clusters, std::span<const std::size_t> labels) {
  if (clusters.size() != labels.size()) throw ContractViolation("cluster/label length mismatch");
  if (clusters.empty()) return 0.0;
  const std::size_t n = std::max(*std::max_element(clusters.begin(), clusters.end()),
                                 *std::max_element(labels.begin(), labels.end())) + 1;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < clusters.size(); ++i) cost[clusters[i]][labels[i]] -= 1.0;
  auto match = hungarian(cost);
  double matched = 0.0;
  for (std::size_t r = 0; r < n; ++r) matched -= cost[r][match[r]];
  return matched / static_cast<double>(clusters.size());
}

EvalOutcome kmeans_cluster_accuracy(const EmbeddingStore& store, std::span<const LabeledEntity> gold,
                                    std::size_t k, std::size_t restarts, std::uint64_t seed) {
  EvalOutcome result;
  auto items = resolve(store, gold, result.excluded);
  std::map<std::string, std::size_t> label_ids;
  for (const auto& [item, idx] : items) label_ids.emplace(item->label, 0);
  std::size_t next = 0;
  for (auto& [label, id] : label_ids) id = next++;
  if (k != label_ids.size()) {
    throw ContractViolation("k = " + std::to_string(k) + " differs from the " + std::to_string(label_ids.size()) +
                            " gold classes");
  }
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> labels;
  for (const auto& [item, idx] : items) {
    auto v = store.vector(idx);
    points.emplace_back(v.begin(), v.end());
    labels.push_back(label_ids.at(item->label));
  }
  KMeansResult km = kmeans(points, k, restarts, seed);
  result.evaluated = items.size();
  result.value = matched_accuracy(km.assignment, labels);
  return result;
}

EvalOutcome analogy_accuracy(const EmbeddingStore& store, std::span<const AnalogyQuad> quads) {
  if (quads.empty()) throw ContractViolation("analogy evaluation needs at least one quad");
  EvalOutcome result;
  std::size_t correct = 0;
  for (const auto& q : quads) {
    if (!store.contains(q.a) || !store.contains(q.a_star) || !store.contains(q.b) || !store.contains(q.b_star)) {
      result.excluded.push_back(q.a + " " + q.a_star + " " + q.b + " " + q.b_star);
      continue;
    }
    auto top = store.analogy(q.a, q.a_star, q.b, 1);
    if (!top.empty() && top[0].token == q.b_star) ++correct;
  }
  result.evaluated = quads.size();
  result.value = static_cast<double>(correct) / static_cast<double>(quads.size());
  return result;
}

double kendall_tau(std::span<const std::string> gold, std::span<const std::string> predicted) {
  if (gold.size() != predicted.size()) throw ContractViolation("kendall_tau: rankings differ in length");
  std::map<std::string_view, std::size_t> pos;
  for (std::size_t i = 0; i < predicted.size(); ++i) pos.emplace(predicted[i], i);
  if (pos.size() != predicted.size()) throw ContractViolation("kendall_tau: duplicate tokens");
  std::vector<std::size_t> rank;
  for (const auto& t : gold) {
    auto it = pos.find(t);
    if (it == pos.end()) throw ContractViolation("kendall_tau: token sets differ (" + t + ")");
    rank.push_back(it->second);
  }
  const std::size_t n = rank.size();
  if (n < 2) throw ContractViolation("kendall_tau needs at least 2 items");
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rank[i] < rank[j]) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  return static_cast<double>(concordant - discordant) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::vector<std::string> rank_by_cosine(const EmbeddingStore& store, const std::string& anchor,
                                        std::span<const std::string> comparisons) {
  auto av = store.vector(anchor);
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& c : comparisons) scored.emplace_back(cosine(av, store.vector(c)).score, c);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (auto& [s, t] : scored) out.push_back(std::move(t));
  return out;
}

EvalOutcome relatedness_tau(const EmbeddingStore& store, std::span<const GoldRanking> rankings) {
  EvalOutcome result;
  double sum = 0.0;
  for (const auto& r : rankings) {
    bool present = store.contains(r.anchor);
    for (const auto& t : r.ranked) present = present && store.contains(t);
    if (!present) {
      result.excluded.push_back(r.anchor);
      continue;
    }
    sum += kendall_tau(r.ranked, rank_by_cosine(store, r.anchor, r.ranked));
    ++result.evaluated;
  }
  if (result.evaluated == 0) throw NumericError("no ranking could be evaluated");
  result.value = sum / static_cast<double>(result.evaluated);
  return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("pearson needs two equal-length series (n >= 2)");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericError("correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double correlation_harmonic_mean(std::span<const double> predicted, std::span<const double> gold) {
  const double r = pearson(predicted, gold);
  const double rho = spearman(predicted, gold);
  if (r * rho < 0.0 || r + rho == 0.0) {
    throw NumericError("harmonic mean undefined: r = " + std::to_string(r) + ", rho = " + std::to_string(rho));
  }
  return 2.0 * r * rho / (r + rho);
}

EvalOutcome document_similarity(const EmbeddingStore& store, std::span<const DocumentPair> pairs) {
  EvalOutcome result;
  auto doc_vector = [&](const std::vector<WeightedEntity>& doc, std::vector<double>& out) {
    out.assign(store.dim(), 0.0);
    double total = 0.0;
    for (const auto& e : doc) {
      auto i = store.index_of(e.token);
      if (!i) {
        result.excluded.push_back(e.token);
        continue;
      }
      auto v = store.vector(*i);
      for (std::size_t j = 0; j < v.size(); ++j) out[j] += e.weight * v[j];
      total += e.weight;
    }
    if (total <= 0.0) return false;
    for (double& x : out) x /= total;
    return true;
  };

  std::vector<double> predicted, gold;
  std::vector<double> a, b;
  for (const auto& p : pairs) {
    if (!doc_vector(p.first, a) || !doc_vector(p.second, b)) continue;
    predicted.push_back(cosine(a, b).score);
    gold.push_back(p.gold);
  }
  if (predicted.size() < 2) throw NumericError("document similarity needs at least 2 evaluable pairs");
  result.evaluated = predicted.size();
  result.value = correlation_harmonic_mean(predicted, gold);
  return result;
}

}  // namespace kgwalk
