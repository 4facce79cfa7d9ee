#include "kgwalk/walk.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_set>

#include "kgwalk/errors.hpp"
#include "kgwalk/text_io.hpp"

namespace kgwalk {

std::string_view to_string(WalkMode mode) {
  switch (mode) {
    case WalkMode::kClassic:
      return "classic";
    case WalkMode::kPredicate:
      return "p";
    case WalkMode::kEntity:
      return "e";
  }
  return "?";
}

WalkMode parse_walk_mode(std::string_view name) {
  if (name == "classic") return WalkMode::kClassic;
  if (name == "p") return WalkMode::kPredicate;
  if (name == "e") return WalkMode::kEntity;
  throw ConfigError("invalid walk mode '" + std::string(name) + "', expected one of {classic,e,p}");
}

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw ConfigError("walks_per_node must be >= 1");
  if (backward_hops + forward_hops < 1) {
    throw ConfigError("backward_hops + forward_hops must be >= 1");
  }
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

Walk generate_centered_walk(const KnowledgeGraph& g, EntityId focus, const WalkConfig& cfg, Rng& rng) {
  if (focus.value >= g.num_entities()) {
    throw LookupError("focus entity " + std::to_string(focus.value) + " not in graph");
  }
  std::vector<Token> forward;
  EntityId tail = focus;
  for (std::size_t hop = 0; hop < cfg.forward_hops; ++hop) {
    auto out = g.out_edges(tail);
    if (out.empty()) break;
    const OutEdge& e = out[uniform_index(rng, out.size())];
    forward.push_back(Token::predicate(e.predicate));
    forward.push_back(Token::entity(e.object));
    tail = e.object;
  }
  // Built reversed: entity, predicate, entity, ... moving away from the focus.
  std::vector<Token> backward;
  EntityId head = focus;
  for (std::size_t hop = 0; hop < cfg.backward_hops; ++hop) {
    auto in = g.in_edges(head);
    if (in.empty()) break;
    const InEdge& e = in[uniform_index(rng, in.size())];
    backward.push_back(Token::predicate(e.predicate));
    backward.push_back(Token::entity(e.subject));
    head = e.subject;
  }

  Walk w;
  w.kind = WalkMode::kClassic;
  w.tokens.reserve(backward.size() + 1 + forward.size());
  w.tokens.assign(backward.rbegin(), backward.rend());
  w.focus_index = w.tokens.size();
  w.tokens.push_back(Token::entity(focus));
  w.tokens.insert(w.tokens.end(), forward.begin(), forward.end());
  return w;
}

namespace {

void require_classic(const Walk& w) {
  if (w.kind != WalkMode::kClassic) {
    throw ContractViolation("walk projection requires a classic walk, got kind '" +
                            std::string(to_string(w.kind)) + "'");
  }
  if (w.focus_index >= w.tokens.size() || !w.tokens[w.focus_index].is_entity()) {
    throw ContractViolation("classic walk focus does not point at an entity");
  }
}

}  // namespace

Walk derive_p_walk(const Walk& classic) {
  require_classic(classic);
  Walk out;
  out.kind = WalkMode::kPredicate;
  for (std::size_t i = 0; i < classic.tokens.size(); ++i) {
    if (i == classic.focus_index) {
      out.focus_index = out.tokens.size();
      out.tokens.push_back(classic.tokens[i]);
    } else if (!classic.tokens[i].is_entity()) {
      out.tokens.push_back(classic.tokens[i]);
    }
  }
  return out;
}

Walk derive_e_walk(const Walk& classic) {
  require_classic(classic);
  Walk out;
  out.kind = WalkMode::kEntity;
  for (std::size_t i = 0; i < classic.tokens.size(); ++i) {
    if (!classic.tokens[i].is_entity()) continue;
    if (i == classic.focus_index) out.focus_index = out.tokens.size();
    out.tokens.push_back(classic.tokens[i]);
  }
  return out;
}

Walk project(const Walk& classic, WalkMode mode) {
  switch (mode) {
    case WalkMode::kPredicate:
      return derive_p_walk(classic);
    case WalkMode::kEntity:
      return derive_e_walk(classic);
    case WalkMode::kClassic:
      break;
  }
  return classic;
}

std::string render_walk(const KnowledgeGraph& g, const Walk& w) {
  std::string line;
  for (std::size_t i = 0; i < w.tokens.size(); ++i) {
    if (i > 0) line += ' ';
    const Token& t = w.tokens[i];
    line += t.is_entity() ? g.entity_name(EntityId{t.id}) : g.predicate_name(PredicateId{t.id});
  }
  return line;
}

std::uint64_t entity_walk_seed(std::uint64_t seed, EntityId focus) {
  return mix_seed(seed, focus.value);
}

namespace {

struct WalkHash {
  std::size_t operator()(const std::vector<Token>& tokens) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (const Token& t : tokens) {
      h ^= (std::uint64_t{t.id} << 1) | static_cast<std::uint64_t>(t.kind);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct EntityWalks {
  std::vector<Walk> walks;
  std::size_t duplicates = 0;
};

EntityWalks generate_for_entity(const KnowledgeGraph& g, EntityId focus, const WalkConfig& cfg) {
  Rng rng(entity_walk_seed(cfg.seed, focus));
  EntityWalks result;
  std::unordered_set<std::vector<Token>, WalkHash> seen;
  for (std::size_t i = 0; i < cfg.walks_per_node; ++i) {
    Walk w = project(generate_centered_walk(g, focus, cfg, rng), cfg.mode);
    if (cfg.dedup && !seen.insert(w.tokens).second) {
      ++result.duplicates;
      continue;
    }
    result.walks.push_back(std::move(w));
  }
  return result;
}

}  // namespace

std::vector<Walk> walks_for_entity(const KnowledgeGraph& g, EntityId focus, const WalkConfig& cfg) {
  cfg.validate();
  return generate_for_entity(g, focus, cfg).walks;
}

CorpusStats extract_corpus(const KnowledgeGraph& g, const WalkConfig& cfg, std::ostream& out) {
  cfg.validate();
  CorpusStats stats;
  const std::size_t n = g.num_entities();
  if (n == 0) return stats;

  // Entities are processed in blocks so memory stays bounded; within a block
  // workers fill per-entity slots which are then written in handle order.
  constexpr std::size_t kBlock = 2048;
  const unsigned threads = std::max(1u, cfg.threads);
  std::vector<std::string> lines;
  std::vector<std::size_t> emitted;
  std::vector<std::size_t> dropped;

  for (std::size_t begin = 0; begin < n; begin += kBlock) {
    const std::size_t end = std::min(n, begin + kBlock);
    lines.assign(end - begin, {});
    emitted.assign(end - begin, 0);
    dropped.assign(end - begin, 0);
    std::atomic<std::size_t> next{begin};
    auto worker = [&] {
      for (std::size_t v = next++; v < end; v = next++) {
        EntityWalks ew = generate_for_entity(g, EntityId{static_cast<std::uint32_t>(v)}, cfg);
        std::string& buf = lines[v - begin];
        for (const Walk& w : ew.walks) {
          buf += render_walk(g, w);
          buf += '\n';
        }
        emitted[v - begin] = ew.walks.size();
        dropped[v - begin] = ew.duplicates;
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out << lines[i];
      if (!out) throw IoError("corpus sink write failed", stats.walks_emitted);
      stats.walks_emitted += emitted[i];
      stats.duplicates_dropped += dropped[i];
      ++stats.nodes_processed;
    }
  }
  out.flush();
  if (!out) throw IoError("corpus sink flush failed", stats.walks_emitted);
  return stats;
}

namespace {

class WriterBuf : public std::streambuf {
 public:
  explicit WriterBuf(AtomicWriter& w) : w_(w) { setp(buf_, buf_ + sizeof buf_); }
  int sync() override {
    w_.write(std::string_view(pbase(), static_cast<std::size_t>(pptr() - pbase())));
    setp(buf_, buf_ + sizeof buf_);
    return 0;
  }
  int_type overflow(int_type c) override {
    sync();
    if (!traits_type::eq_int_type(c, traits_type::eof())) {
      *pptr() = traits_type::to_char_type(c);
      pbump(1);
    }
    return traits_type::not_eof(c);
  }

 private:
  AtomicWriter& w_;
  char buf_[1 << 16];
};

}  // namespace

CorpusStats extract_corpus(const KnowledgeGraph& g, const WalkConfig& cfg,
                           const std::filesystem::path& path) {
  AtomicWriter writer(path);
  WriterBuf buf(writer);
  std::ostream out(&buf);
  CorpusStats stats = extract_corpus(g, cfg, out);
  out.flush();
  writer.commit();
  return stats;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t next = line.find(' ', pos);
    if (next == std::string_view::npos) next = line.size();
    if (next > pos) tokens.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return tokens;
}

}  // namespace kgwalk
