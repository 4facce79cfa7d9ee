#include "kgwalk/gold.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "kgwalk/errors.hpp"

namespace kgwalk {

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool skippable(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string_view> fields(std::string_view s, std::string_view separators) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find_first_of(separators, pos);
    if (next == std::string_view::npos) next = s.size();
    if (next > pos) out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

double to_number(std::string_view s, std::size_t line, std::string_view context) {
  std::string tmp(trim(s));
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string(context), "invalid number '" + tmp + "'");
  }
  return v;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<LabeledEntity> parse_labels(std::string_view text) {
  std::vector<LabeledEntity> out;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    auto f = fields(lines[i], "\t");
    if (f.size() != 2) throw ParseError(i + 1, std::string(lines[i]), "expected token<TAB>label");
    out.push_back({std::string(trim(f[0])), std::string(trim(f[1]))});
  }
  return out;
}

std::string format_labels(const std::vector<LabeledEntity>& labels) {
  std::string out;
  for (const auto& l : labels) out += l.token + "\t" + l.label + "\n";
  return out;
}

std::vector<NumericTarget> parse_numeric(std::string_view text) {
  std::vector<NumericTarget> out;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    auto f = fields(lines[i], "\t");
    if (f.size() != 2) throw ParseError(i + 1, std::string(lines[i]), "expected token<TAB>number");
    out.push_back({std::string(trim(f[0])), to_number(f[1], i + 1, lines[i])});
  }
  return out;
}

std::string format_numeric(const std::vector<NumericTarget>& targets) {
  std::string out;
  for (const auto& t : targets) out += t.token + "\t" + number(t.value) + "\n";
  return out;
}

std::vector<GoldRanking> parse_rankings(std::string_view text) {
  std::vector<GoldRanking> out;
  auto lines = lines_of(text);
  GoldRanking current;
  bool open = false;
  std::size_t start_line = 0;
  auto close = [&](std::size_t line) {
    if (!open) return;
    if (current.ranked.size() < 2) {
      throw ParseError(start_line, current.anchor, "ranking needs at least 2 compared tokens");
    }
    std::set<std::string> unique(current.ranked.begin(), current.ranked.end());
    if (unique.size() != current.ranked.size()) {
      throw ParseError(line, current.anchor, "ranking contains duplicate tokens");
    }
    out.push_back(std::move(current));
    current = {};
    open = false;
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto t = trim(lines[i]);
    if (t.empty()) {
      close(i + 1);
      continue;
    }
    if (t.front() == '#') continue;
    if (!open) {
      current.anchor = std::string(t);
      open = true;
      start_line = i + 1;
    } else {
      current.ranked.emplace_back(t);
    }
  }
  close(lines.size());
  return out;
}

std::string format_rankings(const std::vector<GoldRanking>& rankings) {
  std::string out;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    if (i > 0) out += "\n";
    out += rankings[i].anchor + "\n";
    for (const auto& t : rankings[i].ranked) out += t + "\n";
  }
  return out;
}

std::vector<AnalogyQuad> parse_quads(std::string_view text) {
  std::vector<AnalogyQuad> out;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    auto f = fields(lines[i], " \t");
    if (f.size() != 4) throw ParseError(i + 1, std::string(lines[i]), "expected 4 tokens");
    AnalogyQuad q{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3])};
    std::set<std::string> unique{q.a, q.a_star, q.b, q.b_star};
    if (unique.size() != 4) throw ParseError(i + 1, std::string(lines[i]), "quad tokens must be distinct");
    out.push_back(std::move(q));
  }
  return out;
}

std::string format_quads(const std::vector<AnalogyQuad>& quads) {
  std::string out;
  for (const auto& q : quads) out += q.a + " " + q.a_star + " " + q.b + " " + q.b_star + "\n";
  return out;
}

namespace {

std::vector<WeightedEntity> parse_document(std::string_view s, std::size_t line, std::string_view context) {
  std::vector<WeightedEntity> doc;
  for (std::string_view entry : fields(s, " \t")) {
    auto colon = entry.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw ParseError(line, std::string(context), "expected token:weight, got '" + std::string(entry) + "'");
    }
    double w = to_number(entry.substr(colon + 1), line, context);
    if (w < 0) throw ParseError(line, std::string(context), "negative weight");
    doc.push_back({std::string(entry.substr(0, colon)), w});
  }
  if (doc.empty()) throw ParseError(line, std::string(context), "document without entities");
  return doc;
}

}  // namespace

std::vector<DocumentPair> parse_document_pairs(std::string_view text) {
  std::vector<DocumentPair> out;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
      std::size_t bar = lines[i].find('|', pos);
      parts.push_back(lines[i].substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos));
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    if (parts.size() != 3) throw ParseError(i + 1, std::string(lines[i]), "expected 'docA | docB | score'");
    out.push_back({parse_document(parts[0], i + 1, lines[i]), parse_document(parts[1], i + 1, lines[i]),
                   to_number(parts[2], i + 1, lines[i])});
  }
  return out;
}

std::string format_document_pairs(const std::vector<DocumentPair>& pairs) {
  std::string out;
  auto doc = [](const std::vector<WeightedEntity>& d) {
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i > 0) s += ' ';
      s += d[i].token + ":" + number(d[i].weight);
    }
    return s;
  };
  for (const auto& p : pairs) out += doc(p.first) + " | " + doc(p.second) + " | " + number(p.gold) + "\n";
  return out;
}

}  // namespace kgwalk
