#include <cctype>
#include <fstream>
#include <sstream>

#include "kgwalk/errors.hpp"
#include "kgwalk/graph.hpp"
#include "kgwalk/text_io.hpp"

namespace kgwalk {

namespace {

enum class TermKind { kIri, kBlank, kLiteral };

struct Term {
  TermKind kind;
  std::string lexical;
};

bool is_absolute_iri(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    char c = iri[i];
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return false;
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_no_, std::string(s_), what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() const { return pos_ >= s_.size(); }

  Term subject() {
    skip_ws();
    if (peek() == '<') return iri();
    if (s_.substr(pos_, 2) == "_:") return blank();
    fail("expected IRI or blank node as subject");
  }

  Term predicate() {
    skip_ws();
    if (peek() == '<') return iri();
    fail("expected IRI as predicate");
  }

  Term object() {
    skip_ws();
    if (peek() == '<') return iri();
    if (s_.substr(pos_, 2) == "_:") return blank();
    if (peek() == '"') return literal();
    fail("expected IRI, blank node or literal as object");
  }

  void terminator() {
    skip_ws();
    if (peek() != '.') fail("missing terminating '.'");
    ++pos_;
    skip_ws();
    if (!at_end() && s_[pos_] != '#') fail("trailing characters after '.'");
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  Term iri() {
    std::size_t start = ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      unsigned char c = static_cast<unsigned char>(s_[pos_]);
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`') {
        fail("invalid character in IRI");
      }
      ++pos_;
    }
    if (pos_ >= s_.size()) fail("unterminated IRI");
    std::string_view body = s_.substr(start, pos_ - start);
    ++pos_;
    if (!is_absolute_iri(body)) fail("IRI is not absolute: <" + std::string(body) + ">");
    return {TermKind::kIri, std::string(body)};
  }

  Term blank() {
    std::size_t start = pos_;
    pos_ += 2;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
    // A label directly followed by the terminator, as in "_:b.", keeps the dot out.
    if (pos_ > start + 2 && s_[pos_ - 1] == '.' && pos_ == s_.size()) --pos_;
    if (pos_ == start + 2) fail("empty blank node label");
    return {TermKind::kBlank, std::string(s_.substr(start, pos_ - start))};
  }

  Term literal() {
    std::size_t start = pos_++;
    bool closed = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("dangling escape in literal");
        ++pos_;
      } else if (c == '"') {
        closed = true;
        break;
      }
    }
    if (!closed) fail("unterminated literal");
    if (peek() == '@') {
      ++pos_;
      std::size_t tag = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ == tag) fail("empty language tag");
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (peek() != '<') fail("expected datatype IRI");
      iri();
    }
    // Tokens must be whitespace-free; N-Triples permits \u escapes.
    std::string lexical;
    for (char c : s_.substr(start, pos_ - start)) {
      if (c == ' ') {
        lexical += "\\u0020";
      } else {
        lexical += c;
      }
    }
    return {TermKind::kLiteral, std::move(lexical)};
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

struct Loader {
  explicit Loader(const ParseOptions& options) : options_(options) {}

  void line(std::string_view text, std::size_t line_no) {
    std::size_t first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || text[first] == '#') return;
    LineParser p(text, line_no);
    Term s = p.subject();
    Term pr = p.predicate();
    Term o = p.object();
    p.terminator();

    // The subject is materialized even when its triple is dropped.
    EntityId sid = builder_.add_entity(s.lexical);
    if (o.kind == TermKind::kLiteral && options_.skip_literals) return;
    for (const auto& excluded : options_.excluded_predicates) {
      if (excluded == pr.lexical) return;
    }
    PredicateId pid = builder_.add_predicate(pr.lexical);
    EntityId oid = builder_.add_entity(o.lexical);
    builder_.add_triple(sid, pid, oid);
  }

  const ParseOptions& options_;
  KnowledgeGraph::Builder builder_;
};

std::string format_term(const std::string& lexical) {
  if (lexical.starts_with("_:") || lexical.starts_with("\"")) return lexical;
  return "<" + lexical + ">";
}

}  // namespace

KnowledgeGraph parse_ntriples(std::istream& in, const ParseOptions& options) {
  Loader loader(options);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) loader.line(line, ++line_no);
  return std::move(loader.builder_).build();
}

KnowledgeGraph parse_ntriples(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in, options);
}

KnowledgeGraph load_ntriples(const std::filesystem::path& path, const ParseOptions& options) {
  Loader loader(options);
  LineReader reader(path);
  while (auto line = reader.next()) loader.line(*line, reader.line_number());
  return std::move(loader.builder_).build();
}

KnowledgeGraph load_ntriples(std::span<const std::filesystem::path> paths, const ParseOptions& options) {
  Loader loader(options);
  for (const auto& path : paths) {
    LineReader reader(path);
    while (auto line = reader.next()) loader.line(*line, reader.line_number());
  }
  return std::move(loader.builder_).build();
}

void write_ntriples(const KnowledgeGraph& g, std::ostream& out) {
  for (const Triple& t : g.edges()) {
    out << format_term(g.entity_name(t.subject)) << " <" << g.predicate_name(t.predicate) << "> "
        << format_term(g.entity_name(t.object)) << " .\n";
  }
}

std::string to_ntriples(const KnowledgeGraph& g) {
  std::ostringstream out;
  write_ntriples(g, out);
  return out.str();
}

}  // namespace kgwalk
