#pragma once
// Turtle-subset and N-Triples parsing with deterministic serialization.
//
// Supported Turtle: @prefix/@base (and SPARQL-style PREFIX/BASE), <IRIs>,
// prefixed names, `a`, `;` and `,` lists, "strings" with escapes, @lang,
// ^^datatype, integer/decimal/double/boolean shorthand, [] and [ p o ] blank nodes,
// _:labels and # comments. Collections and """long strings""" are rejected.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "halo/detail/lexer.hpp"
#include "halo/rdf.hpp"

namespace halo {

namespace detail {

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : in_(text) {}

  Graph parse() {
    while (true) {
      in_.skip_space();
      if (in_.eof()) break;
      statement();
    }
    rename_colliding_anonymous_nodes();
    return std::move(graph_);
  }

 private:
  void statement() {
    if (in_.peek() == '@') {
      in_.get();
      std::string kw = read_word(in_);
      if (kw == "prefix") {
        prefix_directive();
      } else if (kw == "base") {
        base_directive();
      } else {
        in_.fail("unknown directive '@" + kw + "'");
      }
      in_.skip_space();
      in_.expect('.', "'.' after directive");
      return;
    }
    if (keyword_ahead("PREFIX")) {
      for (int i = 0; i < 6; ++i) in_.get();
      prefix_directive();
      return;
    }
    if (keyword_ahead("BASE")) {
      for (int i = 0; i < 4; ++i) in_.get();
      base_directive();
      return;
    }
    triples();
    in_.skip_space();
    in_.expect('.', "'.' at end of statement");
  }

  bool keyword_ahead(std::string_view kw) const {
    return in_.starts_with_nocase(kw) && !is_name_char(in_.peek(kw.size())) && in_.peek(kw.size()) != ':';
  }

  void prefix_directive() {
    in_.skip_space();
    std::string prefix;
    if (std::isalpha(static_cast<unsigned char>(in_.peek()))) {
      while (is_name_char(in_.peek()) || (in_.peek() == '.' && is_name_char(in_.peek(1))))
        prefix += in_.get();
    }
    in_.expect(':', "':' in prefix declaration");
    in_.skip_space();
    Iri ns = iri_ref();
    graph_.prefixes().add(std::move(prefix), std::move(ns));
  }

  void base_directive() {
    in_.skip_space();
    base_ = iri_ref().str();
  }

  void triples() {
    if (in_.peek() == '[') {
      Term subject = blank_node_property_list();
      in_.skip_space();
      if (in_.peek() != '.') predicate_object_list(subject);
      return;
    }
    Term subject = subject_term();
    in_.skip_space();
    predicate_object_list(subject);
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      in_.skip_space();
      Iri predicate = verb();
      object_list(subject, predicate);
      in_.skip_space();
      if (!in_.consume(';')) return;
      // Repeated or trailing ';' is allowed.
      while (true) {
        in_.skip_space();
        if (!in_.consume(';')) break;
      }
      in_.skip_space();
      if (in_.peek() == '.' || in_.peek() == ']' || in_.eof()) return;
    }
  }

  void object_list(const Term& subject, const Iri& predicate) {
    while (true) {
      in_.skip_space();
      Term o = object_term();
      graph_.insert(subject, predicate, std::move(o));
      in_.skip_space();
      if (!in_.consume(',')) return;
    }
  }

  Iri verb() {
    if (in_.peek() == 'a' && !is_name_char(in_.peek(1)) && in_.peek(1) != ':' && in_.peek(1) != '.') {
      in_.get();
      return vocab::rdf_type();
    }
    if (in_.peek() == '<') return iri_ref();
    if (starts_prefixed_name()) return prefixed_name();
    in_.fail("expected predicate");
  }

  Term subject_term() {
    char c = in_.peek();
    if (c == '<') return iri_ref();
    if (c == '_' && in_.peek(1) == ':') return labelled_blank();
    if (c == '(') in_.fail("collections are not supported");
    if (starts_prefixed_name()) return prefixed_name();
    in_.fail("expected subject");
  }

  Term object_term() {
    char c = in_.peek();
    if (c == '<') return iri_ref();
    if (c == '_' && in_.peek(1) == ':') return labelled_blank();
    if (c == '[') return blank_node_property_list();
    if (c == '(') in_.fail("collections are not supported");
    if (c == '"') return string_literal();
    if (c == '\'') in_.fail("single-quoted strings are not supported");
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(in_.peek(1)))))
      return number();
    if (starts_prefixed_name()) return prefixed_name();
    for (std::string_view b : {"true", "false"})
      if (in_.starts_with(b) && !is_name_char(in_.peek(b.size())) && in_.peek(b.size()) != ':') {
        for (std::size_t i = 0; i < b.size(); ++i) in_.get();
        return Literal(std::string(b), vocab::xsd_boolean());
      }
    in_.fail("expected object");
  }

  bool starts_prefixed_name() const {
    if (in_.peek() == ':') return true;
    if (!std::isalpha(static_cast<unsigned char>(in_.peek()))) return false;
    std::size_t i = 0;
    while (is_name_char(in_.peek(i)) || (in_.peek(i) == '.' && is_name_char(in_.peek(i + 1)))) ++i;
    return in_.peek(i) == ':';
  }

  Iri prefixed_name() {
    std::size_t line = in_.line(), col = in_.column();
    PrefixedName pn = read_prefixed_name(in_);
    const Iri* ns = graph_.prefixes().find(pn.prefix);
    if (ns == nullptr) throw ParseError(line, col, "undefined prefix '" + pn.prefix + "'");
    return make_iri(ns->str() + pn.local, line, col);
  }

  Iri iri_ref() {
    std::size_t line = in_.line(), col = in_.column();
    std::string raw = read_iriref(in_);
    if (Iri::is_valid(raw)) return Iri(std::move(raw));
    if (base_.empty()) throw ParseError(line, col, "relative IRI <" + raw + "> without @base");
    return make_iri(resolve(raw), line, col);
  }

  static Iri make_iri(std::string value, std::size_t line, std::size_t col) {
    if (!Iri::is_valid(value)) throw ParseError(line, col, "invalid IRI '" + value + "'");
    return Iri(std::move(value));
  }

  std::string resolve(const std::string& rel) const {
    if (rel.empty()) return base_.substr(0, base_.find('#'));
    if (rel.front() == '#') return base_.substr(0, base_.find('#')) + rel;
    if (rel.front() == '/') {
      auto scheme_end = base_.find("://");
      auto path_start = base_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
      return base_.substr(0, path_start) + rel;
    }
    auto slash = base_.rfind('/');
    return base_.substr(0, slash + 1) + rel;
  }

  Term labelled_blank() {
    in_.get();
    in_.get();
    std::string label = read_blank_label(in_);
    labels_.insert(label);
    return Term::blank(std::move(label));
  }

  Term fresh_blank() {
    std::string id = "anon" + std::to_string(anon_.size());
    anon_.push_back(id);
    return Term::blank(std::move(id));
  }

  Term blank_node_property_list() {
    in_.expect('[', "'['");
    Term node = fresh_blank();
    in_.skip_space();
    if (in_.consume(']')) return node;
    predicate_object_list(node);
    in_.skip_space();
    in_.expect(']', "']'");
    return node;
  }

  Term string_literal() {
    std::size_t line = in_.line(), col = in_.column();
    std::string lexical = read_quoted(in_);
    try {
      if (in_.peek() == '@') {
        in_.get();
        return Literal::lang_string(std::move(lexical), read_langtag(in_));
      }
      if (in_.peek() == '^' && in_.peek(1) == '^') {
        in_.get();
        in_.get();
        Iri dt = in_.peek() == '<' ? iri_ref() : prefixed_name();
        return Literal(std::move(lexical), std::move(dt));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line, col, e.what());
    }
    return Literal(std::move(lexical));
  }

  Term number() {
    std::string lex;
    if (in_.peek() == '+' || in_.peek() == '-') lex += in_.get();
    auto digits = [&] {
      std::size_t n = 0;
      while (std::isdigit(static_cast<unsigned char>(in_.peek()))) {
        lex += in_.get();
        ++n;
      }
      return n;
    };
    std::size_t int_digits = digits();
    bool decimal = false, exponent = false;
    if (in_.peek() == '.' && std::isdigit(static_cast<unsigned char>(in_.peek(1)))) {
      lex += in_.get();
      digits();
      decimal = true;
    } else if (int_digits == 0) {
      in_.fail("malformed number");
    }
    if (in_.peek() == 'e' || in_.peek() == 'E') {
      lex += in_.get();
      if (in_.peek() == '+' || in_.peek() == '-') lex += in_.get();
      if (digits() == 0) in_.fail("malformed exponent");
      exponent = true;
    }
    const Iri& dt = exponent ? vocab::xsd_double() : decimal ? vocab::xsd_decimal() : vocab::xsd_integer();
    return Literal(std::move(lex), dt);
  }

  // Anonymous nodes get ids "anonN"; if the document also used such a label,
  // the anonymous ones are renamed.
  void rename_colliding_anonymous_nodes() {
    bool collision = std::any_of(anon_.begin(), anon_.end(), [&](const auto& id) { return labels_.contains(id); });
    if (!collision) return;
    std::map<std::string, std::string> rename;
    std::set<std::string> taken = labels_;
    taken.insert(anon_.begin(), anon_.end());
    for (const auto& id : anon_) {
      std::string candidate = id;
      while (taken.contains(candidate)) candidate += "x";
      taken.insert(candidate);
      rename.emplace(id, candidate);
    }
    std::set<std::string> anon_set(anon_.begin(), anon_.end());
    auto map = [&](const Term& t) -> Term {
      if (t.is_blank() && anon_set.contains(t.as_blank().id)) return Term::blank(rename.at(t.as_blank().id));
      return t;
    };
    Graph renamed;
    renamed.prefixes() = graph_.prefixes();
    for (const auto& t : graph_) renamed.insert(map(t.subject), t.predicate, map(t.object));
    graph_ = std::move(renamed);
  }

  Cursor in_;
  Graph graph_;
  std::string base_;
  std::set<std::string> labels_;
  std::vector<std::string> anon_;
};

class TurtleWriter {
 public:
  explicit TurtleWriter(const Graph& g) : g_(g) { number_blank_nodes(); }

  std::string write() {
    std::string out;
    for (const auto& [prefix, ns] : g_.prefixes()) out += "@prefix " + prefix + ": <" + ns.str() + "> .\n";
    if (g_.empty()) return out;
    if (!g_.prefixes().empty()) out += '\n';

    std::map<Term, std::vector<const Triple*>> by_subject;
    for (const auto& t : g_) by_subject[t.subject].push_back(&t);

    std::vector<std::pair<std::string, const std::vector<const Triple*>*>> iri_blocks;
    std::vector<std::pair<std::size_t, const std::vector<const Triple*>*>> blank_blocks;
    for (const auto& [subject, triples] : by_subject) {
      if (subject.is_iri())
        iri_blocks.emplace_back(term(subject), &triples);
      else
        blank_blocks.emplace_back(blank_numbers_.at(subject.as_blank().id), &triples);
    }
    std::sort(iri_blocks.begin(), iri_blocks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(blank_blocks.begin(), blank_blocks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    bool first = true;
    auto emit = [&](const std::string& subject, const std::vector<const Triple*>& triples) {
      if (!first) out += '\n';
      first = false;
      out += block(subject, triples);
    };
    for (const auto& [s, triples] : iri_blocks) emit(s, *triples);
    for (const auto& [n, triples] : blank_blocks) emit("_:b" + std::to_string(n), *triples);
    return out;
  }

  std::string term(const Term& t) const {
    if (const Iri* iri = t.if_iri()) return iri_text(*iri);
    if (t.is_blank()) return "_:b" + std::to_string(blank_numbers_.at(t.as_blank().id));
    const Literal& l = t.as_literal();
    std::string out = "\"" + escape_string(l.lexical()) + "\"";
    if (l.has_lang()) return out + "@" + l.lang();
    if (l.datatype() != vocab::xsd_string()) out += "^^" + iri_text(l.datatype());
    return out;
  }

 private:
  std::string iri_text(const Iri& iri) const {
    if (auto pn = g_.prefixes().compact(iri)) return *pn;
    return "<" + iri.str() + ">";
  }

  std::string block(const std::string& subject, const std::vector<const Triple*>& triples) const {
    std::map<std::string, std::vector<std::string>> by_predicate;
    std::vector<std::string> types;
    for (const Triple* t : triples) {
      if (t->predicate == vocab::rdf_type())
        types.push_back(term(t->object));
      else
        by_predicate[t->predicate.str()].push_back(term(t->object));
    }
    std::vector<std::pair<std::string, std::vector<std::string>>> lines;
    if (!types.empty()) lines.emplace_back("a", std::move(types));
    for (auto& [p, objects] : by_predicate) lines.emplace_back(iri_text(Iri(p)), std::move(objects));

    std::string out = subject;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto& [p, objects] = lines[i];
      std::sort(objects.begin(), objects.end());
      out += i == 0 ? " " : "    ";
      out += p + " ";
      for (std::size_t j = 0; j < objects.size(); ++j) {
        if (j > 0) out += ", ";
        out += objects[j];
      }
      out += i + 1 == lines.size() ? " .\n" : " ;\n";
    }
    return out;
  }

  // Subject blank nodes first, then object-only ones; each group ordered by
  // (label length, label) so "b2" precedes "b10".
  void number_blank_nodes() {
    auto natural = [](const std::string& a, const std::string& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    };
    std::set<std::string, decltype(natural)> subjects(natural), objects(natural);
    for (const auto& t : g_) {
      if (t.subject.is_blank()) subjects.insert(t.subject.as_blank().id);
    }
    for (const auto& t : g_) {
      if (t.object.is_blank() && !subjects.contains(t.object.as_blank().id)) objects.insert(t.object.as_blank().id);
    }
    std::size_t n = 0;
    for (const auto& id : subjects) blank_numbers_.emplace(id, n++);
    for (const auto& id : objects) blank_numbers_.emplace(id, n++);
  }

  const Graph& g_;
  std::map<std::string, std::size_t> blank_numbers_;
};

inline std::string ntriples_term(const Term& t) {
  if (const Iri* iri = t.if_iri()) return "<" + iri->str() + ">";
  if (t.is_blank()) return "_:" + t.as_blank().id;
  const Literal& l = t.as_literal();
  std::string out = "\"" + escape_string(l.lexical()) + "\"";
  if (l.has_lang()) return out + "@" + l.lang();
  if (l.datatype() != vocab::xsd_string()) out += "^^<" + l.datatype().str() + ">";
  return out;
}

class NTriplesParser {
 public:
  explicit NTriplesParser(std::string_view text) : in_(text) {}

  Graph parse() {
    while (!in_.eof()) {
      in_.skip_blanks();
      if (in_.eof()) break;
      if (in_.peek() == '\n') {
        in_.get();
        continue;
      }
      if (in_.peek() == '#') {
        skip_to_eol();
        continue;
      }
      line();
    }
    return std::move(graph_);
  }

 private:
  void line() {
    Term s = in_.peek() == '<' ? Term(iri()) : blank();
    in_.skip_blanks();
    Iri p = iri();
    in_.skip_blanks();
    Term o = object();
    in_.skip_blanks();
    in_.expect('.', "'.' at end of triple");
    in_.skip_blanks();
    if (in_.peek() == '#') skip_to_eol();
    if (!in_.eof() && !in_.consume('\n')) in_.fail("expected end of line");
    graph_.insert(std::move(s), std::move(p), std::move(o));
  }

  void skip_to_eol() {
    while (!in_.eof() && in_.peek() != '\n') in_.get();
  }

  Iri iri() {
    std::size_t line = in_.line(), col = in_.column();
    if (in_.peek() != '<') in_.fail("expected IRI");
    std::string raw = read_iriref(in_);
    if (!Iri::is_valid(raw)) throw ParseError(line, col, "expected absolute IRI, got <" + raw + ">");
    return Iri(std::move(raw));
  }

  Term blank() {
    if (in_.peek() != '_' || in_.peek(1) != ':') in_.fail("expected IRI or blank node");
    in_.get();
    in_.get();
    return Term::blank(read_blank_label(in_));
  }

  Term object() {
    if (in_.peek() == '<') return iri();
    if (in_.peek() == '_') return blank();
    if (in_.peek() != '"') in_.fail("expected object");
    std::size_t line = in_.line(), col = in_.column();
    std::string lexical = read_quoted(in_);
    try {
      if (in_.consume('@')) return Literal::lang_string(std::move(lexical), read_langtag(in_));
      if (in_.peek() == '^' && in_.peek(1) == '^') {
        in_.get();
        in_.get();
        return Literal(std::move(lexical), iri());
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line, col, e.what());
    }
    return Literal(std::move(lexical));
  }

  Cursor in_;
  Graph graph_;
};

}  // namespace detail

inline Graph parse_turtle(std::string_view text) { return detail::TurtleParser(text).parse(); }

// Prefix lines sorted by prefix, then one block per subject: IRIs (by
// rendered form) before blank nodes (renumbered _:b0, _:b1, ...). Inside a
// block rdf:type comes first as `a`, then predicates by IRI, objects sorted.
inline std::string serialize_turtle(const Graph& graph) { return detail::TurtleWriter(graph).write(); }

inline Graph parse_ntriples(std::string_view text) { return detail::NTriplesParser(text).parse(); }

inline std::string serialize_ntriples(const Graph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.size());
  for (const auto& t : graph)
    lines.push_back(detail::ntriples_term(t.subject) + " <" + t.predicate.str() + "> " +
                    detail::ntriples_term(t.object) + " .\n");
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

}  // namespace halo
