#pragma once
// SELECT-query subset of SPARQL: basic graph patterns with FILTER, COUNT
// aggregates, GROUP BY, ORDER BY, DISTINCT and LIMIT.
//
// Output rows are always in a deterministic order: ORDER BY keys first, then
// the projected row itself (which is the whole order when ORDER BY is
// absent).

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "halo/detail/lexer.hpp"
#include "halo/rdf.hpp"

namespace halo::sparql {

class UnsupportedFeature : public ParseError {
 public:
  UnsupportedFeature(std::size_t line, std::size_t column, std::string feature)
      : ParseError(line, column, "unsupported feature: " + feature), feature_(std::move(feature)) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct FilterExpr {
  enum class Kind { Or, And, Not, Compare, Variable, Constant };

  Kind kind = Kind::Constant;
  CompareOp op = CompareOp::Eq;
  std::vector<FilterExpr> args;
  std::string variable;
  std::optional<Term> constant;

  void collect_variables(std::set<std::string>& out) const {
    if (kind == Kind::Variable) out.insert(variable);
    for (const auto& a : args) a.collect_variables(out);
  }
};

struct Bgp {
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
};

struct Aggregate {
  bool distinct = false;
  std::optional<std::string> target;  // nullopt is COUNT(*)
  std::string alias;
};

using Projection = std::variant<Variable, Aggregate>;

struct OrderKey {
  std::string name;
  bool descending = false;
};

struct Query {
  PrefixMap prefixes;
  bool distinct = false;
  std::vector<Projection> projection;
  Bgp where;
  std::vector<std::string> group_by;
  std::vector<OrderKey> order_by;
  std::optional<std::size_t> limit;

  bool has_aggregate() const {
    return std::any_of(projection.begin(), projection.end(),
                       [](const Projection& p) { return std::holds_alternative<Aggregate>(p); });
  }
  std::vector<std::string> column_names() const {
    std::vector<std::string> out;
    for (const auto& p : projection)
      out.push_back(std::holds_alternative<Variable>(p) ? std::get<Variable>(p).name : std::get<Aggregate>(p).alias);
    return out;
  }
  // Pattern variables in order of first appearance.
  std::vector<std::string> pattern_variables() const {
    std::vector<std::string> out;
    auto add = [&](const PatternTerm& t) {
      if (const auto* v = std::get_if<Variable>(&t))
        if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    };
    for (const auto& p : where.patterns) {
      add(p.subject);
      add(p.predicate);
      add(p.object);
    }
    return out;
  }
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<Term>>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error("no result column '" + std::string(name) + "'");
  }
};

// ---------------------------------------------------------------------------
// Term order and filter comparison

// Total order used by ORDER BY, grouping and row tie-breaking: unbound <
// blank nodes < IRIs < literals; numeric literals (by value) before other
// literals; remaining ties by lexical form, datatype and language.
inline std::strong_ordering order_terms(const Term* a, const Term* b) {
  if (a == nullptr || b == nullptr) return (a != nullptr) <=> (b != nullptr);
  auto rank = [](const Term& t) { return t.is_blank() ? 0 : t.is_iri() ? 1 : 2; };
  if (auto c = rank(*a) <=> rank(*b); c != 0) return c;
  if (a->is_blank()) return a->as_blank() <=> b->as_blank();
  if (a->is_iri()) return a->as_iri() <=> b->as_iri();
  const Literal& x = a->as_literal();
  const Literal& y = b->as_literal();
  auto xv = x.numeric_value(), yv = y.numeric_value();
  if (xv.has_value() != yv.has_value()) return yv.has_value() <=> xv.has_value();
  if (xv && *xv != *yv) return *xv < *yv ? std::strong_ordering::less : std::strong_ordering::greater;
  return x <=> y;
}

inline std::strong_ordering order_terms(const std::optional<Term>& a, const std::optional<Term>& b) {
  return order_terms(a ? &*a : nullptr, b ? &*b : nullptr);
}

// Filter comparison. Numeric literals compare by value, xsd:date literals by
// date, other literal pairs by lexical form and IRI pairs by string. Mixed
// kinds, and numeric or date literals against any other literal, are unequal
// and unordered. nullopt is a type error.
inline std::optional<bool> compare_terms(const Term& a, const Term& b, CompareOp op) {
  auto apply = [op](auto c) -> std::optional<bool> {
    switch (op) {
      case CompareOp::Eq: return c == 0;
      case CompareOp::Ne: return c != 0;
      case CompareOp::Lt: return c < 0;
      case CompareOp::Le: return c <= 0;
      case CompareOp::Gt: return c > 0;
      case CompareOp::Ge: return c >= 0;
    }
    return std::nullopt;
  };
  bool equality = op == CompareOp::Eq || op == CompareOp::Ne;
  if (a.is_literal() && b.is_literal()) {
    const Literal& x = a.as_literal();
    const Literal& y = b.as_literal();
    if (x.is_numeric() && y.is_numeric()) {
      auto xv = x.numeric_value(), yv = y.numeric_value();
      if (!xv || !yv) return std::nullopt;
      if (*xv != *xv || *yv != *yv) return op == CompareOp::Ne;
      return apply(*xv < *yv ? -1 : *xv > *yv ? 1 : 0);
    }
    if (x.is_date() && y.is_date()) {
      auto xd = x.date_value(), yd = y.date_value();
      if (!xd || !yd) return std::nullopt;
      return apply(*xd <=> *yd);
    }
    if (x.is_numeric() != y.is_numeric() || x.is_date() != y.is_date()) {
      if (equality) return op == CompareOp::Ne;
      return std::nullopt;
    }
    return apply(x.lexical().compare(y.lexical()));
  }
  if (a.is_iri() && b.is_iri()) return apply(a.as_iri().str().compare(b.as_iri().str()));
  if (a.is_blank() && b.is_blank()) {
    if (!equality) return std::nullopt;
    return apply(a.as_blank().id.compare(b.as_blank().id));
  }
  if (equality) return op == CompareOp::Ne;
  return std::nullopt;
}

// Effective boolean value; nullopt is a type error.
inline std::optional<bool> effective_boolean(const Term& t) {
  const Literal* l = t.if_literal();
  if (l == nullptr) return std::nullopt;
  if (l->datatype() == vocab::xsd_boolean()) {
    if (l->lexical() == "true" || l->lexical() == "1") return true;
    if (l->lexical() == "false" || l->lexical() == "0") return false;
    return std::nullopt;
  }
  if (l->is_numeric()) {
    auto v = l->numeric_value();
    if (!v) return false;
    return *v == *v && *v != 0.0;
  }
  if (l->datatype() == vocab::xsd_string() || l->has_lang()) return !l->lexical().empty();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

using halo::detail::Cursor;

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : in_(text) {}

  Query parse() {
    prologue();
    skip();
    reject_query_forms();
    if (!keyword("SELECT")) fail("expected SELECT");
    select_clause();
    skip();
    keyword("WHERE");
    skip();
    group_graph_pattern();
    solution_modifiers();
    skip();
    if (!in_.eof()) {
      if (keyword_ahead("UNION")) unsupported("UNION");
      fail("unexpected trailing input");
    }
    check();
    return std::move(q_);
  }

 private:
  void skip() { in_.skip_space(); }

  bool keyword_ahead(std::string_view kw) const {
    return in_.starts_with_nocase(kw) && !halo::detail::is_name_char(in_.peek(kw.size())) &&
           in_.peek(kw.size()) != ':';
  }
  bool keyword(std::string_view kw) {
    skip();
    if (!keyword_ahead(kw)) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) in_.get();
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const { in_.fail(msg); }
  [[noreturn]] void unsupported(const std::string& feature) const {
    throw UnsupportedFeature(in_.line(), in_.column(), feature);
  }

  void prologue() {
    while (true) {
      if (keyword("PREFIX")) {
        skip();
        std::string prefix;
        if (std::isalpha(static_cast<unsigned char>(in_.peek()))) {
          while (halo::detail::is_name_char(in_.peek()) ||
                 (in_.peek() == '.' && halo::detail::is_name_char(in_.peek(1))))
            prefix += in_.get();
        }
        in_.expect(':', "':' in PREFIX declaration");
        skip();
        q_.prefixes.add(std::move(prefix), iri_ref());
      } else if (keyword("BASE")) {
        skip();
        base_ = iri_ref().str();
      } else {
        return;
      }
    }
  }

  void reject_query_forms() {
    for (std::string_view form : {"CONSTRUCT", "ASK", "DESCRIBE"})
      if (keyword_ahead(form)) unsupported(std::string(form) + " queries");
  }

  void select_clause() {
    if (keyword("DISTINCT")) q_.distinct = true;
    else if (keyword("REDUCED")) unsupported("REDUCED");
    skip();
    if (in_.consume('*')) {
      select_all_ = true;
      return;
    }
    while (true) {
      skip();
      if (in_.peek() == '?' || in_.peek() == '$') {
        q_.projection.emplace_back(Variable{variable_name()});
      } else if (in_.peek() == '(') {
        in_.get();
        q_.projection.emplace_back(aggregate());
      } else {
        break;
      }
    }
    if (q_.projection.empty()) fail("expected projection variables");
  }

  Aggregate aggregate() {
    skip();
    for (std::string_view fn : {"SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT"})
      if (keyword_ahead(fn)) unsupported(std::string(fn) + " aggregate");
    if (!keyword("COUNT")) fail("expected COUNT");
    skip();
    in_.expect('(', "'(' after COUNT");
    Aggregate agg;
    agg.distinct = keyword("DISTINCT");
    skip();
    if (!in_.consume('*')) agg.target = variable_name();
    skip();
    in_.expect(')', "')' closing COUNT");
    if (!keyword("AS")) fail("expected AS");
    skip();
    agg.alias = variable_name();
    skip();
    in_.expect(')', "')' closing aggregate");
    return agg;
  }

  std::string variable_name() {
    if (in_.peek() != '?' && in_.peek() != '$') fail("expected variable");
    in_.get();
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(in_.peek())) || in_.peek() == '_') name += in_.get();
    if (name.empty()) fail("empty variable name");
    return name;
  }

  void group_graph_pattern() {
    skip();
    in_.expect('{', "'{'");
    while (true) {
      skip();
      if (in_.consume('}')) break;
      if (in_.eof()) fail("unterminated group pattern");
      for (std::string_view kw : {"OPTIONAL", "UNION", "BIND", "VALUES", "MINUS", "SERVICE", "GRAPH"})
        if (keyword_ahead(kw)) unsupported(std::string(kw));
      if (in_.peek() == '{') {
        in_.get();
        skip();
        if (keyword_ahead("SELECT")) unsupported("subqueries");
        unsupported("nested group patterns");
      }
      if (keyword("FILTER")) {
        skip();
        if (in_.peek() != '(') unsupported("FILTER functions");
        q_.where.filters.push_back(bracketted());
        continue;
      }
      triples_block();
      skip();
      in_.consume('.');
    }
  }

  void triples_block() {
    PatternTerm subject = subject_term();
    while (true) {
      skip();
      PatternTerm predicate = verb();
      while (true) {
        skip();
        q_.where.patterns.push_back({subject, predicate, object_term()});
        skip();
        if (!in_.consume(',')) break;
      }
      skip();
      if (!in_.consume(';')) return;
      skip();
      while (in_.consume(';')) skip();
      if (in_.peek() == '.' || in_.peek() == '}') return;
    }
  }

  PatternTerm subject_term() {
    char c = in_.peek();
    if (c == '?' || c == '$') return Variable{variable_name()};
    if (c == '<') return Term(iri_ref());
    if (c == '_' && in_.peek(1) == ':') return blank_variable();
    if (c == '[') unsupported("blank node property lists");
    if (c == '(') unsupported("collections");
    if (starts_prefixed_name()) return Term(prefixed_name());
    fail("expected subject");
  }

  PatternTerm verb() {
    char c = in_.peek();
    if (c == '^' || c == '!' || c == '(') unsupported("property paths");
    PatternTerm p = [&]() -> PatternTerm {
      if (c == 'a' && !halo::detail::is_name_char(in_.peek(1)) && in_.peek(1) != ':') {
        in_.get();
        return Term(vocab::rdf_type());
      }
      if (c == '?' || c == '$') return Variable{variable_name()};
      if (c == '<') return Term(iri_ref());
      if (starts_prefixed_name()) return Term(prefixed_name());
      fail("expected predicate");
    }();
    char n = in_.peek();
    if (n == '/' || n == '|' || n == '*' || n == '+' ||
        (n == '?' && !std::isalnum(static_cast<unsigned char>(in_.peek(1))) && in_.peek(1) != '_'))
      unsupported("property paths");
    return p;
  }

  PatternTerm object_term() {
    char c = in_.peek();
    if (c == '?' || c == '$') return Variable{variable_name()};
    if (c == '_' && in_.peek(1) == ':') return blank_variable();
    if (c == '[') unsupported("blank node property lists");
    if (c == '(') unsupported("collections");
    return constant();
  }

  // Blank nodes in patterns act as variables that cannot be projected.
  Variable blank_variable() {
    in_.get();
    in_.get();
    return Variable{"_:" + halo::detail::read_blank_label(in_)};
  }

  Term constant() {
    char c = in_.peek();
    if (c == '<') return iri_ref();
    if (c == '"') return string_literal();
    if (c == '\'') unsupported("single-quoted strings");
    if (std::isdigit(static_cast<unsigned char>(c)) || ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(in_.peek(1)))))
      return number();
    if (keyword("true")) return Literal("true", vocab::xsd_boolean());
    if (keyword("false")) return Literal("false", vocab::xsd_boolean());
    if (starts_prefixed_name()) return prefixed_name();
    fail("expected term");
  }

  Term string_literal() {
    std::size_t line = in_.line(), col = in_.column();
    std::string lexical = halo::detail::read_quoted(in_);
    try {
      if (in_.consume('@')) return Literal::lang_string(std::move(lexical), halo::detail::read_langtag(in_));
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
    while (std::isdigit(static_cast<unsigned char>(in_.peek()))) lex += in_.get();
    bool decimal = false;
    if (in_.peek() == '.' && std::isdigit(static_cast<unsigned char>(in_.peek(1)))) {
      decimal = true;
      lex += in_.get();
      while (std::isdigit(static_cast<unsigned char>(in_.peek()))) lex += in_.get();
    }
    return Literal(std::move(lex), decimal ? vocab::xsd_decimal() : vocab::xsd_integer());
  }

  bool starts_prefixed_name() const {
    if (in_.peek() == ':') return true;
    if (!std::isalpha(static_cast<unsigned char>(in_.peek()))) return false;
    std::size_t i = 0;
    while (halo::detail::is_name_char(in_.peek(i)) ||
           (in_.peek(i) == '.' && halo::detail::is_name_char(in_.peek(i + 1))))
      ++i;
    return in_.peek(i) == ':';
  }

  Iri prefixed_name() {
    std::size_t line = in_.line(), col = in_.column();
    auto pn = halo::detail::read_prefixed_name(in_);
    const Iri* ns = q_.prefixes.find(pn.prefix);
    if (ns == nullptr) throw ParseError(line, col, "undefined prefix '" + pn.prefix + "'");
    std::string value = ns->str() + pn.local;
    if (!Iri::is_valid(value)) throw ParseError(line, col, "invalid IRI '" + value + "'");
    return Iri(std::move(value));
  }

  Iri iri_ref() {
    std::size_t line = in_.line(), col = in_.column();
    std::string raw = halo::detail::read_iriref(in_);
    if (!Iri::is_valid(raw) && !base_.empty()) raw = base_ + raw;
    if (!Iri::is_valid(raw)) throw ParseError(line, col, "invalid IRI <" + raw + ">");
    return Iri(std::move(raw));
  }

  // '(' expression ')'
  FilterExpr bracketted() {
    in_.expect('(', "'('");
    FilterExpr e = or_expr();
    skip();
    in_.expect(')', "')'");
    return e;
  }

  FilterExpr or_expr() {
    FilterExpr lhs = and_expr();
    while (true) {
      skip();
      if (!in_.starts_with("||")) return lhs;
      in_.get();
      in_.get();
      FilterExpr node;
      node.kind = FilterExpr::Kind::Or;
      node.args.push_back(std::move(lhs));
      node.args.push_back(and_expr());
      lhs = std::move(node);
    }
  }

  FilterExpr and_expr() {
    FilterExpr lhs = unary_expr();
    while (true) {
      skip();
      if (!in_.starts_with("&&")) return lhs;
      in_.get();
      in_.get();
      FilterExpr node;
      node.kind = FilterExpr::Kind::And;
      node.args.push_back(std::move(lhs));
      node.args.push_back(unary_expr());
      lhs = std::move(node);
    }
  }

  FilterExpr unary_expr() {
    skip();
    if (in_.peek() == '!' && in_.peek(1) != '=') {
      in_.get();
      FilterExpr node;
      node.kind = FilterExpr::Kind::Not;
      node.args.push_back(unary_expr());
      return node;
    }
    FilterExpr lhs = primary_expr();
    skip();
    std::optional<CompareOp> op;
    if (in_.starts_with("!=")) op = CompareOp::Ne;
    else if (in_.starts_with("<=")) op = CompareOp::Le;
    else if (in_.starts_with(">=")) op = CompareOp::Ge;
    else if (in_.peek() == '=') op = CompareOp::Eq;
    else if (in_.peek() == '<') op = CompareOp::Lt;
    else if (in_.peek() == '>') op = CompareOp::Gt;
    if (!op) return lhs;
    in_.get();
    if (*op == CompareOp::Ne || *op == CompareOp::Le || *op == CompareOp::Ge) in_.get();
    FilterExpr node;
    node.kind = FilterExpr::Kind::Compare;
    node.op = *op;
    node.args.push_back(std::move(lhs));
    skip();
    node.args.push_back(primary_expr());
    return node;
  }

  FilterExpr primary_expr() {
    skip();
    char c = in_.peek();
    if (c == '(') return bracketted();
    if (c == '?' || c == '$') {
      FilterExpr e;
      e.kind = FilterExpr::Kind::Variable;
      e.variable = variable_name();
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) && !starts_prefixed_name() && !keyword_ahead("true") &&
        !keyword_ahead("false")) {
      std::string name;
      for (std::size_t i = 0; halo::detail::is_name_char(in_.peek(i)); ++i) name += in_.peek(i);
      unsupported("function " + name + "()");
    }
    FilterExpr e;
    e.kind = FilterExpr::Kind::Constant;
    e.constant = constant();
    return e;
  }

  void solution_modifiers() {
    if (keyword("GROUP")) {
      if (!keyword("BY")) fail("expected BY after GROUP");
      skip();
      while (in_.peek() == '?' || in_.peek() == '$') {
        q_.group_by.push_back(variable_name());
        skip();
      }
      if (q_.group_by.empty()) fail("expected GROUP BY variables");
    }
    if (keyword_ahead("HAVING")) unsupported("HAVING");
    if (keyword("ORDER")) {
      if (!keyword("BY")) fail("expected BY after ORDER");
      while (true) {
        skip();
        bool desc = false;
        if (keyword_ahead("ASC") || keyword_ahead("DESC")) {
          desc = keyword("DESC");
          if (!desc) keyword("ASC");
          skip();
          in_.expect('(', "'('");
          skip();
          std::string name = variable_name();
          skip();
          in_.expect(')', "')'");
          q_.order_by.push_back({std::move(name), desc});
        } else if (in_.peek() == '?' || in_.peek() == '$') {
          q_.order_by.push_back({variable_name(), false});
        } else {
          break;
        }
      }
      if (q_.order_by.empty()) fail("expected ORDER BY keys");
    }
    if (keyword("LIMIT")) {
      skip();
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(in_.peek()))) digits += in_.get();
      if (digits.empty()) fail("expected LIMIT value");
      q_.limit = std::stoull(digits);
    }
    if (keyword_ahead("OFFSET")) unsupported("OFFSET");
  }

  void check() {
    auto vars = q_.pattern_variables();
    std::set<std::string> in_patterns(vars.begin(), vars.end());
    if (select_all_) {
      for (const auto& v : vars)
        if (!v.starts_with("_:")) q_.projection.emplace_back(Variable{v});
      if (q_.projection.empty()) fail("SELECT * with no variables");
    }
    for (const auto& f : q_.where.filters) {
      std::set<std::string> used;
      f.collect_variables(used);
      for (const auto& v : used)
        if (!in_patterns.contains(v)) fail("FILTER variable ?" + v + " does not occur in any pattern");
    }
    std::set<std::string> aliases;
    for (const auto& p : q_.projection) {
      if (const auto* a = std::get_if<Aggregate>(&p)) {
        if (!aliases.insert(a->alias).second) fail("duplicate alias ?" + a->alias);
        if (in_patterns.contains(a->alias)) fail("alias ?" + a->alias + " is already a pattern variable");
      }
    }
    bool grouped = q_.has_aggregate() || !q_.group_by.empty();
    std::set<std::string> keys(q_.group_by.begin(), q_.group_by.end());
    std::set<std::string> projected;
    for (const auto& p : q_.projection) {
      if (const auto* v = std::get_if<Variable>(&p)) {
        if (grouped && !keys.contains(v->name)) fail("?" + v->name + " is projected but not grouped");
        if (aliases.contains(v->name)) fail("?" + v->name + " is both a variable and an alias");
        projected.insert(v->name);
      }
    }
    for (const auto& k : q_.order_by) {
      bool ok = grouped ? (keys.contains(k.name) || aliases.contains(k.name))
                        : (in_patterns.contains(k.name) || projected.contains(k.name));
      if (!ok) fail("cannot ORDER BY ?" + k.name);
    }
  }

  Cursor in_;
  Query q_;
  std::string base_;
  bool select_all_ = false;
};

}  // namespace detail

inline Query parse_query(std::string_view text) { return detail::QueryParser(text).parse(); }

// ---------------------------------------------------------------------------
// Execution

namespace detail {

using Binding = std::vector<const Term*>;

struct SlotRef {
  const Term* constant = nullptr;
  int var = -1;
};

struct CompiledPattern {
  SlotRef s, p, o;
};

enum class Truth { False, True, Error };

class Evaluator {
 public:
  Evaluator(const Graph& graph, const Query& query) : graph_(graph), query_(query) {
    for (const auto& name : query.pattern_variables()) index(name);
    for (const auto& tp : query.where.patterns)
      patterns_.push_back({slot(tp.subject), slot(tp.predicate), slot(tp.object)});
  }

  ResultTable run() {
    plan();
    Binding b(names_.size(), nullptr);
    if (root_filters_pass(b)) join(0, b);
    return finish();
  }

 private:
  int index(const std::string& name) {
    auto [it, added] = var_index_.emplace(name, static_cast<int>(names_.size()));
    if (added) names_.push_back(name);
    return it->second;
  }

  SlotRef slot(const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) return {nullptr, index(v->name)};
    return {&std::get<Term>(t), -1};
  }

  // Each filter fires once its last variable is bound; filters without
  // variables fire at the root.
  void plan() {
    const auto& filters = query_.where.filters;
    filters_by_var_.assign(names_.size(), {});
    missing_.assign(filters.size(), 0);
    for (std::size_t f = 0; f < filters.size(); ++f) {
      std::set<std::string> used;
      filters[f].collect_variables(used);
      missing_[f] = static_cast<int>(used.size());
      for (const auto& v : used) filters_by_var_[static_cast<std::size_t>(var_index_.at(v))].push_back(f);
    }
    used_.assign(patterns_.size(), false);
  }

  bool root_filters_pass(const Binding& b) const {
    for (std::size_t f = 0; f < missing_.size(); ++f)
      if (missing_[f] == 0 && truth(query_.where.filters[f], b) != Truth::True) return false;
    return true;
  }

  // Next pattern: the remaining one with the fewest candidate matches under
  // the current bindings.
  std::size_t choose(const Binding& b) const {
    std::size_t best = patterns_.size(), best_est = 0;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (used_[i]) continue;
      const auto& cp = patterns_[i];
      auto resolve = [&](const SlotRef& s) { return s.constant ? s.constant : b[static_cast<std::size_t>(s.var)]; };
      const Term* s = resolve(cp.s);
      const Term* p = resolve(cp.p);
      const Term* o = resolve(cp.o);
      std::size_t est = (p && !p->is_iri()) || (s && s->is_literal()) ? 0 : graph_.estimate(s, p ? &p->as_iri() : nullptr, o);
      if (best == patterns_.size() || est < best_est) {
        best = i;
        best_est = est;
      }
      if (est == 0) break;
    }
    return best;
  }

  void join(std::size_t depth, Binding& b) {
    if (depth == patterns_.size()) {
      solutions_.push_back(b);
      return;
    }
    const std::size_t chosen = choose(b);
    const CompiledPattern& cp = patterns_[chosen];
    auto resolve = [&](const SlotRef& s) { return s.constant ? s.constant : b[static_cast<std::size_t>(s.var)]; };
    const Term* s = resolve(cp.s);
    const Term* p = resolve(cp.p);
    const Term* o = resolve(cp.o);
    if (p && !p->is_iri()) return;
    if (s && s->is_literal()) return;
    const Iri* pi = p ? &p->as_iri() : nullptr;

    used_[chosen] = true;
    graph_.for_each_match(s, pi, o, [&](const Triple& t) {
      int newly[3];
      int n = 0;
      bool ok = true;
      auto bind = [&](const SlotRef& slot, const Term* value) {
        if (slot.var < 0 || !ok) return;
        auto& cell = b[static_cast<std::size_t>(slot.var)];
        if (cell == nullptr) {
          cell = value;
          newly[n++] = slot.var;
        } else if (!(*cell == *value)) {
          ok = false;  // repeated variable inside one pattern
        }
      };
      bind(cp.s, &t.subject);
      bind(cp.p, intern_predicate(t.predicate));
      bind(cp.o, &t.object);
      for (int i = 0; i < n; ++i)
        for (std::size_t f : filters_by_var_[static_cast<std::size_t>(newly[i])]) {
          if (--missing_[f] == 0 && ok && truth(query_.where.filters[f], b) != Truth::True) ok = false;
        }
      if (ok) join(depth + 1, b);
      for (int i = 0; i < n; ++i) {
        for (std::size_t f : filters_by_var_[static_cast<std::size_t>(newly[i])]) ++missing_[f];
        b[static_cast<std::size_t>(newly[i])] = nullptr;
      }
    });
    used_[chosen] = false;
  }

  const Term* intern_predicate(const Iri& p) {
    auto it = predicate_terms_.find(p);
    if (it == predicate_terms_.end()) it = predicate_terms_.emplace(p, Term(p)).first;
    return &it->second;
  }

  // Value of an expression: a term, a boolean, or an error.
  struct Value {
    const Term* term = nullptr;
    std::optional<bool> boolean;
    bool error() const { return term == nullptr && !boolean; }
  };

  Value value(const FilterExpr& e, const Binding& b) const {
    switch (e.kind) {
      case FilterExpr::Kind::Variable: return {b[static_cast<std::size_t>(var_index_.at(e.variable))], {}};
      case FilterExpr::Kind::Constant: return {&*e.constant, {}};
      default: {
        Truth t = truth(e, b);
        if (t == Truth::Error) return {};
        return {nullptr, t == Truth::True};
      }
    }
  }

  static Truth from(std::optional<bool> v) { return !v ? Truth::Error : *v ? Truth::True : Truth::False; }

  Truth truth(const FilterExpr& e, const Binding& b) const {
    switch (e.kind) {
      case FilterExpr::Kind::Or: {
        Truth l = truth(e.args[0], b), r = truth(e.args[1], b);
        if (l == Truth::True || r == Truth::True) return Truth::True;
        if (l == Truth::Error || r == Truth::Error) return Truth::Error;
        return Truth::False;
      }
      case FilterExpr::Kind::And: {
        Truth l = truth(e.args[0], b), r = truth(e.args[1], b);
        if (l == Truth::False || r == Truth::False) return Truth::False;
        if (l == Truth::Error || r == Truth::Error) return Truth::Error;
        return Truth::True;
      }
      case FilterExpr::Kind::Not: {
        Truth t = truth(e.args[0], b);
        return t == Truth::Error ? t : t == Truth::True ? Truth::False : Truth::True;
      }
      case FilterExpr::Kind::Compare: {
        Value l = value(e.args[0], b), r = value(e.args[1], b);
        if (l.error() || r.error()) return Truth::Error;
        if (l.term && r.term) return from(compare_terms(*l.term, *r.term, e.op));
        if (l.boolean && r.boolean) {
          if (e.op == CompareOp::Eq) return from(*l.boolean == *r.boolean);
          if (e.op == CompareOp::Ne) return from(*l.boolean != *r.boolean);
        }
        return Truth::Error;
      }
      case FilterExpr::Kind::Variable:
      case FilterExpr::Kind::Constant: {
        Value v = value(e, b);
        if (v.term == nullptr) return Truth::Error;
        return from(effective_boolean(*v.term));
      }
    }
    return Truth::Error;
  }

  using Row = std::vector<std::optional<Term>>;
  static std::optional<Term> own(const Term* t) { return t ? std::optional<Term>(*t) : std::nullopt; }

  static std::strong_ordering compare_rows(const Row& a, const Row& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
      if (auto c = order_terms(a[i], b[i]); c != 0) return c;
    return a.size() <=> b.size();
  }

  const Term* lookup(const Binding& b, const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? nullptr : b[static_cast<std::size_t>(it->second)];
  }

  ResultTable finish() {
    struct Out {
      Row keys;
      Row projected;
    };
    std::vector<Out> rows;
    const bool grouped = query_.has_aggregate() || !query_.group_by.empty();

    if (!grouped) {
      for (const auto& b : solutions_) {
        Out r;
        for (const auto& k : query_.order_by) r.keys.push_back(own(lookup(b, k.name)));
        for (const auto& p : query_.projection) r.projected.push_back(own(lookup(b, std::get<Variable>(p).name)));
        rows.push_back(std::move(r));
      }
    } else {
      auto key_less = [](const Binding& a, const Binding& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
          if (auto c = order_terms(a[i], b[i]); c != 0) return c < 0;
        return false;
      };
      std::map<Binding, std::vector<const Binding*>, decltype(key_less)> groups(key_less);
      for (const auto& b : solutions_) {
        Binding key;
        for (const auto& g : query_.group_by) key.push_back(lookup(b, g));
        groups[key].push_back(&b);
      }
      if (groups.empty() && query_.group_by.empty()) groups[Binding{}];

      for (const auto& [key, members] : groups) {
        std::map<std::string, std::optional<Term>> env;
        for (std::size_t i = 0; i < query_.group_by.size(); ++i) env[query_.group_by[i]] = own(key[i]);
        for (const auto& p : query_.projection)
          if (const auto* a = std::get_if<Aggregate>(&p)) env[a->alias] = Literal::integer(count(*a, members));
        Out r;
        for (const auto& k : query_.order_by) r.keys.push_back(env[k.name]);
        for (const auto& p : query_.projection) {
          const std::string& name =
              std::holds_alternative<Variable>(p) ? std::get<Variable>(p).name : std::get<Aggregate>(p).alias;
          r.projected.push_back(env[name]);
        }
        rows.push_back(std::move(r));
      }
    }

    std::sort(rows.begin(), rows.end(), [&](const Out& a, const Out& b) {
      for (std::size_t i = 0; i < query_.order_by.size(); ++i) {
        auto c = order_terms(a.keys[i], b.keys[i]);
        if (c != 0) return query_.order_by[i].descending ? c > 0 : c < 0;
      }
      return compare_rows(a.projected, b.projected) < 0;
    });

    ResultTable table;
    table.columns = query_.column_names();
    auto row_less = [](const Row& a, const Row& b) { return compare_rows(a, b) < 0; };
    std::set<Row, decltype(row_less)> seen(row_less);
    for (auto& r : rows) {
      if (query_.limit && table.rows.size() >= *query_.limit) break;
      if (query_.distinct && !seen.insert(r.projected).second) continue;
      table.rows.push_back(std::move(r.projected));
    }
    return table;
  }

  std::int64_t count(const Aggregate& a, const std::vector<const Binding*>& members) const {
    if (!a.target) {
      if (!a.distinct) return static_cast<std::int64_t>(members.size());
      auto less = [](const Binding* x, const Binding* y) {
        for (std::size_t i = 0; i < x->size(); ++i)
          if (auto c = order_terms((*x)[i], (*y)[i]); c != 0) return c < 0;
        return false;
      };
      std::set<const Binding*, decltype(less)> distinct(less);
      distinct.insert(members.begin(), members.end());
      return static_cast<std::int64_t>(distinct.size());
    }
    auto less = [](const Term* x, const Term* y) { return order_terms(x, y) < 0; };
    std::set<const Term*, decltype(less)> distinct(less);
    std::int64_t n = 0;
    for (const Binding* b : members) {
      const Term* t = lookup(*b, *a.target);
      if (t == nullptr) continue;
      ++n;
      if (a.distinct) distinct.insert(t);
    }
    return a.distinct ? static_cast<std::int64_t>(distinct.size()) : n;
  }

  const Graph& graph_;
  const Query& query_;
  std::map<std::string, int> var_index_;
  std::vector<std::string> names_;
  std::vector<CompiledPattern> patterns_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> filters_by_var_;
  std::vector<int> missing_;
  std::map<Iri, Term> predicate_terms_;
  std::vector<Binding> solutions_;
};

}  // namespace detail

inline ResultTable execute(const Graph& graph, const Query& query) { return detail::Evaluator(graph, query).run(); }

inline ResultTable execute(const Graph& graph, std::string_view query_text) {
  return execute(graph, parse_query(query_text));
}

// ---------------------------------------------------------------------------
// Result rendering

namespace detail {

inline std::string plain_value(const std::optional<Term>& t, const PrefixMap* prefixes) {
  if (!t) return "";
  if (const Iri* iri = t->if_iri()) {
    if (prefixes)
      if (auto pn = prefixes->compact(*iri)) return *pn;
    return prefixes ? "<" + iri->str() + ">" : iri->str();
  }
  if (t->is_blank()) return "_:" + t->as_blank().id;
  return t->as_literal().lexical();
}

}  // namespace detail

// Aligned plain-text table; IRIs compacted with `prefixes` when possible.
inline std::string to_text(const ResultTable& table, const PrefixMap& prefixes = {}) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(table.columns);
  for (const auto& row : table.rows) {
    std::vector<std::string> r;
    for (const auto& v : row) r.push_back(detail::plain_value(v, &prefixes));
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (const auto& r : cells)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    std::string l;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) l += "  ";
      l += r[i];
      if (i + 1 < r.size()) l.append(width[i] - r[i].size(), ' ');
    }
    out += l + "\n";
  };
  line(cells[0]);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (std::size_t i = 1; i < cells.size(); ++i) line(cells[i]);
  return out;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_field(table.columns[i]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(detail::plain_value(row[i], nullptr));
    out += "\n";
  }
  return out;
}

// SPARQL 1.1 JSON results layout.
inline nlohmann::ordered_json to_json(const ResultTable& table) {
  nlohmann::ordered_json j;
  j["head"]["vars"] = table.columns;
  auto bindings = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json b = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i]) continue;
      const Term& t = *row[i];
      nlohmann::ordered_json v;
      if (t.is_iri()) {
        v["type"] = "uri";
        v["value"] = t.as_iri().str();
      } else if (t.is_blank()) {
        v["type"] = "bnode";
        v["value"] = t.as_blank().id;
      } else {
        const Literal& l = t.as_literal();
        v["type"] = "literal";
        v["value"] = l.lexical();
        if (l.has_lang()) v["xml:lang"] = l.lang();
        else if (l.datatype() != vocab::xsd_string()) v["datatype"] = l.datatype().str();
      }
      b[table.columns[i]] = std::move(v);
    }
    bindings.push_back(std::move(b));
  }
  j["results"]["bindings"] = std::move(bindings);
  return j;
}

}  // namespace halo::sparql
