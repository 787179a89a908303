#pragma once
// Minimal RDF data model: IRIs, blank nodes, literals, triples, prefix maps
// and an indexed in-memory graph with set semantics.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace halo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidIri : public Error {
 public:
  explicit InvalidIri(const std::string& value) : Error("invalid IRI: '" + value + "'") {}
};

class UnknownPrefix : public Error {
 public:
  explicit UnknownPrefix(std::string prefix)
      : Error("unknown prefix '" + prefix + "'"), prefix_(std::move(prefix)) {}
  const std::string& prefix() const noexcept { return prefix_; }

 private:
  std::string prefix_;
};

// ---------------------------------------------------------------------------
// Iri

class Iri {
 public:
  explicit Iri(std::string value) : value_(std::move(value)) {
    if (!is_valid(value_)) throw InvalidIri(value_);
  }

  // Absolute IRI with a "scheme://" separator, or a URN. No brackets, quotes
  // or whitespace.
  static bool is_valid(std::string_view v) {
    if (v.empty()) return false;
    for (char c : v) {
      auto u = static_cast<unsigned char>(c);
      if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`' || c == '\\')
        return false;
    }
    auto scheme_ok = [](std::string_view s) {
      if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
      return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
      });
    };
    if (auto pos = v.find("://"); pos != std::string_view::npos)
      return scheme_ok(v.substr(0, pos)) && pos + 3 < v.size();
    if (v.size() > 4 && (v.substr(0, 4) == "urn:" || v.substr(0, 4) == "URN:")) {
      auto rest = v.substr(4);
      auto colon = rest.find(':');
      return colon != std::string_view::npos && colon > 0 && colon + 1 < rest.size();
    }
    return false;
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Iri&, const Iri&) = default;
  friend std::strong_ordering operator<=>(const Iri& a, const Iri& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

namespace vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

namespace detail {
inline Iri make(std::string_view ns, std::string_view local) {
  std::string s(ns);
  s += local;
  return Iri(std::move(s));
}
}  // namespace detail

#define HALO_VOCAB_TERM(fn, ns, local)          \
  inline const Iri& fn() {                      \
    static const Iri v = detail::make(ns, local); \
    return v;                                   \
  }

HALO_VOCAB_TERM(rdf_type, kRdf, "type")
HALO_VOCAB_TERM(rdf_lang_string, kRdf, "langString")
HALO_VOCAB_TERM(rdfs_label, kRdfs, "label")
HALO_VOCAB_TERM(rdfs_comment, kRdfs, "comment")
HALO_VOCAB_TERM(rdfs_sub_class_of, kRdfs, "subClassOf")
HALO_VOCAB_TERM(rdfs_domain, kRdfs, "domain")
HALO_VOCAB_TERM(rdfs_range, kRdfs, "range")
HALO_VOCAB_TERM(rdfs_is_defined_by, kRdfs, "isDefinedBy")
HALO_VOCAB_TERM(owl_class, kOwl, "Class")
HALO_VOCAB_TERM(owl_ontology, kOwl, "Ontology")
HALO_VOCAB_TERM(owl_thing, kOwl, "Thing")
HALO_VOCAB_TERM(owl_object_property, kOwl, "ObjectProperty")
HALO_VOCAB_TERM(owl_datatype_property, kOwl, "DatatypeProperty")
HALO_VOCAB_TERM(xsd_string, kXsd, "string")
HALO_VOCAB_TERM(xsd_integer, kXsd, "integer")
HALO_VOCAB_TERM(xsd_decimal, kXsd, "decimal")
HALO_VOCAB_TERM(xsd_double, kXsd, "double")
HALO_VOCAB_TERM(xsd_boolean, kXsd, "boolean")
HALO_VOCAB_TERM(xsd_date, kXsd, "date")

#undef HALO_VOCAB_TERM

inline bool is_numeric_datatype(const Iri& dt) {
  static const std::set<std::string, std::less<>> kNumeric = {
      "integer", "decimal", "double", "float", "int", "long", "short", "byte",
      "nonNegativeInteger", "positiveInteger", "nonPositiveInteger", "negativeInteger",
      "unsignedInt", "unsignedLong", "unsignedShort", "unsignedByte"};
  std::string_view s = dt.str();
  if (s.substr(0, kXsd.size()) != kXsd) return false;
  return kNumeric.contains(s.substr(kXsd.size()));
}

}  // namespace vocab

// ---------------------------------------------------------------------------
// Calendar dates (xsd:date without timezone)

class Date {
 public:
  Date(int year, unsigned month, unsigned day)
      : ymd_(std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}) {
    if (!ymd_.ok()) throw Error("invalid calendar date");
  }
  explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {
    if (!ymd_.ok()) throw Error("invalid calendar date");
  }

  // Strict YYYY-MM-DD.
  static std::optional<Date> parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto num = [&](std::size_t off, std::size_t len, auto& out) {
      for (std::size_t i = off; i < off + len; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
      auto r = std::from_chars(s.data() + off, s.data() + off + len, out);
      return r.ec == std::errc{};
    };
    if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return Date(ymd);
  }

  int year() const { return static_cast<int>(ymd_.year()); }
  unsigned month() const { return static_cast<unsigned>(ymd_.month()); }
  unsigned day() const { return static_cast<unsigned>(ymd_.day()); }

  Date plus_days(int days) const {
    return Date(std::chrono::year_month_day{std::chrono::sys_days{ymd_} + std::chrono::days{days}});
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
  }
  // YYYYMMDD, used for identifiers.
  std::string compact() const {
    std::string s = iso();
    s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
    return s;
  }

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date& a, const Date& b) { return a.ymd_ <=> b.ymd_; }

 private:
  std::chrono::year_month_day ymd_;
};

// ---------------------------------------------------------------------------
// Terms

struct BlankNode {
  std::string id;

  friend bool operator==(const BlankNode&, const BlankNode&) = default;
  friend std::strong_ordering operator<=>(const BlankNode& a, const BlankNode& b) {
    return a.id.compare(b.id) <=> 0;
  }
};

class Literal {
 public:
  explicit Literal(std::string lexical)
      : lexical_(std::move(lexical)), datatype_(vocab::xsd_string()) {}
  Literal(std::string lexical, Iri datatype)
      : lexical_(std::move(lexical)), datatype_(std::move(datatype)) {
    if (datatype_ == vocab::rdf_lang_string())
      throw Error("language-tagged literal requires a language tag");
  }

  static Literal lang_string(std::string lexical, std::string lang) {
    if (lang.empty()) throw Error("empty language tag");
    std::transform(lang.begin(), lang.end(), lang.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    Literal l(std::move(lexical));
    l.datatype_ = vocab::rdf_lang_string();
    l.lang_ = std::move(lang);
    return l;
  }
  static Literal date(const Date& d) { return Literal(d.iso(), vocab::xsd_date()); }
  static Literal integer(std::int64_t v) { return Literal(std::to_string(v), vocab::xsd_integer()); }

  const std::string& lexical() const noexcept { return lexical_; }
  const Iri& datatype() const noexcept { return datatype_; }
  const std::string& lang() const noexcept { return lang_; }
  bool has_lang() const noexcept { return !lang_.empty(); }

  bool is_numeric() const { return vocab::is_numeric_datatype(datatype_); }
  bool is_date() const { return datatype_ == vocab::xsd_date(); }

  std::optional<double> numeric_value() const {
    if (!is_numeric() || lexical_.empty()) return std::nullopt;
    std::string_view s = lexical_;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
    return v;
  }
  std::optional<Date> date_value() const {
    if (!is_date()) return std::nullopt;
    return Date::parse(lexical_);
  }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.lexical_.compare(b.lexical_) <=> 0; c != 0) return c;
    if (auto c = a.datatype_ <=> b.datatype_; c != 0) return c;
    return a.lang_.compare(b.lang_) <=> 0;
  }

 private:
  std::string lexical_;
  Iri datatype_;
  std::string lang_;
};

// Exactly one of IRI, blank node or literal. Ordered IRIs < blank nodes <
// literals, then by string content.
class Term {
 public:
  Term(Iri iri) : v_(std::move(iri)) {}              // NOLINT(google-explicit-constructor)
  Term(BlankNode blank) : v_(std::move(blank)) {}    // NOLINT(google-explicit-constructor)
  Term(Literal literal) : v_(std::move(literal)) {}  // NOLINT(google-explicit-constructor)

  static Term iri(std::string value) { return Term(Iri(std::move(value))); }
  static Term blank(std::string id) { return Term(BlankNode{std::move(id)}); }
  static Term literal(std::string lexical) { return Term(Literal(std::move(lexical))); }

  bool is_iri() const noexcept { return std::holds_alternative<Iri>(v_); }
  bool is_blank() const noexcept { return std::holds_alternative<BlankNode>(v_); }
  bool is_literal() const noexcept { return std::holds_alternative<Literal>(v_); }

  const Iri& as_iri() const { return std::get<Iri>(v_); }
  const BlankNode& as_blank() const { return std::get<BlankNode>(v_); }
  const Literal& as_literal() const { return std::get<Literal>(v_); }
  const Iri* if_iri() const noexcept { return std::get_if<Iri>(&v_); }
  const Literal* if_literal() const noexcept { return std::get_if<Literal>(&v_); }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
    return std::visit(
        [&](const auto& x) -> std::strong_ordering {
          using T = std::decay_t<decltype(x)>;
          return x <=> std::get<T>(b.v_);
        },
        a.v_);
  }

 private:
  std::variant<Iri, BlankNode, Literal> v_;
};

struct Triple {
  Triple(Term s, Iri p, Term o) : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    if (subject.is_literal()) throw Error("triple subject must be an IRI or blank node");
  }

  Term subject;
  Iri predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple& a, const Triple& b) {
    if (auto c = a.subject <=> b.subject; c != 0) return c;
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    return a.object <=> b.object;
  }
};

// ---------------------------------------------------------------------------
// Prefixes

// Prefix names follow Turtle's PN_PREFIX, restricted to ASCII.
inline bool is_valid_prefix_name(std::string_view p) {
  if (p.empty()) return true;
  if (!std::isalpha(static_cast<unsigned char>(p.front()))) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    char c = p[i];
    if (c == '.') {
      if (i + 1 == p.size() || p[i + 1] == '.') return false;
    } else if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

// Local part of a prefixed name: [A-Za-z0-9_] then [A-Za-z0-9_.-]*, where
// every '.' is followed by a non-dot name character. Empty is allowed.
inline bool is_valid_local_name(std::string_view l) {
  if (l.empty()) return true;
  auto head = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  if (!head(l.front())) return false;
  for (std::size_t i = 0; i < l.size(); ++i) {
    char c = l[i];
    if (c == '.') {
      if (i + 1 == l.size() || l[i + 1] == '.') return false;
    } else if (!head(c) && c != '-') {
      return false;
    }
  }
  return true;
}

class PrefixMap {
 public:
  // Re-binding a prefix replaces the namespace, as Turtle directives do.
  void add(std::string prefix, Iri ns) {
    if (!is_valid_prefix_name(prefix)) throw Error("invalid prefix name '" + prefix + "'");
    entries_.insert_or_assign(std::move(prefix), std::move(ns));
  }

  const Iri* find(std::string_view prefix) const {
    auto it = entries_.find(prefix);
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Longest matching namespace whose remainder is a valid local name; on
  // namespace ties the smallest prefix wins.
  std::optional<std::string> compact(const Iri& iri) const {
    const std::string& s = iri.str();
    const std::string* best_prefix = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, ns] : entries_) {
      const std::string& n = ns.str();
      if (n.size() > s.size() || s.compare(0, n.size(), n) != 0) continue;
      if (!is_valid_local_name(std::string_view(s).substr(n.size()))) continue;
      if (best_prefix == nullptr || n.size() > best_len) {
        best_prefix = &prefix;
        best_len = n.size();
      }
    }
    if (best_prefix == nullptr) return std::nullopt;
    return *best_prefix + ":" + s.substr(best_len);
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::map<std::string, Iri, std::less<>> entries_;
};

// "prefix:local" -> namespace + local.
inline Iri expand(std::string_view name, const PrefixMap& prefixes) {
  auto colon = name.find(':');
  if (colon == std::string_view::npos) throw Error("not a prefixed name: '" + std::string(name) + "'");
  auto prefix = name.substr(0, colon);
  const Iri* ns = prefixes.find(prefix);
  if (ns == nullptr) throw UnknownPrefix(std::string(prefix));
  return Iri(ns->str() + std::string(name.substr(colon + 1)));
}

// ---------------------------------------------------------------------------
// Graph

class Graph {
  struct PtrLess {
    bool operator()(const Triple* a, const Triple* b) const { return *a < *b; }
  };
  using Bucket = std::set<const Triple*, PtrLess>;

 public:
  Graph() = default;
  Graph(const Graph& other) : prefixes_(other.prefixes_) {
    for (const auto& t : other.triples_) insert(t);
  }
  Graph& operator=(const Graph& other) {
    if (this != &other) {
      Graph copy(other);
      *this = std::move(copy);
    }
    return *this;
  }
  Graph(Graph&&) noexcept = default;
  Graph& operator=(Graph&&) noexcept = default;

  // Returns true when the triple was not already present.
  bool insert(Triple t) {
    auto [it, added] = triples_.insert(std::move(t));
    if (added) {
      const Triple* p = &*it;
      by_subject_[p->subject].insert(p);
      by_predicate_[p->predicate].insert(p);
      by_object_[p->object].insert(p);
    }
    return added;
  }
  bool insert(Term s, Iri p, Term o) { return insert(Triple(std::move(s), std::move(p), std::move(o))); }

  bool erase(const Triple& t) {
    auto it = triples_.find(t);
    if (it == triples_.end()) return false;
    const Triple* p = &*it;
    drop(by_subject_, p->subject, p);
    drop(by_predicate_, p->predicate, p);
    drop(by_object_, p->object, p);
    triples_.erase(it);
    return true;
  }

  bool contains(const Triple& t) const { return triples_.contains(t); }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  const std::set<Triple>& triples() const noexcept { return triples_; }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }

  PrefixMap& prefixes() noexcept { return prefixes_; }
  const PrefixMap& prefixes() const noexcept { return prefixes_; }

  // Calls fn(const Triple&) for every triple agreeing with the bound slots,
  // in (subject, predicate, object) order.
  template <typename Fn>
  void for_each_match(const Term* s, const Iri* p, const Term* o, Fn&& fn) const {
    const Bucket* bucket = nullptr;
    auto narrow = [&](const auto& index, const auto& key) {
      auto it = index.find(key);
      const Bucket* b = it == index.end() ? &empty_bucket() : &it->second;
      if (bucket == nullptr || b->size() < bucket->size()) bucket = b;
    };
    if (s) narrow(by_subject_, *s);
    if (p) narrow(by_predicate_, *p);
    if (o) narrow(by_object_, *o);
    auto ok = [&](const Triple& t) {
      return (!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o);
    };
    if (bucket == nullptr) {
      for (const auto& t : triples_) fn(t);
      return;
    }
    for (const Triple* t : *bucket)
      if (ok(*t)) fn(*t);
  }

  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Iri>& p,
                            const std::optional<Term>& o) const {
    std::vector<Triple> out;
    for_each_match(s ? &*s : nullptr, p ? &*p : nullptr, o ? &*o : nullptr,
                   [&](const Triple& t) { out.push_back(t); });
    return out;
  }

  // Upper bound on the number of matches, from the most selective index.
  std::size_t estimate(const Term* s, const Iri* p, const Term* o) const {
    std::size_t best = triples_.size();
    auto narrow = [&](const auto& index, const auto& key) {
      auto it = index.find(key);
      best = std::min(best, it == index.end() ? std::size_t{0} : it->second.size());
    };
    if (s) narrow(by_subject_, *s);
    if (p) narrow(by_predicate_, *p);
    if (o) narrow(by_object_, *o);
    return best;
  }

  // Exact-class membership; no subclass inference.
  std::set<Term> subjects_of_type(const Iri& cls) const {
    std::set<Term> out;
    Term c(cls);
    for_each_match(nullptr, &vocab::rdf_type(), &c, [&](const Triple& t) { out.insert(t.subject); });
    return out;
  }

  std::vector<Term> objects(const Term& s, const Iri& p) const {
    std::vector<Term> out;
    for_each_match(&s, &p, nullptr, [&](const Triple& t) { out.push_back(t.object); });
    return out;
  }
  std::vector<Term> subjects(const Iri& p, const Term& o) const {
    std::vector<Term> out;
    for_each_match(nullptr, &p, &o, [&](const Triple& t) { out.push_back(t.subject); });
    return out;
  }
  std::optional<Term> object(const Term& s, const Iri& p) const {
    std::optional<Term> out;
    for_each_match(&s, &p, nullptr, [&](const Triple& t) {
      if (!out) out = t.object;
    });
    return out;
  }

  std::set<std::string> blank_ids() const {
    std::set<std::string> ids;
    for (const auto& [term, _] : by_subject_)
      if (term.is_blank()) ids.insert(term.as_blank().id);
    for (const auto& [term, _] : by_object_)
      if (term.is_blank()) ids.insert(term.as_blank().id);
    return ids;
  }

  // Adds every triple and prefix of `other`. Blank nodes of `other` whose ids
  // already occur here are renamed by suffixing.
  void merge(const Graph& other) {
    std::set<std::string> used = blank_ids();
    std::map<std::string, std::string> rename;
    if (!used.empty()) {
      std::set<std::string> theirs = other.blank_ids();
      std::set<std::string> taken = used;
      taken.insert(theirs.begin(), theirs.end());
      for (const auto& id : theirs) {
        if (!used.contains(id)) continue;
        for (int n = 1;; ++n) {
          std::string candidate = id + "_" + std::to_string(n);
          if (!taken.contains(candidate)) {
            taken.insert(candidate);
            rename.emplace(id, std::move(candidate));
            break;
          }
        }
      }
    }
    auto map_term = [&](const Term& t) -> Term {
      if (t.is_blank()) {
        if (auto it = rename.find(t.as_blank().id); it != rename.end()) return Term::blank(it->second);
      }
      return t;
    };
    for (const auto& t : other.triples_) {
      if (rename.empty())
        insert(t);
      else
        insert(map_term(t.subject), t.predicate, map_term(t.object));
    }
    for (const auto& [prefix, ns] : other.prefixes_)
      if (prefixes_.find(prefix) == nullptr) prefixes_.add(prefix, ns);
  }

  // Same triple set; prefixes are presentation only.
  bool same_triples(const Graph& other) const { return triples_ == other.triples_; }

 private:
  template <typename Index, typename Key>
  static void drop(Index& index, const Key& key, const Triple* p) {
    auto it = index.find(key);
    if (it == index.end()) return;
    it->second.erase(p);
    if (it->second.empty()) index.erase(it);
  }
  static const Bucket& empty_bucket() {
    static const Bucket b;
    return b;
  }

  std::set<Triple> triples_;
  std::map<Term, Bucket> by_subject_;
  std::map<Iri, Bucket> by_predicate_;
  std::map<Term, Bucket> by_object_;
  PrefixMap prefixes_;
};

// Functional form of Graph::insert.
inline Graph insert(Graph g, Triple t) {
  g.insert(std::move(t));
  return g;
}

}  // namespace halo
