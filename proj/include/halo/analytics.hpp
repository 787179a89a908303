#pragma once
// Competency questions CQ1-CQ5 and per-run hallucination rates, each with a
// native implementation and an equivalent SPARQL query (run_cq_sparql).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "halo/cq_queries.hpp"
#include "halo/detail/lexer.hpp"
#include "halo/schema.hpp"
#include "halo/sparql.hpp"

namespace halo {

class UnknownModel : public Error {
 public:
  explicit UnknownModel(const std::string& name) : Error("unknown model '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

struct RateRow {
  std::string model;
  Date run;
  std::int64_t hallucinated = 0;
  std::int64_t correct = 0;
  std::int64_t refused = 0;

  std::int64_t total() const { return hallucinated + correct + refused; }
  double rate() const { return total() == 0 ? 0.0 : static_cast<double>(hallucinated) / static_cast<double>(total()); }
  // Percentage in tenths, rounded half up.
  std::int64_t rate_tenths() const { return total() == 0 ? 0 : (2 * hallucinated * 1000 + total()) / (2 * total()); }
  std::string percent() const {
    auto t = rate_tenths();
    return std::to_string(t / 10) + "." + std::to_string(t % 10) + "%";
  }
};

struct RateTable {
  std::vector<RateRow> rows;  // sorted by (run, model)

  const RateRow* find(std::string_view model, const Date& run) const {
    for (const auto& r : rows)
      if (r.model == model && r.run == run) return &r;
    return nullptr;
  }
};

struct RankEntry {
  HaloClass category;
  std::int64_t count;
  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

struct RankingResult {
  std::vector<RankEntry> entries;

  std::vector<HaloClass> order() const {
    std::vector<HaloClass> out;
    for (const auto& e : entries) out.push_back(e.category);
    return out;
  }
  std::int64_t total() const {
    std::int64_t n = 0;
    for (const auto& e : entries) n += e.count;
    return n;
  }
};

struct TopModel {
  std::optional<std::string> model;  // nullopt: no instances of the category
  std::int64_t count = 0;
  std::vector<std::string> tied;  // every model sharing the maximum, by name
};

enum class PairMode { AnyHallucination, SameCategory };

inline std::string_view pair_mode_name(PairMode m) { return m == PairMode::AnyHallucination ? "any" : "same-category"; }

inline PairMode parse_pair_mode(std::string_view s) {
  if (s == "any" || s == "any-hallucination") return PairMode::AnyHallucination;
  if (s == "same-category" || s == "same") return PairMode::SameCategory;
  throw Error("unknown pair mode '" + std::string(s) + "' (expected any or same-category)");
}

struct PairMatrix {
  std::vector<std::string> models;
  std::map<std::pair<std::string, std::string>, std::int64_t> cells;  // keys ordered (a < b)

  std::int64_t count(const std::string& a, const std::string& b) const {
    if (a == b) throw Error("pair matrix has no diagonal");
    auto it = cells.find(a < b ? std::pair(a, b) : std::pair(b, a));
    return it == cells.end() ? 0 : it->second;
  }
};

namespace detail {

struct AnswerFacts {
  Term answer;
  std::set<std::string> model_names;
  std::set<Term> models;
  std::set<Term> prompts;
  std::set<Term> runs;
  std::set<std::string> outcomes;
  std::map<Term, std::set<HaloClass>> hallucinations;  // linked individual -> leaf types

  std::set<HaloClass> categories() const {
    std::set<HaloClass> out;
    for (const auto& [_, leaves] : hallucinations) out.insert(leaves.begin(), leaves.end());
    return out;
  }
  bool in_run(const Date& run) const { return runs.contains(Term(Literal::date(run))); }
};

class AnswerIndex {
 public:
  AnswerIndex(const Graph& graph, const SchemaConfig& config) : graph_(graph), v_(config.schema_namespace) {
    const Iri name_p = v_.iri(DataProperty::HasModelName);
    const Iri link = v_.iri(ObjectProperty::HallucinationGeneratedBy);
    graph.for_each_match(nullptr, &name_p, nullptr, [&](const Triple& t) {
      if (const Literal* l = t.object.if_literal()) model_names_.insert(l->lexical());
    });
    for (const auto& a : graph.subjects_of_type(v_.iri(HaloClass::LLMsAnswer))) {
      AnswerFacts f{a, {}, {}, {}, {}, {}, {}};
      for (const auto& m : graph.objects(a, v_.iri(ObjectProperty::ProducedByModel))) {
        f.models.insert(m);
        for (const auto& n : graph.objects(m, name_p))
          if (const Literal* l = n.if_literal()) f.model_names.insert(l->lexical());
      }
      for (const auto& p : graph.objects(a, v_.iri(ObjectProperty::AnswersPrompt))) f.prompts.insert(p);
      for (const auto& r : graph.objects(a, v_.iri(DataProperty::HasRunDate))) f.runs.insert(r);
      for (const auto& o : graph.objects(a, v_.iri(DataProperty::HasOutcome)))
        if (const Literal* l = o.if_literal()) f.outcomes.insert(l->lexical());
      for (const auto& h : graph.objects(a, link)) {
        auto& leaves = f.hallucinations[h];
        for (const auto& t : graph.objects(h, vocab::rdf_type()))
          if (auto c = v_.class_of(t); c && is_leaf_category(*c)) leaves.insert(*c);
      }
      answers_.push_back(std::move(f));
    }
  }

  const std::vector<AnswerFacts>& answers() const { return answers_; }
  const std::set<std::string>& model_names() const { return model_names_; }
  const Vocabulary& vocabulary() const { return v_; }
  const Graph& graph() const { return graph_; }

  void require_model(const std::string& name) const {
    if (!model_names_.contains(name)) throw UnknownModel(name);
  }

  std::optional<Date> latest_run() const {
    std::optional<Date> best;
    for (const auto& a : answers_)
      for (const auto& r : a.runs)
        if (const Literal* l = r.if_literal())
          if (auto d = l->date_value(); d && (!best || *best < *d)) best = d;
    return best;
  }

 private:
  const Graph& graph_;
  Vocabulary v_;
  std::set<std::string> model_names_;
  std::vector<AnswerFacts> answers_;
};

}  // namespace detail

inline std::optional<Date> latest_run(const Graph& graph, const SchemaConfig& config = {}) {
  return detail::AnswerIndex(graph, config).latest_run();
}

inline std::set<Iri> cq1_genai_types(const Graph& graph, const SchemaConfig& config = {}) {
  detail::AnswerIndex index(graph, config);
  const auto& v = index.vocabulary();
  std::set<Iri> out;
  for (const auto& a : index.answers()) {
    if (a.hallucinations.empty()) continue;
    for (const auto& m : a.models)
      for (const auto& t : graph.objects(m, vocab::rdf_type()))
        if (auto c = v.class_of(t); c && *c != HaloClass::GenerativeAI && is_subclass_of(*c, HaloClass::GenerativeAI))
          out.insert(t.as_iri());
  }
  return out;
}

inline std::set<HaloClass> cq2_types_by_model(const Graph& graph, const std::string& model, const Date& run,
                                              const SchemaConfig& config = {}) {
  detail::AnswerIndex index(graph, config);
  index.require_model(model);
  std::set<HaloClass> out;
  for (const auto& a : index.answers())
    if (a.model_names.contains(model) && a.in_run(run))
      for (auto c : a.categories()) out.insert(c);
  return out;
}

inline RankingResult cq3_ranking(const Graph& graph, const std::string& model, const Date& run,
                                 const SchemaConfig& config = {}) {
  detail::AnswerIndex index(graph, config);
  index.require_model(model);
  std::map<HaloClass, std::set<Term>> members;
  for (const auto& a : index.answers())
    if (a.model_names.contains(model) && a.in_run(run))
      for (const auto& [h, leaves] : a.hallucinations)
        for (auto c : leaves) members[c].insert(h);
  RankingResult result;
  for (const auto& [c, hs] : members) result.entries.push_back({c, static_cast<std::int64_t>(hs.size())});
  std::sort(result.entries.begin(), result.entries.end(), [](const RankEntry& x, const RankEntry& y) {
    if (x.count != y.count) return x.count > y.count;
    return category_code(x.category) < category_code(y.category);
  });
  return result;
}

inline TopModel cq4_top_model_for_type(const Graph& graph, HaloClass category, const Date& run,
                                       const SchemaConfig& config = {}) {
  if (!is_leaf_category(category)) throw NotALeaf(class_name(category));
  detail::AnswerIndex index(graph, config);
  std::map<std::string, std::set<Term>> members;
  for (const auto& a : index.answers())
    if (a.in_run(run))
      for (const auto& [h, leaves] : a.hallucinations)
        if (leaves.contains(category))
          for (const auto& name : a.model_names) members[name].insert(h);
  TopModel top;
  for (const auto& [name, hs] : members) {
    auto n = static_cast<std::int64_t>(hs.size());
    if (n > top.count) {
      top.count = n;
      top.tied.clear();
    }
    if (n == top.count && n > 0) top.tied.push_back(name);
  }
  if (!top.tied.empty()) top.model = top.tied.front();
  return top;
}

inline PairMatrix cq5_pair_matrix(const Graph& graph, const Date& run, PairMode mode = PairMode::AnyHallucination,
                                  const SchemaConfig& config = {}) {
  detail::AnswerIndex index(graph, config);
  PairMatrix m;
  m.models.assign(index.model_names().begin(), index.model_names().end());
  std::map<Term, std::map<std::string, std::set<HaloClass>>> by_prompt;
  for (const auto& a : index.answers()) {
    if (!a.in_run(run)) continue;
    auto cats = a.categories();
    if (cats.empty()) continue;
    for (const auto& p : a.prompts)
      for (const auto& name : a.model_names) by_prompt[p][name].insert(cats.begin(), cats.end());
  }
  for (std::size_t i = 0; i < m.models.size(); ++i)
    for (std::size_t j = i + 1; j < m.models.size(); ++j) m.cells[{m.models[i], m.models[j]}] = 0;
  for (const auto& [_, models] : by_prompt)
    for (auto x = models.begin(); x != models.end(); ++x)
      for (auto y = std::next(x); y != models.end(); ++y) {
        bool shared = mode == PairMode::AnyHallucination;
        if (!shared)
          for (auto c : x->second)
            if (y->second.contains(c)) shared = true;
        if (shared) ++m.cells[{x->first, y->first}];
      }
  return m;
}

inline RateTable rates(const Graph& graph, const SchemaConfig& config = {}) {
  detail::AnswerIndex index(graph, config);
  std::map<std::pair<Date, std::string>, RateRow> rows;
  for (const auto& a : index.answers()) {
    for (const auto& r : a.runs) {
      const Literal* l = r.if_literal();
      auto run = l ? l->date_value() : std::nullopt;
      if (!run) continue;
      for (const auto& name : a.model_names) {
        auto [it, _] = rows.try_emplace({*run, name}, RateRow{name, *run});
        if (a.outcomes.contains(std::string(kOutcomeHallucinated))) ++it->second.hallucinated;
        else if (a.outcomes.contains(std::string(kOutcomeCorrect))) ++it->second.correct;
        else if (a.outcomes.contains(std::string(kOutcomeRefused))) ++it->second.refused;
      }
    }
  }
  RateTable table;
  for (auto& [_, row] : rows) table.rows.push_back(std::move(row));
  return table;
}

// ---------------------------------------------------------------------------
// SPARQL path

using QueryParams = std::map<std::string, std::string>;

inline std::string_view cq_query_text(int n) {
  switch (n) {
    case 1: return queries::cq1;
    case 2: return queries::cq2;
    case 3: return queries::cq3;
    case 4: return queries::cq4;
    case 5: return queries::cq5;
    default: throw Error("competency question number must be 1..5, got " + std::to_string(n));
  }
}

namespace detail {

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace detail

// Fills the {{...}} placeholders of query n. Missing run dates default to the
// latest run in the graph; a missing mode defaults to "any".
inline std::string instantiate_cq(int n, const Graph& graph, const QueryParams& params, const SchemaConfig& config = {}) {
  std::string text(cq_query_text(n));
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = params.find(key);
    return it == params.end() ? std::nullopt : std::optional(it->second);
  };
  detail::replace_all(text, "{{halo}}", config.schema_namespace.str());
  if (text.find("{{model}}") != std::string::npos) {
    auto model = get("model");
    if (!model) throw Error("CQ" + std::to_string(n) + " requires a model");
    detail::replace_all(text, "{{model}}", halo::detail::escape_string(*model));
  }
  if (text.find("{{category}}") != std::string::npos) {
    auto cat = get("category");
    if (!cat) throw Error("CQ" + std::to_string(n) + " requires a category");
    detail::replace_all(text, "{{category}}", Vocabulary(config.schema_namespace).iri(parse_category(*cat)).str());
  }
  if (text.find("{{run}}") != std::string::npos) {
    std::optional<Date> run;
    if (auto r = get("run")) {
      run = Date::parse(*r);
      if (!run) throw Error("invalid run date '" + *r + "' (expected YYYY-MM-DD)");
    } else {
      run = latest_run(graph, config);
      if (!run) throw Error("graph has no run dates; a run date is required");
    }
    detail::replace_all(text, "{{run}}", run->iso());
  }
  if (text.find("{{mode}}") != std::string::npos) {
    PairMode mode = parse_pair_mode(get("mode").value_or("any"));
    detail::replace_all(text, "{{mode}}", pair_mode_name(mode));
  }
  return text;
}

inline sparql::ResultTable run_cq_sparql(const Graph& graph, int n, const QueryParams& params = {},
                                         const SchemaConfig& config = {}) {
  std::string text = instantiate_cq(n, graph, params, config);
  Graph merged = graph;
  merged.merge(emit_schema(config));
  return sparql::execute(merged, text);
}

// ---------------------------------------------------------------------------
// Tabular rendering shared by the report formats

struct Tabular {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;  // strings, integers or null
};

inline std::string cell_text(const nlohmann::ordered_json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline std::string to_text(const Tabular& t) {
  std::vector<std::size_t> width;
  for (const auto& c : t.columns) width.push_back(c.size());
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], cell_text(r[i]).size());
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) l += "  ";
      l += cells[i];
      if (i + 1 < cells.size()) l.append(width[i] - cells[i].size(), ' ');
    }
    out += l + "\n";
  };
  line(t.columns);
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    for (const auto& v : r) cells.push_back(cell_text(v));
    line(cells);
  }
  return out;
}

inline std::string to_csv(const Tabular& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + sparql::csv_field(t.columns[i]);
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + (r[i].is_null() ? "" : sparql::csv_field(cell_text(r[i])));
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Tabular& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
    arr.push_back(std::move(o));
  }
  return arr;
}

inline Tabular tabulate(const RateTable& table) {
  Tabular t{{"run", "model", "hallucinated", "correct", "refused", "total", "rate"}, {}};
  for (const auto& r : table.rows)
    t.rows.push_back({r.run.iso(), r.model, r.hallucinated, r.correct, r.refused, r.total(), r.percent()});
  return t;
}

inline Tabular tabulate(const std::set<Iri>& types, const PrefixMap& prefixes) {
  Tabular t{{"type"}, {}};
  for (const auto& i : types) t.rows.push_back({prefixes.compact(i).value_or(i.str())});
  return t;
}

inline Tabular tabulate(const std::set<HaloClass>& categories) {
  Tabular t{{"code", "category"}, {}};
  std::vector<HaloClass> sorted(categories.begin(), categories.end());
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return category_code(a) < category_code(b); });
  for (auto c : sorted) t.rows.push_back({category_code(c), std::string(class_name(c))});
  return t;
}

inline Tabular tabulate(const RankingResult& ranking) {
  Tabular t{{"rank", "code", "category", "count"}, {}};
  std::int64_t rank = 0;
  for (const auto& e : ranking.entries)
    t.rows.push_back({++rank, category_code(e.category), std::string(class_name(e.category)), e.count});
  return t;
}

inline Tabular tabulate(const TopModel& top) {
  Tabular t{{"model", "count", "tied"}, {}};
  std::string tied;
  for (const auto& n : top.tied) tied += (tied.empty() ? "" : ";") + n;
  t.rows.push_back({top.model ? nlohmann::ordered_json(*top.model) : nlohmann::ordered_json(), top.count,
                    top.tied.size() > 1 ? nlohmann::ordered_json(tied) : nlohmann::ordered_json()});
  return t;
}

inline Tabular tabulate(const PairMatrix& m) {
  Tabular t;
  t.columns.push_back("model");
  t.columns.insert(t.columns.end(), m.models.begin(), m.models.end());
  for (const auto& a : m.models) {
    std::vector<nlohmann::ordered_json> row{a};
    for (const auto& b : m.models) row.push_back(a == b ? nlohmann::ordered_json() : nlohmann::ordered_json(m.count(a, b)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace halo
