#pragma once
// Schema pitfall checks (S-xxx) and instance conformance checks (H-xxx).

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "halo/schema.hpp"

namespace halo {

enum class Severity { Error, Warning };

inline std::string_view severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

struct ValidationIssue {
  std::string code;
  Severity severity = Severity::Error;
  Term subject;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

class ValidationReport {
 public:
  void add(std::string code, Severity severity, Term subject, std::string message) {
    issues_.push_back({std::move(code), severity, std::move(subject), std::move(message)});
    sorted_ = false;
  }
  void merge(const ValidationReport& other) {
    issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
    sorted_ = false;
  }

  const std::vector<ValidationIssue>& issues() const {
    if (!sorted_) {
      std::stable_sort(issues_.begin(), issues_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.code, a.subject, a.message) < std::tie(b.code, b.subject, b.message);
      });
      issues_.erase(std::unique(issues_.begin(), issues_.end()), issues_.end());
      sorted_ = true;
    }
    return issues_;
  }

  std::size_t errors() const { return count(Severity::Error); }
  std::size_t warnings() const { return count(Severity::Warning); }
  bool empty() const { return issues().empty(); }
  bool passes(bool strict = false) const { return errors() == 0 && (!strict || warnings() == 0); }

  std::set<std::string> codes() const {
    std::set<std::string> out;
    for (const auto& i : issues()) out.insert(i.code);
    return out;
  }

 private:
  std::size_t count(Severity s) const {
    const auto& all = issues();
    return static_cast<std::size_t>(std::count_if(all.begin(), all.end(), [s](const auto& i) { return i.severity == s; }));
  }

  mutable std::vector<ValidationIssue> issues_;
  mutable bool sorted_ = true;
};

namespace detail {

inline std::string render_subject(const Term& t) {
  if (t.is_iri()) return "<" + t.as_iri().str() + ">";
  if (t.is_blank()) return "_:" + t.as_blank().id;
  return "\"" + t.as_literal().lexical() + "\"";
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace detail

inline std::string to_text(const ValidationReport& report) {
  std::string out;
  for (const auto& i : report.issues())
    out += i.code + " " + std::string(severity_name(i.severity)) + " " + detail::render_subject(i.subject) + " " +
           i.message + "\n";
  out += std::to_string(report.errors()) + " error(s), " + std::to_string(report.warnings()) + " warning(s)\n";
  return out;
}

inline nlohmann::ordered_json to_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["errors"] = report.errors();
  j["warnings"] = report.warnings();
  auto issues = nlohmann::ordered_json::array();
  for (const auto& i : report.issues()) {
    nlohmann::ordered_json o;
    o["code"] = i.code;
    o["severity"] = severity_name(i.severity);
    o["subject"] = i.subject.is_iri() ? i.subject.as_iri().str() : detail::render_subject(i.subject);
    o["message"] = i.message;
    issues.push_back(std::move(o));
  }
  j["issues"] = std::move(issues);
  return j;
}

// ---------------------------------------------------------------------------

inline ValidationReport validate_schema(const Graph& graph) {
  ValidationReport report;
  const Iri& sub = vocab::rdfs_sub_class_of();

  // S-001: nodes lying on a subclass cycle.
  std::map<Term, std::set<Term>> edges;
  graph.for_each_match(nullptr, &sub, nullptr, [&](const Triple& t) { edges[t.subject].insert(t.object); });
  for (const auto& [start, _] : edges) {
    std::set<Term> seen;
    std::vector<const Term*> stack{&start};
    bool cyclic = false;
    while (!stack.empty() && !cyclic) {
      const Term* n = stack.back();
      stack.pop_back();
      auto it = edges.find(*n);
      if (it == edges.end()) continue;
      for (const auto& next : it->second) {
        if (next == start) {
          cyclic = true;
          break;
        }
        if (seen.insert(next).second) stack.push_back(&next);
      }
    }
    if (cyclic) report.add("S-001", Severity::Error, start, "class is part of a subClassOf cycle");
  }

  std::set<Term> classes = graph.subjects_of_type(vocab::owl_class());
  std::set<Term> properties = graph.subjects_of_type(vocab::owl_object_property());
  for (const auto& p : graph.subjects_of_type(vocab::owl_datatype_property())) properties.insert(p);

  // S-002
  for (const auto* set : {&classes, &properties})
    for (const auto& t : *set)
      if (!graph.object(t, vocab::rdfs_label()))
        report.add("S-002", Severity::Warning, t, classes.contains(t) ? "class has no rdfs:label" : "property has no rdfs:label");

  // S-003
  for (const auto& p : properties) {
    bool domain = graph.object(p, vocab::rdfs_domain()).has_value();
    bool range = graph.object(p, vocab::rdfs_range()).has_value();
    if (!domain || !range)
      report.add("S-003", Severity::Warning, p,
                 !domain && !range ? "property has neither domain nor range"
                 : !domain         ? "property has no rdfs:domain"
                                   : "property has no rdfs:range");
  }

  // S-004: no subclass edge in either direction and no domain/range use.
  for (const auto& c : classes) {
    bool linked = !graph.objects(c, sub).empty() || !graph.subjects(sub, c).empty() ||
                  !graph.subjects(vocab::rdfs_domain(), c).empty() || !graph.subjects(vocab::rdfs_range(), c).empty();
    if (!linked) report.add("S-004", Severity::Warning, c, "class is disconnected from the taxonomy and unused by any property");
  }

  // S-005
  std::set<Iri> iris;
  for (const auto& t : graph) {
    if (const Iri* s = t.subject.if_iri()) iris.insert(*s);
    iris.insert(t.predicate);
    if (const Iri* o = t.object.if_iri()) iris.insert(*o);
  }
  std::map<std::string, std::vector<Iri>> folded;
  for (const auto& i : iris) folded[detail::lower(i.str())].push_back(i);
  for (const auto& [_, group] : folded) {
    if (group.size() < 2) continue;
    for (const auto& i : group) {
      std::string others;
      for (const auto& o : group)
        if (!(o == i)) others += (others.empty() ? "<" : ", <") + o.str() + ">";
      report.add("S-005", Severity::Warning, Term(i), "IRI differs only by letter case from " + others);
    }
  }
  return report;
}

inline ValidationReport validate_instances(const Graph& graph, const Iri& schema_namespace) {
  ValidationReport report;
  const Vocabulary v(schema_namespace);
  const Iri& type = vocab::rdf_type();
  const Iri link = v.iri(ObjectProperty::HallucinationGeneratedBy);
  const Iri outcome_p = v.iri(DataProperty::HasOutcome);

  std::set<Term> answers = graph.subjects_of_type(v.iri(HaloClass::LLMsAnswer));

  // H-001
  for (const auto& a : answers) {
    std::vector<std::string> missing;
    for (auto p : {ObjectProperty::ProducedByModel, ObjectProperty::AnswersPrompt})
      if (!graph.object(a, v.iri(p))) missing.emplace_back(property_name(p));
    for (auto p : {DataProperty::HasOutcome, DataProperty::HasRunDate})
      if (!graph.object(a, v.iri(p))) missing.emplace_back(property_name(p));
    if (!missing.empty()) {
      std::string m;
      for (const auto& s : missing) m += (m.empty() ? "" : ", ") + s;
      report.add("H-001", Severity::Error, a, "answer lacks " + m);
    }
  }

  // H-002, H-004
  for (const auto& a : answers) {
    std::set<std::string> outcomes;
    for (const auto& o : graph.objects(a, outcome_p))
      if (const Literal* l = o.if_literal()) outcomes.insert(l->lexical());
    std::size_t links = graph.objects(a, link).size();
    if (outcomes.contains(std::string(kOutcomeHallucinated))) {
      if (links != 1)
        report.add("H-002", Severity::Error, a,
                   "hallucinated answer has " + std::to_string(links) + " hallucinationGeneratedBy links (expected 1)");
    } else if (links > 0 && (outcomes.contains(std::string(kOutcomeCorrect)) ||
                             outcomes.contains(std::string(kOutcomeRefused)))) {
      report.add("H-004", Severity::Error, a, "answer with outcome " + *outcomes.begin() + " has a hallucinationGeneratedBy link");
    }
  }

  // H-003: every hallucination individual carries exactly one leaf type.
  std::set<Term> hallucinations;
  graph.for_each_match(nullptr, &link, nullptr, [&](const Triple& t) { hallucinations.insert(t.object); });
  for (HaloClass c : kAllClasses)
    if (c == HaloClass::LLMsHallucination || is_subclass_of(c, HaloClass::LLMsHallucination))
      for (const auto& s : graph.subjects_of_type(v.iri(c))) hallucinations.insert(s);
  for (const auto& h : hallucinations) {
    if (h.is_literal()) {
      report.add("H-003", Severity::Error, h, "hallucination individual is a literal");
      continue;
    }
    std::size_t leaves = 0;
    for (const auto& t : graph.objects(h, type))
      if (auto c = v.class_of(t); c && is_leaf_category(*c)) ++leaves;
    if (leaves != 1)
      report.add("H-003", Severity::Error, h,
                 "hallucination individual has " + std::to_string(leaves) + " leaf category types (expected 1)");
  }

  // H-005
  std::map<std::string, std::set<Term>> prompt_ids;
  const Iri pid = v.iri(DataProperty::HasPromptID);
  graph.for_each_match(nullptr, &pid, nullptr, [&](const Triple& t) {
    if (const Literal* l = t.object.if_literal()) prompt_ids[l->lexical()].insert(t.subject);
  });
  for (const auto& [id, prompts] : prompt_ids)
    if (prompts.size() > 1)
      for (const auto& p : prompts)
        report.add("H-005", Severity::Error, p, "hasPromptID \"" + id + "\" is shared by " + std::to_string(prompts.size()) + " prompts");

  // H-006
  std::set<Iri> date_props;
  for (const auto& d : detail::kDataProperties)
    if (d.range == LiteralRange::Date) date_props.insert(v.iri(d.prop));
  for (const auto& t : graph) {
    const Literal* l = t.object.if_literal();
    if (l == nullptr) continue;
    if (l->is_date() && !l->date_value())
      report.add("H-006", Severity::Error, t.subject, "invalid xsd:date literal \"" + l->lexical() + "\"");
    else if (!l->is_date() && date_props.contains(t.predicate))
      report.add("H-006", Severity::Error, t.subject,
                 "value \"" + l->lexical() + "\" of <" + t.predicate.str() + "> is not an xsd:date");
  }

  // H-007
  graph.for_each_match(nullptr, &link, nullptr, [&](const Triple& t) {
    if (!answers.contains(t.subject))
      report.add("H-007", Severity::Error, t.subject, "hallucinationGeneratedBy subject is not an LLMsAnswer");
  });
  return report;
}

inline ValidationReport validate_instances(const Graph& graph, const SchemaConfig& config = {}) {
  return validate_instances(graph, config.schema_namespace);
}

}  // namespace halo
