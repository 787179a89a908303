#pragma once
// The HALO ontology: classes, taxonomy, properties and external term
// references, and their emission as an RDF graph.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "halo/rdf.hpp"

namespace halo {

enum class HaloClass {
  GenerativeAI,
  LargeLanguageModel,
  LLMsPrompt,
  LLMsAnswer,
  LLMsHallucination,
  FactualityHallucination,
  FaithfulnessHallucination,
  FactualFabrication,
  FactualInconsistency,
  LogicalInconsistency,
  InstructionInconsistency,
  ContextInconsistency,
};

enum class ObjectProperty { HallucinationGeneratedBy, AnswersPrompt, ProducedByModel };

enum class DataProperty {
  HasPromptID,
  CollectedOn,
  HasSource,
  HasPromptText,
  HasSourceLink,
  HasDocumentType,
  HasAnswerID,
  HasAnswerDate,
  HasAnswerText,
  HasOutcome,
  HasRunDate,
  HasModelName,
  HasModelVersion,
};

enum class LiteralRange { String, Date };

class UnknownCode : public Error {
 public:
  explicit UnknownCode(const std::string& code) : Error("unknown hallucination category code '" + code + "'") {}
};

class NotALeaf : public Error {
 public:
  explicit NotALeaf(std::string_view name) : Error(std::string(name) + " is not a leaf hallucination category") {}
};

namespace detail {

struct ClassInfo {
  HaloClass cls;
  std::string_view name;
  std::string_view label;
  std::optional<HaloClass> parent;
  std::string_view code;  // leaves only
};

inline constexpr std::array<ClassInfo, 12> kClasses{{
    {HaloClass::GenerativeAI, "GenerativeAI", "Generative AI", std::nullopt, ""},
    {HaloClass::LargeLanguageModel, "LargeLanguageModel", "Large Language Model", HaloClass::GenerativeAI, ""},
    {HaloClass::LLMsPrompt, "LLMsPrompt", "LLMs Prompt", std::nullopt, ""},
    {HaloClass::LLMsAnswer, "LLMsAnswer", "LLMs Answer", std::nullopt, ""},
    {HaloClass::LLMsHallucination, "LLMsHallucination", "LLMs Hallucination", std::nullopt, ""},
    {HaloClass::FactualityHallucination, "FactualityHallucination", "Factuality Hallucination",
     HaloClass::LLMsHallucination, ""},
    {HaloClass::FaithfulnessHallucination, "FaithfulnessHallucination", "Faithfulness Hallucination",
     HaloClass::LLMsHallucination, ""},
    {HaloClass::FactualFabrication, "FactualFabrication", "Factual Fabrication",
     HaloClass::FactualityHallucination, "FF"},
    {HaloClass::FactualInconsistency, "FactualInconsistency", "Factual Inconsistency",
     HaloClass::FactualityHallucination, "FI"},
    {HaloClass::LogicalInconsistency, "LogicalInconsistency", "Logical Inconsistency",
     HaloClass::FaithfulnessHallucination, "LI"},
    {HaloClass::InstructionInconsistency, "InstructionInconsistency", "Instruction Inconsistency",
     HaloClass::FaithfulnessHallucination, "II"},
    {HaloClass::ContextInconsistency, "ContextInconsistency", "Context Inconsistency",
     HaloClass::FaithfulnessHallucination, "CI"},
}};

struct ObjectPropertyInfo {
  ObjectProperty prop;
  std::string_view name;
  std::string_view label;
  HaloClass domain;
  HaloClass range;
};

inline constexpr std::array<ObjectPropertyInfo, 3> kObjectProperties{{
    {ObjectProperty::HallucinationGeneratedBy, "hallucinationGeneratedBy", "hallucination generated by",
     HaloClass::LLMsAnswer, HaloClass::LLMsHallucination},
    {ObjectProperty::AnswersPrompt, "answersPrompt", "answers prompt", HaloClass::LLMsAnswer, HaloClass::LLMsPrompt},
    {ObjectProperty::ProducedByModel, "producedByModel", "produced by model", HaloClass::LLMsAnswer,
     HaloClass::LargeLanguageModel},
}};

struct DataPropertyInfo {
  DataProperty prop;
  std::string_view name;
  std::string_view label;
  HaloClass domain;
  LiteralRange range;
};

inline constexpr std::array<DataPropertyInfo, 13> kDataProperties{{
    {DataProperty::HasPromptID, "hasPromptID", "has prompt ID", HaloClass::LLMsPrompt, LiteralRange::String},
    {DataProperty::CollectedOn, "collectedOn", "collected on", HaloClass::LLMsPrompt, LiteralRange::Date},
    {DataProperty::HasSource, "hasSource", "has source", HaloClass::LLMsPrompt, LiteralRange::String},
    {DataProperty::HasPromptText, "hasPromptText", "has prompt text", HaloClass::LLMsPrompt, LiteralRange::String},
    {DataProperty::HasSourceLink, "hasSourceLink", "has source link", HaloClass::LLMsPrompt, LiteralRange::String},
    {DataProperty::HasDocumentType, "hasDocumentType", "has document type", HaloClass::LLMsPrompt,
     LiteralRange::String},
    {DataProperty::HasAnswerID, "hasAnswerID", "has answer ID", HaloClass::LLMsAnswer, LiteralRange::String},
    {DataProperty::HasAnswerDate, "hasAnswerDate", "has answer date", HaloClass::LLMsAnswer, LiteralRange::Date},
    {DataProperty::HasAnswerText, "hasAnswerText", "has answer text", HaloClass::LLMsAnswer, LiteralRange::String},
    {DataProperty::HasOutcome, "hasOutcome", "has outcome", HaloClass::LLMsAnswer, LiteralRange::String},
    {DataProperty::HasRunDate, "hasRunDate", "has run date", HaloClass::LLMsAnswer, LiteralRange::Date},
    {DataProperty::HasModelName, "hasModelName", "has model name", HaloClass::LargeLanguageModel,
     LiteralRange::String},
    {DataProperty::HasModelVersion, "hasModelVersion", "has model version", HaloClass::LargeLanguageModel,
     LiteralRange::String},
}};

}  // namespace detail

inline constexpr std::array<HaloClass, 12> kAllClasses = {
    HaloClass::GenerativeAI,         HaloClass::LargeLanguageModel,       HaloClass::LLMsPrompt,
    HaloClass::LLMsAnswer,           HaloClass::LLMsHallucination,        HaloClass::FactualityHallucination,
    HaloClass::FaithfulnessHallucination, HaloClass::FactualFabrication,  HaloClass::FactualInconsistency,
    HaloClass::LogicalInconsistency, HaloClass::InstructionInconsistency, HaloClass::ContextInconsistency,
};

// Leaf categories in code order: CI, FF, FI, II, LI.
inline constexpr std::array<HaloClass, 5> kLeafCategories = {
    HaloClass::ContextInconsistency, HaloClass::FactualFabrication, HaloClass::FactualInconsistency,
    HaloClass::InstructionInconsistency, HaloClass::LogicalInconsistency,
};

inline const detail::ClassInfo& class_info(HaloClass c) { return detail::kClasses[static_cast<std::size_t>(c)]; }
inline std::string_view class_name(HaloClass c) { return class_info(c).name; }

inline std::optional<HaloClass> class_from_name(std::string_view name) {
  for (const auto& info : detail::kClasses)
    if (info.name == name) return info.cls;
  return std::nullopt;
}

// Path from the direct superclass up to the root; empty for roots.
inline std::vector<HaloClass> superclasses(HaloClass c) {
  std::vector<HaloClass> out;
  for (auto p = class_info(c).parent; p; p = class_info(*p).parent) out.push_back(*p);
  return out;
}

inline bool is_subclass_of(HaloClass c, HaloClass ancestor) {
  for (auto p = class_info(c).parent; p; p = class_info(*p).parent)
    if (*p == ancestor) return true;
  return false;
}

inline bool is_leaf_category(HaloClass c) { return !class_info(c).code.empty(); }

inline std::set<HaloClass> leaf_categories() { return {kLeafCategories.begin(), kLeafCategories.end()}; }

inline std::string category_code(HaloClass c) {
  if (!is_leaf_category(c)) throw NotALeaf(class_name(c));
  return std::string(class_info(c).code);
}

inline HaloClass parse_category_code(std::string_view code) {
  for (const auto& info : detail::kClasses)
    if (!info.code.empty() && info.code == code) return info.cls;
  throw UnknownCode(std::string(code));
}

// Accepts a two-letter code or a leaf class name.
inline HaloClass parse_category(std::string_view text) {
  if (auto c = class_from_name(text); c && is_leaf_category(*c)) return *c;
  return parse_category_code(text);
}

inline constexpr std::string_view kOutcomeHallucinated = "hallucinated";
inline constexpr std::string_view kOutcomeCorrect = "correct";
inline constexpr std::string_view kOutcomeRefused = "refused";

// MIREOT reference: the external namespace, the term, and its superclass.
struct ExternalTermRef {
  Iri ns;
  Iri term;
  Iri superclass;
  std::string label;

  ExternalTermRef(Iri ns_, Iri term_, Iri superclass_, std::string label_)
      : ns(std::move(ns_)), term(std::move(term_)), superclass(std::move(superclass_)), label(std::move(label_)) {
    if (!term.str().starts_with(ns.str())) throw Error("external term " + term.str() + " is outside " + ns.str());
  }
};

inline constexpr std::string_view kFoaf = "http://xmlns.com/foaf/0.1/";
inline constexpr std::string_view kSchemaOrg = "https://schema.org/";
inline constexpr std::string_view kDefaultSchemaNamespace = "https://purl.example/halo#";
inline constexpr std::string_view kDefaultInstanceNamespace = "https://purl.example/halo/data#";

inline std::vector<ExternalTermRef> default_external_refs() {
  auto ref = [](std::string_view ns, std::string_view local, std::string superclass) {
    return ExternalTermRef(Iri(std::string(ns)), Iri(std::string(ns) + std::string(local)),
                           Iri(std::move(superclass)), std::string(local));
  };
  std::string foaf(kFoaf), schema(kSchemaOrg);
  return {
      ref(kFoaf, "Person", foaf + "Agent"),
      ref(kFoaf, "Organization", foaf + "Agent"),
      ref(kFoaf, "Document", vocab::owl_thing().str()),
      ref(kSchemaOrg, "Date", schema + "DataType"),
      ref(kSchemaOrg, "ScholarlyArticle", schema + "Article"),
      ref(kSchemaOrg, "Place", schema + "Thing"),
      ref(kSchemaOrg, "Event", schema + "Thing"),
  };
}

struct SchemaConfig {
  Iri schema_namespace{std::string(kDefaultSchemaNamespace)};
  Iri instance_namespace{std::string(kDefaultInstanceNamespace)};
  std::vector<ExternalTermRef> external_refs = default_external_refs();

  void check() const {
    if (schema_namespace == instance_namespace) throw Error("schema and instance namespaces must differ");
  }
};

inline std::string_view property_name(ObjectProperty p) {
  return detail::kObjectProperties[static_cast<std::size_t>(p)].name;
}
inline std::string_view property_name(DataProperty p) { return detail::kDataProperties[static_cast<std::size_t>(p)].name; }

// IRIs of the HALO vocabulary under one schema namespace.
class Vocabulary {
 public:
  explicit Vocabulary(Iri ns) : ns_(std::move(ns)) {}
  Vocabulary() : Vocabulary(Iri(std::string(kDefaultSchemaNamespace))) {}

  const Iri& ns() const noexcept { return ns_; }
  Iri iri(HaloClass c) const { return Iri(ns_.str() + std::string(class_name(c))); }
  Iri iri(ObjectProperty p) const {
    return Iri(ns_.str() + std::string(detail::kObjectProperties[static_cast<std::size_t>(p)].name));
  }
  Iri iri(DataProperty p) const {
    return Iri(ns_.str() + std::string(detail::kDataProperties[static_cast<std::size_t>(p)].name));
  }

  std::optional<HaloClass> class_of(const Iri& iri) const {
    const std::string& s = iri.str();
    if (!s.starts_with(ns_.str())) return std::nullopt;
    return class_from_name(std::string_view(s).substr(ns_.str().size()));
  }
  std::optional<HaloClass> class_of(const Term& t) const {
    if (const Iri* i = t.if_iri()) return class_of(*i);
    return std::nullopt;
  }

 private:
  Iri ns_;
};

// The namespace IRI without its trailing '#' or '/'.
inline Iri ontology_iri(const Iri& ns) {
  std::string s = ns.str();
  while (!s.empty() && (s.back() == '#' || s.back() == '/')) s.pop_back();
  return Iri(s);
}

inline Graph emit_schema(const SchemaConfig& config = {}) {
  config.check();
  const Vocabulary v(config.schema_namespace);
  Graph g;
  g.prefixes().add("halo", config.schema_namespace);
  g.prefixes().add("rdf", Iri(std::string(vocab::kRdf)));
  g.prefixes().add("rdfs", Iri(std::string(vocab::kRdfs)));
  g.prefixes().add("owl", Iri(std::string(vocab::kOwl)));
  g.prefixes().add("xsd", Iri(std::string(vocab::kXsd)));
  g.prefixes().add("foaf", Iri(std::string(kFoaf)));
  g.prefixes().add("schema", Iri(std::string(kSchemaOrg)));

  const auto& type = vocab::rdf_type();
  const auto& label = vocab::rdfs_label();

  Iri ontology = ontology_iri(config.schema_namespace);
  g.insert(ontology, type, vocab::owl_ontology());
  g.insert(ontology, label, Literal("HALO: an ontology of LLM hallucinations"));

  for (const auto& c : detail::kClasses) {
    Iri iri = v.iri(c.cls);
    g.insert(iri, type, vocab::owl_class());
    g.insert(iri, label, Literal(std::string(c.label)));
    if (c.parent) g.insert(iri, vocab::rdfs_sub_class_of(), v.iri(*c.parent));
  }
  for (const auto& p : detail::kObjectProperties) {
    Iri iri = v.iri(p.prop);
    g.insert(iri, type, vocab::owl_object_property());
    g.insert(iri, label, Literal(std::string(p.label)));
    g.insert(iri, vocab::rdfs_domain(), v.iri(p.domain));
    g.insert(iri, vocab::rdfs_range(), v.iri(p.range));
  }
  for (const auto& p : detail::kDataProperties) {
    Iri iri = v.iri(p.prop);
    g.insert(iri, type, vocab::owl_datatype_property());
    g.insert(iri, label, Literal(std::string(p.label)));
    g.insert(iri, vocab::rdfs_domain(), v.iri(p.domain));
    g.insert(iri, vocab::rdfs_range(), p.range == LiteralRange::Date ? vocab::xsd_date() : vocab::xsd_string());
  }
  for (const auto& ref : config.external_refs) {
    g.insert(ref.term, type, vocab::owl_class());
    g.insert(ref.term, label, Literal(ref.label));
    g.insert(ref.term, vocab::rdfs_sub_class_of(), ref.superclass);
    g.insert(ref.term, vocab::rdfs_is_defined_by(), ref.ns);
  }
  return g;
}

}  // namespace halo
