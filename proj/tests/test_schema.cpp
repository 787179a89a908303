#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "halo/schema.hpp"
#include "halo/turtle.hpp"

using namespace halo;

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool in_ns(const Term& t, const Iri& ns) { return t.is_iri() && t.as_iri().str().starts_with(ns.str()); }
}  // namespace

TEST(Taxonomy, LeavesAndParents) {
  EXPECT_EQ(leaf_categories().size(), 5u);
  for (HaloClass c : kLeafCategories) {
    EXPECT_TRUE(is_leaf_category(c));
    EXPECT_TRUE(is_subclass_of(c, HaloClass::LLMsHallucination));
    EXPECT_EQ(superclasses(c).size(), 2u);
  }
  EXPECT_FALSE(is_leaf_category(HaloClass::FactualityHallucination));
  EXPECT_TRUE(is_subclass_of(HaloClass::LargeLanguageModel, HaloClass::GenerativeAI));
  EXPECT_FALSE(is_subclass_of(HaloClass::LLMsPrompt, HaloClass::GenerativeAI));
  EXPECT_TRUE(superclasses(HaloClass::LLMsAnswer).empty());
}

TEST(Taxonomy, CategoryCodes) {
  EXPECT_EQ(category_code(HaloClass::FactualFabrication), "FF");
  EXPECT_EQ(category_code(HaloClass::ContextInconsistency), "CI");
  EXPECT_EQ(parse_category("LI"), HaloClass::LogicalInconsistency);
  EXPECT_EQ(parse_category("InstructionInconsistency"), HaloClass::InstructionInconsistency);
  EXPECT_THROW(parse_category("XX"), UnknownCode);
  EXPECT_THROW(parse_category("FactualityHallucination"), UnknownCode);
  EXPECT_THROW(category_code(HaloClass::LLMsHallucination), NotALeaf);
  for (HaloClass c : kLeafCategories) EXPECT_EQ(parse_category(category_code(c)), c);
}

TEST(Taxonomy, NamesRoundTrip) {
  for (HaloClass c : kAllClasses) EXPECT_EQ(class_from_name(class_name(c)), c);
  EXPECT_FALSE(class_from_name("Nothing"));
  EXPECT_EQ(property_name(ObjectProperty::ProducedByModel), "producedByModel");
  EXPECT_EQ(property_name(DataProperty::HasRunDate), "hasRunDate");
}

TEST(Vocabulary, ClassOfRespectsNamespace) {
  Vocabulary v;
  EXPECT_EQ(v.class_of(v.iri(HaloClass::LLMsAnswer)), HaloClass::LLMsAnswer);
  EXPECT_FALSE(v.class_of(Iri("http://example.org/LLMsAnswer")));
  EXPECT_FALSE(v.class_of(Term::literal("LLMsAnswer")));
  Vocabulary other(Iri("http://example.org/onto#"));
  EXPECT_EQ(other.iri(HaloClass::GenerativeAI).str(), "http://example.org/onto#GenerativeAI");
  EXPECT_EQ(ontology_iri(Iri("http://example.org/onto#")).str(), "http://example.org/onto");
}

TEST(Schema, Counts) {
  SchemaConfig config;
  Graph g = emit_schema(config);
  const Iri& ns = config.schema_namespace;
  int classes = 0, externals = 0, axioms = 0, object_props = 0, data_props = 0;
  for (const auto& c : g.subjects_of_type(vocab::owl_class())) {
    if (in_ns(c, ns)) ++classes;
    else if (g.object(c, vocab::rdfs_is_defined_by())) ++externals;
  }
  for (const auto& t : g.match(std::nullopt, vocab::rdfs_sub_class_of(), std::nullopt))
    if (in_ns(t.subject, ns) && in_ns(t.object, ns)) ++axioms;
  for (const auto& p : g.subjects_of_type(vocab::owl_object_property())) object_props += in_ns(p, ns);
  for (const auto& p : g.subjects_of_type(vocab::owl_datatype_property())) data_props += in_ns(p, ns);
  EXPECT_EQ(classes, 12);
  EXPECT_EQ(axioms, 8);
  EXPECT_EQ(externals, 7);
  EXPECT_EQ(object_props, 3);
  EXPECT_EQ(data_props, 13);
}

TEST(Schema, DomainsAndRanges) {
  Vocabulary v;
  Graph g = emit_schema();
  EXPECT_EQ(g.object(v.iri(ObjectProperty::ProducedByModel), vocab::rdfs_range()),
            Term(v.iri(HaloClass::LargeLanguageModel)));
  EXPECT_EQ(g.object(v.iri(DataProperty::HasRunDate), vocab::rdfs_range()), Term(vocab::xsd_date()));
  EXPECT_EQ(g.object(v.iri(DataProperty::HasOutcome), vocab::rdfs_range()), Term(vocab::xsd_string()));
  EXPECT_EQ(g.object(v.iri(DataProperty::HasPromptID), vocab::rdfs_domain()), Term(v.iri(HaloClass::LLMsPrompt)));
}

TEST(Schema, MatchesGoldenFile) {
  std::string golden = read_file(std::string(HALO_SOURCE_DIR) + "/fixtures/halo-schema.ttl");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(serialize_turtle(emit_schema()), golden);
}

TEST(Schema, CustomNamespace) {
  SchemaConfig config;
  config.schema_namespace = Iri("http://example.org/onto#");
  Graph g = emit_schema(config);
  EXPECT_TRUE(g.contains(Triple(Term::iri("http://example.org/onto#FactualFabrication"), vocab::rdfs_sub_class_of(),
                                Term::iri("http://example.org/onto#FactualityHallucination"))));
  EXPECT_TRUE(g.contains(Triple(Term::iri("http://example.org/onto"), vocab::rdf_type(), vocab::owl_ontology())));
  config.instance_namespace = config.schema_namespace;
  EXPECT_THROW(emit_schema(config), Error);
}

TEST(Schema, ExternalReferencesAreConfigurable) {
  SchemaConfig config;
  config.external_refs.clear();
  Graph g = emit_schema(config);
  int externals = 0;
  for (const auto& c : g.subjects_of_type(vocab::owl_class())) externals += !in_ns(c, config.schema_namespace);
  EXPECT_TRUE(g.match(std::nullopt, vocab::rdfs_is_defined_by(), std::nullopt).empty());
  EXPECT_EQ(externals, 0);
}
