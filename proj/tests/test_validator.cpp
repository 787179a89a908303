#include <gtest/gtest.h>

#include "halo/halo.hpp"
#include "support/faults.hpp"

using namespace halo;
namespace ht = halo::testing;

TEST(ValidationReport, SortsAndDeduplicates) {
  ValidationReport r;
  r.add("H-002", Severity::Error, Term::iri("http://example.org/b"), "m");
  r.add("H-001", Severity::Error, Term::iri("http://example.org/z"), "m");
  r.add("H-002", Severity::Error, Term::iri("http://example.org/a"), "m");
  r.add("H-002", Severity::Error, Term::iri("http://example.org/a"), "m");
  ASSERT_EQ(r.issues().size(), 3u);
  EXPECT_EQ(r.issues()[0].code, "H-001");
  EXPECT_EQ(r.issues()[1].subject, Term::iri("http://example.org/a"));
  EXPECT_EQ(r.errors(), 3u);
  EXPECT_EQ(r.codes(), (std::set<std::string>{"H-001", "H-002"}));
}

TEST(ValidationReport, StrictModeCountsWarnings) {
  ValidationReport r;
  EXPECT_TRUE(r.empty());
  r.add("S-002", Severity::Warning, Term::iri("http://example.org/c"), "class has no rdfs:label");
  EXPECT_TRUE(r.passes());
  EXPECT_FALSE(r.passes(true));
  ValidationReport other;
  other.add("S-001", Severity::Error, Term::iri("http://example.org/c"), "cycle");
  r.merge(other);
  EXPECT_FALSE(r.passes());
  EXPECT_EQ(r.warnings(), 1u);
}

TEST(ValidationReport, Rendering) {
  ValidationReport r;
  r.add("H-006", Severity::Error, Term::iri("http://example.org/a"), "invalid xsd:date literal \"2024-02-30\"");
  r.add("S-004", Severity::Warning, Term::blank("b"), "disconnected");
  EXPECT_EQ(to_text(r),
            "H-006 error <http://example.org/a> invalid xsd:date literal \"2024-02-30\"\n"
            "S-004 warning _:b disconnected\n"
            "1 error(s), 1 warning(s)\n");
  auto j = to_json(r);
  EXPECT_EQ(j["errors"], 1);
  EXPECT_EQ(j["warnings"], 1);
  EXPECT_EQ(j["issues"][0]["subject"], "http://example.org/a");
  EXPECT_EQ(j["issues"][1]["severity"], "warning");
}

TEST(SchemaChecks, EmittedSchemaIsClean) {
  auto r = validate_schema(emit_schema());
  EXPECT_TRUE(r.empty()) << to_text(r);
}

TEST(SchemaChecks, CycleReportsEveryMember) {
  Graph g = ht::schema_graph();
  Vocabulary v;
  g.insert(v.iri(HaloClass::LLMsHallucination), vocab::rdfs_sub_class_of(), v.iri(HaloClass::FactualFabrication));
  auto r = validate_schema(g);
  std::set<Term> cyclic;
  for (const auto& i : r.issues())
    if (i.code == "S-001") cyclic.insert(i.subject);
  EXPECT_EQ(cyclic, (std::set<Term>{Term(v.iri(HaloClass::LLMsHallucination)),
                                     Term(v.iri(HaloClass::FactualityHallucination)),
                                     Term(v.iri(HaloClass::FactualFabrication))}));
}

TEST(SchemaChecks, CaseCollisionReportsBothSpellings) {
  for (const auto& f : ht::fault_catalog()) {
    if (f.code != "S-005") continue;
    auto r = ht::validate_fault(f);
    EXPECT_EQ(r.warnings(), 2u) << to_text(r);
  }
}

TEST(InstanceChecks, FixtureIsClean) {
  auto r = validate_instances(ht::fixture_graph());
  EXPECT_TRUE(r.empty()) << to_text(r);
}

class FaultInjection : public ::testing::TestWithParam<std::string> {};

TEST_P(FaultInjection, TriggersOnlyItsOwnCode) {
  for (const auto& f : ht::fault_catalog()) {
    if (f.code != GetParam()) continue;
    auto r = ht::validate_fault(f);
    EXPECT_EQ(r.codes(), std::set<std::string>{f.code}) << f.description << "\n" << to_text(r);
    return;
  }
  FAIL() << "no fault for " << GetParam();
}

INSTANTIATE_TEST_SUITE_P(Codes, FaultInjection,
                         ::testing::Values("S-001", "S-002", "S-003", "S-004", "S-005", "H-001", "H-002", "H-003",
                                           "H-004", "H-005", "H-006", "H-007"),
                         [](const auto& info) {
                           std::string s = info.param;
                           s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
                           return s;
                         });

TEST(InstanceChecks, MissingTypeOnLinkedIndividual) {
  Graph g = ht::fixture_graph();
  Vocabulary v;
  Term a = ht::first_answer_with_outcome(g, kOutcomeHallucinated);
  Term h = *g.object(a, v.iri(ObjectProperty::HallucinationGeneratedBy));
  for (const auto& t : g.match(h, vocab::rdf_type(), std::nullopt)) g.erase(t);
  auto r = validate_instances(g);
  EXPECT_EQ(r.codes(), std::set<std::string>{"H-003"});
  EXPECT_EQ(r.issues().front().subject, h);
}

TEST(InstanceChecks, NonDateValueOnDateProperty) {
  Graph g = ht::fixture_graph();
  Vocabulary v;
  Term a = ht::first_answer_with_outcome(g, kOutcomeCorrect);
  for (const auto& t : g.match(a, v.iri(DataProperty::HasAnswerDate), std::nullopt)) g.erase(t);
  g.insert(a, v.iri(DataProperty::HasAnswerDate), Literal("yesterday"));
  EXPECT_EQ(validate_instances(g).codes(), std::set<std::string>{"H-006"});
}

TEST(InstanceChecks, RespectsConfiguredNamespace) {
  SchemaConfig config;
  config.schema_namespace = Iri("http://example.org/onto#");
  config.instance_namespace = Iri("http://example.org/data#");
  Graph g = to_graph(fixture::generate_fixture(), config);
  EXPECT_TRUE(validate_instances(g, config).empty());
  // Under the default namespace nothing is recognised as an answer.
  EXPECT_TRUE(validate_instances(g).empty());
  EXPECT_TRUE(validate_instances(Graph{}).empty());
}
