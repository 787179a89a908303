#include <gtest/gtest.h>

#include "halo/ingest.hpp"

using namespace halo;

namespace {
const std::string kHeader = record_header() + "\n";

std::string row(const std::string& answer_id, const std::string& model, const std::string& outcome,
                const std::string& category, const std::string& prompt = "P01") {
  return prompt + ",\"What is 2+2, really?\",Wiki,https://en.wikipedia.org,article,2023-09-01," + model +
         ",v1,2024-03-15," + answer_id + ",\"It is \"\"four\"\"\",2024-03-15," + outcome + "," + category + "\n";
}

std::size_t row_error_line(const std::string& text) {
  try {
    parse_records(text, RecordFormat::Csv);
  } catch (const RowError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no RowError for:\n" << text;
  return 0;
}

Dataset two_rows() {
  return parse_records(kHeader + row("A1", "BARD", "hallucinated", "FF") + row("A2", "Claude", "correct", ""), RecordFormat::Csv);
}
}  // namespace

TEST(Outcome, HallucinatedRequiresLeaf) {
  EXPECT_THROW(Outcome::hallucinated(HaloClass::FactualityHallucination), NotALeaf);
  EXPECT_EQ(Outcome::hallucinated(HaloClass::FactualFabrication).category(), HaloClass::FactualFabrication);
  EXPECT_FALSE(Outcome::refused().category());
  EXPECT_EQ(Outcome::correct().label(), "correct");
}

TEST(CsvRecords, ParsesQuotedFields) {
  Dataset d = two_rows();
  ASSERT_EQ(d.records.size(), 2u);
  const auto& r = d.records[0];
  EXPECT_EQ(r.prompt_text, "What is 2+2, really?");
  EXPECT_EQ(r.answer_text, "It is \"four\"");
  EXPECT_EQ(r.run_date, Date(2024, 3, 15));
  EXPECT_EQ(r.outcome, Outcome::hallucinated(HaloClass::FactualFabrication));
  EXPECT_EQ(d.records[1].outcome, Outcome::correct());
}

TEST(CsvRecords, AcceptsCrlfAndCategoryNames) {
  std::string text = kHeader + row("A1", "BARD", "hallucinated", "LogicalInconsistency");
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  Dataset d = parse_records(crlf, RecordFormat::Csv);
  ASSERT_EQ(d.records.size(), 1u);
  EXPECT_EQ(d.records[0].outcome.category(), HaloClass::LogicalInconsistency);
}

TEST(CsvRecords, EmbeddedNewlinesKeepLineNumbers) {
  std::string text = kHeader +
                     "P01,\"multi\nline\",W,L,article,2023-09-01,BARD,v1,2024-03-15,A1,x,2024-03-15,correct,\n" +
                     row("A2", "BARD", "maybe", "", "P02");
  EXPECT_EQ(row_error_line(text), 4u);
}

TEST(CsvRecords, RowErrors) {
  EXPECT_EQ(row_error_line(""), 1u);
  EXPECT_EQ(row_error_line("prompt_id,oops\n"), 1u);
  EXPECT_EQ(row_error_line(kHeader + "P01,too,few\n"), 2u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "hallucinated", "")), 2u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "hallucinated", "ZZ")), 2u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "correct", "FF")), 2u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "unsure", "")), 2u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "", "correct", "")), 2u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "correct", "") + row("A1", "Claude", "correct", "")), 3u);
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "correct", "") + row("A2", "BARD", "refused", "")), 3u);
  std::string bad_date = kHeader + row("A1", "BARD", "correct", "");
  bad_date.replace(bad_date.find("2023-09-01"), 10, "2023-09-31");
  EXPECT_EQ(row_error_line(bad_date), 2u);
}

TEST(CsvRecords, ConflictingPromptMetadata) {
  std::string second = row("A2", "Claude", "correct", "");
  second.replace(second.find("Wiki"), 4, "News");
  EXPECT_EQ(row_error_line(kHeader + row("A1", "BARD", "correct", "") + second), 3u);
}

TEST(JsonlRecords, RoundTripsWithCsv) {
  Dataset d = two_rows();
  EXPECT_EQ(parse_records(write_jsonl(d), RecordFormat::Jsonl), d);
  EXPECT_EQ(parse_records(write_csv(d), RecordFormat::Csv), d);
  EXPECT_NE(write_csv(d).find("\"It is \"\"four\"\"\""), std::string::npos);
}

TEST(JsonlRecords, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_records(text, RecordFormat::Jsonl);
    } catch (const RowError& e) {
      return e.line();
    }
    return 0;
  };
  std::string good = write_jsonl(two_rows());
  EXPECT_EQ(line_of(good + "{not json}\n"), 3u);
  EXPECT_EQ(line_of(good + "[1,2]\n"), 3u);
  EXPECT_EQ(line_of("\n{\"prompt_id\":\"P1\"}\n"), 2u);
  std::string numeric = good.substr(0, good.find('\n'));
  numeric.replace(numeric.find("\"v1\""), 4, "1");
  EXPECT_EQ(line_of(numeric), 1u);
}

TEST(InstanceNaming, EncodesIdentifiers) {
  InstanceNaming names(Iri("http://example.org/d#"));
  EXPECT_EQ(names.prompt("P 1/x").str(), "http://example.org/d#prompt/P%201%2Fx");
  EXPECT_EQ(names.model("GPT-3.5", "Turbo 0613").str(), "http://example.org/d#model/gpt-3-5-turbo-0613");
  EXPECT_EQ(names.hallucination("A1").str(), "http://example.org/d#hallucination/A1");
}

TEST(ToGraph, ShapesAnswersAndHallucinations) {
  Dataset d = two_rows();
  Graph g = to_graph(d);
  Vocabulary v;
  InstanceNaming names{Iri{std::string(kDefaultInstanceNamespace)}};
  Term a1(names.answer("A1")), a2(names.answer("A2"));
  Term h(names.hallucination("A1"));
  EXPECT_TRUE(g.contains(Triple(a1, v.iri(ObjectProperty::HallucinationGeneratedBy), h)));
  EXPECT_TRUE(g.contains(Triple(h, vocab::rdf_type(), Term(v.iri(HaloClass::FactualFabrication)))));
  EXPECT_TRUE(g.match(a2, v.iri(ObjectProperty::HallucinationGeneratedBy), std::nullopt).empty());
  EXPECT_EQ(g.object(a1, v.iri(DataProperty::HasRunDate)), Term(Literal::date(Date(2024, 3, 15))));
  EXPECT_EQ(g.object(a2, v.iri(DataProperty::HasOutcome)), Term(Literal("correct")));
  Term model(names.model("BARD", "v1"));
  EXPECT_TRUE(g.contains(Triple(model, vocab::rdf_type(), Term(v.iri(HaloClass::GenerativeAI)))));
  // The shared prompt is described once.
  EXPECT_EQ(g.subjects_of_type(v.iri(HaloClass::LLMsPrompt)).size(), 1u);
  EXPECT_EQ(g.subjects_of_type(v.iri(HaloClass::LLMsAnswer)).size(), 2u);
}

TEST(ToGraph, RejectsSharedNamespaces) {
  SchemaConfig config;
  config.instance_namespace = config.schema_namespace;
  EXPECT_THROW(to_graph(two_rows(), config), Error);
}
