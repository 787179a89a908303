#include <gtest/gtest.h>

#include "halo/turtle.hpp"
#include "support/isomorphism.hpp"

using namespace halo;

namespace {
const Iri kP("http://example.org/p");
Term ex(const char* local) { return Term::iri(std::string("http://example.org/") + local); }

ParseError parse_error(std::string_view text) {
  try {
    parse_turtle(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return ParseError(0, 0, "");
}
}  // namespace

TEST(TurtleParse, PrefixesListsAndShorthand) {
  Graph g = parse_turtle(R"(
    @prefix ex: <http://example.org/> .
    PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
    # comment
    ex:s a ex:C ;
        ex:p ex:o1 , ex:o2 ;
        ex:q 42 , -1.5 , 2e3 , true , "x"@EN , "2024-03-15"^^xsd:date .
  )");
  EXPECT_EQ(g.size(), 9u);
  EXPECT_TRUE(g.contains(Triple(ex("s"), vocab::rdf_type(), ex("C"))));
  EXPECT_TRUE(g.contains(Triple(ex("s"), kP, ex("o2"))));
  Iri q("http://example.org/q");
  EXPECT_TRUE(g.contains(Triple(ex("s"), q, Literal::integer(42))));
  EXPECT_TRUE(g.contains(Triple(ex("s"), q, Literal("-1.5", vocab::xsd_decimal()))));
  EXPECT_TRUE(g.contains(Triple(ex("s"), q, Literal("2e3", vocab::xsd_double()))));
  EXPECT_TRUE(g.contains(Triple(ex("s"), q, Literal("true", vocab::xsd_boolean()))));
  EXPECT_TRUE(g.contains(Triple(ex("s"), q, Literal::lang_string("x", "en"))));
  EXPECT_TRUE(g.contains(Triple(ex("s"), q, Literal::date(Date(2024, 3, 15)))));
  ASSERT_NE(g.prefixes().find("ex"), nullptr);
}

TEST(TurtleParse, EscapesInStrings) {
  Graph g = parse_turtle(R"(<http://example.org/s> <http://example.org/p> "a\"b\\c\nd\u00e9" .)");
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.begin()->object.as_literal().lexical(), "a\"b\\c\nd\xc3\xa9");
}

TEST(TurtleParse, BlankNodes) {
  Graph g = parse_turtle(R"(
    @prefix ex: <http://example.org/> .
    _:x ex:p [ ex:p "inner" ] .
    ex:s ex:p [] , _:x .
  )");
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.blank_ids().size(), 3u);
  EXPECT_EQ(g.match(ex("s"), kP, Term::blank("x")).size(), 1u);
}

TEST(TurtleParse, BaseResolvesRelativeIris) {
  Graph g = parse_turtle(R"(
    @base <http://example.org/dir/doc> .
    <a> <#p> </root> .
  )");
  ASSERT_EQ(g.size(), 1u);
  const Triple& t = *g.begin();
  EXPECT_EQ(t.subject, Term::iri("http://example.org/dir/a"));
  EXPECT_EQ(t.predicate, Iri("http://example.org/dir/doc#p"));
  EXPECT_EQ(t.object, Term::iri("http://example.org/root"));
}

TEST(TurtleParse, ErrorsCarryPosition) {
  ParseError e = parse_error("@prefix ex: <http://example.org/> .\nex:s ex:p nope:o .");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 11u);
  EXPECT_NE(e.message().find("nope"), std::string::npos);

  EXPECT_EQ(parse_error("<http://example.org/s> <http://example.org/p> \"open").line(), 1u);
  EXPECT_EQ(parse_error("\n\n<rel> <http://example.org/p> 1 .").line(), 3u);
  parse_error("@foo <x> .");
  parse_error("<http://example.org/s> <http://example.org/p> <http://example.org/o>");
  parse_error("<http://example.org/s> <http://example.org/p> ( 1 2 ) .");
  parse_error("<http://example.org/s> <http://example.org/p> \"\"\"long\"\"\" .");
  parse_error("\"lit\" <http://example.org/p> 1 .");
}

TEST(TurtleWrite, DeterministicLayout) {
  Graph g;
  g.prefixes().add("ex", Iri("http://example.org/"));
  g.insert(ex("b"), kP, Literal("z"));
  g.insert(ex("a"), Iri("http://example.org/q"), Literal("2"));
  g.insert(ex("a"), kP, Literal("y"));
  g.insert(ex("a"), kP, Literal("x"));
  g.insert(ex("a"), vocab::rdf_type(), ex("C"));
  g.insert(Term::blank("zz"), kP, ex("a"));
  EXPECT_EQ(serialize_turtle(g),
            "@prefix ex: <http://example.org/> .\n"
            "\n"
            "ex:a a ex:C ;\n"
            "    ex:p \"x\", \"y\" ;\n"
            "    ex:q \"2\" .\n"
            "\n"
            "ex:b ex:p \"z\" .\n"
            "\n"
            "_:b0 ex:p ex:a .\n");
}

TEST(TurtleWrite, EmptyGraph) {
  EXPECT_EQ(serialize_turtle(Graph{}), "");
}

TEST(TurtleWrite, IndependentOfInsertionOrder) {
  halo::testing::GraphGenerator gen(5);
  for (int i = 0; i < 20; ++i) {
    Graph g = gen.next(30);
    std::vector<Triple> ts(g.begin(), g.end());
    std::reverse(ts.begin(), ts.end());
    Graph h;
    h.prefixes() = g.prefixes();
    for (const auto& t : ts) h.insert(t);
    EXPECT_EQ(serialize_turtle(g), serialize_turtle(h));
  }
}

TEST(TurtleRoundTrip, RandomGraphsAreIsomorphic) {
  halo::testing::GraphGenerator gen(2024);
  for (int i = 0; i < 200; ++i) {
    Graph g = gen.next();
    std::string text = serialize_turtle(g);
    Graph back;
    ASSERT_NO_THROW(back = parse_turtle(text)) << text;
    EXPECT_TRUE(halo::testing::isomorphic(g, back)) << text;
    EXPECT_EQ(serialize_turtle(back), text);
  }
}

TEST(NTriples, RoundTripAndSortedOutput) {
  halo::testing::GraphGenerator gen(99);
  for (int i = 0; i < 100; ++i) {
    Graph g = gen.next();
    std::string text = serialize_ntriples(g);
    Graph back = parse_ntriples(text);
    EXPECT_TRUE(halo::testing::isomorphic(g, back)) << text;
    EXPECT_EQ(serialize_ntriples(back), text);
  }
}

TEST(NTriples, RejectsPrefixedNames) {
  EXPECT_THROW(parse_ntriples("ex:s <http://example.org/p> \"x\" .\n"), ParseError);
  EXPECT_THROW(parse_ntriples("<http://example.org/s> <http://example.org/p> \"x\"\n"), ParseError);
}

TEST(NTriples, TermRendering) {
  EXPECT_EQ(detail::ntriples_term(Literal::lang_string("hi", "en")), "\"hi\"@en");
  EXPECT_EQ(detail::ntriples_term(Literal::integer(3)), "\"3\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  EXPECT_EQ(detail::ntriples_term(Term::blank("q")), "_:q");
  EXPECT_EQ(detail::ntriples_term(Literal("a\"\n")), "\"a\\\"\\n\"");
}
