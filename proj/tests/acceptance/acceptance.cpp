// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "halo/halo.hpp"
#include "support/faults.hpp"
#include "support/isomorphism.hpp"
#include "support/random_query.hpp"

namespace {

using namespace halo;

struct Verdict {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& name, double limit_seconds, const std::function<Verdict()>& body) {
  auto start = std::chrono::steady_clock::now();
  Verdict o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= limit_seconds) o.expect(false, "runtime " + std::to_string(secs) + " s exceeds " + std::to_string(limit_seconds) + " s");
  if (!o.ok) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3f s", secs);
  std::cout << (o.ok ? "PASS" : "FAIL") << "  " << n << ". " << name << " [" << timing << "]";
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  std::cout << std::endl;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string row_text(const sparql::ResultTable& t, std::size_t r) {
  std::string s;
  for (const auto& cell : t.rows[r]) {
    if (!s.empty()) s += "|";
    if (!cell) continue;
    s += cell->is_literal() ? cell->as_literal().lexical() : cell->is_iri() ? cell->as_iri().str() : cell->as_blank().id;
  }
  return s;
}

}  // namespace

int main() {
  const std::string ns(kDefaultSchemaNamespace);
  const Date march(2024, 3, 15), october(2023, 10, 15);

  criterion(1, "schema: 12 classes, 8 subclass axioms, 7 external references, zero pitfalls", 1.0, [&] {
    Verdict o;
    Graph g = parse_turtle(serialize_turtle(emit_schema()));
    int classes = 0, axioms = 0, externals = 0;
    for (const auto& c : g.subjects_of_type(vocab::owl_class())) {
      if (c.as_iri().str().starts_with(ns)) ++classes;
      else if (g.object(c, vocab::rdfs_is_defined_by())) ++externals;
    }
    for (const auto& t : g.match(std::nullopt, vocab::rdfs_sub_class_of(), std::nullopt))
      if (t.subject.as_iri().str().starts_with(ns) && t.object.as_iri().str().starts_with(ns)) ++axioms;
    auto report = validate_schema(g);
    o.expect(classes == 12, "classes=" + std::to_string(classes));
    o.expect(axioms == 8, "subclass axioms=" + std::to_string(axioms));
    o.expect(externals == 7, "external refs=" + std::to_string(externals));
    o.expect(report.errors() == 0 && report.warnings() == 0,
             "validator: " + std::to_string(report.errors()) + " errors, " + std::to_string(report.warnings()) + " warnings");
    if (o.ok) o.detail = "12/8/7, 0 errors, 0 warnings";
    return o;
  });

  const Graph fixture = to_graph(fixture::generate_fixture());

  criterion(2, "hallucination rate table: 24 target cells", 1.0, [&] {
    Verdict o;
    struct Cell {
      Date run;
      const char* model;
      int h, c, r;
      const char* pct;
    };
    const Cell expected[] = {
        {october, "GPT-3.5", 16, 14, 10, "40.0%"}, {october, "BARD", 22, 15, 3, "55.0%"},
        {october, "Claude", 16, 13, 11, "40.0%"},  {march, "GPT-3.5", 17, 13, 10, "42.5%"},
        {march, "BARD", 25, 15, 0, "62.5%"},       {march, "Claude", 16, 13, 11, "40.0%"},
    };
    RateTable table = rates(fixture);
    int matched = 0;
    for (const auto& e : expected) {
      const RateRow* row = table.find(e.model, e.run);
      if (row == nullptr) {
        o.expect(false, std::string("missing row ") + e.model + " " + e.run.iso());
        continue;
      }
      std::string where = std::string(e.model) + " " + e.run.iso();
      matched += row->hallucinated == e.h;
      matched += row->correct == e.c;
      matched += row->refused == e.r;
      matched += row->percent() == e.pct;
      o.expect(row->hallucinated == e.h && row->correct == e.c && row->refused == e.r,
               where + " counts " + std::to_string(row->hallucinated) + "/" + std::to_string(row->correct) + "/" +
                   std::to_string(row->refused));
      o.expect(row->percent() == e.pct, where + " rate " + row->percent());
    }
    o.expect(table.rows.size() == 6, "row count " + std::to_string(table.rows.size()));
    if (o.ok) o.detail = std::to_string(matched) + "/24 cells exact";
    return o;
  });

  criterion(3, "pair matrix (March, any hallucination), native and SPARQL", 1.0, [&] {
    Verdict o;
    PairMatrix m = cq5_pair_matrix(fixture, march, PairMode::AnyHallucination);
    o.expect(m.count("GPT-3.5", "Claude") == 9, "GPT-3.5/Claude=" + std::to_string(m.count("GPT-3.5", "Claude")));
    o.expect(m.count("GPT-3.5", "BARD") == 12, "GPT-3.5/BARD=" + std::to_string(m.count("GPT-3.5", "BARD")));
    o.expect(m.count("Claude", "BARD") == 10, "Claude/BARD=" + std::to_string(m.count("Claude", "BARD")));
    for (const auto& a : m.models)
      for (const auto& b : m.models)
        if (a != b) o.expect(m.count(a, b) == m.count(b, a), "asymmetric " + a + "/" + b);
    auto t = run_cq_sparql(fixture, 5, {{"run", march.iso()}});
    o.expect(t.rows.size() == 3, "SPARQL rows=" + std::to_string(t.rows.size()));
    if (t.rows.size() == 3) {
      o.expect(row_text(t, 0) == "BARD|GPT-3.5|12", "SPARQL row 1 " + row_text(t, 0));
      o.expect(row_text(t, 1) == "BARD|Claude|10", "SPARQL row 2 " + row_text(t, 1));
      o.expect(row_text(t, 2) == "Claude|GPT-3.5|9", "SPARQL row 3 " + row_text(t, 2));
    }
    if (o.ok) o.detail = "GPT-3.5/Claude 9, GPT-3.5/BARD 12, Claude/BARD 10 on both paths";
    return o;
  });

  criterion(4, "competency questions CQ2, CQ3, CQ4 (March), native and SPARQL", 5.0, [&] {
    Verdict o;
    std::set<HaloClass> cq2 = cq2_types_by_model(fixture, "GPT-3.5", march);
    std::set<HaloClass> want2{HaloClass::FactualFabrication, HaloClass::FactualInconsistency,
                              HaloClass::LogicalInconsistency, HaloClass::ContextInconsistency};
    o.expect(cq2 == want2, "native CQ2 mismatch");
    auto s2 = run_cq_sparql(fixture, 2, {{"model", "GPT-3.5"}, {"run", march.iso()}});
    std::set<HaloClass> got2;
    for (const auto& r : s2.rows) got2.insert(*Vocabulary().class_of(*r[0]));
    o.expect(got2 == want2 && s2.rows.size() == 4, "SPARQL CQ2 mismatch");

    std::vector<std::string> want3{"FI", "FF", "CI", "II", "LI"};
    std::vector<std::string> got3;
    for (auto c : cq3_ranking(fixture, "BARD", march).order()) got3.push_back(category_code(c));
    o.expect(got3 == want3, "native CQ3 order mismatch");
    auto s3 = run_cq_sparql(fixture, 3, {{"model", "BARD"}, {"run", march.iso()}});
    std::vector<std::string> sparql3;
    for (const auto& r : s3.rows) sparql3.push_back(category_code(*Vocabulary().class_of(*r[0])));
    o.expect(sparql3 == want3, "SPARQL CQ3 order mismatch");

    TopModel top = cq4_top_model_for_type(fixture, HaloClass::FactualFabrication, march);
    o.expect(top.model == "BARD", "native CQ4=" + top.model.value_or("none"));
    auto s4 = run_cq_sparql(fixture, 4, {{"category", "FactualFabrication"}, {"run", march.iso()}});
    o.expect(s4.rows.size() == 1 && row_text(s4, 0).starts_with("BARD|"), "SPARQL CQ4 mismatch");
    if (o.ok) o.detail = "CQ2 {FF,FI,LI,CI}; CQ3 [FI,FF,CI,II,LI]; CQ4 BARD";
    return o;
  });

  criterion(5, "query engine equals reference evaluator on 1000 random instances", 60.0, [&] {
    Verdict o;
    testing::Generator gen(7);
    int mismatches = 0, instances = 1000, nonempty = 0;
    for (int i = 0; i < instances; ++i) {
      Graph g = gen.graph();
      testing::RQuery q = gen.query(&g);
      std::string text = testing::render_query(q);
      auto expected = testing::oracle::evaluate({g.begin(), g.end()}, q);
      auto actual = sparql::execute(g, text);
      nonempty += !expected.empty();
      if (actual.rows != expected) {
        if (++mismatches == 1) o.expect(false, "first mismatch on query:\n" + text);
      }
    }
    o.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
    if (o.ok) o.detail = std::to_string(instances) + " instances, 0 mismatches (" + std::to_string(nonempty) + " non-empty)";
    return o;
  });

  criterion(6, "Turtle round trip on 600 random graphs (isomorphic, byte-stable)", 60.0, [&] {
    Verdict o;
    testing::GraphGenerator gen(11);
    int failures_here = 0, graphs = 600;
    for (int i = 0; i < graphs; ++i) {
      Graph g = gen.next(50);
      std::string a = serialize_turtle(g);
      std::string b = serialize_turtle(g);
      bool ok = a == b;
      try {
        ok = ok && testing::isomorphic(parse_turtle(a), g);
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok && ++failures_here == 1) o.expect(false, "first failure:\n" + a);
    }
    o.expect(failures_here == 0, std::to_string(failures_here) + " failures");
    if (o.ok) o.detail = std::to_string(graphs) + " graphs, 0 failures";
    return o;
  });

  criterion(7, "validator fault injection: each of 12 codes triggered alone", 10.0, [&] {
    Verdict o;
    std::set<std::string> covered;
    for (const auto& f : testing::fault_catalog()) {
      auto report = testing::validate_fault(f);
      o.expect(report.codes() == std::set<std::string>{f.code}, f.code + " (" + f.description + ") gave " +
                                                                    std::to_string(report.issues().size()) + " issues");
      covered.insert(f.code);
    }
    o.expect(covered.size() == 12, "catalog covers " + std::to_string(covered.size()) + " codes");
    if (o.ok) o.detail = "12/12 codes isolated";
    return o;
  });

  criterion(8, "fixture conforms and regenerates byte-identically", 10.0, [&] {
    Verdict o;
    auto report = validate_instances(fixture);
    o.expect(report.errors() == 0, std::to_string(report.errors()) + " instance errors");
    std::string first = write_csv(fixture::generate_fixture());
    std::string second = write_csv(fixture::generate_fixture());
    o.expect(first == second, "two generations differ");
    std::string golden = read_file(std::string(HALO_SOURCE_DIR) + "/fixtures/halo-fixture.csv");
    o.expect(first == golden, "differs from fixtures/halo-fixture.csv");
    o.expect(fixture::generate_fixture().records.size() == 240, "record count");
    if (o.ok) o.detail = "0 errors, 240 records, matches golden file";
    return o;
  });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
