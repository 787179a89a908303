#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "halo/halo.hpp"

namespace {

enum class Exit { Ok = 0, Invalid = 1, Usage = 2 };

struct UsageError : halo::Error {
  using halo::Error::Error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

enum class InputKind { Turtle, NTriples, Csv, Jsonl };

InputKind detect(const std::string& path, const std::string& text) {
  if (ends_with(path, ".ttl")) return InputKind::Turtle;
  if (ends_with(path, ".nt")) return InputKind::NTriples;
  if (ends_with(path, ".csv")) return InputKind::Csv;
  if (ends_with(path, ".jsonl") || ends_with(path, ".json")) return InputKind::Jsonl;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return InputKind::Jsonl;
  std::string header = halo::record_header();
  if (text.compare(0, header.size(), header) == 0) return InputKind::Csv;
  return InputKind::Turtle;
}

halo::Dataset load_records(const std::string& path, const std::string& forced = "") {
  std::string text = read_input(path);
  InputKind kind = forced == "csv"     ? InputKind::Csv
                   : forced == "jsonl" ? InputKind::Jsonl
                                       : detect(path, text);
  if (kind != InputKind::Csv && kind != InputKind::Jsonl) throw UsageError("'" + path + "' is not a records file");
  return halo::parse_records(text, kind == InputKind::Csv ? halo::RecordFormat::Csv : halo::RecordFormat::Jsonl);
}

// A graph file, or a records file converted with to_graph.
halo::Graph load_graph(const std::string& path, const halo::SchemaConfig& config) {
  std::string text = read_input(path);
  switch (detect(path, text)) {
    case InputKind::Turtle: return halo::parse_turtle(text);
    case InputKind::NTriples: return halo::parse_ntriples(text);
    case InputKind::Csv: return halo::to_graph(halo::parse_records(text, halo::RecordFormat::Csv), config);
    case InputKind::Jsonl: return halo::to_graph(halo::parse_records(text, halo::RecordFormat::Jsonl), config);
  }
  return {};
}

std::string serialize(const halo::Graph& g, const std::string& format) {
  return format == "ntriples" ? halo::serialize_ntriples(g) : halo::serialize_turtle(g);
}

std::string render(const halo::Tabular& t, const std::string& format) {
  if (format == "json") return halo::to_json(t).dump(2) + "\n";
  if (format == "csv") return halo::to_csv(t);
  return halo::to_text(t);
}

std::string render(const halo::sparql::ResultTable& t, const std::string& format, const halo::PrefixMap& prefixes) {
  if (format == "json") return halo::sparql::to_json(t).dump(2) + "\n";
  if (format == "csv") return halo::sparql::to_csv(t);
  return halo::sparql::to_text(t, prefixes);
}

halo::Date require_run(const halo::Graph& g, const std::string& run, const halo::SchemaConfig& config) {
  if (!run.empty()) {
    auto d = halo::Date::parse(run);
    if (!d) throw UsageError("invalid --run '" + run + "' (expected YYYY-MM-DD)");
    return *d;
  }
  auto latest = halo::latest_run(g, config);
  if (!latest) throw UsageError("input has no run dates; pass --run");
  return *latest;
}

halo::PrefixMap report_prefixes(const halo::Graph& g, const halo::SchemaConfig& config) {
  halo::PrefixMap p = g.prefixes();
  p.add("halo", config.schema_namespace);
  p.add("rdfs", halo::Iri(std::string(halo::vocab::kRdfs)));
  p.add("xsd", halo::Iri(std::string(halo::vocab::kXsd)));
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HALO hallucination ontology toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string ns_flag, instance_ns_flag;
  app.add_option("--ns", ns_flag, "Schema namespace IRI (overrides HALO_NS)");
  app.add_option("--instance-ns", instance_ns_flag, "Instance namespace IRI");

  std::string output, format, records_format;

  auto* schema_cmd = app.add_subcommand("schema", "Emit the HALO ontology");
  schema_cmd->add_option("-o,--output", output, "Output path ('-' for stdout)");
  schema_cmd->add_option("--format", format, "turtle or ntriples")->check(CLI::IsMember({"turtle", "ntriples"}));

  std::string input;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert experiment records to an instance graph");
  ingest_cmd->add_option("records", input, "CSV or JSONL records ('-' for stdin)")->required();
  ingest_cmd->add_option("-o,--output", output, "Output path ('-' for stdout)");
  ingest_cmd->add_option("--format", format, "turtle or ntriples")->check(CLI::IsMember({"turtle", "ntriples"}));
  ingest_cmd->add_option("--records-format", records_format, "csv or jsonl (default: detect)")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  bool strict = false;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a schema or instance graph (or records)");
  validate_cmd->add_option("input", input, "Graph or records ('-' for stdin)")->required();
  validate_cmd->add_flag("--strict", strict, "Treat warnings as errors");
  validate_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string query_file;
  bool with_schema = false;
  auto* query_cmd = app.add_subcommand("query", "Run a SPARQL SELECT query");
  query_cmd->add_option("graph", input, "Graph or records ('-' for stdin)")->required();
  query_cmd->add_option("-f,--file", query_file, "Query file")->required();
  query_cmd->add_option("-o,--output", output, "Output path ('-' for stdout)");
  query_cmd->add_flag("--with-schema", with_schema, "Merge the HALO ontology into the graph first");
  query_cmd->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));

  std::string kind, model, category, run, mode = "any";
  bool use_sparql = false;
  auto* report_cmd = app.add_subcommand("report", "Hallucination rates and competency questions");
  report_cmd->add_option("kind", kind, "rates, cq1, cq2, cq3, cq4 or cq5")
      ->required()
      ->check(CLI::IsMember({"rates", "cq1", "cq2", "cq3", "cq4", "cq5"}));
  report_cmd->add_option("input", input, "Graph or records ('-' for stdin)")->required();
  report_cmd->add_option("--model", model, "Model name (cq2, cq3)");
  report_cmd->add_option("--category", category, "Leaf category code or name (cq4)");
  report_cmd->add_option("--run", run, "Run date YYYY-MM-DD (default: latest run)");
  report_cmd->add_option("--mode", mode, "any or same-category (cq5)")->check(CLI::IsMember({"any", "same-category"}));
  report_cmd->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  report_cmd->add_option("-o,--output", output, "Output path ('-' for stdout)");
  report_cmd->add_flag("--sparql", use_sparql, "Answer with the canned SPARQL query");

  auto* fixture_cmd = app.add_subcommand("fixture", "Write the deterministic 240-record fixture");
  fixture_cmd->add_option("-o,--output", output, "Output path ('-' for stdout)");
  fixture_cmd->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(Exit::Usage);
  }

  try {
    halo::SchemaConfig config;
    if (!ns_flag.empty()) config.schema_namespace = halo::Iri(ns_flag);
    else if (const char* env = std::getenv("HALO_NS"); env && *env) config.schema_namespace = halo::Iri(env);
    if (!instance_ns_flag.empty()) config.instance_namespace = halo::Iri(instance_ns_flag);
    config.check();

    if (*schema_cmd) {
      write_output(output, serialize(halo::emit_schema(config), format));
    } else if (*ingest_cmd) {
      write_output(output, serialize(halo::to_graph(load_records(input, records_format), config), format));
    } else if (*validate_cmd) {
      halo::Graph g = load_graph(input, config);
      halo::ValidationReport report;
      if (!g.subjects_of_type(halo::vocab::owl_class()).empty()) report.merge(halo::validate_schema(g));
      report.merge(halo::validate_instances(g, config));
      write_output("", format == "json" ? halo::to_json(report).dump(2) + "\n" : halo::to_text(report));
      return static_cast<int>(report.passes(strict) ? Exit::Ok : Exit::Invalid);
    } else if (*query_cmd) {
      halo::Graph g = load_graph(input, config);
      if (with_schema) g.merge(halo::emit_schema(config));
      auto result = halo::sparql::execute(g, read_input(query_file));
      write_output(output, render(result, format, report_prefixes(g, config)));
    } else if (*report_cmd) {
      halo::Graph g = load_graph(input, config);
      if (use_sparql) {
        if (kind == "rates") throw UsageError("rates has no SPARQL form");
        halo::QueryParams params{{"mode", mode}};
        if (!model.empty()) params["model"] = model;
        if (!category.empty()) params["category"] = category;
        if (!run.empty()) params["run"] = run;
        auto result = halo::run_cq_sparql(g, kind.back() - '0', params, config);
        write_output(output, render(result, format, report_prefixes(g, config)));
        return 0;
      }
      auto need = [&](const std::string& value, const char* flag) {
        if (value.empty()) throw UsageError(kind + " requires " + flag);
      };
      halo::Tabular table;
      if (kind == "rates") {
        table = halo::tabulate(halo::rates(g, config));
      } else if (kind == "cq1") {
        table = halo::tabulate(halo::cq1_genai_types(g, config), report_prefixes(g, config));
      } else if (kind == "cq2") {
        need(model, "--model");
        table = halo::tabulate(halo::cq2_types_by_model(g, model, require_run(g, run, config), config));
      } else if (kind == "cq3") {
        need(model, "--model");
        table = halo::tabulate(halo::cq3_ranking(g, model, require_run(g, run, config), config));
      } else if (kind == "cq4") {
        need(category, "--category");
        table = halo::tabulate(halo::cq4_top_model_for_type(g, halo::parse_category(category),
                                                            require_run(g, run, config), config));
      } else {
        table = halo::tabulate(
            halo::cq5_pair_matrix(g, require_run(g, run, config), halo::parse_pair_mode(mode), config));
      }
      write_output(output, render(table, format));
    } else if (*fixture_cmd) {
      halo::Dataset d = halo::fixture::generate_fixture();
      bool jsonl = format == "jsonl" || (format.empty() && ends_with(output, ".jsonl"));
      write_output(output, jsonl ? halo::write_jsonl(d) : halo::write_csv(d));
    }
  } catch (const halo::ParseError& e) {
    std::cerr << "halo: parse error at " << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return static_cast<int>(Exit::Usage);
  } catch (const halo::RowError& e) {
    std::cerr << "halo: record error on line " << e.line() << ": " << e.message() << "\n";
    return static_cast<int>(Exit::Usage);
  } catch (const std::exception& e) {
    std::cerr << "halo: " << e.what() << "\n";
    return static_cast<int>(Exit::Usage);
  }
  return static_cast<int>(Exit::Ok);
}
