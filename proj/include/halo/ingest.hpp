#pragma once
// Hallucination-experiment records: CSV/JSONL parsing and writing, and
// conversion into HALO knowledge-graph instances.

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "halo/rdf.hpp"
#include "halo/schema.hpp"

namespace halo {

class RowError : public Error {
 public:
  RowError(std::size_t line, std::string message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line), message_(std::move(message)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

class Outcome {
 public:
  enum class Kind { Hallucinated, Correct, Refused };

  static Outcome hallucinated(HaloClass category) {
    if (!is_leaf_category(category)) throw NotALeaf(class_name(category));
    return Outcome(Kind::Hallucinated, category);
  }
  static Outcome correct() { return Outcome(Kind::Correct, std::nullopt); }
  static Outcome refused() { return Outcome(Kind::Refused, std::nullopt); }

  Kind kind() const noexcept { return kind_; }
  bool is_hallucinated() const noexcept { return kind_ == Kind::Hallucinated; }
  std::optional<HaloClass> category() const noexcept { return category_; }

  std::string_view label() const noexcept {
    switch (kind_) {
      case Kind::Hallucinated: return kOutcomeHallucinated;
      case Kind::Correct: return kOutcomeCorrect;
      case Kind::Refused: return kOutcomeRefused;
    }
    return {};
  }

  friend bool operator==(const Outcome&, const Outcome&) = default;

 private:
  Outcome(Kind kind, std::optional<HaloClass> category) : kind_(kind), category_(category) {}
  Kind kind_;
  std::optional<HaloClass> category_;
};

struct HallucinationRecord {
  std::string prompt_id;
  std::string prompt_text;
  std::string source_name;
  std::string source_link;
  std::string document_type;
  Date collected_on;
  std::string model_name;
  std::string model_version;
  Date run_date;
  std::string answer_id;
  std::string answer_text;
  Date answer_date;
  Outcome outcome;

  friend bool operator==(const HallucinationRecord&, const HallucinationRecord&) = default;
};

struct Dataset {
  std::vector<HallucinationRecord> records;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class RecordFormat { Csv, Jsonl };

inline constexpr std::array<std::string_view, 14> kRecordColumns = {
    "prompt_id",  "prompt_text", "source_name", "source_link", "document_type", "collected_on", "model_name",
    "model_version", "run_date", "answer_id",   "answer_text", "answer_date",  "outcome",       "category"};

inline std::string record_header() {
  std::string h;
  for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
    if (i) h += ',';
    h += kRecordColumns[i];
  }
  return h;
}

namespace detail {

struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

// RFC 4180: quoted fields may hold commas, doubled quotes and line breaks.
// CRLF and LF both end a record; blank lines are skipped.
inline std::vector<CsvRow> split_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t i = 0, line = 1;
  while (i < text.size()) {
    CsvRow row{line, {}};
    std::string field;
    bool quoted_field = false;
    bool row_done = false;
    while (!row_done) {
      if (i >= text.size()) {
        row.fields.push_back(std::move(field));
        break;
      }
      char c = text[i];
      if (c == '"' && field.empty() && !quoted_field) {
        quoted_field = true;
        ++i;
        while (true) {
          if (i >= text.size()) throw RowError(row.line, "unterminated quoted field");
          char q = text[i++];
          if (q == '"') {
            if (i < text.size() && text[i] == '"') {
              field += '"';
              ++i;
            } else {
              break;
            }
          } else {
            if (q == '\n') ++line;
            field += q;
          }
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw RowError(row.line, "unexpected character after closing quote");
        continue;
      }
      if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        ++i;
      } else if (c == '\r' || c == '\n') {
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++i;
        ++line;
        row.fields.push_back(std::move(field));
        row_done = true;
      } else {
        field += c;
        ++i;
      }
    }
    bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Checks one row's fields (in kRecordColumns order) and builds a record.
inline HallucinationRecord make_record(const std::vector<std::string>& f, std::size_t line) {
  auto required = [&](std::size_t col) -> const std::string& {
    if (f[col].empty()) throw RowError(line, "missing value for '" + std::string(kRecordColumns[col]) + "'");
    return f[col];
  };
  auto date = [&](std::size_t col) {
    auto d = Date::parse(required(col));
    if (!d) throw RowError(line, "bad date '" + f[col] + "' in '" + std::string(kRecordColumns[col]) + "'");
    return *d;
  };
  const std::string& outcome = required(12);
  const std::string& category = f[13];
  std::optional<Outcome> parsed;
  if (outcome == kOutcomeHallucinated) {
    if (category.empty()) throw RowError(line, "hallucinated row requires a category");
    try {
      parsed = Outcome::hallucinated(parse_category(category));
    } catch (const UnknownCode&) {
      throw RowError(line, "unknown category '" + category + "'");
    }
  } else if (outcome == kOutcomeCorrect || outcome == kOutcomeRefused) {
    if (!category.empty()) throw RowError(line, "category given on a " + outcome + " row");
    parsed = outcome == kOutcomeCorrect ? Outcome::correct() : Outcome::refused();
  } else {
    throw RowError(line, "unknown outcome '" + outcome + "'");
  }
  return HallucinationRecord{required(0), f[1],     f[2],       f[3],     f[4],    date(5),  required(6),
                             f[7],        date(8),  required(9), f[10], date(11), *parsed};
}

// Dataset-level invariants: unique answer ids, unique (prompt, model, run),
// and consistent prompt metadata across rows.
class DatasetBuilder {
 public:
  void add(HallucinationRecord r, std::size_t line) {
    if (!answer_ids_.insert(r.answer_id).second) throw RowError(line, "duplicate answer_id '" + r.answer_id + "'");
    if (!runs_.insert({r.prompt_id, r.model_name, r.run_date.iso()}).second)
      throw RowError(line, "duplicate (prompt_id, model_name, run_date) for prompt '" + r.prompt_id + "'");
    auto meta = std::make_tuple(r.prompt_text, r.source_name, r.source_link, r.document_type, r.collected_on.iso());
    auto [it, added] = prompts_.emplace(r.prompt_id, meta);
    if (!added && it->second != meta) throw RowError(line, "conflicting metadata for prompt '" + r.prompt_id + "'");
    dataset_.records.push_back(std::move(r));
  }
  Dataset take() { return std::move(dataset_); }

 private:
  Dataset dataset_;
  std::set<std::string> answer_ids_;
  std::set<std::tuple<std::string, std::string, std::string>> runs_;
  std::map<std::string, std::tuple<std::string, std::string, std::string, std::string, std::string>> prompts_;
};

inline std::vector<std::string> record_fields(const HallucinationRecord& r) {
  std::string category = r.outcome.category() ? category_code(*r.outcome.category()) : "";
  return {r.prompt_id,  r.prompt_text,    r.source_name, r.source_link, r.document_type,
          r.collected_on.iso(), r.model_name, r.model_version, r.run_date.iso(), r.answer_id,
          r.answer_text, r.answer_date.iso(), std::string(r.outcome.label()), category};
}

inline Dataset parse_csv_records(std::string_view text) {
  auto rows = split_csv(text);
  if (rows.empty()) throw RowError(1, "missing header");
  std::vector<std::string> header(kRecordColumns.begin(), kRecordColumns.end());
  if (rows.front().fields != header) throw RowError(rows.front().line, "header must be: " + record_header());
  DatasetBuilder builder;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != kRecordColumns.size())
      throw RowError(row.line, "expected " + std::to_string(kRecordColumns.size()) + " fields, got " +
                                   std::to_string(row.fields.size()));
    builder.add(make_record(row.fields, row.line), row.line);
  }
  return builder.take();
}

inline Dataset parse_jsonl_records(std::string_view text) {
  DatasetBuilder builder;
  std::size_t line = 0;
  std::istringstream in{std::string(text)};
  for (std::string s; std::getline(in, s);) {
    ++line;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    if (s.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(s);
    } catch (const nlohmann::json::parse_error& e) {
      throw RowError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw RowError(line, "expected a JSON object");
    std::vector<std::string> fields;
    for (auto column : kRecordColumns) {
      auto it = obj.find(std::string(column));
      if (it == obj.end() || it->is_null()) {
        if (column == "category") {
          fields.emplace_back();
          continue;
        }
        throw RowError(line, "missing field '" + std::string(column) + "'");
      }
      if (!it->is_string()) throw RowError(line, "field '" + std::string(column) + "' must be a string");
      fields.push_back(it->get<std::string>());
    }
    builder.add(make_record(fields, line), line);
  }
  return builder.take();
}

inline std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += c;
    } else {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 0xF];
    }
  }
  return out;
}

}  // namespace detail

inline Dataset parse_records(std::string_view text, RecordFormat format) {
  return format == RecordFormat::Csv ? detail::parse_csv_records(text) : detail::parse_jsonl_records(text);
}

inline std::string write_csv(const Dataset& dataset) {
  std::string out = record_header() + "\n";
  for (const auto& r : dataset.records) {
    auto fields = detail::record_fields(r);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += detail::csv_quote(fields[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string write_jsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& r : dataset.records) {
    auto fields = detail::record_fields(r);
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < fields.size(); ++i) obj[std::string(kRecordColumns[i])] = fields[i];
    out += obj.dump() + "\n";
  }
  return out;
}

// Lowercase alphanumerics, other runs collapsed to '-'.
inline std::string slug(std::string_view s) {
  std::string out;
  bool dash = false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      if (dash && !out.empty()) out += '-';
      dash = false;
      out += static_cast<char>(std::tolower(u));
    } else {
      dash = true;
    }
  }
  return out;
}

// Instance IRIs under the instance namespace.
class InstanceNaming {
 public:
  explicit InstanceNaming(const Iri& ns) : ns_(ns.str()) {}

  Iri prompt(std::string_view id) const { return Iri(ns_ + "prompt/" + detail::percent_encode(id)); }
  Iri answer(std::string_view id) const { return Iri(ns_ + "answer/" + detail::percent_encode(id)); }
  Iri hallucination(std::string_view answer_id) const {
    return Iri(ns_ + "hallucination/" + detail::percent_encode(answer_id));
  }
  Iri model(std::string_view name, std::string_view version) const {
    std::string key(name);
    key += '-';
    key += version;
    return Iri(ns_ + "model/" + slug(key));
  }

  void register_prefixes(PrefixMap& prefixes) const {
    prefixes.add("prompt", Iri(ns_ + "prompt/"));
    prefixes.add("answer", Iri(ns_ + "answer/"));
    prefixes.add("model", Iri(ns_ + "model/"));
    prefixes.add("hallucination", Iri(ns_ + "hallucination/"));
  }

 private:
  std::string ns_;
};

inline Graph to_graph(const Dataset& dataset, const SchemaConfig& config = {}) {
  config.check();
  const Vocabulary v(config.schema_namespace);
  const InstanceNaming names(config.instance_namespace);
  Graph g;
  g.prefixes().add("halo", config.schema_namespace);
  g.prefixes().add("xsd", Iri(std::string(vocab::kXsd)));
  names.register_prefixes(g.prefixes());

  const auto& type = vocab::rdf_type();
  auto str = [](const std::string& s) { return Literal(s); };

  for (const auto& r : dataset.records) {
    Iri prompt = names.prompt(r.prompt_id);
    g.insert(prompt, type, v.iri(HaloClass::LLMsPrompt));
    g.insert(prompt, v.iri(DataProperty::HasPromptID), str(r.prompt_id));
    g.insert(prompt, v.iri(DataProperty::HasPromptText), str(r.prompt_text));
    g.insert(prompt, v.iri(DataProperty::CollectedOn), Literal::date(r.collected_on));
    g.insert(prompt, v.iri(DataProperty::HasSource), str(r.source_name));
    g.insert(prompt, v.iri(DataProperty::HasSourceLink), str(r.source_link));
    g.insert(prompt, v.iri(DataProperty::HasDocumentType), str(r.document_type));

    Iri model = names.model(r.model_name, r.model_version);
    g.insert(model, type, v.iri(HaloClass::LargeLanguageModel));
    for (HaloClass super : superclasses(HaloClass::LargeLanguageModel)) g.insert(model, type, v.iri(super));
    g.insert(model, v.iri(DataProperty::HasModelName), str(r.model_name));
    g.insert(model, v.iri(DataProperty::HasModelVersion), str(r.model_version));

    Iri answer = names.answer(r.answer_id);
    g.insert(answer, type, v.iri(HaloClass::LLMsAnswer));
    g.insert(answer, v.iri(DataProperty::HasAnswerID), str(r.answer_id));
    g.insert(answer, v.iri(DataProperty::HasAnswerText), str(r.answer_text));
    g.insert(answer, v.iri(DataProperty::HasAnswerDate), Literal::date(r.answer_date));
    g.insert(answer, v.iri(DataProperty::HasRunDate), Literal::date(r.run_date));
    g.insert(answer, v.iri(DataProperty::HasOutcome), Literal(std::string(r.outcome.label())));
    g.insert(answer, v.iri(ObjectProperty::AnswersPrompt), prompt);
    g.insert(answer, v.iri(ObjectProperty::ProducedByModel), model);

    if (auto category = r.outcome.category()) {
      Iri h = names.hallucination(r.answer_id);
      g.insert(h, type, v.iri(*category));
      g.insert(answer, v.iri(ObjectProperty::HallucinationGeneratedBy), h);
    }
  }
  return g;
}

}  // namespace halo
