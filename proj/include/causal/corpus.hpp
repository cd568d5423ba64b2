#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causal/causation.hpp"
#include "causal/dsl.hpp"
#include "json.hpp"

namespace causal {

/// One golden expectation row: a query against a fixture plus the frozen
/// verdict. Asserted rows gate the corpus run; unasserted rows are reported
/// informationally and never fail it.
struct GoldenQuery {
  enum class Kind { Cause, PartOf, AllCauses };
  Kind kind = Kind::Cause;
  Definition definition = Definition::Def2;
  PartialSetting cause;            // Cause
  VarIndex part_var = -1;          // PartOf
  Effect effect;
  int max_size = 1;                // AllCauses
  std::vector<PartialSetting> expected_causes;  // AllCauses, sorted
  bool expect = true;
  bool asserted = true;
  std::string citation;
  std::string note;
  std::string label;
};

struct GoldenCase {
  std::string name;
  std::string file;
  std::string context_name;
  std::string citation;
  ModelDocument document;
  Context context;
  std::vector<GoldenQuery> queries;
};

struct CorpusRow {
  std::string case_name;
  std::string label;
  std::string citation;
  std::string note;
  std::string detail;  // witness/network evidence or the actual cause list
  bool asserted = true;
  bool expected = true;
  bool actual = false;
  bool passed = true;
};

struct CorpusReport {
  std::vector<CorpusRow> rows;
  int cases_run = 0;
  int asserted_rows = 0;
  int asserted_failures = 0;
  int informational_mismatches = 0;

  bool ok() const { return asserted_failures == 0; }

  std::string to_text() const {
    std::ostringstream out;
    for (const CorpusRow& r : rows) {
      const char* tag = r.passed ? (r.asserted ? "PASS" : "info") : (r.asserted ? "FAIL" : "INFO");
      out << "[" << tag << "] " << r.case_name << " :: " << r.label << " -> "
          << (r.actual ? "yes" : "no");
      if (!r.passed) out << " (expected " << (r.expected ? "yes" : "no") << ")";
      if (!r.detail.empty()) out << "  " << r.detail;
      if (!r.citation.empty()) out << "  [" << r.citation << "]";
      if (!r.passed && !r.note.empty()) out << "\n       note: " << r.note;
      out << "\n";
    }
    out << "corpus: " << cases_run << " cases, " << rows.size() << " rows, " << asserted_rows
        << " asserted, " << asserted_failures << " failures, " << informational_mismatches
        << " informational mismatches\n";
    return out.str();
  }
};

namespace detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(ErrorCode::BadQuery, "cannot read fixture file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline VarIndex require_endo(const CausalModel& m, const std::string& name,
                             const std::string& where) {
  for (int v = 0; v < m.num_endogenous(); ++v)
    if (m.endogenous(v).name == name) return v;
  throw ModelError(ErrorCode::UnknownVariable, where + ": unknown variable " + name);
}

inline Value require_value(const CausalModel& m, VarIndex v, const std::string& label,
                           const std::string& where) {
  auto val = m.range(v).index_of(label);
  if (!val)
    throw ModelError(ErrorCode::ValueOutOfRange,
                     where + ": value " + label + " not in range of " + m.endogenous(v).name);
  return *val;
}

inline std::string render_setting(const CausalModel& m, const PartialSetting& s) {
  std::string out;
  for (const auto& [v, val] : s.items()) {
    if (!out.empty()) out += ",";
    out += m.endogenous(v).name + "=" + m.range(v).label(val);
  }
  return out.empty() ? std::string("{}") : out;
}

inline std::string render_effect(const CausalModel& m, const Effect& e) {
  std::string out = m.endogenous(e.variable).name + " in {";
  for (std::size_t i = 0; i < e.accepted.size(); ++i) {
    if (i) out += ",";
    out += m.range(e.variable).label(e.accepted[i]);
  }
  out += "}";
  if (e.accepted.size() == 1)
    out = m.endogenous(e.variable).name + "=" + m.range(e.variable).label(e.accepted[0]);
  return out;
}

inline Effect parse_manifest_effect(const CausalModel& m, const nlohmann::json& j,
                                    const std::string& where) {
  if (!j.is_object() || !j.contains("var") || !j.contains("in"))
    throw ModelError(ErrorCode::SyntaxError, where + ": effect needs {var, in}");
  Effect e;
  e.variable = require_endo(m, j.at("var").get<std::string>(), where);
  for (const auto& lab : j.at("in"))
    e.accepted.push_back(require_value(m, e.variable, lab.get<std::string>(), where));
  if (e.accepted.empty()) throw ModelError(ErrorCode::EmptyDisjunction, where + ": empty effect");
  return e;
}

inline PartialSetting parse_manifest_setting(const CausalModel& m, const nlohmann::json& j,
                                             const std::string& where) {
  PartialSetting s;
  if (!j.is_object()) throw ModelError(ErrorCode::SyntaxError, where + ": setting must be a map");
  for (const auto& [name, lab] : j.items()) {
    VarIndex v = require_endo(m, name, where);
    s.set(v, require_value(m, v, lab.get<std::string>(), where));
  }
  return s;
}

/// AC1 sanity for golden rows: queried candidates and effects carry their
/// actual values, so every expectation is about an event that happened.
inline void check_golden_ac1(const GoldenCase& c, const GoldenQuery& q) {
  const CausalModel& m = c.document.model;
  World actual = m.solve(c.context);
  const std::string where = c.name + "/" + q.label;
  bool eff_ok = std::find(q.effect.accepted.begin(), q.effect.accepted.end(),
                          actual[q.effect.variable]) != q.effect.accepted.end();
  if (!eff_ok)
    throw ModelError(ErrorCode::BadQuery, where + ": effect did not actually happen");
  if (q.kind == GoldenQuery::Kind::Cause)
    for (const auto& [v, val] : q.cause.items())
      if (actual[v] != val)
        throw ModelError(ErrorCode::BadQuery, where + ": candidate did not actually happen");
}

}  // namespace detail

/// Load the fixture manifest and every referenced document. Throws ModelError
/// on unreadable files, parse failures, or expectations that are not
/// machine-checkable against the parsed model.
inline std::vector<GoldenCase> load_corpus(const std::string& fixtures_dir) {
  nlohmann::json manifest;
  {
    std::istringstream in(detail::read_text_file(fixtures_dir + "/manifest.json"));
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception& e) {
      throw ModelError(ErrorCode::SyntaxError, std::string("manifest: ") + e.what());
    }
  }
  if (!manifest.contains("cases"))
    throw ModelError(ErrorCode::SyntaxError, "manifest: missing cases");

  std::vector<GoldenCase> cases;
  for (const auto& jc : manifest.at("cases")) {
    GoldenCase c;
    c.name = jc.at("name").get<std::string>();
    c.file = jc.at("file").get<std::string>();
    c.context_name = jc.value("context", "actual");
    c.citation = jc.value("citation", "");

    ParseResult parsed = parse_document(detail::read_text_file(fixtures_dir + "/" + c.file));
    if (!parsed.ok())
      throw ModelError(ErrorCode::SyntaxError,
                       c.file + ": " + parsed.diagnostics.front().to_string());
    c.document = std::move(*parsed.document);
    const NamedContext* ctx = c.document.find_context(c.context_name);
    if (!ctx)
      throw ModelError(ErrorCode::BadQuery, c.name + ": unknown context " + c.context_name);
    c.context = ctx->values;

    const CausalModel& m = c.document.model;
    for (const auto& jq : jc.at("queries")) {
      std::vector<std::string> def_names;
      if (jq.contains("defs"))
        for (const auto& d : jq.at("defs")) def_names.push_back(d.get<std::string>());
      else
        def_names.push_back(jq.at("def").get<std::string>());

      for (const std::string& dn : def_names) {
        GoldenQuery q;
        auto def = parse_definition(dn);
        if (!def) throw ModelError(ErrorCode::BadQuery, c.name + ": unknown definition " + dn);
        q.definition = *def;
        std::string kind = jq.value("kind", "cause");
        q.effect = detail::parse_manifest_effect(m, jq.at("effect"), c.name);
        q.expect = jq.value("expect", true);
        q.asserted = jq.value("assert", true);
        q.citation = jq.value("citation", c.citation);
        q.note = jq.value("note", "");
        if (kind == "cause") {
          q.kind = GoldenQuery::Kind::Cause;
          q.cause = detail::parse_manifest_setting(m, jq.at("cause"), c.name);
          if (q.cause.empty()) throw ModelError(ErrorCode::BadQuery, c.name + ": empty cause");
          q.label = dn + " " + detail::render_setting(m, q.cause) + " causes " +
                    detail::render_effect(m, q.effect);
        } else if (kind == "part_of") {
          q.kind = GoldenQuery::Kind::PartOf;
          q.part_var = detail::require_endo(m, jq.at("var").get<std::string>(), c.name);
          q.label = dn + " " + m.endogenous(q.part_var).name + " part of a cause of " +
                    detail::render_effect(m, q.effect);
        } else if (kind == "all_causes") {
          q.kind = GoldenQuery::Kind::AllCauses;
          q.max_size = jq.value("max_size", m.num_endogenous());
          for (const auto& js : jq.at("causes"))
            q.expected_causes.push_back(detail::parse_manifest_setting(m, js, c.name));
          std::sort(q.expected_causes.begin(), q.expected_causes.end());
          q.label = dn + " all causes of " + detail::render_effect(m, q.effect) + " (size<=" +
                    std::to_string(q.max_size) + ")";
        } else {
          throw ModelError(ErrorCode::BadQuery, c.name + ": unknown query kind " + kind);
        }
        detail::check_golden_ac1(c, q);
        c.queries.push_back(std::move(q));
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

/// Evaluate the golden expectations. `filter` is a substring match on case
/// names; empty runs everything.
inline CorpusReport run_corpus(const std::vector<GoldenCase>& cases,
                               const std::string& filter = "") {
  CorpusReport report;
  for (const GoldenCase& c : cases) {
    if (!filter.empty() && c.name.find(filter) == std::string::npos) continue;
    ++report.cases_run;
    const CausalModel& m = c.document.model;
    Session session(m);
    for (const GoldenQuery& q : c.queries) {
      CorpusRow row;
      row.case_name = c.name;
      row.label = q.label;
      row.citation = q.citation;
      row.note = q.note;
      row.asserted = q.asserted;
      row.expected = q.expect;
      switch (q.kind) {
        case GoldenQuery::Kind::Cause: {
          Verdict v = session.is_cause(c.context, q.cause, q.effect, q.definition);
          row.actual = v.is_cause;
          if (v.is_cause) {
            row.detail = "W=" + detail::render_setting(m, v.witness_values);
            if (!v.contrast.empty())
              row.detail += " contrast " + detail::render_setting(m, v.contrast);
          }
          break;
        }
        case GoldenQuery::Kind::PartOf: {
          Verdict v = session.is_part_of_cause(c.context, q.part_var, q.effect, q.definition);
          row.actual = v.is_cause;
          if (v.is_cause) row.detail = "cause " + detail::render_setting(m, v.cause);
          break;
        }
        case GoldenQuery::Kind::AllCauses: {
          std::vector<Verdict> found =
              session.find_all_causes(c.context, q.effect, q.definition, q.max_size);
          std::vector<PartialSetting> got;
          got.reserve(found.size());
          for (const Verdict& v : found) got.push_back(v.cause);
          std::sort(got.begin(), got.end());
          row.actual = got == q.expected_causes;
          row.expected = true;
          row.detail = "found";
          for (const PartialSetting& s : got)
            row.detail += " {" + detail::render_setting(m, s) + "}";
          break;
        }
      }
      row.passed = row.actual == row.expected;
      if (q.asserted) {
        ++report.asserted_rows;
        if (!row.passed) ++report.asserted_failures;
      } else if (!row.passed) {
        ++report.informational_mismatches;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

inline CorpusReport run_corpus(const std::string& fixtures_dir, const std::string& filter = "") {
  return run_corpus(load_corpus(fixtures_dir), filter);
}

}  // namespace causal
