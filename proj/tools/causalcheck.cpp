// causalcheck: command-line front end for the causal library.
//
//   check    <model.scm> [query...]        evaluate causation queries
//   causes   <model.scm> <effect>          list every cause of an effect
//   suffices <model.scm> <kind> <X> <Y>    decide a sufficiency query
//   corpus   [filter]                      run the golden corpus
//   fuzz                                   sweep model families against the claims
//
// Exit codes: 0 success, 1 assertion/verdict failure, 2 usage or parse error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "causal/causal.hpp"

namespace {

using causal::CausalModel;
using causal::Context;
using causal::Definition;
using causal::Effect;
using causal::ModelDocument;
using causal::PartialSetting;
using causal::QuerySpec;
using causal::Value;
using causal::VarIndex;
using causal::Verdict;
using json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.1.0";

#ifdef FIXTURES_DIR
constexpr const char* kDefaultFixtures = FIXTURES_DIR;
#else
constexpr const char* kDefaultFixtures = "fixtures";
#endif

struct UsageError {
  std::string message;
};

[[noreturn]] void usage_error(std::string msg) { throw UsageError{std::move(msg)}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

// ---- query-text parsing ---------------------------------------------------

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_on(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == delim) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::pair<VarIndex, Value> parse_atom(const CausalModel& m, const std::string& text) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos) usage_error("expected name=value, got '" + text + "'");
  std::string name = trim(text.substr(0, eq));
  std::string label = trim(text.substr(eq + 1));
  VarIndex v = m.endo_index(name);  // throws on unknown names
  auto val = m.range(v).index_of(label);
  if (!val) usage_error("value " + label + " not in range of " + name);
  return {v, *val};
}

// conjunction: "A=1 & B=0" (commas also accepted)
PartialSetting parse_setting(const CausalModel& m, const std::string& text) {
  PartialSetting out;
  std::string norm = text;
  for (char& c : norm)
    if (c == ',') c = '&';
  for (const std::string& part : split_on(norm, '&')) {
    if (part.empty()) usage_error("empty conjunct in '" + text + "'");
    auto [v, val] = parse_atom(m, part);
    if (out.contains(v)) usage_error("variable set twice in '" + text + "'");
    out.set(v, val);
  }
  return out;
}

// same-variable disjunction: "F=1 | F=2"
Effect parse_effect(const CausalModel& m, const std::string& text) {
  Effect eff;
  for (const std::string& part : split_on(text, '|')) {
    if (part.empty()) usage_error("empty disjunct in '" + text + "'");
    auto [v, val] = parse_atom(m, part);
    if (eff.variable < 0) eff.variable = v;
    if (v != eff.variable) usage_error("effect disjuncts must share one variable");
    if (std::find(eff.accepted.begin(), eff.accepted.end(), val) == eff.accepted.end())
      eff.accepted.push_back(val);
  }
  return eff;
}

// "A=1 & B=1 causes Y=1 | Y=2"
QuerySpec parse_inline_query(const CausalModel& m, const std::string& text, Definition def) {
  std::size_t at = text.find("causes");
  if (at == std::string::npos)
    usage_error("'" + text + "' is neither a named query, a definition, nor '... causes ...'");
  QuerySpec q;
  q.definition = def;
  q.cause = parse_setting(m, trim(text.substr(0, at)));
  q.effect = parse_effect(m, trim(text.substr(at + 6)));
  return q;
}

// ---- rendering ------------------------------------------------------------

std::string setting_text(const CausalModel& m, const PartialSetting& s, const char* sep = ", ") {
  std::string out;
  for (const auto& [v, val] : s.items()) {
    if (!out.empty()) out += sep;
    out += m.endogenous(v).name + "=" + m.range(v).label(val);
  }
  return out;
}

std::string effect_text(const CausalModel& m, const Effect& eff) {
  std::string out;
  for (Value val : eff.accepted) {
    if (!out.empty()) out += " | ";
    out += m.endogenous(eff.variable).name + "=" + m.range(eff.variable).label(val);
  }
  return out;
}

json setting_json(const CausalModel& m, const PartialSetting& s) {
  json out = json::object();
  for (const auto& [v, val] : s.items()) out[m.endogenous(v).name] = m.range(v).label(val);
  return out;
}

json effect_json(const CausalModel& m, const Effect& eff) {
  json accepted = json::array();
  for (Value val : eff.accepted) accepted.push_back(m.range(eff.variable).label(val));
  return json{{"variable", m.endogenous(eff.variable).name}, {"accepted", accepted}};
}

json var_list_json(const CausalModel& m, const std::vector<VarIndex>& vars) {
  json out = json::array();
  for (VarIndex v : vars) out.push_back(m.endogenous(v).name);
  return out;
}

json verdict_json(const CausalModel& m, const Verdict& v, const std::string& name) {
  json q;
  if (!name.empty()) q["name"] = name;
  q["definition"] = causal::definition_name(v.definition);
  q["cause"] = setting_json(m, v.cause);
  q["effect"] = effect_json(m, v.effect);
  q["is_cause"] = v.is_cause;
  q["ac1"] = v.ac1;
  q["ac2"] = v.ac2;
  q["ac3"] = v.ac3;
  q["witness"] = setting_json(m, v.witness_values);
  q["witness_vars"] = var_list_json(m, v.witness);
  q["network"] = setting_json(m, v.network_values);
  q["network_vars"] = var_list_json(m, v.network);
  q["contrast"] = setting_json(m, v.contrast);
  q["citations"] = json::array();
  if (v.minimality_counterexample)
    q["minimality_counterexample"] = setting_json(m, *v.minimality_counterexample);
  if (!v.note.empty()) q["note"] = v.note;
  return q;
}

void verdict_text(std::ostream& out, const CausalModel& m, const Verdict& v,
                  const std::string& name, const std::string& ctx_name) {
  out << "[" << (v.is_cause ? "yes" : "no ") << "] ";
  if (!name.empty()) out << name << ": ";
  out << setting_text(m, v.cause, " & ") << " causes " << effect_text(m, v.effect) << "  ("
      << causal::definition_name(v.definition) << ", context " << ctx_name << ")\n";
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  out << "      conditions: AC1 " << yn(v.ac1) << ", AC2 " << yn(v.ac2) << ", AC3 " << yn(v.ac3)
      << "\n";
  if (v.ac2) {
    out << "      witness W: "
        << (v.witness.empty() ? std::string("(empty)") : setting_text(m, v.witness_values)) << "\n";
    if (!v.network.empty())
      out << "      network N: " << setting_text(m, v.network_values) << "\n";
    if (!v.contrast.empty())
      out << "      contrast: " << setting_text(m, v.contrast) << "\n";
  }
  if (v.minimality_counterexample)
    out << "      minimality breach: " << setting_text(m, *v.minimality_counterexample)
        << " already satisfies the sufficiency clause\n";
  if (!v.note.empty()) out << "      note: " << v.note << "\n";
}

// ---- shared command plumbing ---------------------------------------------

struct CommonFlags {
  std::string format = "text";
  std::string out_path;
  bool assert_mode = false;
};

void add_output_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out_path, "write the report to a file instead of stdout");
}

// emit and translate the pass/fail flag into the exit code
int finish(const CommonFlags& flags, const std::string& text, const json& doc, bool passed) {
  std::string payload = flags.format == "structured" ? doc.dump(2) + "\n" : text;
  if (flags.out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(flags.out_path, std::ios::binary);
    if (!out) usage_error("cannot write " + flags.out_path);
    out << payload;
  }
  return passed ? 0 : 1;
}

json report_skeleton(std::optional<std::uint64_t> model_hash) {
  json doc;
  doc["tool_version"] = kToolVersion;
  doc["model_hash"] = model_hash ? json(hash_hex(*model_hash)) : json(nullptr);
  doc["queries"] = json::array();
  return doc;
}

struct LoadedModel {
  ModelDocument doc;
  std::string path;
};

LoadedModel load_model(const std::string& path) {
  std::string text = read_file(path);
  causal::ParseResult r = causal::parse_document(text);
  if (!r.ok()) {
    std::ostringstream msg;
    for (const auto& d : r.diagnostics) msg << path << ":" << d.to_string() << "\n";
    std::string s = msg.str();
    if (!s.empty()) s.pop_back();
    usage_error(s);
  }
  return {std::move(*r.document), path};
}

// --context name, else the document's sole context, else the empty context
// for models without exogenous variables
std::pair<Context, std::string> resolve_context(const ModelDocument& doc,
                                                const std::string& flag) {
  if (!flag.empty()) {
    const causal::NamedContext* c = doc.find_context(flag);
    if (!c) usage_error("no context named " + flag);
    return {c->values, c->name};
  }
  if (doc.contexts.size() == 1) return {doc.contexts.front().values, doc.contexts.front().name};
  if (doc.contexts.empty() && doc.model.num_exogenous() == 0) return {Context{}, "(empty)"};
  if (doc.contexts.empty()) usage_error("model declares no context; pass --context");
  std::string names;
  for (const auto& c : doc.contexts) names += (names.empty() ? "" : ", ") + c.name;
  usage_error("several contexts available (" + names + "); pick one with --context");
}

// ---- subcommands ----------------------------------------------------------

int run_check(const std::string& model_path, const std::vector<std::string>& query_args,
              const std::string& def_flag, const std::string& ctx_flag,
              const CommonFlags& flags) {
  LoadedModel loaded = load_model(model_path);
  const CausalModel& m = loaded.doc.model;
  auto [ctx, ctx_name] = resolve_context(loaded.doc, ctx_flag);

  std::optional<Definition> forced;
  if (!def_flag.empty()) {
    forced = causal::parse_definition(def_flag);
    if (!forced) usage_error("unknown definition " + def_flag);
  }

  // positional args: named queries, definition names (apply to what follows),
  // or inline "X=x causes Y=y" text
  std::vector<std::pair<std::string, QuerySpec>> queries;
  Definition pending = forced.value_or(Definition::Def2);
  for (const std::string& arg : query_args) {
    if (auto d = causal::parse_definition(arg)) {
      pending = *d;
      continue;
    }
    if (const QuerySpec* named = loaded.doc.find_query(arg)) {
      QuerySpec q = *named;
      if (forced) q.definition = *forced;
      queries.emplace_back(arg, q);
      continue;
    }
    QuerySpec q = parse_inline_query(m, arg, forced.value_or(pending));
    queries.emplace_back("", q);
  }
  if (queries.empty()) {
    for (const QuerySpec& q : loaded.doc.queries) {
      QuerySpec copy = q;
      if (forced) copy.definition = *forced;
      queries.emplace_back(q.name, copy);
    }
  }
  if (queries.empty()) usage_error("no queries: the document defines none and none were given");

  causal::Session session(m);
  json doc = report_skeleton(causal::model_hash(m));
  std::ostringstream text;
  bool all_yes = true;
  for (const auto& [name, q] : queries) {
    Verdict v = session.is_cause(ctx, q.cause, q.effect, q.definition);
    all_yes = all_yes && v.is_cause;
    verdict_text(text, m, v, name, ctx_name);
    doc["queries"].push_back(verdict_json(m, v, name));
  }
  return finish(flags, text.str(), doc, !flags.assert_mode || all_yes);
}

int run_causes(const std::string& model_path, const std::string& effect_arg,
               const std::string& def_flag, const std::string& ctx_flag, int max_size,
               const CommonFlags& flags) {
  LoadedModel loaded = load_model(model_path);
  const CausalModel& m = loaded.doc.model;
  auto [ctx, ctx_name] = resolve_context(loaded.doc, ctx_flag);
  Definition def = Definition::Def2;
  if (!def_flag.empty()) {
    auto d = causal::parse_definition(def_flag);
    if (!d) usage_error("unknown definition " + def_flag);
    def = *d;
  }
  Effect eff = parse_effect(m, effect_arg);

  causal::Session session(m);
  std::vector<Verdict> found = session.find_all_causes(ctx, eff, def, max_size);

  json doc = report_skeleton(causal::model_hash(m));
  std::ostringstream text;
  text << "causes of " << effect_text(m, eff) << " under " << causal::definition_name(def)
       << " (context " << ctx_name << ", size <= " << max_size << "): " << found.size() << "\n";
  for (const Verdict& v : found) {
    verdict_text(text, m, v, "", ctx_name);
    doc["queries"].push_back(verdict_json(m, v, ""));
  }
  return finish(flags, text.str(), doc, !flags.assert_mode || !found.empty());
}

int run_suffices(const std::string& model_path, const std::string& kind_arg,
                 const std::string& x_arg, const std::string& y_arg, const std::string& ctx_flag,
                 const CommonFlags& flags) {
  LoadedModel loaded = load_model(model_path);
  const CausalModel& m = loaded.doc.model;

  std::optional<causal::SufficiencyKind> kind;
  for (causal::SufficiencyKind k :
       {causal::SufficiencyKind::Direct, causal::SufficiencyKind::Strong,
        causal::SufficiencyKind::Weak, causal::SufficiencyKind::ActualDirect,
        causal::SufficiencyKind::ActualStrong, causal::SufficiencyKind::ActualWeak})
    if (kind_arg == causal::sufficiency_kind_name(k)) kind = k;
  if (!kind) usage_error("unknown sufficiency kind " + kind_arg);

  std::optional<Context> ctx;
  std::string ctx_name = "(all)";
  if (causal::is_actual(*kind)) {
    auto [c, n] = resolve_context(loaded.doc, ctx_flag);
    ctx = c;
    ctx_name = n;
  } else if (!ctx_flag.empty()) {
    usage_error("kind '" + kind_arg + "' quantifies over every context; use actual-" + kind_arg +
                " to evaluate at one");
  }

  PartialSetting xx = parse_setting(m, x_arg);
  PartialSetting yy = parse_setting(m, y_arg);

  bool holds = false;
  std::optional<causal::NetworkWitness> witness;
  switch (causal::base_kind(*kind)) {
    case causal::SufficiencyKind::Weak: holds = causal::weakly_sufficient(m, xx, yy, ctx); break;
    case causal::SufficiencyKind::Direct:
      holds = causal::directly_sufficient(m, xx, yy, ctx);
      break;
    default:
      witness = causal::strongly_sufficient(m, xx, yy, ctx);
      holds = witness.has_value();
      break;
  }

  json doc = report_skeleton(causal::model_hash(m));
  json q;
  q["definition"] = kind_arg;
  q["cause"] = setting_json(m, xx);
  q["effect"] = setting_json(m, yy);
  q["is_cause"] = holds;
  q["witness"] = json::object();
  q["network"] = witness ? setting_json(m, witness->values) : json::object();
  q["contrast"] = json::object();
  q["citations"] = json::array();
  doc["queries"].push_back(q);

  std::ostringstream text;
  text << "[" << (holds ? "yes" : "no ") << "] " << setting_text(m, xx, " & ") << " is " << kind_arg
       << " sufficient for " << setting_text(m, yy, " & ") << "  (context " << ctx_name << ")\n";
  if (witness) text << "      network N: " << setting_text(m, witness->values) << "\n";
  return finish(flags, text.str(), doc, !flags.assert_mode || holds);
}

int run_corpus(const std::string& filter, const std::string& fixtures, const CommonFlags& flags) {
  causal::CorpusReport report = causal::run_corpus(fixtures, filter);
  json doc = report_skeleton(std::nullopt);
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["case"] = r.case_name;
    row["label"] = r.label;
    row["asserted"] = r.asserted;
    row["expected"] = r.expected;
    row["actual"] = r.actual;
    row["passed"] = r.passed;
    row["citations"] = r.citation.empty() ? json::array() : json::array({r.citation});
    if (!r.detail.empty()) row["detail"] = r.detail;
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  doc["corpus"] = json{{"cases", report.cases_run},
                       {"asserted_rows", report.asserted_rows},
                       {"asserted_failures", report.asserted_failures},
                       {"informational_mismatches", report.informational_mismatches},
                       {"rows", rows}};
  return finish(flags, report.to_text(), doc, report.ok());
}

int run_fuzz(std::uint64_t seed, int samples, const std::string& exhaustive_arg, bool quick,
             int max_cause_size, const std::string& fixtures, const std::string& inject,
             const CommonFlags& flags) {
  causal::VerifyOptions opts;
  opts.max_cause_size = max_cause_size;
  if (!inject.empty()) {
    if (inject == "confuse-sufficiency-kinds")
      opts.bug = causal::InjectedBug::ConfuseSufficiencyKinds;
    else
      usage_error("unknown bug name " + inject);
  }

  std::vector<causal::ModelFamily> families;
  if (quick) {
    families.push_back(causal::ModelFamily::exhaustive(2, 2));
    families.push_back(causal::ModelFamily::sample(200, seed));
  } else {
    std::vector<int> dims;
    for (const std::string& part : split_on(exhaustive_arg, ','))
      dims.push_back(std::stoi(part));
    if (dims.size() != 3) usage_error("--exhaustive wants roots,max-nonroot,max-parents");
    families.push_back(causal::ModelFamily::exhaustive(dims[0], dims[1], dims[2]));
    if (samples > 0) families.push_back(causal::ModelFamily::sample(samples, seed));
  }

  causal::VerifyRun total;
  std::ostringstream text;
  text << "seed: " << seed << "\n";
  for (std::size_t i = 0; i < families.size(); ++i) {
    text << "family: " << families[i].describe() << "\n";
    // stored counterexamples only need confirming once
    causal::VerifyRun run = causal::check_all(families[i], i == 0 ? fixtures : "", opts);
    total.equivalences.merge(run.equivalences);
    total.implications.merge(run.implications);
    total.structural.merge(run.structural);
    total.seconds += run.seconds;
  }
  text << "\n" << total.equivalences.to_text() << "\n" << total.implications.to_text() << "\n"
       << total.structural.to_text();

  json doc = report_skeleton(std::nullopt);
  doc["fuzz"] = json{{"seed", seed},
                     {"ok", total.ok()},
                     {"violations", total.equivalences.violation_count +
                                        total.implications.violation_count +
                                        total.structural.violation_count},
                     {"audited", total.audited()},
                     {"audit_failures", total.audit_failures()},
                     {"seconds", total.seconds}};
  json families_json = json::array();
  for (const auto& f : families) families_json.push_back(f.describe());
  doc["fuzz"]["families"] = families_json;

  // shrink the first replayable violation and show it
  const causal::Violation* first = nullptr;
  for (const causal::TheoremReport* r :
       {&total.equivalences, &total.implications, &total.structural}) {
    for (const causal::Violation& v : r->violations)
      if (v.recheck != causal::RecheckKind::None) {
        first = &v;
        break;
      }
    if (first) break;
  }
  if (first) {
    causal::Violation shrunk = causal::minimize_counterexample(*first);
    text << "\nminimized counterexample (" << shrunk.claim << "):\n"
         << shrunk.model << "context: " << shrunk.context_text << "\nquery: " << shrunk.query
         << "\n";
    doc["fuzz"]["minimized"] = json{{"claim", shrunk.claim},
                                    {"model", shrunk.model},
                                    {"context", shrunk.context_text},
                                    {"query", shrunk.query},
                                    {"detail", shrunk.detail}};
  }
  text << "total: " << total.seconds << "s, " << total.audited() << " positive verdicts audited, "
       << (total.ok() ? "OK" : "FAILED") << "\n";
  return finish(flags, text.str(), doc, total.ok());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural causal models: causation, sufficiency, verification"};
  app.require_subcommand(1);

  std::string model_path, def_flag, ctx_flag, effect_arg, kind_arg, x_arg, y_arg;
  std::string filter, fixtures = kDefaultFixtures, exhaustive_arg = "2,3,2", inject;
  std::vector<std::string> query_args;
  int max_size = 2, max_cause_size = 2, samples = 10000;
  std::uint64_t seed = 0;
  bool quick = false;
  CommonFlags check_flags, causes_flags, suffices_flags, corpus_flags, fuzz_flags;

  CLI::App* check = app.add_subcommand("check", "evaluate causation queries against a model");
  check->add_option("model", model_path, "model file (.scm)")->required();
  check->add_option("query", query_args,
                    "named queries, definition names, or inline 'X=x causes Y=y' text; "
                    "default: every query in the document");
  check->add_option("--def", def_flag, "definition to use, overriding the query's own");
  check->add_option("--context", ctx_flag, "context name (default: the document's sole context)");
  check->add_flag("--assert", check_flags.assert_mode, "exit 1 unless every verdict is yes");
  add_output_flags(check, check_flags);

  CLI::App* causes = app.add_subcommand("causes", "list every cause of an effect");
  causes->add_option("model", model_path, "model file (.scm)")->required();
  causes->add_option("effect", effect_arg, "effect, e.g. 'Y=1' or 'F=1 | F=2'")->required();
  causes->add_option("--def", def_flag, "definition to use (default Def2)");
  causes->add_option("--context", ctx_flag, "context name");
  causes->add_option("--max-size", max_size, "largest cause set searched")->capture_default_str();
  causes->add_flag("--assert", causes_flags.assert_mode, "exit 1 when no cause is found");
  add_output_flags(causes, causes_flags);

  CLI::App* suffices = app.add_subcommand("suffices", "decide a sufficiency query");
  suffices->add_option("model", model_path, "model file (.scm)")->required();
  suffices
      ->add_option("kind", kind_arg,
                   "weak | direct | strong | actual-weak | actual-direct | actual-strong")
      ->required();
  suffices->add_option("X", x_arg, "candidate setting, e.g. 'A=1 & B=0'")->required();
  suffices->add_option("Y", y_arg, "target setting")->required();
  suffices->add_option("--context", ctx_flag, "context name (actual kinds only)");
  suffices->add_flag("--assert", suffices_flags.assert_mode, "exit 1 when the answer is no");
  add_output_flags(suffices, suffices_flags);

  CLI::App* corpus = app.add_subcommand("corpus", "run the golden corpus");
  corpus->add_option("filter", filter, "only run cases whose name contains this substring");
  corpus->add_option("--fixtures", fixtures, "fixtures directory")->capture_default_str();
  add_output_flags(corpus, corpus_flags);

  CLI::App* fuzz = app.add_subcommand("fuzz", "sweep model families against the proved claims");
  fuzz->add_option("--seed", seed, "seed for the sampled family")->capture_default_str();
  fuzz->add_option("--samples", samples, "sampled-family size (0 disables)")
      ->capture_default_str();
  fuzz->add_option("--exhaustive", exhaustive_arg, "exhaustive family: roots,max-nonroot,max-parents")
      ->capture_default_str();
  fuzz->add_flag("--quick", quick, "small families for a fast pass");
  fuzz->add_option("--max-cause-size", max_cause_size, "largest cause set checked")
      ->capture_default_str();
  fuzz->add_option("--fixtures", fixtures, "stored-counterexample directory")
      ->capture_default_str();
  fuzz->add_option("--inject-bug", inject,
                   "self-test hook: run with a deliberately wrong decider (value: "
                   "confuse-sufficiency-kinds)");
  add_output_flags(fuzz, fuzz_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed())
      return run_check(model_path, query_args, def_flag, ctx_flag, check_flags);
    if (causes->parsed())
      return run_causes(model_path, effect_arg, def_flag, ctx_flag, max_size, causes_flags);
    if (suffices->parsed())
      return run_suffices(model_path, kind_arg, x_arg, y_arg, ctx_flag, suffices_flags);
    if (corpus->parsed()) return run_corpus(filter, fixtures, corpus_flags);
    if (fuzz->parsed())
      return run_fuzz(seed, samples, exhaustive_arg, quick, max_cause_size, fixtures, inject,
                      fuzz_flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 2;
  } catch (const causal::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
