#pragma once

// Brute-force verification harness: every equivalence, implication, and
// structural claim about the fifteen definitions is checked on a bounded model
// family, stored counterexamples for the non-implications are re-verified, and
// fresh counterexamples can be shrunk while the disagreement persists.
// Checks here are evidence on the enumerated family, not proofs.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causal/causation.hpp"
#include "causal/dsl.hpp"
#include "causal/engine.hpp"
#include "causal/enumerate.hpp"
#include "causal/sufficiency.hpp"

namespace causal {

/// Deliberate fault for hardening tests: ConfuseSufficiencyKinds evaluates
/// Def2 queries with Def3's decider, which must surface as equivalence
/// violations on any family containing a two-step chain.
enum class InjectedBug { None, ConfuseSufficiencyKinds };

struct VerifyOptions {
  int max_cause_size = 2;        // candidate causes up to this size, actual values
  int options_stride = 8;        // network-restriction on/off cross-check on every k-th model
  int slow_stride = 10;          // strided models for the costlier sufficiency sweeps
  int max_sufficiency_vars = 4;  // sufficiency-proposition sweeps up to this many variables
  long long max_recorded = 20;   // violations kept verbatim per report
  bool audit_positives = true;   // re-derive every positive verdict's evidence
  InjectedBug bug = InjectedBug::None;
};

/// How a recorded violation can be re-established on a (shrunk) model.
enum class RecheckKind {
  None,
  EquivPair,           // defs[0] and defs[1] disagree on the query
  Implication,         // defs[0] holds, defs[1] does not
  PartOfImplication,   // cause is part of a defs[0] cause, defs[1] denies it
  NeverFires,          // defs[0] affirms the query (and never should)
  SingletonOnly,       // defs[0] affirms a multi-conjunct cause
  ParentEdge,          // defs[0] affirms although the cause is no parent edge
  OnlyParentCollapse,  // Def2/Def3/Def8 split on an only-a-parent query
  Dependence,          // dependence holds but defs[0] denies causation
  ModSingleton,        // ModifiedHP affirms a singleton, defs[1] denies it
  RootEffect,          // defs[0] affirms a cause of a root setting
  MinimalityTrivial,   // a singleton query passes AC1+AC2 yet fails AC3
  RootRestriction,     // defs[0] verdict changes with the network root restriction
  EvidenceAudit,       // positive defs[0] verdict whose evidence fails the audit
};

struct Violation {
  std::string claim;
  std::string model;  // serialized model, parseable
  std::string context_text;
  std::string query;
  std::string detail;
  // machine-readable core used by minimize_counterexample
  RecheckKind recheck = RecheckKind::None;
  Context context;
  PartialSetting cause;
  VarIndex effect_var = -1;
  std::vector<Value> effect_accepted;
  std::vector<Definition> defs;
};

struct ClaimStats {
  std::string claim;
  long long instances = 0;
  long long violations = 0;
  long long witnesses = 0;  // confirmations of the claim's existential part
};

struct TheoremReport {
  std::string title;
  std::string family;
  long long models = 0;
  std::vector<ClaimStats> claims;
  std::vector<Violation> violations;  // first few; violation_count has them all
  long long violation_count = 0;
  long long audited = 0;
  long long audit_failures = 0;
  std::vector<std::string> notes;

  bool ok() const { return violation_count == 0 && audit_failures == 0; }

  const ClaimStats* claim(const std::string& name) const {
    for (const auto& c : claims)
      if (c.claim == name) return &c;
    return nullptr;
  }

  ClaimStats& claim_stats(const std::string& name) {
    for (auto& c : claims)
      if (c.claim == name) return c;
    claims.push_back({name, 0, 0, 0});
    return claims.back();
  }

  void merge(const TheoremReport& other) {
    models += other.models;
    if (title.empty()) title = other.title;
    if (family.empty()) family = other.family;
    else if (!other.family.empty() && other.family != family) family += "; " + other.family;
    for (const auto& c : other.claims) {
      ClaimStats& mine = claim_stats(c.claim);
      mine.instances += c.instances;
      mine.violations += c.violations;
      mine.witnesses += c.witnesses;
    }
    for (const auto& v : other.violations)
      if (static_cast<long long>(violations.size()) < 20) violations.push_back(v);
    violation_count += other.violation_count;
    audited += other.audited;
    audit_failures += other.audit_failures;
    for (const auto& n : other.notes)
      if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "theorem report: " << title << "\n";
    os << "  family: " << family << "\n";
    for (const auto& n : notes) os << "  note: " << n << "\n";
    for (const auto& c : claims) {
      os << (c.violations ? "  [VIOLATION] " : "  [ok] ") << c.claim << ": " << c.instances
         << " instances";
      if (c.witnesses) os << ", " << c.witnesses << " witnesses";
      if (c.violations) os << ", " << c.violations << " violations";
      os << "\n";
    }
    if (audited) os << "  audit: " << audited << " positive verdicts re-derived, "
                    << audit_failures << " failures\n";
    for (const auto& v : violations) {
      os << "  violation: " << v.claim << "\n";
      os << "    context: " << v.context_text << "\n";
      os << "    query: " << v.query << "\n";
      if (!v.detail.empty()) os << "    detail: " << v.detail << "\n";
      std::istringstream lines(v.model);
      std::string line;
      while (std::getline(lines, line)) os << "    | " << line << "\n";
    }
    os << "  summary: " << title << ": " << models << " models, " << violation_count
       << " violations, " << audit_failures << " audit failures -> "
       << (ok() ? "OK" : "FAILED") << "\n";
    return os.str();
  }
};

namespace verify_detail {

constexpr unsigned kEquiv = 1, kImpl = 2, kStruct = 4;

inline Definition bugged(Definition d, InjectedBug b) {
  if (b == InjectedBug::ConfuseSufficiencyKinds && d == Definition::Def2) return Definition::Def3;
  return d;
}

inline std::string render_setting(const CausalModel& m, const PartialSetting& s) {
  std::string out;
  for (const auto& [v, val] : s.items()) {
    if (!out.empty()) out += " & ";
    out += m.endogenous(v).name + "=" + m.range(v).label(val);
  }
  return out.empty() ? "(empty)" : out;
}

inline std::string render_effect(const CausalModel& m, VarIndex y,
                                 const std::vector<Value>& accepted) {
  std::string out;
  for (Value v : accepted) {
    if (!out.empty()) out += " | ";
    out += m.endogenous(y).name + "=" + m.range(y).label(v);
  }
  return out;
}

inline std::string render_context(const CausalModel& m, const Context& ctx) {
  if (static_cast<int>(ctx.size()) != m.num_exogenous()) return "(all contexts)";
  std::string out;
  for (int u = 0; u < m.num_exogenous(); ++u) {
    if (u) out += ", ";
    out += m.exogenous(u).name + "=" + m.exo_range(u).label(ctx[u]);
  }
  return out.empty() ? "(no context)" : out;
}

/// The six equivalence cells of the identification theorem.
inline const std::vector<std::pair<Definition, Definition>>& equivalence_pairs() {
  using D = Definition;
  static const std::vector<std::pair<D, D>> pairs = {
      {D::ModifiedHP, D::Def1}, {D::Def2, D::Def5}, {D::Def8, D::Def11},
      {D::Def3, D::Def6},       {D::Def3, D::Def9}, {D::Def3, D::Def12}};
  return pairs;
}

/// Stored counterexamples for the claimed non-implications, with the verdict
/// split each must reproduce.
struct StoredSplit {
  const char* file;
  const char* context;
  const char* cause_var;
  const char* cause_label;
  const char* effect_var;
  const char* effect_label;
  std::vector<Definition> yes;
  std::vector<Definition> no;
};

inline const std::vector<StoredSplit>& stored_splits() {
  using D = Definition;
  static const std::vector<StoredSplit> table = {
      {"correlated_backup.scm", "actual", "X", "1", "Y", "1", {D::Def2}, {D::Def4, D::Def10}},
      {"entangled_conjunction.scm", "actual", "X", "1", "Y", "1", {D::Def4}, {D::Def10}},
      {"masked_disjunct.scm", "actual", "X", "1", "Y", "1",
       {D::OriginalHP, D::UpdatedHP}, {D::Def2, D::Def3, D::Def8}},
      {"two_step_chain.scm", "actual", "X", "1", "Y", "1",
       {D::Def2, D::Def4, D::Def8, D::Def10, D::OriginalHP, D::UpdatedHP, D::ModifiedHP},
       {D::Def3}},
      {"split_paths.scm", "actual", "X", "1", "Y", "1", {D::Def4, D::Def10}, {D::OriginalHP}},
      {"prisoner_follower.scm", "actual", "X", "1", "Y", "1", {D::Def3}, {D::UpdatedHP}},
      {"switch.scm", "actual", "F", "1", "A", "1", {D::Def8}, {D::Def2}},
      {"masked_dependence.scm", "actual", "X", "1", "Y", "1", {D::Def2}, {D::OriginalHP}}};
  return table;
}

struct Cell {
  bool cause = false;
};

struct PassReports {
  TheoremReport equivalences, implications, structural;
};

class Pass {
 public:
  Pass(unsigned selection, const VerifyOptions& opts, const ModelFamily& family)
      : sel_(selection), opts_(opts) {
    const std::string fam =
        family.describe() + " (" + std::to_string(count_models(family)) + " models)";
    auto init = [&](TheoremReport& r, const char* title) {
      r.title = title;
      r.family = fam;
      r.notes.push_back(
          "bounded-family check: claims are exercised on the family above, not proved");
      r.notes.push_back("candidate causes up to size " + std::to_string(opts_.max_cause_size) +
                        " over actual values; effects are actual single-variable atoms");
    };
    if (sel_ & kEquiv) init(out_.equivalences, "equivalences");
    if (sel_ & kImpl) {
      init(out_.implications, "implications");
      out_.implications.notes.push_back(
          "part-of premises are under-approximated by causes inside the candidate bound");
    }
    if (sel_ & kStruct) {
      init(out_.structural, "structural properties");
      out_.structural.notes.push_back(
          "sufficiency propositions swept on models with at most " +
          std::to_string(opts_.max_sufficiency_vars) + " variables (strided when costly)");
    }
    needed_ = needed_definitions();
  }

  void run(const ModelFamily& family) {
    enumerate_models(family, [&](const CausalModel& m) {
      visit(m);
      return true;
    });
  }

  PassReports take() {
    auto stamp = [&](TheoremReport& r) { r.models = models_; };
    if (sel_ & kEquiv) stamp(out_.equivalences);
    if (sel_ & kImpl) stamp(out_.implications);
    if (sel_ & kStruct) stamp(out_.structural);
    return std::move(out_);
  }

 private:
  unsigned sel_;
  VerifyOptions opts_;
  PassReports out_;
  std::vector<Definition> needed_;
  long long models_ = 0;
  // per-model scratch
  const CausalModel* m_ = nullptr;
  std::string model_text_;  // serialized lazily on first violation
  std::vector<char> is_root_;

  std::vector<Definition> needed_definitions() const {
    using D = Definition;
    std::vector<D> defs;
    auto add = [&](std::initializer_list<D> ds) {
      for (D d : ds)
        if (std::find(defs.begin(), defs.end(), d) == defs.end()) defs.push_back(d);
    };
    if (sel_ & kEquiv)
      add({D::ModifiedHP, D::Def1, D::Def2, D::Def5, D::Def8, D::Def11, D::Def3, D::Def6, D::Def9,
           D::Def12});
    if (sel_ & kImpl)
      add({D::ModifiedHP, D::UpdatedHP, D::OriginalHP, D::Def2, D::Def3, D::Def8, D::Def10,
           D::Def4});
    if (sel_ & kStruct)
      add({D::Def7, D::Def8, D::Def9, D::Def10, D::Def11, D::Def12, D::Def3, D::Def2, D::Def4,
           D::ModifiedHP, D::OriginalHP, D::UpdatedHP});
    return defs;
  }

  const std::string& model_text() {
    if (model_text_.empty()) model_text_ = serialize_model(*m_);
    return model_text_;
  }

  void record(TheoremReport& r, const std::string& claim, RecheckKind kind, const Context& ctx,
              const PartialSetting& cause, VarIndex y, const std::vector<Value>& accepted,
              std::vector<Definition> defs, const std::string& query, const std::string& detail) {
    r.claim_stats(claim).violations++;
    r.violation_count++;
    if (static_cast<long long>(r.violations.size()) >= opts_.max_recorded) return;
    Violation v;
    v.claim = claim;
    v.model = model_text();
    v.context_text = render_context(*m_, ctx);
    v.query = query;
    v.detail = detail;
    v.recheck = kind;
    v.context = ctx;
    v.cause = cause;
    v.effect_var = y;
    v.effect_accepted = accepted;
    // claim and detail name the definitions the pass believed it ran; defs
    // holds the deciders actually consulted (they differ under an injected
    // bug), so a recheck replays the exact comparison that failed
    for (Definition& d : defs) d = bugged(d, opts_.bug);
    v.defs = std::move(defs);
    r.violations.push_back(std::move(v));
  }

  void visit(const CausalModel& m) {
    m_ = &m;
    model_text_.clear();
    ++models_;
    const int n = m.num_endogenous();
    is_root_.assign(n, 0);
    for (VarIndex r : m.root_variables()) is_root_[r] = 1;

    Session session(m);
    std::optional<Session> session_off;
    const bool cross_check_options =
        (sel_ & kStruct) && opts_.options_stride > 0 && (models_ % opts_.options_stride) == 1;
    if (cross_check_options) {
      QueryOptions o;
      o.restrict_network_to_nonroot = false;
      session_off.emplace(m, o);
    }

    std::vector<int> exo_sizes;
    for (int u = 0; u < m.num_exogenous(); ++u) exo_sizes.push_back(m.exo_range(u).size());
    for_each_assignment(exo_sizes, [&](const std::vector<Value>& ud) {
      Context ctx(ud.begin(), ud.end());
      visit_context(session, session_off ? &*session_off : nullptr, ctx);
      return true;
    });

    if (sel_ & kStruct) {
      check_root_determinism(m);
      long long combos = 1;
      for (int v = 0; v < n && combos <= 1024; ++v) combos *= m.range(v).size();
      for (int u = 0; u < m.num_exogenous() && combos <= 1024; ++u)
        combos *= m.exo_range(u).size();
      const bool small = n <= opts_.max_sufficiency_vars;
      const bool cheap = small && combos <= 256;
      const bool strided = opts_.slow_stride > 0 && (models_ % opts_.slow_stride) == 1;
      if (cheap || (small && strided)) {
        check_sufficiency_instantiations(m);
        check_actual_off_roots(m);
        check_network_chain(m);
      }
      if (cheap || strided) check_strength_chain(m);
    }
  }

  // ---- per-context sweep over candidate causes --------------------------

  void visit_context(Session& s, Session* s_off, const Context& ctx) {
    const CausalModel& m = *m_;
    const int n = m.num_endogenous();
    World actual = m.solve(ctx);
    for (VarIndex y = 0; y < n; ++y) {
      Effect eff = Effect::atom(y, actual[y]);
      std::vector<PartialSetting> xs;
      for (VarIndex a = 0; a < n; ++a)
        if (a != y) xs.push_back(PartialSetting::single(a, actual[a]));
      const std::size_t singletons = xs.size();
      if (opts_.max_cause_size >= 2)
        for (VarIndex a = 0; a < n; ++a)
          for (VarIndex b = a + 1; b < n; ++b) {
            if (a == y || b == y) continue;
            PartialSetting p = PartialSetting::single(a, actual[a]);
            p.set(b, actual[b]);
            xs.push_back(std::move(p));
          }

      auto query_text = [&](std::size_t i) {
        return render_setting(m, xs[i]) + " causes " + render_effect(m, y, eff.accepted);
      };

      std::map<Definition, std::vector<Cell>> cells;
      for (Definition d : needed_) {
        auto& row = cells[d];
        row.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
          Verdict v = s.is_cause(ctx, xs[i], eff, bugged(d, opts_.bug));
          row[i].cause = v.is_cause;
          if (opts_.audit_positives && v.is_cause) audit(s, ctx, v, xs[i], eff);
          if (sel_ & kStruct)
            validate_minimality(ctx, v, xs[i], i < singletons, eff,
                                [&] { return query_text(i); });
        }
      }

      if (sel_ & kEquiv) check_equiv_cells(ctx, eff, xs, cells, query_text);
      if (sel_ & kImpl) check_impl_cells(ctx, eff, xs, singletons, cells, query_text);
      if (sel_ & kStruct) {
        check_struct_cells(s, ctx, eff, xs, singletons, cells, query_text);
        if (s_off) check_root_restriction(s, *s_off, ctx, eff, xs, query_text);
      }
    }
  }

  void audit(Session& s, const Context& ctx, const Verdict& v, const PartialSetting& x,
             const Effect& eff) {
    TheoremReport& r = (sel_ & kEquiv)  ? out_.equivalences
                       : (sel_ & kImpl) ? out_.implications
                                        : out_.structural;
    r.audited++;
    if (audit_verdict(s.model(), ctx, v)) return;
    r.audit_failures++;
    record(r, "evidence audit", RecheckKind::EvidenceAudit, ctx, x, eff.variable, eff.accepted,
           {v.definition},
           std::string(definition_name(v.definition)) + ": " + render_setting(*m_, x) +
               " causes " + render_effect(*m_, eff.variable, eff.accepted),
           "positive verdict whose evidence does not re-derive");
  }

  template <typename LazyText>
  void validate_minimality(const Context& ctx, const Verdict& v, const PartialSetting& x,
                           bool single, const Effect& eff, LazyText&& text) {
    TheoremReport& r = out_.structural;
    if (single && v.ac1 && v.ac2) {
      // the empty conjunction never satisfies AC2, so AC3 cannot bite
      ClaimStats& st = r.claim_stats("singleton minimality is trivial");
      st.instances++;
      if (!v.ac3)
        record(r, st.claim, RecheckKind::MinimalityTrivial, ctx, x, eff.variable, eff.accepted,
               {v.definition}, text(),
               std::string(definition_name(v.definition)) +
                   " singleton passes AC1+AC2 but fails AC3");
    }
    if (!single && v.ac1 && v.ac2 && !v.ac3) {
      ClaimStats& st = r.claim_stats("minimality witnesses are nonempty strict subsets");
      st.instances++;
      bool good = v.minimality_counterexample.has_value();
      if (good) {
        const PartialSetting& w = *v.minimality_counterexample;
        good = !w.empty() && w.size() < x.size();
        for (const auto& [var, val] : w.items())
          if (x.get(var) != std::optional<Value>(val)) good = false;
      }
      if (!good)
        record(r, st.claim, RecheckKind::None, ctx, x, eff.variable, eff.accepted,
               {v.definition}, text(),
               std::string(definition_name(v.definition)) +
                   ": AC3 failed without a valid strict-subset witness");
    }
  }

  template <typename QueryText>
  void check_equiv_cells(const Context& ctx, const Effect& eff,
                         const std::vector<PartialSetting>& xs,
                         std::map<Definition, std::vector<Cell>>& cells, QueryText&& query_text) {
    TheoremReport& r = out_.equivalences;
    for (const auto& [a, b] : equivalence_pairs()) {
      std::string claim = std::string(definition_name(a)) + " == " + definition_name(b);
      ClaimStats& st = r.claim_stats(claim);
      const auto& ra = cells[a];
      const auto& rb = cells[b];
      for (std::size_t i = 0; i < xs.size(); ++i) {
        st.instances++;
        if (ra[i].cause != rb[i].cause)
          record(r, claim, RecheckKind::EquivPair, ctx, xs[i], eff.variable, eff.accepted, {a, b},
                 query_text(i),
                 std::string(definition_name(a)) + (ra[i].cause ? " affirms, " : " denies, ") +
                     definition_name(b) + (rb[i].cause ? " affirms" : " denies"));
      }
    }
  }

  template <typename QueryText>
  void check_impl_cells(const Context& ctx, const Effect& eff,
                        const std::vector<PartialSetting>& xs, std::size_t singletons,
                        std::map<Definition, std::vector<Cell>>& cells, QueryText&& query_text) {
    using D = Definition;
    TheoremReport& r = out_.implications;
    // is xs[i] (singleton) contained in a cause from the table for def d?
    auto part_of = [&](D d, std::size_t i) {
      const auto& row = cells[d];
      if (row[i].cause) return true;
      VarIndex var = xs[i].items().front().first;
      for (std::size_t j = singletons; j < xs.size(); ++j)
        if (row[j].cause && xs[j].contains(var)) return true;
      return false;
    };
    auto direct = [&](const char* claim, D lhs, D rhs) {
      ClaimStats& st = r.claim_stats(claim);
      const auto& rl = cells[lhs];
      const auto& rr = cells[rhs];
      for (std::size_t i = 0; i < xs.size(); ++i) {
        st.instances++;
        if (rl[i].cause && !rr[i].cause)
          record(r, claim, RecheckKind::Implication, ctx, xs[i], eff.variable, eff.accepted,
                 {lhs, rhs}, query_text(i),
                 std::string(definition_name(lhs)) + " affirms but " + definition_name(rhs) +
                     " denies");
      }
    };
    auto part_impl = [&](const char* claim, D lhs, D rhs) {
      ClaimStats& st = r.claim_stats(claim);
      const auto& rr = cells[rhs];
      for (std::size_t i = 0; i < singletons; ++i) {
        st.instances++;
        if (part_of(lhs, i) && !rr[i].cause)
          record(r, claim, RecheckKind::PartOfImplication, ctx, xs[i], eff.variable, eff.accepted,
                 {lhs, rhs}, query_text(i),
                 std::string("part of a ") + definition_name(lhs) + " cause but " +
                     definition_name(rhs) + " denies");
      }
    };
    part_impl("part of ModifiedHP => UpdatedHP", D::ModifiedHP, D::UpdatedHP);
    part_impl("part of UpdatedHP => OriginalHP", D::UpdatedHP, D::OriginalHP);
    direct("Def3 => Def2", D::Def3, D::Def2);
    part_impl("part of Def2 => Def8", D::Def2, D::Def8);
    direct("Def3 => OriginalHP", D::Def3, D::OriginalHP);
    direct("Def10 => Def4", D::Def10, D::Def4);
  }

  template <typename QueryText>
  void check_struct_cells(Session& s, const Context& ctx, const Effect& eff,
                          const std::vector<PartialSetting>& xs, std::size_t singletons,
                          std::map<Definition, std::vector<Cell>>& cells, QueryText&& query_text) {
    using D = Definition;
    TheoremReport& r = out_.structural;
    const CausalModel& m = *m_;
    const VarIndex y = eff.variable;
    const auto& parents = m.parents(y);
    auto is_parent = [&](VarIndex v) {
      return std::find(parents.begin(), parents.end(), v) != parents.end();
    };

    {  // Def7 is unsatisfiable
      ClaimStats& st = r.claim_stats("Def7 never fires");
      const auto& row = cells[D::Def7];
      for (std::size_t i = 0; i < xs.size(); ++i) {
        st.instances++;
        if (row[i].cause)
          record(r, st.claim, RecheckKind::NeverFires, ctx, xs[i], y, eff.accepted, {D::Def7},
                 query_text(i), "Def7 affirms a cause");
      }
    }
    {  // minimal-necessity causes are singletons
      ClaimStats& st = r.claim_stats("minimal-necessity causes are singletons");
      for (D d : {D::Def7, D::Def8, D::Def9, D::Def10, D::Def11, D::Def12}) {
        const auto& row = cells[d];
        for (std::size_t i = singletons; i < xs.size(); ++i) {
          st.instances++;
          if (row[i].cause)
            record(r, st.claim, RecheckKind::SingletonOnly, ctx, xs[i], y, eff.accepted, {d},
                   query_text(i),
                   std::string(definition_name(d)) + " affirms a multi-conjunct cause");
        }
      }
    }
    {  // Def3 causes are singleton parent edges
      ClaimStats& st = r.claim_stats("Def3 causes are parent edges");
      const auto& row = cells[D::Def3];
      for (std::size_t i = 0; i < xs.size(); ++i) {
        st.instances++;
        if (!row[i].cause) continue;
        bool bad = i >= singletons || !is_parent(xs[i].items().front().first);
        if (bad)
          record(r, st.claim, RecheckKind::ParentEdge, ctx, xs[i], y, eff.accepted, {D::Def3},
                 query_text(i),
                 i >= singletons ? "Def3 affirms a multi-conjunct cause"
                                 : "Def3 cause is not a parent of the effect");
      }
    }
    {  // only-a-parent collapse of Def2 / Def3 / Def8
      ClaimStats& st = r.claim_stats("only-a-parent collapse (Def2 == Def3 == Def8)");
      for (std::size_t i = 0; i < singletons; ++i) {
        VarIndex x = xs[i].items().front().first;
        if (!only_parent(m, x, y)) continue;
        st.instances++;
        bool d2 = cells[D::Def2][i].cause, d3 = cells[D::Def3][i].cause,
             d8 = cells[D::Def8][i].cause;
        if (d2 != d3 || d2 != d8)
          record(r, st.claim, RecheckKind::OnlyParentCollapse, ctx, xs[i], y, eff.accepted,
                 {D::Def2, D::Def3, D::Def8}, query_text(i),
                 std::string("Def2/Def3/Def8 split: ") + (d2 ? "1" : "0") + "/" +
                     (d3 ? "1" : "0") + "/" + (d8 ? "1" : "0"));
      }
    }
    {  // dependence implies causation (except for Def3 and Def10)
      ClaimStats& st = r.claim_stats("dependence implies causation");
      ClaimStats& w3 = r.claim_stats("Def3 rejects some dependence instance");
      ClaimStats& w10 = r.claim_stats("Def10 rejects some dependence instance");
      for (std::size_t i = 0; i < singletons; ++i) {
        VarIndex x = xs[i].items().front().first;
        bool dep = s.dependence_holds(ctx, x, eff);
        w3.instances++;
        w10.instances++;
        if (!dep) continue;
        for (D d : {D::Def2, D::Def4, D::Def8, D::OriginalHP, D::UpdatedHP, D::ModifiedHP}) {
          st.instances++;
          if (!cells[d][i].cause)
            record(r, st.claim, RecheckKind::Dependence, ctx, xs[i], y, eff.accepted, {d},
                   query_text(i),
                   std::string("dependence holds but ") + definition_name(d) + " denies");
        }
        if (!cells[D::Def3][i].cause) w3.witnesses++;
        if (!cells[D::Def10][i].cause) w10.witnesses++;
      }
    }
    {  // ModifiedHP singletons are Def2 / Def4 / Def8 causes
      ClaimStats& st = r.claim_stats("ModifiedHP singletons are Def2/Def4/Def8 causes");
      for (std::size_t i = 0; i < singletons; ++i) {
        if (!cells[D::ModifiedHP][i].cause) continue;
        for (D d : {D::Def2, D::Def4, D::Def8}) {
          st.instances++;
          if (!cells[d][i].cause)
            record(r, st.claim, RecheckKind::ModSingleton, ctx, xs[i], y, eff.accepted,
                   {D::ModifiedHP, d}, query_text(i),
                   std::string("ModifiedHP affirms but ") + definition_name(d) + " denies");
        }
      }
    }
    if (is_root_[y]) {  // settings of root variables have no causes
      ClaimStats& st = r.claim_stats("root effects have no causes");
      for (D d : needed_) {
        const auto& row = cells[d];
        for (std::size_t i = 0; i < xs.size(); ++i) {
          st.instances++;
          if (row[i].cause)
            record(r, st.claim, RecheckKind::RootEffect, ctx, xs[i], y, eff.accepted, {d},
                   query_text(i),
                   std::string(definition_name(d)) + " affirms a cause of a root setting");
        }
      }
    }
  }

  template <typename QueryText>
  void check_root_restriction(Session& s_on, Session& s_off, const Context& ctx,
                              const Effect& eff, const std::vector<PartialSetting>& xs,
                              QueryText&& query_text) {
    using D = Definition;
    TheoremReport& r = out_.structural;
    ClaimStats& st = r.claim_stats("network root restriction is sound");
    for (D d : {D::Def1, D::Def2, D::Def4, D::Def5, D::Def8}) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        st.instances++;
        bool on = s_on.is_cause(ctx, xs[i], eff, bugged(d, opts_.bug)).is_cause;
        bool off = s_off.is_cause(ctx, xs[i], eff, bugged(d, opts_.bug)).is_cause;
        if (on != off)
          record(r, st.claim, RecheckKind::RootRestriction, ctx, xs[i], eff.variable,
                 eff.accepted, {d}, query_text(i),
                 std::string(definition_name(d)) + ": restricted " + (on ? "1" : "0") +
                     ", unrestricted " + (off ? "1" : "0"));
      }
    }
  }

  // ---- model-level structural checks ------------------------------------

  static bool only_parent(const CausalModel& m, VarIndex x, VarIndex y) {
    const auto& ps = m.parents(y);
    if (std::find(ps.begin(), ps.end(), x) == ps.end()) return false;
    for (VarIndex c : m.children(x)) {
      if (c == y) continue;
      auto desc = m.descendants(c);
      if (std::find(desc.begin(), desc.end(), y) != desc.end()) return false;
    }
    return true;
  }

  void check_root_determinism(const CausalModel& m) {
    TheoremReport& r = out_.structural;
    ClaimStats& st = r.claim_stats("root interventions fix a unique world");
    auto roots = m.root_variables();
    if (roots.empty()) return;
    std::vector<int> sizes;
    for (VarIndex v : roots) sizes.push_back(m.range(v).size());
    std::vector<VarIndex> all_vars(m.num_endogenous());
    for (int v = 0; v < m.num_endogenous(); ++v) all_vars[v] = v;
    for_each_assignment(sizes, [&](const std::vector<Value>& d) {
      PartialSetting rr;
      for (std::size_t i = 0; i < roots.size(); ++i) rr.set(roots[i], d[i]);
      st.instances++;
      auto forced =
          detail::forced_along(m, rr, all_vars, /*sweep_complement=*/false, std::nullopt);
      if (!forced) {
        Context none;
        record(r, st.claim, RecheckKind::None, none, rr, -1, {}, {}, render_setting(m, rr),
               "intervening on all roots does not force one world across contexts");
      }
      return true;
    });
  }

  std::vector<std::optional<Context>> context_modes(const CausalModel& m) const {
    std::vector<std::optional<Context>> modes;
    modes.emplace_back(std::nullopt);
    std::vector<int> exo_sizes;
    for (int u = 0; u < m.num_exogenous(); ++u) exo_sizes.push_back(m.exo_range(u).size());
    for_each_assignment(exo_sizes, [&](const std::vector<Value>& ud) {
      modes.emplace_back(Context(ud.begin(), ud.end()));
      return true;
    });
    return modes;
  }

  void check_sufficiency_instantiations(const CausalModel& m) {
    TheoremReport& r = out_.structural;
    ClaimStats& weak = r.claim_stats("weak sufficiency instantiation");
    ClaimStats& direct = r.claim_stats("direct sufficiency instantiation");
    ClaimStats& strong = r.claim_stats("strong sufficiency instantiation");
    const int n = m.num_endogenous();
    const auto modes = context_modes(m);
    for (VarIndex a = 0; a < n; ++a)
      for (Value xv = 0; xv < static_cast<Value>(m.range(a).size()); ++xv) {
        PartialSetting xx = PartialSetting::single(a, xv);
        for (VarIndex y = 0; y < n; ++y) {
          if (y == a) continue;
          std::vector<VarIndex> rest;
          for (VarIndex v = 0; v < n; ++v)
            if (v != a && v != y) rest.push_back(v);
          for (Value yv = 0; yv < static_cast<Value>(m.range(y).size()); ++yv) {
            PartialSetting yy = PartialSetting::single(y, yv);
            for (const auto& ctx : modes) {
              {
                weak.instances++;
                bool ded = weakly_sufficient(m, xx, yy, ctx);
                bool gen = general_sufficient(m, xx, yy, {y}, yy, {}, ctx);
                if (ded != gen) suff_violation(weak.claim, m, ctx, xx, yy, ded, gen);
              }
              {
                direct.instances++;
                bool ded = directly_sufficient(m, xx, yy, ctx);
                bool gen = general_sufficient(m, xx, yy, {y}, yy, rest, ctx);
                if (ded != gen) suff_violation(direct.claim, m, ctx, xx, yy, ded, gen);
              }
              {
                strong.instances++;
                bool ded = strongly_sufficient(m, xx, yy, ctx).has_value();
                bool gen = false;
                // N maximal given C: every C with every setting of N \ {Y}
                detail::for_each_subset_by_size(rest, -1, [&](const std::vector<VarIndex>& cc) {
                  std::vector<VarIndex> nvars{y};
                  std::vector<VarIndex> nfree;
                  std::vector<int> nsizes;
                  for (VarIndex v : rest)
                    if (std::find(cc.begin(), cc.end(), v) == cc.end()) {
                      nvars.push_back(v);
                      nfree.push_back(v);
                      nsizes.push_back(m.range(v).size());
                    }
                  std::sort(nvars.begin(), nvars.end());
                  bool hit = !for_each_assignment(nsizes, [&](const std::vector<Value>& nd) {
                    PartialSetting nn = yy;
                    for (std::size_t k = 0; k < nfree.size(); ++k) nn.set(nfree[k], nd[k]);
                    return !general_sufficient(m, xx, yy, nvars, nn, cc, ctx);
                  });
                  if (hit) gen = true;
                  return !gen;
                });
                if (ded != gen) suff_violation(strong.claim, m, ctx, xx, yy, ded, gen);
              }
            }
          }
        }
      }
  }

  void check_strength_chain(const CausalModel& m) {
    TheoremReport& r = out_.structural;
    ClaimStats& st = r.claim_stats("direct implies strong implies weak");
    const int n = m.num_endogenous();
    const auto modes = context_modes(m);
    for (VarIndex a = 0; a < n; ++a)
      for (Value xv = 0; xv < static_cast<Value>(m.range(a).size()); ++xv)
        for (VarIndex y = 0; y < n; ++y) {
          if (y == a) continue;
          PartialSetting xx = PartialSetting::single(a, xv);
          for (Value yv = 0; yv < static_cast<Value>(m.range(y).size()); ++yv) {
            PartialSetting yy = PartialSetting::single(y, yv);
            for (const auto& ctx : modes) {
              st.instances++;
              bool dir = directly_sufficient(m, xx, yy, ctx);
              bool str = strongly_sufficient(m, xx, yy, ctx).has_value();
              bool wk = weakly_sufficient(m, xx, yy, ctx);
              if ((dir && !str) || (str && !wk))
                suff_violation(st.claim, m, ctx, xx, yy, dir, wk,
                               std::string("direct/strong/weak = ") + (dir ? "1" : "0") + "/" +
                                   (str ? "1" : "0") + "/" + (wk ? "1" : "0"));
            }
          }
        }
  }

  void check_network_chain(const CausalModel& m) {
    TheoremReport& r = out_.structural;
    ClaimStats& st = r.claim_stats("network chain equivalence");
    const int n = m.num_endogenous();
    if (n < 2) return;
    // nodes: every setting of a nonempty variable subset of size < n
    std::vector<PartialSetting> nodes;
    std::vector<VarIndex> pool(n);
    for (int v = 0; v < n; ++v) pool[v] = v;
    detail::for_each_subset_by_size(pool, n - 1, [&](const std::vector<VarIndex>& vars) {
      if (vars.empty()) return true;
      std::vector<int> sizes;
      for (VarIndex v : vars) sizes.push_back(m.range(v).size());
      for_each_assignment(sizes, [&](const std::vector<Value>& d) {
        PartialSetting setting;
        for (std::size_t i = 0; i < vars.size(); ++i) setting.set(vars[i], d[i]);
        nodes.push_back(std::move(setting));
        return true;
      });
      return true;
    });
    const std::size_t k = nodes.size();
    // single chain steps, computed lazily: -1 unknown, else 0/1
    std::vector<signed char> edge(k * k, -1);
    auto edge_at = [&](std::size_t i, std::size_t j) {
      signed char& e = edge[i * k + j];
      if (e < 0) e = strongly_sufficient_along_chain(m, nodes[i], nodes[j], {}) ? 1 : 0;
      return e == 1;
    };
    std::vector<char> seen(k);
    std::vector<std::size_t> parent(k);
    for (std::size_t xi = 0; xi < k; ++xi) {
      if (nodes[xi].size() != 1) continue;
      const PartialSetting& xx = nodes[xi];
      const VarIndex av = xx.items().front().first;
      for (std::size_t yi = 0; yi < k; ++yi) {
        if (nodes[yi].size() != 1) continue;
        const PartialSetting& yy = nodes[yi];
        if (yy.items().front().first == av) continue;
        st.instances++;
        std::fill(seen.begin(), seen.end(), 0);
        std::fill(parent.begin(), parent.end(), k);
        std::vector<std::size_t> frontier;
        bool reach = edge_at(xi, yi);
        std::size_t hit = k;
        // intermediate links never re-set the cause variable: the network
        // lies between the cause and the effect
        if (!reach)
          for (std::size_t j = 0; j < k; ++j)
            if (!nodes[j].contains(av) && edge_at(xi, j)) {
              seen[j] = 1;
              frontier.push_back(j);
            }
        while (!reach && !frontier.empty()) {
          std::size_t i = frontier.back();
          frontier.pop_back();
          if (edge_at(i, yi)) {
            reach = true;
            hit = i;
            break;
          }
          for (std::size_t j = 0; j < k; ++j)
            if (!seen[j] && !nodes[j].contains(av) && edge_at(i, j)) {
              seen[j] = 1;
              parent[j] = i;
              frontier.push_back(j);
            }
        }
        bool strong = strongly_sufficient(m, xx, yy, std::nullopt).has_value();
        if (reach != strong)
          suff_violation(st.claim, m, std::nullopt, xx, yy, reach, strong,
                         std::string("chain reachable ") + (reach ? "1" : "0") +
                             ", strong sufficiency " + (strong ? "1" : "0"));
        if (reach && hit != k) {
          // reconfirm the reconstructed chain through the public decider
          std::vector<PartialSetting> chain;
          for (std::size_t i = hit; i != k; i = parent[i]) chain.push_back(nodes[i]);
          std::reverse(chain.begin(), chain.end());
          if (!strongly_sufficient_along_chain(m, xx, yy, chain))
            suff_violation(st.claim, m, std::nullopt, xx, yy, reach, strong,
                           "reconstructed chain rejected by the chain decider");
        }
      }
    }
  }

  void check_actual_off_roots(const CausalModel& m) {
    TheoremReport& r = out_.structural;
    ClaimStats& dir = r.claim_stats("actual direct sufficiency matches off roots");
    ClaimStats& str = r.claim_stats("actual strong sufficiency matches off roots");
    const int n = m.num_endogenous();
    std::vector<char> root(n, 0);
    for (VarIndex v : m.root_variables()) root[v] = 1;
    std::vector<Context> ctxs;
    std::vector<int> exo_sizes;
    for (int u = 0; u < m.num_exogenous(); ++u) exo_sizes.push_back(m.exo_range(u).size());
    for_each_assignment(exo_sizes, [&](const std::vector<Value>& ud) {
      ctxs.emplace_back(ud.begin(), ud.end());
      return true;
    });
    for (VarIndex a = 0; a < n; ++a)
      for (Value xv = 0; xv < static_cast<Value>(m.range(a).size()); ++xv) {
        PartialSetting xx = PartialSetting::single(a, xv);
        for (VarIndex y = 0; y < n; ++y) {
          if (y == a || root[y]) continue;
          for (Value yv = 0; yv < static_cast<Value>(m.range(y).size()); ++yv) {
            PartialSetting yy = PartialSetting::single(y, yv);
            bool plain = directly_sufficient(m, xx, yy, std::nullopt);
            for (const Context& ctx : ctxs) {
              dir.instances++;
              bool act = directly_sufficient(m, xx, yy, ctx);
              if (act != plain) suff_violation(dir.claim, m, ctx, xx, yy, act, plain);
            }
            // strong case: networks containing y and at most one extra, off
            // roots; sufficiency along N sweeps the whole complement
            auto run_network = [&](const std::vector<VarIndex>& nvars) {
              std::vector<int> sizes;
              std::vector<VarIndex> free_vars, cvars;
              for (VarIndex v : nvars)
                if (v != y) {
                  free_vars.push_back(v);
                  sizes.push_back(m.range(v).size());
                }
              for (VarIndex v = 0; v < n; ++v)
                if (v != a && std::find(nvars.begin(), nvars.end(), v) == nvars.end())
                  cvars.push_back(v);
              for_each_assignment(sizes, [&](const std::vector<Value>& d) {
                PartialSetting nn = yy;
                for (std::size_t i = 0; i < free_vars.size(); ++i) nn.set(free_vars[i], d[i]);
                bool base = general_sufficient(m, xx, yy, nvars, nn, cvars, std::nullopt);
                for (const Context& ctx : ctxs) {
                  str.instances++;
                  bool act = general_sufficient(m, xx, yy, nvars, nn, cvars, ctx);
                  if (act != base)
                    suff_violation(str.claim, m, ctx, xx, yy, act, base,
                                   "network " + render_setting(m, nn));
                }
                return true;
              });
            };
            run_network({y});
            for (VarIndex e = 0; e < n; ++e)
              if (e != a && e != y && !root[e]) run_network({std::min(e, y), std::max(e, y)});
          }
        }
      }
  }

  void suff_violation(const std::string& claim, const CausalModel& m,
                      const std::optional<Context>& ctx, const PartialSetting& xx,
                      const PartialSetting& yy, bool lhs, bool rhs,
                      const std::string& extra = "") {
    TheoremReport& r = out_.structural;
    r.claim_stats(claim).violations++;
    r.violation_count++;
    if (static_cast<long long>(r.violations.size()) >= opts_.max_recorded) return;
    Violation v;
    v.claim = claim;
    v.model = model_text();
    v.context_text = ctx ? render_context(m, *ctx) : "(all contexts)";
    v.query = render_setting(m, xx) + " sufficient for " + render_setting(m, yy);
    v.detail = extra.empty() ? (std::string("sides disagree: ") + (lhs ? "1" : "0") + " vs " +
                                (rhs ? "1" : "0"))
                             : extra;
    v.recheck = RecheckKind::None;
    if (ctx) v.context = *ctx;
    v.cause = xx;
    r.violations.push_back(std::move(v));
  }
};

}  // namespace verify_detail

/// Re-verify the stored counterexample fixtures for the claimed
/// non-implications; appended to an implications report.
inline void confirm_stored_counterexamples(TheoremReport& report,
                                           const std::string& fixtures_dir) {
  namespace vd = verify_detail;
  if (fixtures_dir.empty()) {
    report.notes.push_back("stored counterexamples skipped: no fixtures directory given");
    return;
  }
  for (const auto& split : vd::stored_splits()) {
    ClaimStats& st = report.claim_stats(std::string("stored counterexample ") + split.file);
    std::string path = fixtures_dir + "/" + split.file;
    try {
      std::ifstream in(path);
      if (!in) throw ModelError(ErrorCode::BadQuery, "cannot open " + path);
      std::stringstream buf;
      buf << in.rdbuf();
      ModelDocument doc = parse_document_or_throw(buf.str());
      const NamedContext* nc = doc.find_context(split.context);
      if (!nc) throw ModelError(ErrorCode::BadQuery, "context missing in " + path);
      const CausalModel& m = doc.model;
      VarIndex cv = m.endo_index(split.cause_var);
      VarIndex ev = m.endo_index(split.effect_var);
      auto cval = m.range(cv).index_of(split.cause_label);
      auto eval = m.range(ev).index_of(split.effect_label);
      if (!cval || !eval) throw ModelError(ErrorCode::BadQuery, "bad label in " + path);
      PartialSetting cause = PartialSetting::single(cv, *cval);
      Effect eff = Effect::atom(ev, *eval);
      Session s(m);
      bool all_good = true;
      auto probe = [&](Definition d, bool want) {
        st.instances++;
        bool got = s.is_cause(nc->values, cause, eff, d).is_cause;
        if (got == want) return;
        all_good = false;
        st.violations++;
        report.violation_count++;
        Violation v;
        v.claim = st.claim;
        v.model = serialize_model(m);
        v.context_text = vd::render_context(m, nc->values);
        v.query =
            vd::render_setting(m, cause) + " causes " + vd::render_effect(m, ev, eff.accepted);
        v.detail = std::string(definition_name(d)) + ": expected " +
                   (want ? "cause" : "no cause") + ", got " + (got ? "cause" : "no cause");
        v.context = nc->values;
        v.cause = cause;
        v.effect_var = ev;
        v.effect_accepted = eff.accepted;
        v.defs = {d};
        if (static_cast<long long>(report.violations.size()) < 20)
          report.violations.push_back(std::move(v));
      };
      for (Definition d : split.yes) probe(d, true);
      for (Definition d : split.no) probe(d, false);
      if (all_good) st.witnesses++;
    } catch (const ModelError& e) {
      st.violations++;
      report.violation_count++;
      Violation v;
      v.claim = st.claim;
      v.detail = std::string("fixture failed to load: ") + e.what();
      if (static_cast<long long>(report.violations.size()) < 20)
        report.violations.push_back(std::move(v));
    }
  }
}

inline TheoremReport check_equivalences(const ModelFamily& family,
                                        const VerifyOptions& opts = {}) {
  verify_detail::Pass pass(verify_detail::kEquiv, opts, family);
  pass.run(family);
  return pass.take().equivalences;
}

inline TheoremReport check_implications(const ModelFamily& family,
                                        const std::string& fixtures_dir = "",
                                        const VerifyOptions& opts = {}) {
  verify_detail::Pass pass(verify_detail::kImpl, opts, family);
  pass.run(family);
  TheoremReport report = pass.take().implications;
  confirm_stored_counterexamples(report, fixtures_dir);
  return report;
}

inline TheoremReport check_structural_props(const ModelFamily& family,
                                            const VerifyOptions& opts = {}) {
  verify_detail::Pass pass(verify_detail::kStruct, opts, family);
  pass.run(family);
  return pass.take().structural;
}

/// All three reports from one shared sweep over the family.
struct VerifyRun {
  TheoremReport equivalences, implications, structural;
  double seconds = 0;
  bool ok() const { return equivalences.ok() && implications.ok() && structural.ok(); }
  long long audited() const {
    return equivalences.audited + implications.audited + structural.audited;
  }
  long long audit_failures() const {
    return equivalences.audit_failures + implications.audit_failures +
           structural.audit_failures;
  }
};

inline VerifyRun check_all(const ModelFamily& family, const std::string& fixtures_dir = "",
                           const VerifyOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  verify_detail::Pass pass(verify_detail::kEquiv | verify_detail::kImpl | verify_detail::kStruct,
                           opts, family);
  pass.run(family);
  auto reports = pass.take();
  VerifyRun run;
  run.equivalences = std::move(reports.equivalences);
  run.implications = std::move(reports.implications);
  run.structural = std::move(reports.structural);
  confirm_stored_counterexamples(run.implications, fixtures_dir);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

/// The families the acceptance checks sweep by default.
inline std::vector<ModelFamily> default_families() {
  return {ModelFamily::exhaustive(2, 3, 2), ModelFamily::sample(10000, 0)};
}

// ---- counterexample minimization ----------------------------------------

namespace verify_detail {

/// Does the recorded disagreement still hold on `m`? Only claims with a
/// machine recheck (recheck != None) are supported.
inline bool violation_persists(const Violation& v, const CausalModel& m) {
  if (v.recheck == RecheckKind::None) return false;
  Effect eff;
  if (v.effect_var >= 0) eff = Effect{v.effect_var, v.effect_accepted};
  Session s(m);
  auto cause_of = [&](Definition d) { return s.is_cause(v.context, v.cause, eff, d); };
  switch (v.recheck) {
    case RecheckKind::EquivPair:
      return cause_of(v.defs[0]).is_cause != cause_of(v.defs[1]).is_cause;
    case RecheckKind::Implication:
      return cause_of(v.defs[0]).is_cause && !cause_of(v.defs[1]).is_cause;
    case RecheckKind::PartOfImplication: {
      VarIndex x = v.cause.items().front().first;
      return s.is_part_of_cause(v.context, x, eff, v.defs[0]).is_cause &&
             !cause_of(v.defs[1]).is_cause;
    }
    case RecheckKind::NeverFires:
    case RecheckKind::RootEffect:
      return cause_of(v.defs[0]).is_cause;
    case RecheckKind::SingletonOnly:
      return v.cause.size() >= 2 && cause_of(v.defs[0]).is_cause;
    case RecheckKind::ParentEdge: {
      if (!cause_of(Definition::Def3).is_cause) return false;
      if (v.cause.size() != 1) return true;
      VarIndex x = v.cause.items().front().first;
      const auto& ps = m.parents(v.effect_var);
      return std::find(ps.begin(), ps.end(), x) == ps.end();
    }
    case RecheckKind::OnlyParentCollapse: {
      bool d2 = cause_of(Definition::Def2).is_cause;
      bool d3 = cause_of(Definition::Def3).is_cause;
      bool d8 = cause_of(Definition::Def8).is_cause;
      return d2 != d3 || d2 != d8;
    }
    case RecheckKind::Dependence: {
      VarIndex x = v.cause.items().front().first;
      return s.dependence_holds(v.context, x, eff) && !cause_of(v.defs[0]).is_cause;
    }
    case RecheckKind::ModSingleton:
      return cause_of(Definition::ModifiedHP).is_cause && !cause_of(v.defs[1]).is_cause;
    case RecheckKind::MinimalityTrivial: {
      Verdict verdict = cause_of(v.defs[0]);
      return verdict.ac1 && verdict.ac2 && !verdict.ac3;
    }
    case RecheckKind::RootRestriction: {
      QueryOptions off;
      off.restrict_network_to_nonroot = false;
      Session s2(m, off);
      return cause_of(v.defs[0]).is_cause !=
             s2.is_cause(v.context, v.cause, eff, v.defs[0]).is_cause;
    }
    case RecheckKind::EvidenceAudit: {
      Verdict verdict = cause_of(v.defs[0]);
      return verdict.is_cause && !audit_verdict(s.model(), v.context, verdict);
    }
    default:
      return false;
  }
}

/// Rewrite every equation without exogenous references as a dense table over
/// its semantic parents; root equations stay as they are.
inline CausalModel tabulated(const CausalModel& m) {
  CausalModel out;
  for (int u = 0; u < m.num_exogenous(); ++u)
    out.add_exogenous(m.exogenous(u).name, m.exo_range(u));
  for (int v = 0; v < m.num_endogenous(); ++v)
    out.add_endogenous(m.endogenous(v).name, m.range(v));
  WorldTable wt(m);
  std::vector<int> digits(m.num_endogenous(), 0);
  for (int v = 0; v < m.num_endogenous(); ++v) {
    if (!m.referenced_exogenous(v).empty()) {
      out.set_equation(m.endogenous(v).name, m.equation(v)->clone());
      continue;
    }
    const auto& ps = m.parents(v);
    std::vector<std::string> refs;
    std::vector<int> sizes;
    for (VarIndex p : ps) {
      refs.push_back(m.endogenous(p).name);
      sizes.push_back(m.range(p).size());
    }
    long long rows = 1;
    for (int sz : sizes) rows *= sz;
    std::vector<Value> values(rows, 0);
    for_each_assignment(sizes, [&](const std::vector<Value>& d) {
      std::fill(digits.begin(), digits.end(), 0);
      long long idx = 0;  // row-major, first ref most significant
      for (std::size_t i = 0; i < ps.size(); ++i) {
        digits[ps[i]] = d[i] + 1;
        idx = idx * sizes[i] + d[i];
      }
      values[idx] = wt.world(digits, 0)[v];
      return true;
    });
    out.set_equation(m.endogenous(v).name, Expr::table(std::move(refs), std::move(values)));
  }
  out.finalize();
  return out;
}

struct ShrunkModel {
  CausalModel model;
  std::vector<int> var_map;  // old endo index -> new, -1 dropped
  std::vector<int> exo_map;
};

/// Rebuild without one endogenous variable (and its now-unused exogenous
/// feeds). Requires that no other equation references it.
inline std::optional<ShrunkModel> drop_variable(const CausalModel& m, VarIndex dead) {
  for (int v = 0; v < m.num_endogenous(); ++v) {
    if (v == dead) continue;
    for (VarIndex ref : m.referenced_endogenous(v))
      if (ref == dead) return std::nullopt;
  }
  std::vector<char> exo_dead(m.num_exogenous(), 0);
  for (ExoIndex u : m.referenced_exogenous(dead)) {
    bool used_elsewhere = false;
    for (int v = 0; v < m.num_endogenous() && !used_elsewhere; ++v) {
      if (v == dead) continue;
      for (ExoIndex u2 : m.referenced_exogenous(v)) used_elsewhere |= u2 == u;
    }
    if (!used_elsewhere) exo_dead[u] = 1;
  }
  ShrunkModel out;
  out.var_map.assign(m.num_endogenous(), -1);
  out.exo_map.assign(m.num_exogenous(), -1);
  for (int u = 0; u < m.num_exogenous(); ++u) {
    if (exo_dead[u]) continue;
    out.exo_map[u] = out.model.add_exogenous(m.exogenous(u).name, m.exo_range(u));
  }
  for (int v = 0; v < m.num_endogenous(); ++v) {
    if (v == dead) continue;
    out.var_map[v] = out.model.add_endogenous(m.endogenous(v).name, m.range(v));
  }
  for (int v = 0; v < m.num_endogenous(); ++v) {
    if (v == dead) continue;
    out.model.set_equation(m.endogenous(v).name, m.equation(v)->clone());
  }
  out.model.finalize();
  return out;
}

/// Drop the top label of one variable's range when nothing can produce or
/// mention that value; referencing tables lose the matching rows.
inline std::optional<ShrunkModel> chop_top_label(const CausalModel& m, VarIndex var,
                                                 const Violation& v) {
  const int old_size = m.range(var).size();
  if (old_size <= 2) return std::nullopt;
  const Value top = old_size - 1;
  if (v.cause.get(var) == std::optional<Value>(top)) return std::nullopt;
  if (v.effect_var == var)
    for (Value a : v.effect_accepted)
      if (a == top) return std::nullopt;
  // the variable's own equation must never produce the chopped value
  const Expr& own = *m.equation(var);
  ExoIndex feed = -1;
  if (own.kind == ExprKind::Var && own.vref.kind == VarKind::Exogenous) {
    feed = own.vref.index;
    if (m.exo_range(feed).labels != m.range(var).labels) return std::nullopt;
    if (static_cast<std::size_t>(feed) < v.context.size() && v.context[feed] == top)
      return std::nullopt;
    for (int w = 0; w < m.num_endogenous(); ++w) {  // feed must be private to var
      if (w == var) continue;
      for (ExoIndex u : m.referenced_exogenous(w))
        if (u == feed) return std::nullopt;
    }
  } else if (own.kind == ExprKind::Table) {
    for (Value cell : own.table_values)
      if (cell == top) return std::nullopt;
  } else {
    return std::nullopt;  // only tabulated models are shrunk
  }
  Range new_range{std::vector<std::string>(m.range(var).labels.begin(),
                                           m.range(var).labels.end() - 1)};
  ShrunkModel out;
  out.var_map.resize(m.num_endogenous());
  out.exo_map.resize(m.num_exogenous());
  for (int u = 0; u < m.num_exogenous(); ++u) {
    out.exo_map[u] = u;
    out.model.add_exogenous(m.exogenous(u).name, u == feed ? new_range : m.exo_range(u));
  }
  for (int w = 0; w < m.num_endogenous(); ++w) {
    out.var_map[w] = w;
    out.model.add_endogenous(m.endogenous(w).name, w == var ? new_range : m.range(w));
  }
  const std::string& var_name = m.endogenous(var).name;
  for (int w = 0; w < m.num_endogenous(); ++w) {
    ExprPtr e = m.equation(w)->clone();
    if (e->kind == ExprKind::Table &&
        std::find(e->table_refs.begin(), e->table_refs.end(), var_name) !=
            e->table_refs.end()) {
      // rebuild the value list without the rows where `var` takes the top value
      const std::vector<int> sizes = e->table_sizes;
      std::vector<int> new_sizes = sizes;
      for (std::size_t i = 0; i < e->table_refs.size(); ++i)
        if (e->table_refs[i] == var_name) new_sizes[i] = old_size - 1;
      long long new_rows = 1;
      for (int sz : new_sizes) new_rows *= sz;
      std::vector<Value> ordered;
      ordered.reserve(new_rows);
      std::vector<Value> digit(sizes.size(), 0);
      for (long long rr = 0; rr < new_rows; ++rr) {
        long long rem = rr;
        for (std::size_t i = sizes.size(); i-- > 0;) {
          digit[i] = static_cast<Value>(rem % new_sizes[i]);
          rem /= new_sizes[i];
        }
        long long old_row = 0;
        for (std::size_t i = 0; i < sizes.size(); ++i) old_row = old_row * sizes[i] + digit[i];
        ordered.push_back(e->table_values[old_row]);
      }
      e = Expr::table(e->table_refs, std::move(ordered));
    }
    out.model.set_equation(m.endogenous(w).name, std::move(e));
  }
  out.model.finalize();
  return out;
}

inline Violation remap(const Violation& v, const ShrunkModel& shrunk) {
  Violation out = v;
  out.context.clear();
  for (std::size_t u = 0; u < v.context.size(); ++u)
    if (shrunk.exo_map[u] >= 0) {
      if (static_cast<int>(out.context.size()) <= shrunk.exo_map[u])
        out.context.resize(shrunk.exo_map[u] + 1);
      out.context[shrunk.exo_map[u]] = v.context[u];
    }
  PartialSetting cause;
  for (const auto& [var, val] : v.cause.items()) cause.set(shrunk.var_map[var], val);
  out.cause = std::move(cause);
  if (v.effect_var >= 0) out.effect_var = shrunk.var_map[v.effect_var];
  return out;
}

}  // namespace verify_detail

/// Greedily shrink the violating model (drop unreferenced variables, chop
/// unused range values) while the recorded disagreement keeps re-verifying.
/// Claims without a machine recheck are returned unchanged.
inline Violation minimize_counterexample(const Violation& violation) {
  namespace vd = verify_detail;
  if (violation.recheck == RecheckKind::None) return violation;
  ParseResult pr = parse_document(violation.model);
  if (!pr.ok()) return violation;
  CausalModel model = vd::tabulated(pr.document->model);
  Violation best = violation;
  if (!vd::violation_persists(best, model)) return violation;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = model.num_endogenous() - 1; v >= 0; --v) {
      if (best.cause.contains(v) || v == best.effect_var) continue;
      auto shrunk = vd::drop_variable(model, v);
      if (!shrunk) continue;
      Violation candidate = vd::remap(best, *shrunk);
      if (vd::violation_persists(candidate, shrunk->model)) {
        model = std::move(shrunk->model);
        best = std::move(candidate);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (int v = 0; v < model.num_endogenous(); ++v) {
      auto shrunk = vd::chop_top_label(model, v, best);
      if (!shrunk) continue;
      Violation candidate = vd::remap(best, *shrunk);
      if (vd::violation_persists(candidate, shrunk->model)) {
        model = std::move(shrunk->model);
        best = std::move(candidate);
        changed = true;
        break;
      }
    }
  }
  best.model = serialize_model(model);
  best.context_text = vd::render_context(model, best.context);
  best.query = vd::render_setting(model, best.cause) +
               (best.effect_var >= 0
                    ? " causes " + vd::render_effect(model, best.effect_var, best.effect_accepted)
                    : "");
  return best;
}

}  // namespace causal
