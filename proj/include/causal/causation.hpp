#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal/engine.hpp"
#include "causal/model.hpp"
#include "causal/sufficiency.hpp"

namespace causal {

/// The twelve sufficiency-based definitions plus the three classic
/// counterfactual definitions and the strengthened variant with the
/// all-witness-settings clause.
enum class Definition {
  Def1, Def2, Def3, Def4, Def5, Def6, Def7, Def8, Def9, Def10, Def11, Def12,
  OriginalHP, UpdatedHP, ModifiedHP, StrongHP,
};

inline constexpr Definition kAllDefinitions[] = {
    Definition::Def1, Definition::Def2, Definition::Def3, Definition::Def4,
    Definition::Def5, Definition::Def6, Definition::Def7, Definition::Def8,
    Definition::Def9, Definition::Def10, Definition::Def11, Definition::Def12,
    Definition::OriginalHP, Definition::UpdatedHP, Definition::ModifiedHP, Definition::StrongHP,
};

enum class Necessity { Contrastive, Minimal };

inline bool is_hp(Definition d) {
  return d == Definition::OriginalHP || d == Definition::UpdatedHP ||
         d == Definition::ModifiedHP || d == Definition::StrongHP;
}

/// (sufficiency kind, necessity) for the twelve numbered definitions.
struct DefinitionTraits {
  SufficiencyKind kind;
  Necessity necessity;
};

inline DefinitionTraits definition_traits(Definition d) {
  using K = SufficiencyKind;
  switch (d) {
    case Definition::Def1: return {K::ActualWeak, Necessity::Contrastive};
    case Definition::Def2: return {K::ActualStrong, Necessity::Contrastive};
    case Definition::Def3: return {K::ActualDirect, Necessity::Contrastive};
    case Definition::Def4: return {K::Weak, Necessity::Contrastive};
    case Definition::Def5: return {K::Strong, Necessity::Contrastive};
    case Definition::Def6: return {K::Direct, Necessity::Contrastive};
    case Definition::Def7: return {K::ActualWeak, Necessity::Minimal};
    case Definition::Def8: return {K::ActualStrong, Necessity::Minimal};
    case Definition::Def9: return {K::ActualDirect, Necessity::Minimal};
    case Definition::Def10: return {K::Weak, Necessity::Minimal};
    case Definition::Def11: return {K::Strong, Necessity::Minimal};
    case Definition::Def12: return {K::Direct, Necessity::Minimal};
    default: throw ModelError(ErrorCode::BadQuery, "no sufficiency traits for this definition");
  }
}

inline const char* definition_name(Definition d) {
  switch (d) {
    case Definition::Def1: return "Def1";
    case Definition::Def2: return "Def2";
    case Definition::Def3: return "Def3";
    case Definition::Def4: return "Def4";
    case Definition::Def5: return "Def5";
    case Definition::Def6: return "Def6";
    case Definition::Def7: return "Def7";
    case Definition::Def8: return "Def8";
    case Definition::Def9: return "Def9";
    case Definition::Def10: return "Def10";
    case Definition::Def11: return "Def11";
    case Definition::Def12: return "Def12";
    case Definition::OriginalHP: return "OriginalHP";
    case Definition::UpdatedHP: return "UpdatedHP";
    case Definition::ModifiedHP: return "ModifiedHP";
    case Definition::StrongHP: return "StrongHP";
  }
  return "?";
}

inline std::optional<Definition> parse_definition(const std::string& s) {
  for (Definition d : kAllDefinitions)
    if (s == definition_name(d)) return d;
  return std::nullopt;
}

/// Effect: one endogenous variable with a nonempty set of accepted values.
/// A singleton set is the atomic effect Y=y; more values form a same-variable
/// disjunction.
struct Effect {
  VarIndex variable = -1;
  std::vector<Value> accepted;

  static Effect atom(VarIndex v, Value val) { return {v, {val}}; }
};

/// How the necessity side sweeps candidate network settings. ForcedAnywhere
/// follows the literal text (any setting of the subnetwork whose effect
/// component is accepted); ActualValuesOnly only requires breaking the actual
/// restriction.
enum class NecessityScope { ForcedAnywhere, ActualValuesOnly };

struct QueryOptions {
  bool auto_normalize = true;       // rewrite stray exogenous uses into root form
  bool strict_normalized = false;   // reject non-normalized input instead
  bool restrict_network_to_nonroot = true;  // sound search-space restriction
  NecessityScope scope = NecessityScope::ForcedAnywhere;
  bool minimal_s_requires_y = true;  // minimal necessity sweeps only subnetworks containing Y
  bool compute_alternates = false;   // also evaluate the alternate readings, report in the note
  int max_witness = -1;              // cap |W|, -1 = none
  int max_network = -1;              // cap |N|, -1 = none
};

struct CauseQuery {
  const CausalModel* model = nullptr;
  Context context;
  PartialSetting cause;
  Effect effect;
  Definition definition = Definition::Def2;
  QueryOptions options;
};

struct Verdict {
  Definition definition = Definition::Def2;
  bool is_cause = false;
  bool ac1 = false, ac2 = false, ac3 = false;
  PartialSetting cause;
  Effect effect;
  // AC2 evidence (meaningful when ac2 holds)
  std::vector<VarIndex> witness;   // W
  PartialSetting witness_values;   // w* for the twelve defs and Modified; free w otherwise
  std::vector<VarIndex> network;   // N for the twelve defs ({Y} for weak/direct kinds)
  PartialSetting network_values;   // forced values along N
  PartialSetting contrast;         // x' (empty for minimal necessity)
  std::vector<VarIndex> partition_z;  // classic definitions: Z = V minus W
  std::optional<PartialSetting> minimality_counterexample;  // strict subset satisfying AC2
  std::string note;
};

/// Evidence from the classic AC2 checks.
struct HpEvidence {
  std::vector<VarIndex> witness;
  PartialSetting witness_values;
  std::vector<VarIndex> partition_z;
  PartialSetting contrast;
};

/// Evidence from the general (twelve-definition) AC2 check.
struct GeneralEvidence {
  std::vector<VarIndex> witness;
  PartialSetting witness_values;
  std::vector<VarIndex> network;
  PartialSetting network_values;
  PartialSetting contrast;  // empty for minimal necessity
};

/// One causation-query session: owns the (normalized) working model and the
/// world table shared by every query against it.
class Session {
 public:
  explicit Session(const CausalModel& m, QueryOptions opts = {}) : opts_(opts) {
    if (!m.finalized()) throw ModelError(ErrorCode::BadQuery, "model not finalized");
    if (!m.check_recursive().ok)
      throw ModelError(ErrorCode::CyclicModel, "causation queries need an acyclic model");
    if (m.is_normalized()) {
      model_ = m;
    } else if (opts_.strict_normalized) {
      throw ModelError(ErrorCode::NotNormalized, "model has non-root exogenous uses");
    } else if (opts_.auto_normalize) {
      model_ = m.normalize_exogenous();
    } else {
      throw ModelError(ErrorCode::NotNormalized, "model has non-root exogenous uses");
    }
    n_ = model_.num_endogenous();
    if (n_ > 30) throw ModelError(ErrorCode::ModelTooLarge, "too many variables for causation");
    table_.emplace(model_);
    digits_.assign(n_, 0);
    held_.assign(n_, 0);
    is_root_.assign(n_, 0);
    for (VarIndex r : model_.root_variables()) is_root_[r] = 1;
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// The working model; original variables keep their indices, normalization
  /// may append fresh root variables.
  const CausalModel& model() const { return model_; }
  const QueryOptions& options() const { return opts_; }

  bool ac1(const Context& ctx, const PartialSetting& cause, const Effect& eff) {
    begin(ctx, eff);
    for (const auto& [v, val] : cause.items())
      if (actual_[v] != val) return false;
    return in_accepted(actual_[eff.variable]);
  }

  Verdict is_cause(const Context& ctx, const PartialSetting& cause, const Effect& eff,
                   Definition def) {
    validate_cause(cause, eff);
    Verdict out;
    out.definition = def;
    out.cause = cause;
    out.effect = eff;
    out.ac1 = ac1(ctx, cause, eff);
    if (!out.ac1) {
      out.note = "AC1 fails";
      return out;
    }
    out.ac2 = eval_ac2(cause, def, &out);
    if (opts_.compute_alternates && !is_hp(def)) append_alternate_notes(cause, def, out);
    if (!out.ac2) {
      if (out.note.empty()) out.note = "AC2 fails";
      return out;
    }
    out.ac3 = true;
    if (cause.size() > 1) {
      auto sub = first_ac2_subset(cause, def);
      if (sub) {
        out.ac3 = false;
        out.minimality_counterexample = *sub;
        out.note = "AC3 fails: strict subset satisfies AC2";
      }
    }
    out.is_cause = out.ac1 && out.ac2 && out.ac3;
    return out;
  }

  Verdict is_cause(const CauseQuery& q) {
    return is_cause(q.context, q.cause, q.effect, q.definition);
  }

  /// Is the single conjunct contained in some cause (candidates carry actual
  /// values, searched by increasing size then lexicographically)?
  Verdict is_part_of_cause(const Context& ctx, VarIndex x, const Effect& eff, Definition def) {
    if (x < 0 || x >= n_ || x == eff.variable)
      throw ModelError(ErrorCode::BadQuery, "bad part-of-cause candidate");
    begin(ctx, eff);
    std::vector<VarIndex> pool;
    for (int v = 0; v < n_; ++v)
      if (v != eff.variable && v != x) pool.push_back(v);
    Verdict found;
    bool done = !detail::for_each_subset_by_size(pool, -1, [&](const std::vector<VarIndex>& rest) {
      PartialSetting cand = PartialSetting::single(x, actual_[x]);
      for (VarIndex v : rest) cand.set(v, actual_[v]);
      Verdict v = is_cause(ctx, cand, eff, def);
      if (v.is_cause) {
        found = std::move(v);
        return false;
      }
      return true;
    });
    if (done) return found;
    Verdict miss;
    miss.definition = def;
    miss.cause = PartialSetting::single(x, actual_[x]);
    miss.effect = eff;
    miss.ac1 = ac1(ctx, miss.cause, eff);
    miss.note = "no containing cause";
    return miss;
  }

  std::vector<Verdict> find_all_causes(const Context& ctx, const Effect& eff, Definition def,
                                       int max_size) {
    if (max_size < 1) throw ModelError(ErrorCode::BadQuery, "max cause size must be >= 1");
    begin(ctx, eff);
    std::vector<VarIndex> pool;
    for (int v = 0; v < n_; ++v)
      if (v != eff.variable) pool.push_back(v);
    std::vector<Verdict> out;
    detail::for_each_subset_by_size(pool, max_size, [&](const std::vector<VarIndex>& vars) {
      if (vars.empty()) return true;
      PartialSetting cand;
      for (VarIndex v : vars) cand.set(v, actual_[v]);
      Verdict v = is_cause(ctx, cand, eff, def);
      if (v.is_cause) out.push_back(std::move(v));
      return true;
    });
    return out;
  }

  /// Plain counterfactual dependence: some alternative value of X flips the
  /// effect out of its accepted set.
  bool dependence_holds(const Context& ctx, VarIndex x, const Effect& eff) {
    if (x < 0 || x >= n_ || x == eff.variable)
      throw ModelError(ErrorCode::BadQuery, "bad dependence candidate");
    begin(ctx, eff);
    if (!in_accepted(actual_[eff.variable])) return false;
    for (Value v = 0; v < model_.range(x).size(); ++v) {
      if (v == actual_[x]) continue;
      hold(x, v);
      const Value* w = table_->world(digits_, ctx_code_);
      bool flips = !in_accepted(w[eff.variable]);
      release(x);
      if (flips) return true;
    }
    return false;
  }

  /// AC2 of the general definition for a given kind/necessity pair.
  std::optional<GeneralEvidence> ac2_general(const Context& ctx, const PartialSetting& cause,
                                             const Effect& eff, SufficiencyKind kind,
                                             Necessity nec) {
    validate_cause(cause, eff);
    begin(ctx, eff);
    GeneralEvidence ev;
    if (ac2_12(cause, base_kind(kind), is_actual(kind), nec, opts_.scope,
               opts_.minimal_s_requires_y, &ev))
      return ev;
    return std::nullopt;
  }

  std::optional<HpEvidence> ac2_original_hp(const Context& ctx, const PartialSetting& cause,
                                            const Effect& eff) {
    validate_cause(cause, eff);
    begin(ctx, eff);
    HpEvidence ev;
    if (ac2_hp(cause, Definition::OriginalHP, &ev)) return ev;
    return std::nullopt;
  }
  std::optional<HpEvidence> ac2_updated_hp(const Context& ctx, const PartialSetting& cause,
                                           const Effect& eff) {
    validate_cause(cause, eff);
    begin(ctx, eff);
    HpEvidence ev;
    if (ac2_hp(cause, Definition::UpdatedHP, &ev)) return ev;
    return std::nullopt;
  }
  std::optional<HpEvidence> ac2_modified_hp(const Context& ctx, const PartialSetting& cause,
                                            const Effect& eff) {
    validate_cause(cause, eff);
    begin(ctx, eff);
    HpEvidence ev;
    if (ac2_hp(cause, Definition::ModifiedHP, &ev)) return ev;
    return std::nullopt;
  }
  std::optional<HpEvidence> ac2c_strong(const Context& ctx, const PartialSetting& cause,
                                        const Effect& eff) {
    validate_cause(cause, eff);
    begin(ctx, eff);
    HpEvidence ev;
    if (ac2_hp(cause, Definition::StrongHP, &ev)) return ev;
    return std::nullopt;
  }

  /// Raw AC2 evaluation (no AC1/AC3), also defined for the empty candidate.
  /// Used by the verification sweeps.
  bool ac2_satisfied(const Context& ctx, const PartialSetting& cause, const Effect& eff,
                     Definition def) {
    begin(ctx, eff);
    return eval_ac2(cause, def, nullptr);
  }

 private:
  QueryOptions opts_;
  CausalModel model_;
  std::optional<WorldTable> table_;
  int n_ = 0;
  std::vector<int> digits_;
  std::vector<char> held_, is_root_;
  // per-query state
  long long ctx_code_ = -1;
  std::vector<Value> actual_;
  std::vector<Value> accepted_;
  VarIndex y_ = -1;

  void validate_cause(const PartialSetting& cause, const Effect& eff) {
    if (cause.empty()) throw ModelError(ErrorCode::BadQuery, "empty candidate cause");
    if (cause.contains(eff.variable))
      throw ModelError(ErrorCode::BadQuery, "candidate cause contains the effect variable");
    detail::validate_setting(model_, cause, "cause");
  }

  void begin(const Context& ctx, const Effect& eff) {
    if (static_cast<int>(ctx.size()) != model_.num_exogenous())
      throw ModelError(ErrorCode::BadQuery, "context size mismatch");
    for (int i = 0; i < model_.num_exogenous(); ++i)
      if (ctx[i] >= model_.exo_range(i).size())
        throw ModelError(ErrorCode::ValueOutOfRange, "context value out of range");
    if (eff.variable < 0 || eff.variable >= n_)
      throw ModelError(ErrorCode::UnknownVariable, "effect: unknown variable");
    if (eff.accepted.empty()) throw ModelError(ErrorCode::EmptyDisjunction, "empty effect");
    for (Value v : eff.accepted)
      if (v >= model_.range(eff.variable).size())
        throw ModelError(ErrorCode::ValueOutOfRange, "effect value out of range");
    ctx_code_ = table_->context_code(ctx);
    y_ = eff.variable;
    accepted_ = eff.accepted;
    std::sort(accepted_.begin(), accepted_.end());
    accepted_.erase(std::unique(accepted_.begin(), accepted_.end()), accepted_.end());
    std::fill(digits_.begin(), digits_.end(), 0);
    std::fill(held_.begin(), held_.end(), 0);
    const Value* w = table_->world(digits_, ctx_code_);
    actual_.assign(w, w + n_);
  }

  bool in_accepted(Value v) const {
    return std::binary_search(accepted_.begin(), accepted_.end(), v);
  }

  void hold(VarIndex v, Value val) {
    digits_[v] = val + 1;
    held_[v] = 1;
  }
  void hold(const PartialSetting& s) {
    for (const auto& [v, val] : s.items()) hold(v, val);
  }
  void release(VarIndex v) {
    digits_[v] = 0;
    held_[v] = 0;
  }
  void release(const PartialSetting& s) {
    for (const auto& [v, val] : s.items()) release(v);
  }

  /// Sweep every assignment of `cvars` (as interventions) against the fixed or
  /// all contexts; f gets each world, returns false to stop.
  template <typename F>
  bool sweep(const std::vector<VarIndex>& cvars, bool actual, F&& f) {
    for (VarIndex v : cvars) digits_[v] = 1;
    bool go = true;
    while (go) {
      if (actual) {
        go = f(table_->world(digits_, ctx_code_));
      } else {
        for (long long c = 0; go && c < table_->num_contexts(); ++c)
          go = f(table_->world(digits_, c));
      }
      if (!go) break;
      int i = static_cast<int>(cvars.size()) - 1;
      while (i >= 0) {
        VarIndex v = cvars[i];
        if (digits_[v] < model_.range(v).size()) {
          ++digits_[v];
          break;
        }
        digits_[v] = 1;
        --i;
      }
      if (i < 0) break;
    }
    for (VarIndex v : cvars) digits_[v] = 0;
    return go;
  }

  /// Forced values along `svars` under the currently-held interventions, with
  /// the untouched remainder either swept (direct/strong) or left free (weak).
  std::optional<std::vector<Value>> forced_values(const std::vector<VarIndex>& svars,
                                                  bool sweep_complement, bool actual) {
    std::vector<VarIndex> cvars;
    if (sweep_complement)
      for (int v = 0; v < n_; ++v)
        if (!held_[v] && std::find(svars.begin(), svars.end(), v) == svars.end())
          cvars.push_back(v);
    std::vector<Value> probe;
    bool constant = sweep(cvars, actual, [&](const Value* w) {
      if (probe.empty()) {
        probe.reserve(svars.size());
        for (VarIndex v : svars) probe.push_back(w[v]);
        return true;
      }
      for (std::size_t i = 0; i < svars.size(); ++i)
        if (w[svars[i]] != probe[i]) return false;
      return true;
    });
    if (!constant) return std::nullopt;
    return probe;
  }

  /// All componentwise non-actual settings of the cause variables, in
  /// lexicographic order (empty cause yields the single empty setting).
  std::vector<PartialSetting> enumerate_contrasts(const PartialSetting& cause) const {
    std::vector<VarIndex> vars;
    std::vector<std::vector<Value>> alts;
    std::vector<int> sizes;
    for (const auto& [v, val] : cause.items()) {
      vars.push_back(v);
      std::vector<Value> a;
      for (Value x = 0; x < model_.range(v).size(); ++x)
        if (x != val) a.push_back(x);
      sizes.push_back(static_cast<int>(a.size()));
      alts.push_back(std::move(a));
    }
    std::vector<PartialSetting> out;
    for_each_assignment(sizes, [&](const std::vector<Value>& d) {
      PartialSetting s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.set(vars[i], alts[i][d[i]]);
      out.push_back(std::move(s));
      return true;
    });
    return out;
  }

  bool eval_ac2(const PartialSetting& cause, Definition def, Verdict* out) {
    if (is_hp(def)) {
      HpEvidence ev;
      if (!ac2_hp(cause, def, &ev)) return false;
      if (out) {
        out->witness = std::move(ev.witness);
        out->witness_values = std::move(ev.witness_values);
        out->partition_z = std::move(ev.partition_z);
        out->contrast = std::move(ev.contrast);
      }
      return true;
    }
    auto t = definition_traits(def);
    GeneralEvidence ev;
    if (!ac2_12(cause, base_kind(t.kind), is_actual(t.kind), t.necessity, opts_.scope,
                opts_.minimal_s_requires_y, &ev))
      return false;
    if (out) {
      out->witness = std::move(ev.witness);
      out->witness_values = std::move(ev.witness_values);
      out->network = std::move(ev.network);
      out->network_values = std::move(ev.network_values);
      out->contrast = std::move(ev.contrast);
    }
    return true;
  }

  /// AC2 of the general definition. Sufficiency along a subnetwork is decided
  /// by probing the unique forced candidate: the setting is sufficient for the
  /// effect along S iff the S-values are constant across the sweep and the
  /// probe's effect component is accepted (ForcedAnywhere), or iff they are
  /// constant and equal the actual restriction (ActualValuesOnly).
  bool ac2_12(const PartialSetting& cause, SufficiencyKind base, bool actual, Necessity nec,
              NecessityScope scope, bool s_requires_y, GeneralEvidence* ev) {
    bool strong = base == SufficiencyKind::Strong;
    bool sweep_comp = base != SufficiencyKind::Weak;
    std::vector<VarIndex> wpool;
    for (int v = 0; v < n_; ++v)
      if (v != y_ && !cause.contains(v)) wpool.push_back(v);
    std::vector<PartialSetting> contrasts;
    if (nec == Necessity::Contrastive) contrasts = enumerate_contrasts(cause);

    bool found = !detail::for_each_subset_by_size(
        wpool, opts_.max_witness, [&](const std::vector<VarIndex>& wvars) {
          PartialSetting wset;
          for (VarIndex v : wvars) wset.set(v, actual_[v]);
          hold(wset);

          // sufficiency of (x-variant, w*) for the effect along S; memoized per
          // (contrast index, S) since it does not depend on the network choice
          std::map<std::pair<int, unsigned>, char> memo;
          auto suff_along = [&](int xidx, const std::vector<VarIndex>& svars,
                                unsigned smask) -> bool {
            auto key = std::make_pair(xidx, smask);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            const PartialSetting* xset = nullptr;
            if (xidx >= 0) xset = &contrasts[xidx];
            if (xset) hold(*xset);
            auto f = forced_values(svars, sweep_comp, actual);
            if (xset) release(*xset);
            bool suff = false;
            if (f) {
              if (scope == NecessityScope::ForcedAnywhere) {
                bool y_in = true;
                for (std::size_t i = 0; i < svars.size(); ++i)
                  if (svars[i] == y_) y_in = in_accepted((*f)[i]);
                suff = y_in;
              } else {
                suff = true;
                for (std::size_t i = 0; i < svars.size(); ++i)
                  if ((*f)[i] != actual_[svars[i]]) suff = false;
              }
            }
            memo[key] = suff ? 1 : 0;
            return suff;
          };

          // necessity over every subnetwork of the network mask
          auto necessity_ok = [&](int xidx, unsigned nmask_extras) -> bool {
            // subsets of the network's non-effect part; each S = subset + Y
            unsigned sub = nmask_extras;
            while (true) {
              std::vector<VarIndex> svars;
              for (int v = 0; v < n_; ++v)
                if (sub & (1u << v)) svars.push_back(v);
              {
                std::vector<VarIndex> with_y = svars;
                with_y.insert(std::lower_bound(with_y.begin(), with_y.end(), y_), y_);
                if (suff_along(xidx, with_y, sub | (1u << y_))) return false;
              }
              if (!s_requires_y && !svars.empty()) {
                // alternate reading: subnetworks without the effect variable
                if (suff_along(xidx, svars, sub)) return false;
              }
              if (sub == 0) break;
              sub = (sub - 1) & nmask_extras;
            }
            return true;
          };

          auto try_network = [&](const std::vector<VarIndex>& extras, unsigned emask) -> bool {
            std::vector<VarIndex> nvars = extras;
            nvars.insert(std::lower_bound(nvars.begin(), nvars.end(), y_), y_);
            // AC2(b): (x, w*) sufficient along N; the candidate values are the
            // actual ones because the sweep includes the undisturbed world.
            hold(cause);
            auto f = forced_values(nvars, sweep_comp, actual);
            release(cause);
            bool b_ok = f.has_value();
            if (b_ok)
              for (std::size_t i = 0; i < nvars.size(); ++i) {
                if ((*f)[i] != actual_[nvars[i]]) b_ok = false;
                if (nvars[i] == y_ && !in_accepted((*f)[i])) b_ok = false;
              }
            if (!b_ok) return true;  // keep searching
            if (nec == Necessity::Contrastive) {
              for (int xi = 0; xi < static_cast<int>(contrasts.size()); ++xi) {
                if (necessity_ok(xi, emask)) {
                  if (ev) {
                    ev->witness = std::vector<VarIndex>(wset.vars());
                    ev->witness_values = wset;
                    ev->network = nvars;
                    ev->network_values = PartialSetting();
                    for (std::size_t i = 0; i < nvars.size(); ++i)
                      ev->network_values.set(nvars[i], (*f)[i]);
                    ev->contrast = contrasts[xi];
                  }
                  return false;  // success
                }
              }
              return true;
            }
            if (necessity_ok(-1, emask)) {
              if (ev) {
                ev->witness = std::vector<VarIndex>(wset.vars());
                ev->witness_values = wset;
                ev->network = nvars;
                ev->network_values = PartialSetting();
                for (std::size_t i = 0; i < nvars.size(); ++i)
                  ev->network_values.set(nvars[i], (*f)[i]);
                ev->contrast = PartialSetting();
              }
              return false;
            }
            return true;
          };

          bool keep = true;
          if (!strong) {
            keep = try_network({}, 0);
          } else {
            std::vector<VarIndex> npool;
            for (VarIndex v : wpool)
              if (!wset.contains(v) && !(opts_.restrict_network_to_nonroot && is_root_[v]))
                npool.push_back(v);
            int extra_cap = opts_.max_network < 0 ? -1 : std::max(0, opts_.max_network - 1);
            keep = detail::for_each_subset_by_size(
                npool, extra_cap, [&](const std::vector<VarIndex>& extras) {
                  unsigned emask = 0;
                  for (VarIndex v : extras) emask |= 1u << v;
                  return try_network(extras, emask);
                });
          }
          release(wset);
          return keep;
        });
    return found;
  }

  /// AC2 of the four classic definitions.
  bool ac2_hp(const PartialSetting& cause, Definition def, HpEvidence* ev) {
    std::vector<VarIndex> wpool;
    for (int v = 0; v < n_; ++v)
      if (v != y_ && !cause.contains(v)) wpool.push_back(v);
    std::vector<PartialSetting> contrasts = enumerate_contrasts(cause);
    bool modified = def == Definition::ModifiedHP;

    bool found = !detail::for_each_subset_by_size(
        wpool, opts_.max_witness, [&](const std::vector<VarIndex>& wvars) {
          // w-settings: the actual one for Modified, all settings otherwise
          std::vector<int> wsizes;
          for (VarIndex v : wvars) wsizes.push_back(modified ? 1 : model_.range(v).size());
          bool keep = for_each_assignment(wsizes, [&](const std::vector<Value>& wd) {
            PartialSetting wset;
            for (std::size_t i = 0; i < wvars.size(); ++i)
              wset.set(wvars[i], modified ? actual_[wvars[i]] : wd[i]);
            hold(wset);
            bool ok = false;
            PartialSetting good_contrast;
            for (const PartialSetting& xp : contrasts) {
              hold(xp);
              bool a_ok = !in_accepted(table_->world(digits_, ctx_code_)[y_]);
              release(xp);
              if (!a_ok) continue;
              if (hp_b_holds(cause, wvars, wset, def)) {
                ok = true;
                good_contrast = xp;
                break;
              }
            }
            release(wset);
            if (ok && ev) {
              ev->witness = wvars;
              ev->witness_values = wset;
              ev->contrast = good_contrast;
              ev->partition_z.clear();
              for (int v = 0; v < n_; ++v)
                if (!wset.contains(v)) ev->partition_z.push_back(v);
            }
            return !ok;
          });
          return keep;
        });
    return found;
  }

  /// The positive side of the classic AC2 for a chosen (W, w).
  bool hp_b_holds(const PartialSetting& cause, const std::vector<VarIndex>& wvars,
                  const PartialSetting& wset, Definition def) {
    // Z minus (X u {Y}): candidates for pinning at actual values
    std::vector<VarIndex> zpool;
    for (int v = 0; v < n_; ++v)
      if (v != y_ && !cause.contains(v) && !wset.contains(v)) zpool.push_back(v);
    hold(cause);
    bool ok = true;
    if (def == Definition::ModifiedHP) {
      // [X<-x, W<-w*] is the actual world by composition; evaluate it anyway
      ok = in_accepted(table_->world(digits_, ctx_code_)[y_]);
    } else if (def == Definition::OriginalHP) {
      ok = detail::for_each_subset_by_size(zpool, -1, [&](const std::vector<VarIndex>& yvars) {
        for (VarIndex v : yvars) hold(v, actual_[v]);
        bool fine = in_accepted(table_->world(digits_, ctx_code_)[y_]);
        for (VarIndex v : yvars) release(v);
        return fine;
      });
    } else {
      // Updated and Strong: every subset of W pinned at its chosen values,
      // with the rest of W released
      release(wset);
      ok = detail::for_each_subset_by_size(wvars, -1, [&](const std::vector<VarIndex>& vs) {
        for (VarIndex v : vs) hold(v, *wset.get(v));
        bool fine =
            detail::for_each_subset_by_size(zpool, -1, [&](const std::vector<VarIndex>& yvars) {
              for (VarIndex v : yvars) hold(v, actual_[v]);
              bool good = in_accepted(table_->world(digits_, ctx_code_)[y_]);
              for (VarIndex v : yvars) release(v);
              return good;
            });
        for (VarIndex v : vs) release(v);
        return fine;
      });
      hold(wset);
      if (ok && def == Definition::StrongHP) {
        release(wset);
        std::vector<int> sizes;
        for (VarIndex v : wvars) sizes.push_back(model_.range(v).size());
        ok = for_each_assignment(sizes, [&](const std::vector<Value>& wd) {
          for (std::size_t i = 0; i < wvars.size(); ++i) hold(wvars[i], wd[i]);
          bool good = in_accepted(table_->world(digits_, ctx_code_)[y_]);
          for (VarIndex v : wvars) release(v);
          return good;
        });
        hold(wset);
      }
    }
    release(cause);
    return ok;
  }

  std::optional<PartialSetting> first_ac2_subset(const PartialSetting& cause, Definition def) {
    std::vector<VarIndex> vars(cause.vars());
    std::optional<PartialSetting> hit;
    detail::for_each_subset_by_size(
        vars, static_cast<int>(vars.size()) - 1, [&](const std::vector<VarIndex>& sub) {
          if (sub.empty()) return true;
          PartialSetting s;
          for (VarIndex v : sub) s.set(v, *cause.get(v));
          if (eval_ac2(s, def, nullptr)) {
            hit = std::move(s);
            return false;
          }
          return true;
        });
    return hit;
  }

  void append_alternate_notes(const PartialSetting& cause, Definition def, Verdict& out) {
    auto t = definition_traits(def);
    NecessityScope other = opts_.scope == NecessityScope::ForcedAnywhere
                               ? NecessityScope::ActualValuesOnly
                               : NecessityScope::ForcedAnywhere;
    bool alt = ac2_12(cause, base_kind(t.kind), is_actual(t.kind), t.necessity, other,
                      opts_.minimal_s_requires_y, nullptr);
    std::string note = std::string("alternate scope ") +
                       (other == NecessityScope::ActualValuesOnly ? "actual-values-only"
                                                                  : "forced-anywhere") +
                       ": AC2 " + (alt ? "holds" : "fails");
    if (t.necessity == Necessity::Minimal && opts_.minimal_s_requires_y) {
      bool lit = ac2_12(cause, base_kind(t.kind), is_actual(t.kind), t.necessity, opts_.scope,
                        false, nullptr);
      note += "; literal minimal subnetwork sweep (allowing Y-free subnetworks): AC2 ";
      note += lit ? "holds" : "fails";
    }
    out.note = out.note.empty() ? note : out.note + "; " + note;
  }
};

inline Verdict is_cause(const CauseQuery& q) {
  Session s(*q.model, q.options);
  return s.is_cause(q.context, q.cause, q.effect, q.definition);
}

inline bool ac1(const CausalModel& m, const Context& ctx, const PartialSetting& cause,
                const Effect& eff) {
  Session s(m);
  return s.ac1(ctx, cause, eff);
}

inline std::optional<GeneralEvidence> ac2_general(const CausalModel& m, const Context& ctx,
                                                  const PartialSetting& cause, const Effect& eff,
                                                  SufficiencyKind kind, Necessity nec,
                                                  const QueryOptions& opts = {}) {
  Session s(m, opts);
  return s.ac2_general(ctx, cause, eff, kind, nec);
}

inline Verdict is_part_of_cause(const CausalModel& m, const Context& ctx, VarIndex x,
                                const Effect& eff, Definition def, const QueryOptions& opts = {}) {
  Session s(m, opts);
  return s.is_part_of_cause(ctx, x, eff, def);
}

inline std::vector<Verdict> find_all_causes(const CausalModel& m, const Context& ctx,
                                            const Effect& eff, Definition def, int max_size,
                                            const QueryOptions& opts = {}) {
  Session s(m, opts);
  return s.find_all_causes(ctx, eff, def, max_size);
}

inline bool dependence_holds(const CausalModel& m, const Context& ctx, VarIndex x,
                             const Effect& eff, const QueryOptions& opts = {}) {
  Session s(m, opts);
  return s.dependence_holds(ctx, x, eff);
}

/// Re-verify a positive verdict's AC2 evidence through the sufficiency module
/// (independent solve-based path, no world table). `m` must be the session's
/// working model and `ctx` the query context.
inline bool audit_verdict(const CausalModel& m, const Context& ctx, const Verdict& v) {
  if (!v.is_cause) return true;
  const VarIndex y = v.effect.variable;
  std::vector<Value> accepted = v.effect.accepted;
  std::sort(accepted.begin(), accepted.end());
  auto in_a = [&](Value x) { return std::binary_search(accepted.begin(), accepted.end(), x); };
  World actual = m.solve(ctx);
  for (const auto& [var, val] : v.cause.items())
    if (actual[var] != val) return false;
  if (!in_a(actual[y])) return false;

  auto merged = [](const PartialSetting& a, const PartialSetting& b) { return a.merged(b); };

  if (!is_hp(v.definition)) {
    auto t = definition_traits(v.definition);
    bool act = is_actual(t.kind);
    std::optional<Context> use = act ? std::optional<Context>(ctx) : std::nullopt;
    bool sweep_comp = base_kind(t.kind) != SufficiencyKind::Weak;
    // AC2(b): (x, w*) forces the recorded network values
    PartialSetting positive = merged(v.cause, v.witness_values);
    for (const auto& [var, val] : v.network_values.items())
      if (actual[var] != val) return false;
    {
      auto f = detail::forced_along(m, positive, v.network, sweep_comp, use);
      if (!f) return false;
      for (const auto& [var, val] : v.network_values.items())
        if (f->get(var) != std::optional<Value>(val)) return false;
    }
    // AC2(a): the recorded contrast (or the bare witness) is insufficient
    // along every subnetwork containing the effect variable
    PartialSetting negative = t.necessity == Necessity::Contrastive
                                  ? merged(v.contrast, v.witness_values)
                                  : v.witness_values;
    std::vector<VarIndex> extras;
    for (VarIndex var : v.network)
      if (var != y) extras.push_back(var);
    bool ok = detail::for_each_subset_by_size(extras, -1, [&](const std::vector<VarIndex>& sub) {
      std::vector<VarIndex> svars = sub;
      svars.insert(std::lower_bound(svars.begin(), svars.end(), y), y);
      if (base_kind(t.kind) == SufficiencyKind::Weak && svars.size() > 1) return true;
      auto f = detail::forced_along(m, negative, svars, sweep_comp, use);
      if (f && in_a(*f->get(y))) return false;  // sufficient: evidence is bogus
      return true;
    });
    return ok;
  }

  // classic definitions: every clause re-checked through actual-weak
  // sufficiency of the corresponding intervention set
  PartialSetting xw = merged(v.cause, v.witness_values);
  PartialSetting xpw = merged(v.contrast, v.witness_values);
  auto weak_holds = [&](const PartialSetting& setting) {
    return sufficient_for_disjunction(m, setting, y, accepted, SufficiencyKind::ActualWeak, ctx);
  };
  if (weak_holds(xpw)) return false;  // AC2(a) fails
  std::vector<VarIndex> zpool;
  for (int var = 0; var < m.num_endogenous(); ++var)
    if (var != y && !v.cause.contains(var) && !v.witness_values.contains(var))
      zpool.push_back(var);
  auto pin_actual = [&](const std::vector<VarIndex>& vars) {
    PartialSetting s;
    for (VarIndex var : vars) s.set(var, actual[var]);
    return s;
  };
  if (v.definition == Definition::OriginalHP) {
    return detail::for_each_subset_by_size(zpool, -1, [&](const std::vector<VarIndex>& yvars) {
      return weak_holds(merged(xw, pin_actual(yvars)));
    });
  }
  if (v.definition == Definition::ModifiedHP) {
    for (const auto& [var, val] : v.witness_values.items())
      if (actual[var] != val) return false;  // Modified pins the actual values
    return weak_holds(xw);
  }
  // Updated and Strong
  std::vector<VarIndex> wvars(v.witness.begin(), v.witness.end());
  bool ok = detail::for_each_subset_by_size(wvars, -1, [&](const std::vector<VarIndex>& vs) {
    PartialSetting part;
    for (VarIndex var : vs) part.set(var, *v.witness_values.get(var));
    return detail::for_each_subset_by_size(zpool, -1, [&](const std::vector<VarIndex>& yvars) {
      return weak_holds(merged(merged(v.cause, part), pin_actual(yvars)));
    });
  });
  if (!ok) return false;
  if (v.definition == Definition::StrongHP) {
    std::vector<int> sizes;
    for (VarIndex var : wvars) sizes.push_back(m.range(var).size());
    ok = for_each_assignment(sizes, [&](const std::vector<Value>& wd) {
      PartialSetting w2;
      for (std::size_t i = 0; i < wvars.size(); ++i) w2.set(wvars[i], wd[i]);
      return weak_holds(merged(v.cause, w2));
    });
  }
  return ok;
}

}  // namespace causal
