#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "causal/model.hpp"

namespace causal {

/// The six sufficiency notions. Actual kinds evaluate at one given context,
/// the others quantify over every context.
enum class SufficiencyKind { Direct, Strong, Weak, ActualDirect, ActualStrong, ActualWeak };

inline bool is_actual(SufficiencyKind k) {
  return k == SufficiencyKind::ActualDirect || k == SufficiencyKind::ActualStrong ||
         k == SufficiencyKind::ActualWeak;
}

inline SufficiencyKind base_kind(SufficiencyKind k) {
  switch (k) {
    case SufficiencyKind::ActualDirect: return SufficiencyKind::Direct;
    case SufficiencyKind::ActualStrong: return SufficiencyKind::Strong;
    case SufficiencyKind::ActualWeak: return SufficiencyKind::Weak;
    default: return k;
  }
}

inline const char* sufficiency_kind_name(SufficiencyKind k) {
  switch (k) {
    case SufficiencyKind::Direct: return "direct";
    case SufficiencyKind::Strong: return "strong";
    case SufficiencyKind::Weak: return "weak";
    case SufficiencyKind::ActualDirect: return "actual-direct";
    case SufficiencyKind::ActualStrong: return "actual-strong";
    case SufficiencyKind::ActualWeak: return "actual-weak";
  }
  return "?";
}

/// Witness for strong sufficiency: a network N containing the target variables
/// together with the values the cause forces along it.
struct NetworkWitness {
  std::vector<VarIndex> network;  // sorted, contains the target variables
  PartialSetting values;          // n over the network, restricting to the target
};

struct StrongOptions {
  // Search networks whose non-target part avoids root variables. Sound per the
  // root-restriction lemma; requires a normalized model.
  bool restrict_to_nonroot = false;
  int max_network = -1;  // cap on |N|, -1 = none
};

namespace detail {

inline void validate_setting(const CausalModel& m, const PartialSetting& s, const char* what) {
  for (const auto& [v, val] : s.items()) {
    if (v < 0 || v >= m.num_endogenous())
      throw ModelError(ErrorCode::UnknownVariable, std::string(what) + ": unknown variable");
    if (val >= m.range(v).size())
      throw ModelError(ErrorCode::ValueOutOfRange, std::string(what) + ": value out of range for " +
                                                       m.endogenous(v).name);
  }
}

inline void require_disjoint(const PartialSetting& a, const PartialSetting& b, const char* what) {
  if (a.overlaps(b)) throw ModelError(ErrorCode::OverlappingSets, what);
}

inline std::vector<int> context_sizes(const CausalModel& m) {
  std::vector<int> sizes(m.num_exogenous());
  for (int u = 0; u < m.num_exogenous(); ++u) sizes[u] = m.exo_range(u).size();
  return sizes;
}

/// Visit every relevant (context, complement assignment) pair, solve, and hand
/// the world to `f`; stops early when `f` returns false. Returns true when `f`
/// never stopped. `complement` variables sweep their full ranges.
template <typename F>
bool sweep_worlds(const CausalModel& m, const PartialSetting& forced,
                  const std::vector<VarIndex>& complement, const std::optional<Context>& ctx,
                  F&& f) {
  m.num_contexts();  // enforces the totality cap before we enumerate
  std::vector<int> csizes;
  csizes.reserve(complement.size());
  for (VarIndex v : complement) csizes.push_back(m.range(v).size());
  PartialSetting iv = forced;
  for (VarIndex v : complement) iv.set(v, 0);
  bool go = true;
  for_each_assignment(csizes, [&](const std::vector<Value>& digits) {
    for (std::size_t i = 0; i < complement.size(); ++i) iv.set(complement[i], digits[i]);
    if (ctx) {
      go = f(*ctx, m.solve(*ctx, iv));
      return go;
    }
    Context u(m.num_exogenous(), 0);
    for_each_assignment(context_sizes(m), [&](const std::vector<Value>& ud) {
      u.assign(ud.begin(), ud.end());
      go = f(u, m.solve(u, iv));
      return go;
    });
    return go;
  });
  return go;
}

inline bool world_matches(const World& w, const PartialSetting& target) {
  for (const auto& [v, val] : target.items())
    if (w[v] != val) return false;
  return true;
}

/// Endogenous variables not mentioned by either setting.
inline std::vector<VarIndex> complement_of(const CausalModel& m, const PartialSetting& a,
                                           const PartialSetting& b) {
  std::vector<VarIndex> out;
  for (int v = 0; v < m.num_endogenous(); ++v)
    if (!a.contains(v) && !b.contains(v)) out.push_back(v);
  return out;
}

/// Fixed-target check: does `forced` force `target` under every swept world?
inline bool forces(const CausalModel& m, const PartialSetting& forced,
                   const std::vector<VarIndex>& complement, const PartialSetting& target,
                   const std::optional<Context>& ctx) {
  return sweep_worlds(m, forced, complement, ctx,
                      [&](const Context&, const World& w) { return world_matches(w, target); });
}

/// The unique values `forced` forces along `svars` (probe one world, then
/// demand constancy), or nullopt when some swept world disagrees. Complete for
/// sufficiency questions: a candidate n must match every world, in particular
/// the probe.
inline std::optional<PartialSetting> forced_along(const CausalModel& m,
                                                 const PartialSetting& forced,
                                                 const std::vector<VarIndex>& svars,
                                                 bool sweep_complement,
                                                 const std::optional<Context>& ctx) {
  PartialSetting sv;
  for (VarIndex v : svars) sv.set(v, 0);
  std::vector<VarIndex> complement;
  if (sweep_complement) complement = complement_of(m, forced, sv);
  std::optional<PartialSetting> n;
  bool constant = sweep_worlds(m, forced, complement, ctx, [&](const Context&, const World& w) {
    if (!n) {
      PartialSetting probe;
      for (VarIndex v : svars) probe.set(v, w[v]);
      n = std::move(probe);
      return true;
    }
    return world_matches(w, *n);
  });
  if (!constant) return std::nullopt;
  return n;
}

/// Subsets of `pool` enumerated by increasing size then lexicographically;
/// `f(subset)` returns false to stop. `pool` must be sorted.
template <typename F>
bool for_each_subset_by_size(const std::vector<VarIndex>& pool, int max_size, F&& f) {
  int n = static_cast<int>(pool.size());
  if (max_size < 0 || max_size > n) max_size = n;
  std::vector<VarIndex> subset;
  for (int k = 0; k <= max_size; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      subset.clear();
      for (int i : idx) subset.push_back(pool[i]);
      if (!f(subset)) return false;
      // next combination
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (k == 0 && n == 0) break;
  }
  return true;
}

}  // namespace detail

/// X=x directly suffices for Y=y: every assignment of all remaining endogenous
/// variables, in every (or the given) context, still yields Y=y.
inline bool directly_sufficient(const CausalModel& m, const PartialSetting& xx,
                                const PartialSetting& yy,
                                const std::optional<Context>& ctx = std::nullopt) {
  detail::validate_setting(m, xx, "cause");
  detail::validate_setting(m, yy, "target");
  if (yy.empty()) throw ModelError(ErrorCode::BadQuery, "empty target");
  detail::require_disjoint(xx, yy, "cause and target overlap");
  return detail::forces(m, xx, detail::complement_of(m, xx, yy), yy, ctx);
}

/// X=x weakly suffices for Y=y: intervening on X alone yields Y=y in every (or
/// the given) context.
inline bool weakly_sufficient(const CausalModel& m, const PartialSetting& xx,
                              const PartialSetting& yy,
                              const std::optional<Context>& ctx = std::nullopt) {
  detail::validate_setting(m, xx, "cause");
  detail::validate_setting(m, yy, "target");
  if (yy.empty()) throw ModelError(ErrorCode::BadQuery, "empty target");
  detail::require_disjoint(xx, yy, "cause and target overlap");
  return detail::forces(m, xx, {}, yy, ctx);
}

/// X=x strongly suffices for Y=y: X=x directly suffices for N=n for some
/// network N containing the target. Networks are searched by increasing size
/// with lexicographic tie-break; the first witness is returned.
inline std::optional<NetworkWitness> strongly_sufficient(
    const CausalModel& m, const PartialSetting& xx, const PartialSetting& yy,
    const std::optional<Context>& ctx = std::nullopt, const StrongOptions& opts = {}) {
  detail::validate_setting(m, xx, "cause");
  detail::validate_setting(m, yy, "target");
  if (yy.empty()) throw ModelError(ErrorCode::BadQuery, "empty target");
  detail::require_disjoint(xx, yy, "cause and target overlap");

  std::vector<char> excluded(m.num_endogenous(), 0);
  for (const auto& [v, val] : xx.items()) excluded[v] = 1;
  for (const auto& [v, val] : yy.items()) excluded[v] = 1;
  if (opts.restrict_to_nonroot)
    for (VarIndex r : m.root_variables()) excluded[r] = 1;  // throws if not normalized
  std::vector<VarIndex> pool;
  for (int v = 0; v < m.num_endogenous(); ++v)
    if (!excluded[v]) pool.push_back(v);

  int extra_cap = opts.max_network < 0
                      ? -1
                      : std::max(0, opts.max_network - static_cast<int>(yy.size()));
  std::optional<NetworkWitness> found;
  detail::for_each_subset_by_size(pool, extra_cap, [&](const std::vector<VarIndex>& extra) {
    std::vector<VarIndex> network = extra;
    for (const auto& [v, val] : yy.items()) network.push_back(v);
    std::sort(network.begin(), network.end());
    auto n = detail::forced_along(m, xx, network, /*sweep_complement=*/true, ctx);
    if (!n) return true;
    for (const auto& [v, val] : yy.items())
      if (n->get(v) != val) return true;  // forced values miss the target
    found = NetworkWitness{std::move(network), std::move(*n)};
    return false;
  });
  return found;
}

/// Chain form of strong sufficiency: X=x directly suffices for the first link,
/// each link for the next, the last for Y=y. Links may overlap; inconsistent
/// overlaps simply fail the corresponding direct-sufficiency step.
inline bool strongly_sufficient_along_chain(const CausalModel& m, const PartialSetting& xx,
                                            const PartialSetting& yy,
                                            const std::vector<PartialSetting>& chain) {
  detail::validate_setting(m, xx, "cause");
  detail::validate_setting(m, yy, "target");
  if (yy.empty()) throw ModelError(ErrorCode::BadQuery, "empty target");
  for (const auto& link : chain) {
    detail::validate_setting(m, link, "chain link");
    if (link.empty()) throw ModelError(ErrorCode::BadQuery, "empty chain link");
    // The network lies between cause and effect: a link that re-sets a cause
    // variable would break the step-to-step composition the equivalence with
    // one-shot strong sufficiency relies on.
    for (const auto& [v, val] : link.items())
      if (xx.contains(v)) throw ModelError(ErrorCode::BadQuery, "chain link revisits a cause variable");
  }
  // Direct sufficiency with a possibly-overlapping target: forced values win,
  // so a link value disagreeing with the setting fails via the literal check.
  auto step = [&](const PartialSetting& from, const PartialSetting& to) {
    for (const auto& [v, val] : to.items())
      if (from.contains(v) && from.get(v) != val) return false;
    PartialSetting rest = to;
    for (const auto& [v, val] : from.items()) rest.erase(v);
    if (rest.empty()) return true;
    return detail::forces(m, from, detail::complement_of(m, from, rest), rest, std::nullopt);
  };
  if (chain.empty()) return step(xx, yy);
  if (!step(xx, chain.front())) return false;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!step(chain[i], chain[i + 1])) return false;
  return step(chain.back(), yy);
}

/// General sufficiency along N independent of C: for every assignment of C, in
/// every (or the given) context, [X<-x, C<-c] forces N=n.
inline bool general_sufficient(const CausalModel& m, const PartialSetting& xx,
                               const PartialSetting& yy, const std::vector<VarIndex>& nvars,
                               const PartialSetting& n, const std::vector<VarIndex>& cvars,
                               const std::optional<Context>& ctx = std::nullopt) {
  detail::validate_setting(m, xx, "cause");
  detail::validate_setting(m, yy, "target");
  detail::validate_setting(m, n, "network values");
  if (yy.empty()) throw ModelError(ErrorCode::BadQuery, "empty target");
  std::vector<char> in_n(m.num_endogenous(), 0), in_c(m.num_endogenous(), 0);
  for (VarIndex v : nvars) {
    if (v < 0 || v >= m.num_endogenous())
      throw ModelError(ErrorCode::UnknownVariable, "network: unknown variable");
    in_n[v] = 1;
  }
  for (VarIndex v : cvars) {
    if (v < 0 || v >= m.num_endogenous())
      throw ModelError(ErrorCode::UnknownVariable, "independence set: unknown variable");
    in_c[v] = 1;
  }
  for (const auto& [v, val] : xx.items())
    if (in_c[v] || in_n[v])
      throw ModelError(ErrorCode::SetConstraintViolation, "cause overlaps N or C");
  for (const auto& [v, val] : yy.items()) {
    if (in_c[v]) throw ModelError(ErrorCode::SetConstraintViolation, "target inside C");
    if (!in_n[v]) throw ModelError(ErrorCode::SetConstraintViolation, "target outside N");
  }
  for (VarIndex v : nvars)
    if (in_c[v]) throw ModelError(ErrorCode::SetConstraintViolation, "N and C overlap");
  if (n.size() != nvars.size())
    throw ModelError(ErrorCode::SetConstraintViolation, "network values do not cover N");
  for (VarIndex v : nvars)
    if (!n.contains(v))
      throw ModelError(ErrorCode::SetConstraintViolation, "network values do not cover N");
  for (const auto& [v, val] : yy.items())
    if (n.get(v) != val)
      throw ModelError(ErrorCode::SetConstraintViolation, "network values disagree with target");
  std::vector<VarIndex> complement(cvars.begin(), cvars.end());
  std::sort(complement.begin(), complement.end());
  return detail::forces(m, xx, complement, n, ctx);
}

/// Dispatcher over the six kinds for a fixed (single- or multi-variable) target.
inline bool sufficient(const CausalModel& m, const PartialSetting& xx, const PartialSetting& yy,
                       SufficiencyKind kind, const std::optional<Context>& ctx = std::nullopt) {
  if (is_actual(kind) && !ctx)
    throw ModelError(ErrorCode::BadQuery, "actual sufficiency needs a context");
  std::optional<Context> use = is_actual(kind) ? ctx : std::nullopt;
  switch (base_kind(kind)) {
    case SufficiencyKind::Weak: return weakly_sufficient(m, xx, yy, use);
    case SufficiencyKind::Direct: return directly_sufficient(m, xx, yy, use);
    default: return strongly_sufficient(m, xx, yy, use).has_value();
  }
}

/// Sufficiency for a same-variable disjunction: sufficient for Y=v for some
/// accepted v.
inline bool sufficient_for_disjunction(const CausalModel& m, const PartialSetting& xx,
                                       VarIndex effect_var, const std::vector<Value>& accepted,
                                       SufficiencyKind kind,
                                       const std::optional<Context>& ctx = std::nullopt) {
  if (accepted.empty()) throw ModelError(ErrorCode::EmptyDisjunction, "no accepted values");
  if (effect_var < 0 || effect_var >= m.num_endogenous())
    throw ModelError(ErrorCode::UnknownVariable, "effect: unknown variable");
  for (Value v : accepted)
    if (v >= m.range(effect_var).size())
      throw ModelError(ErrorCode::ValueOutOfRange, "accepted value out of range");
  for (Value v : accepted)
    if (sufficient(m, xx, PartialSetting::single(effect_var, v), kind, ctx)) return true;
  return false;
}

}  // namespace causal
