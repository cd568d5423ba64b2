#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "causal/expr.hpp"
#include "causal/types.hpp"

namespace causal {

struct Variable {
  std::string name;
  Range range;
};

/// Result of the recursivity check: either an evaluation order or a dependency cycle.
struct RecursionCheck {
  bool ok = false;
  std::vector<VarIndex> order;  // topological, deterministic (smallest index first)
  std::vector<VarIndex> cycle;  // nonempty iff !ok
};

/// Acyclic structural causal model over finite ranges.
///
/// Build with add_exogenous/add_endogenous/set_equation, then finalize().
/// Finalize resolves names, checks equation totality, computes the semantic
/// parent relation (an equation depends on a variable only if its function
/// actually varies in it) and a topological order when one exists.
class CausalModel {
 public:
  static constexpr long long kTotalityCap = 1 << 21;

  ExoIndex add_exogenous(const std::string& name, Range range) {
    check_new_name(name);
    if (range.size() < 2)
      throw ModelError(ErrorCode::ValueOutOfRange, "range of " + name + " needs >= 2 values");
    exo_.push_back({name, std::move(range)});
    names_[name] = {VarKind::Exogenous, static_cast<int>(exo_.size()) - 1};
    finalized_ = false;
    return static_cast<ExoIndex>(exo_.size()) - 1;
  }

  VarIndex add_endogenous(const std::string& name, Range range) {
    check_new_name(name);
    if (range.size() < 2)
      throw ModelError(ErrorCode::ValueOutOfRange, "range of " + name + " needs >= 2 values");
    endo_.push_back({name, std::move(range)});
    equations_.push_back(nullptr);
    names_[name] = {VarKind::Endogenous, static_cast<int>(endo_.size()) - 1};
    finalized_ = false;
    return static_cast<VarIndex>(endo_.size()) - 1;
  }

  void set_equation(const std::string& var, ExprPtr body) {
    auto ref = resolve(var);
    if (!ref || ref->kind != VarKind::Endogenous)
      throw ModelError(ErrorCode::UnknownVariable, "no endogenous variable " + var);
    equations_[ref->index] = std::move(body);
    finalized_ = false;
  }

  int num_endogenous() const { return static_cast<int>(endo_.size()); }
  int num_exogenous() const { return static_cast<int>(exo_.size()); }
  const Variable& endogenous(VarIndex v) const { return endo_.at(v); }
  const Variable& exogenous(ExoIndex u) const { return exo_.at(u); }
  const Range& range(VarIndex v) const { return endo_.at(v).range; }
  const Range& exo_range(ExoIndex u) const { return exo_.at(u).range; }
  const ExprPtr& equation(VarIndex v) const { return equations_.at(v); }

  std::optional<VarRef> resolve(const std::string& name) const {
    auto it = names_.find(name);
    if (it == names_.end()) return std::nullopt;
    return it->second;
  }

  VarIndex endo_index(const std::string& name) const {
    auto r = resolve(name);
    if (!r || r->kind != VarKind::Endogenous)
      throw ModelError(ErrorCode::UnknownVariable, "no endogenous variable " + name);
    return r->index;
  }

  ExoIndex exo_index(const std::string& name) const {
    auto r = resolve(name);
    if (!r || r->kind != VarKind::Exogenous)
      throw ModelError(ErrorCode::UnknownVariable, "no exogenous variable " + name);
    return r->index;
  }

  /// Number of contexts; throws if it exceeds `cap`.
  long long num_contexts(long long cap = kTotalityCap) const {
    long long n = 1;
    for (const auto& u : exo_) {
      n *= u.range.size();
      if (n > cap) throw ModelError(ErrorCode::ModelTooLarge, "too many contexts");
    }
    return n;
  }

  /// Resolve names, typecheck and annotate equations, compute parents and order.
  /// Cyclic models finalize fine; solve and friends then refuse to run.
  void finalize() {
    if (finalized_) return;
    for (int v = 0; v < num_endogenous(); ++v)
      if (!equations_[v])
        throw ModelError(ErrorCode::MissingEquation, "no equation for " + endo_[v].name);
    refs_endo_.assign(num_endogenous(), {});
    refs_exo_.assign(num_endogenous(), {});
    for (int v = 0; v < num_endogenous(); ++v) {
      annotate_value(*equations_[v], endo_[v].range, endo_[v].name);
      std::vector<std::string> names;
      collect_names(*equations_[v], names);
      std::vector<char> seen_v(num_endogenous(), 0), seen_u(num_exogenous(), 0);
      for (const auto& n : names) {
        auto r = *resolve(n);  // annotate_value guarantees existence
        if (r.kind == VarKind::Endogenous) {
          if (r.index == v)
            throw ModelError(ErrorCode::CyclicModel, "equation for " + endo_[v].name +
                                                         " references itself");
          if (!seen_v[r.index]) {
            seen_v[r.index] = 1;
            refs_endo_[v].push_back(r.index);
          }
        } else if (!seen_u[r.index]) {
          seen_u[r.index] = 1;
          refs_exo_[v].push_back(r.index);
        }
      }
      std::sort(refs_endo_[v].begin(), refs_endo_[v].end());
      std::sort(refs_exo_[v].begin(), refs_exo_[v].end());
      check_totality(v);
    }
    compute_parents();
    compute_order();
    finalized_ = true;
  }

  bool finalized() const { return finalized_; }

  /// Semantic parents: Y is a parent of X iff F_X varies in Y for some
  /// assignment of the other referenced variables (and referenced context part).
  const std::vector<VarIndex>& parents(VarIndex v) const {
    require_finalized();
    return parents_[v];
  }

  std::vector<VarIndex> children(VarIndex v) const {
    require_finalized();
    std::vector<VarIndex> out;
    for (int w = 0; w < num_endogenous(); ++w)
      for (VarIndex p : parents_[w])
        if (p == v) out.push_back(w);
    return out;
  }

  std::vector<VarIndex> ancestors(VarIndex v) const {
    require_finalized();
    std::vector<char> mark(num_endogenous(), 0);
    std::vector<VarIndex> stack{v}, out;
    while (!stack.empty()) {
      VarIndex x = stack.back();
      stack.pop_back();
      for (VarIndex p : parents_[x])
        if (!mark[p]) {
          mark[p] = 1;
          stack.push_back(p);
        }
    }
    for (int i = 0; i < num_endogenous(); ++i)
      if (mark[i]) out.push_back(i);
    return out;
  }

  std::vector<VarIndex> descendants(VarIndex v) const {
    require_finalized();
    std::vector<char> mark(num_endogenous(), 0);
    std::vector<VarIndex> stack{v}, out;
    while (!stack.empty()) {
      VarIndex x = stack.back();
      stack.pop_back();
      for (VarIndex c : children(x))
        if (!mark[c]) {
          mark[c] = 1;
          stack.push_back(c);
        }
    }
    for (int i = 0; i < num_endogenous(); ++i)
      if (mark[i]) out.push_back(i);
    return out;
  }

  RecursionCheck check_recursive() const {
    require_finalized();
    RecursionCheck rc;
    rc.ok = cycle_.empty();
    rc.order = order_;
    rc.cycle = cycle_;
    return rc;
  }

  /// Unique solution of the equations under context `ctx` and intervention `iv`.
  World solve(const Context& ctx, const Intervention& iv = {}) const {
    require_recursive();
    if (static_cast<int>(ctx.size()) != num_exogenous())
      throw ModelError(ErrorCode::BadQuery, "context size mismatch");
    for (int u = 0; u < num_exogenous(); ++u)
      if (ctx[u] >= exo_[u].range.size())
        throw ModelError(ErrorCode::ValueOutOfRange, "context value out of range");
    World w(num_endogenous(), 0);
    std::vector<char> forced(num_endogenous(), 0);
    for (const auto& p : iv.items()) {
      if (p.first < 0 || p.first >= num_endogenous())
        throw ModelError(ErrorCode::UnknownVariable, "intervention on unknown variable");
      if (p.second >= endo_[p.first].range.size())
        throw ModelError(ErrorCode::ValueOutOfRange, "intervention value out of range");
      w[p.first] = p.second;
      forced[p.first] = 1;
    }
    for (VarIndex v : order_)
      if (!forced[v]) w[v] = eval_value(*equations_[v], ctx.data(), w.data());
    return w;
  }

  /// Model with the equations of `iv`'s variables replaced by constants.
  CausalModel intervene(const Intervention& iv) const {
    require_finalized();
    CausalModel m = *this;
    m.finalized_ = false;
    for (const auto& p : iv.items()) {
      if (p.first < 0 || p.first >= num_endogenous())
        throw ModelError(ErrorCode::UnknownVariable, "intervention on unknown variable");
      if (p.second >= endo_[p.first].range.size())
        throw ModelError(ErrorCode::ValueOutOfRange, "intervention value out of range");
      m.equations_[p.first] = Expr::lit(endo_[p.first].range.label(p.second));
    }
    m.finalize();
    return m;
  }

  /// True when every equation either is of root form (V := U) or mentions no
  /// exogenous variable.
  bool is_normalized() const {
    require_finalized();
    for (int v = 0; v < num_endogenous(); ++v)
      if (!refs_exo_[v].empty() && !is_root_equation(v)) return false;
    return true;
  }

  /// Endogenous variables whose equation has root form V := U.
  std::vector<VarIndex> root_variables() const {
    require_finalized();
    if (!is_normalized())
      throw ModelError(ErrorCode::NotNormalized, "model has non-root exogenous uses");
    std::vector<VarIndex> out;
    for (int v = 0; v < num_endogenous(); ++v)
      if (is_root_equation(v)) out.push_back(v);
    return out;
  }

  /// Rewrite so exogenous variables appear only in equations of the form V := U.
  /// Each offending U gets one fresh endogenous variable V_U := U shared by all
  /// its non-root occurrences; original variables keep their indices.
  CausalModel normalize_exogenous() const {
    require_finalized();
    CausalModel m = *this;
    m.finalized_ = false;
    std::map<int, std::string> fresh;  // exo index -> new var name
    for (int u = 0; u < num_exogenous(); ++u) {
      bool offending = false;
      for (int v = 0; v < num_endogenous() && !offending; ++v)
        if (!is_root_equation(v))
          for (ExoIndex e : refs_exo_[v])
            if (e == u) {
              offending = true;
              break;
            }
      if (!offending) continue;
      std::string name = "V_" + exo_[u].name;
      for (int k = 2; m.names_.count(name); ++k)
        name = "V_" + exo_[u].name + "_" + std::to_string(k);
      m.add_endogenous(name, exo_[u].range);
      m.set_equation(name, Expr::var(exo_[u].name));
      fresh[u] = name;
    }
    if (fresh.empty()) return *this;
    for (int v = 0; v < num_endogenous(); ++v) {
      if (is_root_equation(v)) continue;
      ExprPtr body = equations_[v]->clone();
      bool changed = false;
      rewrite_exo(body, fresh, changed);
      if (changed) m.equations_[v] = body;
    }
    m.finalize();
    return m;
  }

  /// Syntactically referenced endogenous / exogenous variables of an equation.
  const std::vector<VarIndex>& referenced_endogenous(VarIndex v) const {
    require_finalized();
    return refs_endo_[v];
  }
  const std::vector<ExoIndex>& referenced_exogenous(VarIndex v) const {
    require_finalized();
    return refs_exo_[v];
  }

 private:
  std::vector<Variable> exo_, endo_;
  std::vector<ExprPtr> equations_;
  std::map<std::string, VarRef> names_;
  bool finalized_ = false;
  // derived
  std::vector<std::vector<VarIndex>> refs_endo_;
  std::vector<std::vector<ExoIndex>> refs_exo_;
  std::vector<std::vector<VarIndex>> parents_;
  std::vector<VarIndex> order_, cycle_;

  void check_new_name(const std::string& name) {
    if (name.empty()) throw ModelError(ErrorCode::SyntaxError, "empty variable name");
    if (names_.count(name))
      throw ModelError(ErrorCode::DuplicateName, "duplicate variable " + name);
  }

  void require_finalized() const {
    if (!finalized_)
      throw ModelError(ErrorCode::BadQuery, "model not finalized");
  }

  void require_recursive() const {
    require_finalized();
    if (!cycle_.empty())
      throw ModelError(ErrorCode::CyclicModel, "model has a dependency cycle through " +
                                                   endo_[cycle_.front()].name);
  }

  bool is_root_equation(VarIndex v) const {
    const Expr& e = *equations_[v];
    return e.kind == ExprKind::Var && e.vref.kind == VarKind::Exogenous;
  }

  static void rewrite_exo(ExprPtr& e, const std::map<int, std::string>& fresh, bool& changed) {
    if (e->kind == ExprKind::Var) {
      if (e->vref.kind == VarKind::Exogenous) {
        auto it = fresh.find(e->vref.index);
        if (it != fresh.end()) {
          e = Expr::var(it->second);
          changed = true;
        }
      }
      return;
    }
    if (e->kind == ExprKind::Table) {
      for (std::size_t i = 0; i < e->table_vars.size(); ++i) {
        if (e->table_vars[i].kind == VarKind::Exogenous) {
          auto it = fresh.find(e->table_vars[i].index);
          if (it != fresh.end()) {
            e->table_refs[i] = it->second;
            changed = true;
          }
        }
      }
      return;
    }
    if ((e->kind == ExprKind::Eq || e->kind == ExprKind::Ne) && !e->rhs_name.empty() &&
        e->rhs_var.kind == VarKind::Exogenous) {
      auto it = fresh.find(e->rhs_var.index);
      if (it != fresh.end()) {
        e->rhs_label = it->second;  // finalize re-resolves from rhs_label
        e->rhs_name = it->second;
        changed = true;
      }
    }
    for (auto& k : e->kids) rewrite_exo(k, fresh, changed);
  }

  const Range& range_of(VarRef r) const {
    return r.kind == VarKind::Endogenous ? endo_[r.index].range : exo_[r.index].range;
  }

  VarRef resolve_or_throw(const std::string& name, const std::string& target) const {
    auto r = resolve(name);
    if (!r)
      throw ModelError(ErrorCode::UnknownVariable,
                       "equation for " + target + " references unknown variable " + name);
    return *r;
  }

  // Typecheck/annotate `e` as producing a value in `target`.
  void annotate_value(Expr& e, const Range& target, const std::string& tname) {
    switch (e.kind) {
      case ExprKind::Lit: {
        auto v = target.index_of(e.name);
        if (!v)
          throw ModelError(ErrorCode::ValueOutOfRange,
                           "value " + e.name + " not in range of " + tname);
        e.lit_value = *v;
        return;
      }
      case ExprKind::Var: {
        e.vref = resolve_or_throw(e.name, tname);
        const Range& src = range_of(e.vref);
        e.conv.assign(src.size(), -1);
        for (int i = 0; i < src.size(); ++i) {
          auto t = target.index_of(src.label(i));
          if (t) e.conv[i] = *t;
        }
        return;
      }
      case ExprKind::If:
        annotate_bool(*e.kids[0], tname);
        annotate_value(*e.kids[1], target, tname);
        annotate_value(*e.kids[2], target, tname);
        return;
      case ExprKind::Case: {
        if (e.kids.size() % 2 != 1 || e.kids.empty())
          throw ModelError(ErrorCode::SyntaxError, "malformed case in equation for " + tname);
        for (std::size_t i = 0; i + 1 < e.kids.size(); i += 2) {
          annotate_bool(*e.kids[i], tname);
          annotate_value(*e.kids[i + 1], target, tname);
        }
        annotate_value(*e.kids.back(), target, tname);
        return;
      }
      case ExprKind::Table: {
        e.table_vars.clear();
        e.table_sizes.clear();
        long long rows = 1;
        for (const auto& n : e.table_refs) {
          VarRef r = resolve_or_throw(n, tname);
          e.table_vars.push_back(r);
          e.table_sizes.push_back(range_of(r).size());
          rows *= e.table_sizes.back();
          if (rows > kTotalityCap)
            throw ModelError(ErrorCode::ModelTooLarge, "table too large for " + tname);
        }
        if (static_cast<long long>(e.table_values.size()) != rows)
          throw ModelError(ErrorCode::ValueOutOfRange,
                           "table size mismatch in equation for " + tname);
        for (Value v : e.table_values)
          if (v >= target.size())
            throw ModelError(ErrorCode::ValueOutOfRange,
                             "table value out of range in equation for " + tname);
        return;
      }
      // A boolean expression in value position: target must contain "0"/"1".
      case ExprKind::Eq:
      case ExprKind::Ne:
      case ExprKind::Not:
      case ExprKind::And:
      case ExprKind::Or: {
        auto i0 = target.index_of("0"), i1 = target.index_of("1");
        if (!i0 || !i1)
          throw ModelError(ErrorCode::ValueOutOfRange,
                           "boolean equation for " + tname + " needs labels 0 and 1");
        e.conv = {static_cast<int>(*i0), static_cast<int>(*i1)};
        annotate_bool(e, tname);
        return;
      }
    }
  }

  // Typecheck/annotate `e` as a boolean guard.
  void annotate_bool(Expr& e, const std::string& tname) {
    switch (e.kind) {
      case ExprKind::Var: {
        e.vref = resolve_or_throw(e.name, tname);
        const Range& src = range_of(e.vref);
        if (!src.is_boolean())
          throw ModelError(ErrorCode::ValueOutOfRange,
                           e.name + " used as boolean in equation for " + tname +
                               " but its range is not {0,1}");
        e.bool_true = *src.index_of("1");
        return;
      }
      case ExprKind::Eq:
      case ExprKind::Ne: {
        Expr& lhs = *e.kids[0];
        if (lhs.kind != ExprKind::Var)
          throw ModelError(ErrorCode::SyntaxError, "comparison lhs must be a variable");
        lhs.vref = resolve_or_throw(lhs.name, tname);
        const Range& lr = range_of(lhs.vref);
        if (auto r = resolve(e.rhs_label)) {
          e.rhs_name = e.rhs_label;
          e.rhs_var = *r;
          const Range& rr = range_of(e.rhs_var);
          e.rhs_range_size = rr.size();
          e.eq_matrix.assign(lr.size() * rr.size(), 0);
          for (int a = 0; a < lr.size(); ++a)
            for (int b = 0; b < rr.size(); ++b)
              e.eq_matrix[a * rr.size() + b] = lr.label(a) == rr.label(b);
        } else {
          e.rhs_name.clear();
          auto v = lr.index_of(e.rhs_label);
          if (!v)
            throw ModelError(ErrorCode::ValueOutOfRange, "value " + e.rhs_label +
                                                             " not in range of " + lhs.name);
          e.lit_value = *v;
        }
        return;
      }
      case ExprKind::Not:
        annotate_bool(*e.kids[0], tname);
        return;
      case ExprKind::And:
      case ExprKind::Or:
        for (auto& k : e.kids) annotate_bool(*k, tname);
        return;
      default:
        throw ModelError(ErrorCode::SyntaxError,
                         "value expression used as condition in equation for " + tname);
    }
  }

  Value raw_value(VarRef r, const Value* ctx, const Value* world) const {
    return r.kind == VarKind::Endogenous ? world[r.index] : ctx[r.index];
  }

  bool eval_bool(const Expr& e, const Value* ctx, const Value* world) const {
    switch (e.kind) {
      case ExprKind::Var:
        return raw_value(e.vref, ctx, world) == e.bool_true;
      case ExprKind::Eq:
      case ExprKind::Ne: {
        Value a = raw_value(e.kids[0]->vref, ctx, world);
        bool eq;
        if (!e.rhs_name.empty()) {
          Value b = raw_value(e.rhs_var, ctx, world);
          eq = e.eq_matrix[a * e.rhs_range_size + b] != 0;
        } else {
          eq = a == e.lit_value;
        }
        return e.kind == ExprKind::Eq ? eq : !eq;
      }
      case ExprKind::Not:
        return !eval_bool(*e.kids[0], ctx, world);
      case ExprKind::And:
        for (const auto& k : e.kids)
          if (!eval_bool(*k, ctx, world)) return false;
        return true;
      case ExprKind::Or:
        for (const auto& k : e.kids)
          if (eval_bool(*k, ctx, world)) return true;
        return false;
      default:
        throw ModelError(ErrorCode::SyntaxError, "value expression in boolean position");
    }
  }

  Value eval_value(const Expr& e, const Value* ctx, const Value* world) const {
    switch (e.kind) {
      case ExprKind::Lit:
        return static_cast<Value>(e.lit_value);
      case ExprKind::Var: {
        int t = e.conv[raw_value(e.vref, ctx, world)];
        if (t < 0)
          throw ModelError(ErrorCode::ValueOutOfRange,
                           "value of " + e.name + " has no counterpart in target range");
        return static_cast<Value>(t);
      }
      case ExprKind::If:
        return eval_bool(*e.kids[0], ctx, world) ? eval_value(*e.kids[1], ctx, world)
                                                 : eval_value(*e.kids[2], ctx, world);
      case ExprKind::Case: {
        for (std::size_t i = 0; i + 1 < e.kids.size(); i += 2)
          if (eval_bool(*e.kids[i], ctx, world)) return eval_value(*e.kids[i + 1], ctx, world);
        return eval_value(*e.kids.back(), ctx, world);
      }
      case ExprKind::Table: {
        long long idx = 0;
        for (std::size_t i = 0; i < e.table_vars.size(); ++i)
          idx = idx * e.table_sizes[i] + raw_value(e.table_vars[i], ctx, world);
        return e.table_values[idx];
      }
      default: {
        // boolean expression in value position; conv holds target's 0/1 indices
        bool b = eval_bool(e, ctx, world);
        return static_cast<Value>(e.conv[b ? 1 : 0]);
      }
    }
  }

  void check_totality(VarIndex v) {
    // Enumerate assignments of the referenced variables and evaluate; any label
    // conversion failure in a reachable branch surfaces here.
    std::vector<VarRef> vars;
    std::vector<int> sizes;
    for (VarIndex r : refs_endo_[v]) {
      vars.push_back({VarKind::Endogenous, r});
      sizes.push_back(endo_[r].range.size());
    }
    for (ExoIndex r : refs_exo_[v]) {
      vars.push_back({VarKind::Exogenous, r});
      sizes.push_back(exo_[r].range.size());
    }
    long long total = 1;
    for (int s : sizes) {
      total *= s;
      if (total > kTotalityCap)
        throw ModelError(ErrorCode::ModelTooLarge,
                         "equation for " + endo_[v].name + " references too large a domain");
    }
    std::vector<Value> ctx(num_exogenous(), 0), world(num_endogenous(), 0);
    for_each_assignment(sizes, [&](const std::vector<Value>& digits) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].kind == VarKind::Endogenous)
          world[vars[i].index] = digits[i];
        else
          ctx[vars[i].index] = digits[i];
      }
      Value out = eval_value(*equations_[v], ctx.data(), world.data());  // throws if partial
      if (out >= endo_[v].range.size())
        throw ModelError(ErrorCode::ValueOutOfRange, "equation for " + endo_[v].name +
                                                         " leaves its range");
      return true;
    });
  }

  void compute_parents() {
    parents_.assign(num_endogenous(), {});
    for (int v = 0; v < num_endogenous(); ++v) {
      for (VarIndex cand : refs_endo_[v]) {
        // other referenced variables sweep; cand sweeps its own range inside
        std::vector<VarRef> vars;
        std::vector<int> sizes;
        for (VarIndex r : refs_endo_[v])
          if (r != cand) {
            vars.push_back({VarKind::Endogenous, r});
            sizes.push_back(endo_[r].range.size());
          }
        for (ExoIndex r : refs_exo_[v]) {
          vars.push_back({VarKind::Exogenous, r});
          sizes.push_back(exo_[r].range.size());
        }
        std::vector<Value> ctx(num_exogenous(), 0), world(num_endogenous(), 0);
        bool varies = !for_each_assignment(sizes, [&](const std::vector<Value>& digits) {
          for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i].kind == VarKind::Endogenous)
              world[vars[i].index] = digits[i];
            else
              ctx[vars[i].index] = digits[i];
          }
          world[cand] = 0;
          Value first = eval_value(*equations_[v], ctx.data(), world.data());
          for (int y = 1; y < endo_[cand].range.size(); ++y) {
            world[cand] = static_cast<Value>(y);
            if (eval_value(*equations_[v], ctx.data(), world.data()) != first)
              return false;  // found variation: stop sweep
          }
          return true;
        });
        if (varies) parents_[v].push_back(cand);
      }
    }
  }

  void compute_order() {
    order_.clear();
    cycle_.clear();
    int n = num_endogenous();
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<VarIndex>> kids(n);
    for (int v = 0; v < n; ++v)
      for (VarIndex p : parents_[v]) {
        ++indeg[v];
        kids[p].push_back(v);
      }
    std::vector<char> done(n, 0);
    for (;;) {
      int pick = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && indeg[v] == 0) {
          pick = v;
          break;
        }
      if (pick < 0) break;
      done[pick] = 1;
      order_.push_back(pick);
      for (VarIndex c : kids[pick]) --indeg[c];
    }
    if (static_cast<int>(order_.size()) == n) return;
    // walk parent links among the unfinished vars to produce one cycle
    int start = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v]) {
        start = v;
        break;
      }
    std::vector<int> mark(n, -1);
    std::vector<VarIndex> path;
    int cur = start;
    while (mark[cur] < 0) {
      mark[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      for (VarIndex p : parents_[cur])
        if (!done[p]) {
          cur = p;
          break;
        }
    }
    cycle_.assign(path.begin() + mark[cur], path.end());
    std::sort(cycle_.begin(), cycle_.end());
  }
};

}  // namespace causal
