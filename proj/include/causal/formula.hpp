#pragma once

#include <memory>

#include "causal/model.hpp"

namespace causal {

/// Boolean combination of atoms V=v, optionally under one outermost
/// intervention prefix [X <- x].  Nested interventions are rejected.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class FormulaKind { Atom, Not, And, Or, Intervened };

struct Formula {
  FormulaKind kind;
  VarIndex var = -1;          // Atom
  Value value = 0;            // Atom
  std::vector<FormulaPtr> kids;
  Intervention intervention;  // Intervened

  static FormulaPtr atom(VarIndex v, Value val) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Atom;
    f->var = v;
    f->value = val;
    return f;
  }
  static FormulaPtr fnot(FormulaPtr a) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Not;
    f->kids.push_back(std::move(a));
    return f;
  }
  static FormulaPtr fand(std::vector<FormulaPtr> ks) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::And;
    f->kids = std::move(ks);
    return f;
  }
  static FormulaPtr forr(std::vector<FormulaPtr> ks) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Or;
    f->kids = std::move(ks);
    return f;
  }
  static FormulaPtr intervened(Intervention iv, FormulaPtr inner) {
    if (contains_intervention(*inner))
      throw ModelError(ErrorCode::MalformedFormula, "nested intervention prefix");
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Intervened;
    f->intervention = std::move(iv);
    f->kids.push_back(std::move(inner));
    return f;
  }

  static bool contains_intervention(const Formula& f) {
    if (f.kind == FormulaKind::Intervened) return true;
    for (const auto& k : f.kids)
      if (contains_intervention(*k)) return true;
    return false;
  }
};

inline bool eval_on_world(const Formula& f, const World& w) {
  switch (f.kind) {
    case FormulaKind::Atom:
      return w.at(f.var) == f.value;
    case FormulaKind::Not:
      return !eval_on_world(*f.kids[0], w);
    case FormulaKind::And:
      for (const auto& k : f.kids)
        if (!eval_on_world(*k, w)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& k : f.kids)
        if (eval_on_world(*k, w)) return true;
      return false;
    case FormulaKind::Intervened:
      throw ModelError(ErrorCode::MalformedFormula, "intervention prefix must be outermost");
  }
  return false;
}

/// Truth of a causal formula at (model, context).
inline bool holds(const CausalModel& m, const Context& ctx, const Formula& f) {
  if (f.kind == FormulaKind::Intervened)
    return eval_on_world(*f.kids[0], m.solve(ctx, f.intervention));
  return eval_on_world(f, m.solve(ctx));
}

/// Shorthand: does [iv] (Y in accepted) hold at (model, ctx)?
inline bool holds_value_in(const CausalModel& m, const Context& ctx, const Intervention& iv,
                           VarIndex y, const std::vector<Value>& accepted) {
  World w = m.solve(ctx, iv);
  for (Value a : accepted)
    if (w[y] == a) return true;
  return false;
}

}  // namespace causal
