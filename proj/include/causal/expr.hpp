#pragma once

#include <memory>
#include <string>
#include <vector>

#include "causal/types.hpp"

namespace causal {

enum class VarKind { Exogenous, Endogenous };

struct VarRef {
  VarKind kind = VarKind::Endogenous;
  int index = -1;

  bool operator==(const VarRef& o) const { return kind == o.kind && index == o.index; }
};

/// Expression forming the right-hand side of a structural equation.
///
/// Guards (under And/Or/Not, and case/if conditions) are boolean; the value
/// positions (branches, bare variables, literals) produce a value of the
/// target variable's range.  Variables are referenced by name and resolved
/// when the model is finalized; finalize also fills the annotation fields
/// used by eval (resolved literals, label conversion tables, boolean duty).
struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

enum class ExprKind {
  Lit,      // value literal (label)
  Var,      // variable reference
  Eq,       // kids[0] (Var) = literal or Var
  Ne,       // kids[0] (Var) != literal or Var
  Not,      // !kids[0]
  And,      // kids[0] & kids[1] & ...
  Or,       // kids[0] | kids[1] | ...
  If,       // kids = {guard, then, else}
  Case,     // kids = {g1, b1, g2, b2, ..., default}
  Table,    // explicit function table over table_refs
};

struct Expr {
  ExprKind kind;
  std::string name;            // Var: variable name; Lit: label
  std::string rhs_label;       // Eq/Ne with literal rhs
  std::string rhs_name;        // Eq/Ne with variable rhs (takes precedence if resolved)
  std::vector<ExprPtr> kids;
  std::vector<std::string> table_refs;  // Table: referenced variable names
  std::vector<Value> table_values;      // Table: row-major over table_refs

  // -- filled during finalize --
  VarRef vref{};                    // Var / Eq / Ne lhs
  VarRef rhs_var{};                 // Eq/Ne variable rhs
  int lit_value = -1;               // Lit: index in target range; Eq/Ne: rhs index in lhs range
  int rhs_range_size = -1;          // Eq/Ne var-var: width of eq_matrix rows
  std::vector<int> conv;            // Var in value position: lhs-range index -> target index
  int bool_true = -1;               // Var in boolean position: index of label "1"
  std::vector<char> eq_matrix;      // Eq/Ne var-var: [a * rb + b] label equality
  std::vector<VarRef> table_vars;   // Table: resolved refs
  std::vector<int> table_sizes;     // Table: range sizes of refs

  static ExprPtr lit(std::string label) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Lit;
    e->name = std::move(label);
    return e;
  }
  static ExprPtr var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Var;
    e->name = std::move(name);
    return e;
  }
  static ExprPtr cmp(bool equal, std::string lhs, std::string rhs_label_or_var) {
    auto e = std::make_shared<Expr>();
    e->kind = equal ? ExprKind::Eq : ExprKind::Ne;
    e->kids.push_back(var(std::move(lhs)));
    e->rhs_label = std::move(rhs_label_or_var);
    return e;
  }
  static ExprPtr bnot(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Not;
    e->kids.push_back(std::move(a));
    return e;
  }
  static ExprPtr band(std::vector<ExprPtr> ks) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::And;
    e->kids = std::move(ks);
    return e;
  }
  static ExprPtr bor(std::vector<ExprPtr> ks) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Or;
    e->kids = std::move(ks);
    return e;
  }
  static ExprPtr ite(ExprPtr g, ExprPtr t, ExprPtr f) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::If;
    e->kids = {std::move(g), std::move(t), std::move(f)};
    return e;
  }
  /// kids alternate guard, branch, ..., final element is the default branch.
  static ExprPtr cases(std::vector<ExprPtr> ks) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Case;
    e->kids = std::move(ks);
    return e;
  }
  static ExprPtr table(std::vector<std::string> refs, std::vector<Value> values) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Table;
    e->table_refs = std::move(refs);
    e->table_values = std::move(values);
    return e;
  }

  /// Structural deep copy (annotations included).
  ExprPtr clone() const {
    auto e = std::make_shared<Expr>(*this);
    for (auto& k : e->kids) k = k->clone();
    return e;
  }
};

/// Collect variable names referenced anywhere in the expression.
inline void collect_names(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Lit:
      return;
    case ExprKind::Var:
      out.push_back(e.name);
      return;
    case ExprKind::Eq:
    case ExprKind::Ne:
      collect_names(*e.kids[0], out);
      if (!e.rhs_name.empty()) out.push_back(e.rhs_name);
      return;
    case ExprKind::Table:
      for (const auto& r : e.table_refs) out.push_back(r);
      return;
    default:
      for (const auto& k : e.kids) collect_names(*k, out);
      return;
  }
}

}  // namespace causal
