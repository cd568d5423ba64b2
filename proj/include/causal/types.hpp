#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causal {

/// Value of a variable, as an index into its declared range.
using Value = std::uint8_t;
/// Index of an endogenous variable within a model.
using VarIndex = int;
/// Index of an exogenous variable within a model.
using ExoIndex = int;

enum class ErrorCode {
  SyntaxError,
  UnknownVariable,
  ValueOutOfRange,
  CyclicModel,
  DuplicateName,
  MissingEquation,
  OverlappingSets,
  SetConstraintViolation,
  EmptyDisjunction,
  NotNormalized,
  MalformedFormula,
  FamilyTooLarge,
  ModelTooLarge,
  BadQuery,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::CyclicModel: return "CyclicModel";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::MissingEquation: return "MissingEquation";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::SetConstraintViolation: return "SetConstraintViolation";
    case ErrorCode::EmptyDisjunction: return "EmptyDisjunction";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::MalformedFormula: return "MalformedFormula";
    case ErrorCode::FamilyTooLarge: return "FamilyTooLarge";
    case ErrorCode::ModelTooLarge: return "ModelTooLarge";
    case ErrorCode::BadQuery: return "BadQuery";
  }
  return "?";
}

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Finite range of values a variable may take; order of labels is significant.
struct Range {
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(labels.size()); }

  std::optional<Value> index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels[i] == label) return static_cast<Value>(i);
    return std::nullopt;
  }

  const std::string& label(Value v) const { return labels.at(v); }

  /// True when the range is {0,1} up to order, so the variable can act as a boolean.
  bool is_boolean() const {
    return size() == 2 && index_of("0").has_value() && index_of("1").has_value();
  }

  bool operator==(const Range& o) const { return labels == o.labels; }
};

inline Range binary_range() { return Range{{"0", "1"}}; }

/// Context: one value per exogenous variable, in declaration order.
using Context = std::vector<Value>;
/// World: one value per endogenous variable, in declaration order.
using World = std::vector<Value>;

/// Assignment of values to a set of endogenous variables, kept sorted by variable.
class PartialSetting {
 public:
  PartialSetting() = default;

  static PartialSetting single(VarIndex v, Value val) {
    PartialSetting s;
    s.set(v, val);
    return s;
  }

  void set(VarIndex v, Value val) {
    auto it = std::lower_bound(items_.begin(), items_.end(), v,
                               [](const auto& p, VarIndex x) { return p.first < x; });
    if (it != items_.end() && it->first == v)
      it->second = val;
    else
      items_.insert(it, {v, val});
  }

  std::optional<Value> get(VarIndex v) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), v,
                               [](const auto& p, VarIndex x) { return p.first < x; });
    if (it != items_.end() && it->first == v) return it->second;
    return std::nullopt;
  }

  bool contains(VarIndex v) const { return get(v).has_value(); }

  void erase(VarIndex v) {
    auto it = std::lower_bound(items_.begin(), items_.end(), v,
                               [](const auto& p, VarIndex x) { return p.first < x; });
    if (it != items_.end() && it->first == v) items_.erase(it);
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  const std::vector<std::pair<VarIndex, Value>>& items() const { return items_; }

  std::vector<VarIndex> vars() const {
    std::vector<VarIndex> v;
    v.reserve(items_.size());
    for (const auto& p : items_) v.push_back(p.first);
    return v;
  }

  bool overlaps(const PartialSetting& o) const {
    for (const auto& p : o.items_)
      if (contains(p.first)) return true;
    return false;
  }

  /// Union of two settings over disjoint variable sets.
  PartialSetting merged(const PartialSetting& o) const {
    if (overlaps(o))
      throw ModelError(ErrorCode::OverlappingSets, "merged settings must be disjoint");
    PartialSetting r = *this;
    for (const auto& p : o.items_) r.set(p.first, p.second);
    return r;
  }

  /// Sub-setting over the given variables (which must all be present).
  PartialSetting restricted_to(const std::vector<VarIndex>& vs) const {
    PartialSetting r;
    for (VarIndex v : vs) {
      auto val = get(v);
      if (!val)
        throw ModelError(ErrorCode::UnknownVariable, "restriction to absent variable");
      r.set(v, *val);
    }
    return r;
  }

  bool operator==(const PartialSetting& o) const { return items_ == o.items_; }
  bool operator!=(const PartialSetting& o) const { return !(*this == o); }

  /// Lexicographic order on (vars, values); used for deterministic output.
  bool operator<(const PartialSetting& o) const { return items_ < o.items_; }

 private:
  std::vector<std::pair<VarIndex, Value>> items_;
};

using Intervention = PartialSetting;

/// Iterate all assignments of `sizes` (mixed radix); f is called with the digit vector.
/// Returns false if some call of f returned false (early stop).
template <typename F>
bool for_each_assignment(const std::vector<int>& sizes, F&& f) {
  std::vector<Value> digits(sizes.size(), 0);
  for (int s : sizes)
    if (s <= 0) return true;  // empty range: no assignments
  while (true) {
    if (!f(digits)) return false;
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      if (++digits[i] < sizes[i]) break;
      digits[i] = 0;
    }
    if (i == digits.size()) return true;
  }
}

}  // namespace causal
