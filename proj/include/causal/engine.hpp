#pragma once

#include <vector>

#include "causal/model.hpp"

namespace causal {

/// Memoized solve() results over the full intervention-by-context grid.
///
/// An intervention is coded as one digit per endogenous variable: 0 leaves the
/// equation in place, k forces value k-1. When the grid fits under the byte cap
/// the worlds live in one lazily-filled dense table; otherwise each lookup
/// solves directly.
class WorldTable {
 public:
  explicit WorldTable(const CausalModel& m, long long cap_bytes = 1LL << 27) : m_(&m) {
    if (!m.finalized() || !m.check_recursive().ok)
      throw ModelError(ErrorCode::CyclicModel, "world table needs a finalized acyclic model");
    n_ = m.num_endogenous();
    num_ctx_ = m.num_contexts();
    ctx_sizes_.resize(m.num_exogenous());
    for (int u = 0; u < m.num_exogenous(); ++u) ctx_sizes_[u] = m.exo_range(u).size();
    long long codes = 1;
    bool fits = true;
    for (int v = 0; v < n_; ++v) {
      codes *= m.range(v).size() + 1;
      if (codes > cap_bytes) {
        fits = false;
        break;
      }
    }
    if (fits && codes * num_ctx_ * (n_ + 1) <= cap_bytes) {
      num_codes_ = codes;
      strides_.resize(n_);
      long long s = 1;
      for (int v = 0; v < n_; ++v) {
        strides_[v] = s;
        s *= m.range(v).size() + 1;
      }
      table_.assign(codes * num_ctx_ * n_, 0);
      filled_.assign(codes * num_ctx_, 0);
      contexts_.reserve(num_ctx_);
      Context u(m.num_exogenous(), 0);
      for_each_assignment(ctx_sizes_, [&](const std::vector<Value>& d) {
        u.assign(d.begin(), d.end());
        contexts_.push_back(u);
        return true;
      });
    }
  }

  const CausalModel& model() const { return *m_; }
  int num_vars() const { return n_; }
  long long num_contexts() const { return num_ctx_; }
  bool dense() const { return num_codes_ != 0; }

  /// Codes match enumeration order: index 0 varies fastest.
  Context context_at(long long code) const {
    if (dense()) return contexts_[code];
    Context u(ctx_sizes_.size());
    for (std::size_t i = 0; i < ctx_sizes_.size(); ++i) {
      u[i] = static_cast<Value>(code % ctx_sizes_[i]);
      code /= ctx_sizes_[i];
    }
    return u;
  }

  long long context_code(const Context& u) const {
    long long code = 0, stride = 1;
    for (std::size_t i = 0; i < ctx_sizes_.size(); ++i) {
      code += stride * u[i];
      stride *= ctx_sizes_[i];
    }
    return code;
  }

  /// World under the intervention given by `digits` (size n, 0 = free) in the
  /// coded context. The pointer stays valid until the next non-dense lookup.
  const Value* world(const std::vector<int>& digits, long long ctx_code) {
    if (dense()) {
      long long code = 0;
      for (int v = 0; v < n_; ++v) code += strides_[v] * digits[v];
      long long slot = code * num_ctx_ + ctx_code;
      if (!filled_[slot]) {
        PartialSetting iv;
        for (int v = 0; v < n_; ++v)
          if (digits[v]) iv.set(v, static_cast<Value>(digits[v] - 1));
        World w = m_->solve(contexts_[ctx_code], iv);
        std::copy(w.begin(), w.end(), table_.begin() + slot * n_);
        filled_[slot] = 1;
      }
      return table_.data() + slot * n_;
    }
    PartialSetting iv;
    for (int v = 0; v < n_; ++v)
      if (digits[v]) iv.set(v, static_cast<Value>(digits[v] - 1));
    scratch_ = m_->solve(context_at(ctx_code), iv);
    return scratch_.data();
  }

 private:
  const CausalModel* m_;
  int n_ = 0;
  long long num_ctx_ = 0, num_codes_ = 0;
  std::vector<int> ctx_sizes_;
  std::vector<long long> strides_;
  std::vector<Value> table_;
  std::vector<char> filled_;
  std::vector<Context> contexts_;
  World scratch_;
};

}  // namespace causal
