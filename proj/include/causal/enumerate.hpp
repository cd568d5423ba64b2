#pragma once

// Bounded model families for the brute-force verification harness: an
// exhaustive layout (binary roots plus non-root boolean equations over at most
// two parents, each distinct function counted once) and a seeded random layout
// for larger models.  Every generated model is normalized and acyclic by
// construction.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "causal/expr.hpp"
#include "causal/model.hpp"
#include "causal/types.hpp"

namespace causal {

struct ModelFamily {
  bool sampled = false;
  // exhaustive layout: `roots` binary root variables, then 0..max_nonroot
  // binary non-root variables whose equations use at most max_parents (<= 2)
  // earlier variables
  int roots = 2;
  int max_nonroot = 3;
  int max_parents = 2;
  // sampled layout: sample_count models of min_vars..max_vars endogenous
  // variables (roots first), ranges of 2..max_range values, reproducible per
  // seed
  int sample_count = 10000;
  int min_vars = 4;
  int max_vars = 5;
  int max_range = 3;
  std::uint64_t seed = 0;
  // refuse to enumerate more models than this
  long long max_models = 200000;

  static ModelFamily exhaustive(int roots = 2, int max_nonroot = 3, int max_parents = 2) {
    ModelFamily f;
    f.roots = roots;
    f.max_nonroot = max_nonroot;
    f.max_parents = max_parents;
    return f;
  }

  static ModelFamily sample(int count, std::uint64_t seed = 0, int min_vars = 4, int max_vars = 5,
                            int max_range = 3) {
    ModelFamily f;
    f.sampled = true;
    f.sample_count = count;
    f.seed = seed;
    f.min_vars = min_vars;
    f.max_vars = max_vars;
    f.max_range = max_range;
    return f;
  }

  std::string describe() const {
    if (sampled)
      return "sampled family: " + std::to_string(sample_count) + " models, " +
             std::to_string(min_vars) + "-" + std::to_string(max_vars) + " variables, ranges <= " +
             std::to_string(max_range) + ", seed " + std::to_string(seed);
    return "exhaustive family: " + std::to_string(roots) + " binary roots, <= " +
           std::to_string(max_nonroot) + " non-root binary variables, <= " +
           std::to_string(max_parents) + " parents per equation";
  }
};

namespace detail {

// One equation choice: parent positions into the list of earlier endogenous
// variables plus a dense row-major table (first parent most significant).
struct FnChoice {
  std::vector<int> parents;
  std::vector<Value> values;
};

// All distinct boolean functions of at most max_parents of the k earlier
// variables, each listed once under its essential arity (a binary function
// that ignores an argument is already listed as unary or constant).
inline std::vector<FnChoice> function_catalog(int k, int max_parents) {
  std::vector<FnChoice> out;
  out.push_back({{}, {0}});
  out.push_back({{}, {1}});
  if (max_parents >= 1)
    for (int p = 0; p < k; ++p) {
      out.push_back({{p}, {0, 1}});
      out.push_back({{p}, {1, 0}});
    }
  if (max_parents >= 2)
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q)
        for (int t = 0; t < 16; ++t) {
          std::vector<Value> tt(4);
          for (int row = 0; row < 4; ++row) tt[row] = (t >> row) & 1;
          bool ess_p = tt[0] != tt[2] || tt[1] != tt[3];  // row = 2*vp + vq
          bool ess_q = tt[0] != tt[1] || tt[2] != tt[3];
          if (ess_p && ess_q) out.push_back({{p, q}, tt});
        }
  return out;
}

inline CausalModel build_exhaustive_model(const ModelFamily& f, int nonroot,
                                          const std::vector<const FnChoice*>& choices) {
  CausalModel m;
  std::vector<std::string> earlier;
  for (int r = 0; r < f.roots; ++r) {
    std::string name = "R" + std::to_string(r + 1);
    m.add_exogenous("U" + std::to_string(r + 1), binary_range());
    m.add_endogenous(name, binary_range());
    m.set_equation(name, Expr::var("U" + std::to_string(r + 1)));
    earlier.push_back(name);
  }
  for (int i = 0; i < nonroot; ++i) {
    std::string name = "V" + std::to_string(i + 1);
    m.add_endogenous(name, binary_range());
    const FnChoice& c = *choices[i];
    std::vector<std::string> refs;
    for (int p : c.parents) refs.push_back(earlier[p]);
    m.set_equation(name, Expr::table(std::move(refs), c.values));
    earlier.push_back(name);
  }
  m.finalize();
  return m;
}

// Bounded draw from the engine directly: std::mt19937_64 output is fully
// specified, distribution classes are not, so streams stay identical across
// standard libraries.
inline std::uint64_t draw(std::mt19937_64& g, std::uint64_t n) { return g() % n; }

inline CausalModel build_sampled_model(const ModelFamily& f, std::mt19937_64& g) {
  int span = f.max_vars - f.min_vars + 1;
  int n = f.min_vars + static_cast<int>(draw(g, static_cast<std::uint64_t>(span)));
  int n_roots = n <= 1 ? n : 1 + static_cast<int>(draw(g, 2));
  std::vector<int> sizes(n);
  for (int i = 0; i < n; ++i) sizes[i] = 2 + static_cast<int>(draw(g, f.max_range - 1));
  auto make_range = [](int size) {
    std::vector<std::string> labels;
    for (int v = 0; v < size; ++v) labels.push_back(std::to_string(v));
    return Range{std::move(labels)};
  };
  CausalModel m;
  std::vector<std::string> names(n);
  for (int i = 0; i < n_roots; ++i) {
    names[i] = "R" + std::to_string(i + 1);
    m.add_exogenous("U" + std::to_string(i + 1), make_range(sizes[i]));
    m.add_endogenous(names[i], make_range(sizes[i]));
    m.set_equation(names[i], Expr::var("U" + std::to_string(i + 1)));
  }
  for (int i = n_roots; i < n; ++i) {
    names[i] = "V" + std::to_string(i - n_roots + 1);
    m.add_endogenous(names[i], make_range(sizes[i]));
    int avail = i;
    int k = 1 + static_cast<int>(draw(g, static_cast<std::uint64_t>(std::min(f.max_parents, avail))));
    std::vector<int> pool(avail);
    for (int p = 0; p < avail; ++p) pool[p] = p;
    for (int p = 0; p < k; ++p)
      std::swap(pool[p], pool[p + draw(g, static_cast<std::uint64_t>(avail - p))]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    long long rows = 1;
    std::vector<std::string> refs;
    for (int p : pool) {
      refs.push_back(names[p]);
      rows *= sizes[p];
    }
    std::vector<Value> values(rows);
    for (auto& v : values) v = static_cast<Value>(draw(g, sizes[i]));
    m.set_equation(names[i], Expr::table(std::move(refs), std::move(values)));
  }
  m.finalize();
  return m;
}

}  // namespace detail

/// Exact model count for `f` (the sample count in sampled mode).  Does not
/// apply the max_models cap.
inline long long count_models(const ModelFamily& f) {
  if (f.sampled) return f.min_vars > f.max_vars || f.max_vars == 0 ? 0 : f.sample_count;
  if (f.roots == 0 && f.max_nonroot == 0) return 0;
  long long total = 0, layer = 1;
  for (int nonroot = 0; nonroot <= f.max_nonroot; ++nonroot) {
    total += layer;
    int k = f.roots + nonroot;
    long long choices = 2;
    if (f.max_parents >= 1) choices += 2LL * k;
    if (f.max_parents >= 2) choices += 10LL * k * (k - 1) / 2;
    layer *= choices;
  }
  return total;
}

/// Stream the family through `visit` in a fixed deterministic order; stop
/// early when `visit` returns false.  Returns the number of models visited.
/// Throws FamilyTooLarge when the family exceeds its max_models cap.
inline long long enumerate_models(const ModelFamily& f,
                                  const std::function<bool(const CausalModel&)>& visit) {
  if (f.max_parents > 2 && !f.sampled)
    throw ModelError(ErrorCode::BadQuery, "exhaustive equation universe supports <= 2 parents");
  long long total = count_models(f);
  if (total > f.max_models)
    throw ModelError(ErrorCode::FamilyTooLarge, "family has " + std::to_string(total) +
                                                    " models, cap is " +
                                                    std::to_string(f.max_models));
  if (total == 0) return 0;
  long long visited = 0;
  if (f.sampled) {
    std::mt19937_64 g(f.seed);
    for (int i = 0; i < f.sample_count; ++i) {
      CausalModel m = detail::build_sampled_model(f, g);
      ++visited;
      if (!visit(m)) return visited;
    }
    return visited;
  }
  // per-position catalogs: position i sees roots + i earlier variables
  std::vector<std::vector<detail::FnChoice>> catalogs;
  for (int i = 0; i < f.max_nonroot; ++i)
    catalogs.push_back(detail::function_catalog(f.roots + i, f.max_parents));
  for (int nonroot = 0; nonroot <= f.max_nonroot; ++nonroot) {
    std::vector<std::size_t> idx(nonroot, 0);
    std::vector<const detail::FnChoice*> choices(nonroot);
    bool more = true;
    while (more) {
      for (int i = 0; i < nonroot; ++i) choices[i] = &catalogs[i][idx[i]];
      CausalModel m = detail::build_exhaustive_model(f, nonroot, choices);
      ++visited;
      if (!visit(m)) return visited;
      more = false;  // mixed-radix increment, last position fastest
      for (int i = nonroot - 1; i >= 0; --i) {
        if (++idx[i] < catalogs[i].size()) {
          more = true;
          break;
        }
        idx[i] = 0;
      }
    }
  }
  return visited;
}

/// Materialize the whole family; intended for small exhaustive families.
inline std::vector<CausalModel> collect_models(const ModelFamily& f) {
  std::vector<CausalModel> out;
  enumerate_models(f, [&](const CausalModel& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

}  // namespace causal
