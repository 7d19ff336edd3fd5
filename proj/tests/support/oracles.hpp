// Reference implementations used only by the tests. They trade speed for
// obviousness and share no code with the library.
#ifndef ECSIM_TESTS_ORACLES_HPP
#define ECSIM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecsim/model.hpp"

namespace oracle {

// Adjacency matrix: dep[v][w] means step v depends on step w.
struct Digraph {
  int n = 0;
  std::vector<std::vector<bool>> dep;

  explicit Digraph(int size) : n(size), dep(size, std::vector<bool>(size, false)) {}
};

inline std::string step_name(int v) { return std::string(1, static_cast<char>('a' + v)); }

// Step ids are a, b, c, ... but listed in `listing` order so that the model's
// declaration order differs from id order.
inline ecsim::EventChainModel to_model(const Digraph& g, const std::vector<int>& listing) {
  ecsim::EventChainModel m;
  m.id = "generated";
  m.viewpoint = ecsim::Viewpoint::kBlackBox;
  for (int v : listing) {
    ecsim::EventChainStep step;
    step.id = step_name(v);
    for (int w = 0; w < g.n; ++w) {
      if (g.dep[v][w]) step.depends_on.push_back(step_name(w));
    }
    m.steps.push_back(step);
  }
  return m;
}

// reach[v][w]: v depends on w through one or more edges (Floyd-Warshall).
inline std::vector<std::vector<bool>> closure(const Digraph& g) {
  auto reach = g.dep;
  for (int k = 0; k < g.n; ++k)
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  return reach;
}

// Expected (rule, subjects) pairs for the graph rules of validate_model.
inline std::set<std::pair<std::string, std::vector<std::string>>> expected_graph_findings(
    const Digraph& g) {
  std::set<std::pair<std::string, std::vector<std::string>>> out;
  const auto reach = closure(g);

  std::vector<bool> grouped(g.n, false);
  for (int v = 0; v < g.n; ++v) {
    if (!reach[v][v] || grouped[v]) continue;
    std::vector<std::string> component;
    for (int w = 0; w < g.n; ++w) {
      if (w == v || (reach[v][w] && reach[w][v])) {
        component.push_back(step_name(w));
        grouped[w] = true;
      }
    }
    out.insert({"acyclic", component});
  }

  std::vector<int> starts;
  for (int v = 0; v < g.n; ++v) {
    if (std::none_of(g.dep[v].begin(), g.dep[v].end(), [](bool b) { return b; })) {
      starts.push_back(v);
    }
  }
  if (starts.size() != 1) {
    std::vector<std::string> ids;
    for (int v : starts) ids.push_back(step_name(v));
    out.insert({"unique-start-event", ids});
  } else {
    const int s = starts.front();
    for (int v = 0; v < g.n; ++v) {
      if (v != s && !reach[v][s]) out.insert({"start-reachability", {step_name(v)}});
    }
  }
  return out;
}

// Lexicographically smallest order in which every step follows its
// dependencies, found by trying all permutations in lexicographic order.
inline std::optional<std::vector<std::string>> smallest_topological_order(const Digraph& g) {
  std::vector<int> perm(g.n);
  for (int i = 0; i < g.n; ++i) perm[i] = i;
  do {
    std::vector<int> position(g.n);
    for (int i = 0; i < g.n; ++i) position[perm[i]] = i;
    bool ok = true;
    for (int v = 0; v < g.n && ok; ++v)
      for (int w = 0; w < g.n && ok; ++w)
        if (g.dep[v][w] && position[w] >= position[v]) ok = false;
    if (ok) {
      std::vector<std::string> ids;
      for (int v : perm) ids.push_back(step_name(v));
      return ids;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

// Calls f(g) for every digraph on n steps; self-loops optional.
template <class F>
void for_each_digraph(int n, bool self_loops, F&& f) {
  std::vector<std::pair<int, int>> slots;
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (v != w || self_loops) slots.push_back({v, w});
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Digraph g(n);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) g.dep[slots[i].first][slots[i].second] = true;
    f(g);
  }
}

// Every DAG on n steps is isomorphic to one whose edges all point from a
// higher to a lower index. Enumerates those edge sets under a fixed scrambling
// relabel, then, when `back_edges` is set, each of them with every single
// reversed edge added (all cycles closed by one edge).
template <class F>
void for_each_dag_shape(int n, bool back_edges, F&& f) {
  std::vector<std::pair<int, int>> forward;
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < v; ++w) forward.push_back({v, w});
  std::vector<int> relabel(n);
  for (int i = 0; i < n; ++i) relabel[i] = (i * 3 + 2) % n;
  if (n % 3 == 0)
    for (int i = 0; i < n; ++i) relabel[i] = n - 1 - i;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << forward.size()); ++mask) {
    Digraph g(n);
    for (std::size_t i = 0; i < forward.size(); ++i)
      if (mask >> i & 1) g.dep[relabel[forward[i].first]][relabel[forward[i].second]] = true;
    f(g);
    if (!back_edges) continue;
    for (const auto& [v, w] : forward) {
      Digraph cyclic = g;
      cyclic.dep[relabel[w]][relabel[v]] = true;
      f(cyclic);
    }
  }
}

// Declaration order used for generated models: a fixed scramble of ids.
inline std::vector<int> scrambled_listing(int n) {
  std::vector<int> listing(n);
  for (int i = 0; i < n; ++i) listing[i] = n - 1 - i;
  if (n > 2) std::swap(listing[0], listing[n / 2]);
  return listing;
}

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

struct Integrated {
  double v = 0.0;
  double distance = 0.0;
};

// Integrates the ramp-then-constant deceleration with trapezoidal steps of
// `h` seconds: decel = a*t/tr while t < tr, a afterwards, until v reaches 0.
inline Integrated integrate_braking(double v0, double a, double tr, double t_end,
                                    double h = 1e-6) {
  auto decel = [&](double t) { return (tr > 0.0 && t < tr) ? a * t / tr : a; };
  Kahan v;
  v.add(v0);
  Kahan s;
  const auto steps = static_cast<std::int64_t>(std::floor(t_end / h));
  double t = 0.0;
  for (std::int64_t i = 0; i <= steps; ++i) {
    const double t_next = (i == steps) ? t_end : static_cast<double>(i + 1) * h;
    const double dt = t_next - t;
    if (dt <= 0.0) break;
    const double v_now = v.sum;
    const double dv = -0.5 * dt * (decel(t) + decel(t_next));
    const double v_next = v_now + dv;
    if (v_next <= 0.0) {
      // Deceleration is constant (or nearly so) over the final step: stop at
      // the interpolated zero crossing.
      const double fraction = v_now / (v_now - v_next);
      s.add(0.5 * fraction * dt * v_now);
      return {0.0, s.sum};
    }
    s.add(0.5 * dt * (v_now + v_next));
    v.add(dv);
    t = t_next;
  }
  return {v.sum, s.sum};
}

}  // namespace oracle

#endif  // ECSIM_TESTS_ORACLES_HPP
