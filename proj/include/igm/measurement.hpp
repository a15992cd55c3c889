#pragma once

// Measurement between cell-rigid graphings, circuits, projects,
// orthogonality and the decision of a result project against the reject
// test family.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "igm/cells.hpp"
#include "igm/errors.hpp"
#include "igm/graphings.hpp"
#include "igm/rational.hpp"

namespace igm {

/// Exact nonnegative rational or +infinity. Series-mode results carry the
/// certified bound on the neglected tail.
struct MeasurementValue {
  bool infinite = false;
  Rational value{0};
  Rational tail_bound{0};

  static MeasurementValue finite(Rational v) { return {false, std::move(v), 0}; }
  static MeasurementValue inf() { return {true, 0, 0}; }
  bool is_zero() const { return !infinite && value == 0; }
  std::string to_string() const { return infinite ? "inf" : igm::to_string(value); }
  friend bool operator==(const MeasurementValue &a, const MeasurementValue &b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

/// One step of an alternating cycle: an edge of one side together with the
/// dialect state the other side holds while it is taken.
struct CircuitLabel {
  int side = 0;
  int edge = 0;
  int other = 0;
  friend auto operator<=>(const CircuitLabel &, const CircuitLabel &) = default;
};

struct CircuitOrbit {
  std::vector<std::int64_t> cells; // start cells visited, in order
  Rational measure{0};            // total measure of those cells
  std::int64_t period = 0;        // return time of almost every point
};

struct Circuit {
  std::vector<CircuitLabel> labels; // primitive, minimal rotation
  std::vector<CircuitOrbit> orbits;
  Weight weight;
};

enum class MeasureMode { exact, series };

struct MeasureOptions {
  MeasureMode mode = MeasureMode::exact;
  Rational tolerance = Rational(1) / Rational(BigInt(1) << 30);
};

namespace detail {

// Alternating product graph: node = (cell, state of f, state of g, side to
// move next). Arrows of side s out of a node use the arrows of that
// graphing whose in-state matches.
class ProductGraph {
public:
  ProductGraph(const GraphingRep &f, const GraphingRep &g)
      : grid_(detect_grid({&f, &g})), parts_{CellGraphing(f, grid_), CellGraphing(g, grid_)},
        nd_{f.dialect_size, g.dialect_size} {}

  const CellGrid &grid() const { return grid_; }
  const CellGraphing &part(int side) const { return parts_[side]; }

  struct Node {
    std::int64_t cell;
    int state[2];
    int next;
  };
  struct Step {
    std::size_t to;
    CircuitLabel label;
    const Arrow *arrow;
  };

  // Enumerate nodes with at least one outgoing step and all their steps.
  void build() {
    for (int side = 0; side < 2; ++side)
      parts_[side].for_each([&](const Arrow &a) {
        for (int o = 0; o < nd_[1 - side]; ++o) {
          int st[2];
          st[side] = a.in;
          st[1 - side] = o;
          id({a.from, {st[0], st[1]}, side});
        }
      });
    steps_.resize(nodes_.size());
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      Node n = nodes_[v];
      int s = n.next;
      for (const Arrow &a : parts_[s].out(n.cell, n.state[s])) {
        Node m = n;
        m.cell = a.to;
        m.state[s] = a.out;
        m.next = 1 - s;
        steps_[v].push_back({id(m), {s, a.edge, n.state[1 - s]}, &a});
      }
      if (steps_.size() < nodes_.size())
        steps_.resize(nodes_.size());
    }
  }

  std::size_t size() const { return nodes_.size(); }
  const Node &node(std::size_t v) const { return nodes_[v]; }
  const std::vector<Step> &steps(std::size_t v) const { return steps_[v]; }

  std::size_t id(const Node &n) {
    std::int64_t k = ((n.cell * nd_[0] + n.state[0]) * nd_[1] + n.state[1]) * 2 + n.next;
    auto [it, fresh] = index_.emplace(k, nodes_.size());
    if (fresh)
      nodes_.push_back(n);
    return it->second;
  }

private:
  CellGrid grid_;
  CellGraphing parts_[2];
  int nd_[2];
  std::vector<Node> nodes_;
  std::vector<std::vector<Step>> steps_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

// Iterative Tarjan; returns the component index of every node.
inline std::vector<std::size_t> strong_components(const ProductGraph &pg) {
  std::size_t n = pg.size(), counter = 0, comps = 0;
  const std::size_t unset = std::size_t(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset)
      continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto &[v, i] = call.back();
      const auto &st = pg.steps(v);
      if (i < st.size()) {
        std::size_t w = st[i++].to;
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        while (true) {
          std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
          if (w == done)
            break;
        }
        ++comps;
      }
    }
  }
  return comp;
}

inline void require_measure_preserving(const GraphingRep &g, const char *who) {
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (!g.edges[k].map.measure_preserving())
      throw NotMeasurePreserving(std::string(who) + " edge " + std::to_string(k) +
                                 " does not preserve measure");
}

// Rotate to the lexicographically least rotation after reducing to the
// primitive root.
inline std::vector<CircuitLabel> canonical_cycle(std::vector<CircuitLabel> s) {
  std::size_t n = s.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p)
      continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i)
      periodic = s[i] == s[i - p];
    if (periodic) {
      s.resize(p);
      break;
    }
  }
  std::vector<CircuitLabel> best = s;
  for (std::size_t r = 1; r < s.size(); ++r) {
    std::vector<CircuitLabel> rot(s.begin() + r, s.end());
    rot.insert(rot.end(), s.begin(), s.begin() + r);
    if (rot < best)
      best = rot;
  }
  return best;
}

inline std::int64_t perm_order(const std::vector<int> &p) {
  std::int64_t ord = 1;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i])
      continue;
    std::int64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = std::size_t(p[j] - 1)) {
      seen[j] = 1;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

// Orbit data of a primitive label sequence: run it from every cell and
// decompose the resulting partial injection on cells into cycles.
inline Circuit orbit_data(const ProductGraph &pg, std::vector<CircuitLabel> labels) {
  Circuit c;
  c.labels = std::move(labels);
  const auto &first = c.labels.front();
  std::map<std::int64_t, std::pair<std::int64_t, std::vector<int>>> step;
  const CellGrid &grid = pg.grid();
  bool weight_set = false;
  for (std::int64_t cell = 0; cell < grid.size(); ++cell) {
    std::int64_t cur = cell;
    std::vector<int> perm(grid.dims());
    std::iota(perm.begin(), perm.end(), 1);
    Weight w;
    bool ok = true;
    for (const auto &l : c.labels) {
      const Arrow *hit = nullptr;
      const auto &part = pg.part(l.side);
      // the in-state of an edge is fixed, so scan every state's arrows
      for (int st = 0; st < part.dialect_size() && !hit; ++st)
        for (const Arrow &a : part.out(cur, st))
          if (a.edge == l.edge) {
            hit = &a;
            break;
          }
      if (!hit) {
        ok = false;
        break;
      }
      std::vector<int> np(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i)
        np[i] = hit->perm[perm[i] - 1];
      perm = std::move(np);
      cur = hit->to;
      w = w * hit->weight;
    }
    (void)first;
    if (!ok)
      continue;
    if (!weight_set) {
      c.weight = w;
      weight_set = true;
    }
    step[cell] = {cur, perm};
  }
  std::set<std::int64_t> done;
  for (auto &[start, _] : step) {
    if (done.count(start))
      continue;
    std::vector<std::int64_t> orbit;
    std::vector<int> perm(grid.dims());
    std::iota(perm.begin(), perm.end(), 1);
    std::int64_t cur = start;
    bool closed = false;
    while (true) {
      auto it = step.find(cur);
      if (it == step.end() || done.count(cur))
        break;
      done.insert(cur);
      orbit.push_back(cur);
      std::vector<int> np(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i)
        np[i] = it->second.second[perm[i] - 1];
      perm = std::move(np);
      cur = it->second.first;
      if (cur == start) {
        closed = true;
        break;
      }
    }
    if (!closed)
      continue; // chains return nowhere: infinite period, no contribution
    CircuitOrbit o;
    o.cells = orbit;
    o.measure = grid.cell_measure() * Rational(std::int64_t(orbit.size()));
    o.period = std::int64_t(orbit.size()) * perm_order(perm);
    c.orbits.push_back(std::move(o));
  }
  return c;
}

// Sum over k >= 1 of m(w^(k rho / g)) * g / rho, g = gcd(k, rho), times the
// orbit measure; closed form by grouping k modulo rho.
inline Rational orbit_series(const Rational &a, std::int64_t rho, const Rational &measure) {
  Rational total = 0;
  for (std::int64_t r = 1; r <= rho; ++r) {
    std::int64_t g = std::gcd(r, rho);
    Rational head = igm::pow(a, std::uint64_t(r * rho / g));
    Rational ratio = igm::pow(a, std::uint64_t(rho * rho / g));
    total += head / (1 - ratio) * Rational(g) / Rational(rho);
  }
  return total * measure;
}

inline Rational circuit_value(const Circuit &c) {
  if (!c.weight.flag)
    return 0;
  Rational sum = 0;
  for (auto &o : c.orbits)
    sum += orbit_series(c.weight.a, o.period, o.measure);
  return sum;
}

// Closed walks of length <= max_len, reduced to canonical primitive label
// sequences.
inline std::set<std::vector<CircuitLabel>> closed_label_cycles(const ProductGraph &pg,
                                                                 std::size_t max_len,
                                                                 std::size_t cap) {
  std::set<std::vector<CircuitLabel>> out;
  auto comp = strong_components(pg);
  std::vector<CircuitLabel> path;
  std::size_t explored = 0;
  for (std::size_t root = 0; root < pg.size(); ++root) {
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
      if (++explored > cap)
        throw IterationCapExceeded("circuit enumeration exceeded " + std::to_string(cap) +
                                   " walk prefixes");
      for (const auto &s : pg.steps(v)) {
        if (comp[s.to] != comp[root])
          continue;
        path.push_back(s.label);
        if (s.to == root)
          out.insert(canonical_cycle(path));
        if (path.size() < max_len)
          dfs(s.to);
        path.pop_back();
      }
    };
    dfs(root);
  }
  return out;
}

// Elementary node cycles (each cycle found from its least node).
inline std::set<std::vector<CircuitLabel>> elementary_label_cycles(const ProductGraph &pg,
                                                                     std::size_t cap) {
  std::set<std::vector<CircuitLabel>> out;
  auto comp = strong_components(pg);
  std::vector<CircuitLabel> path;
  std::vector<char> on_path(pg.size(), 0);
  std::size_t explored = 0;
  for (std::size_t root = 0; root < pg.size(); ++root) {
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
      if (++explored > cap)
        throw IterationCapExceeded("circuit enumeration exceeded " + std::to_string(cap) +
                                   " walk prefixes");
      on_path[v] = 1;
      for (const auto &s : pg.steps(v)) {
        if (s.to < root || comp[s.to] != comp[root])
          continue;
        path.push_back(s.label);
        if (s.to == root)
          out.insert(canonical_cycle(path));
        else if (!on_path[s.to])
          dfs(s.to);
        path.pop_back();
      }
      on_path[v] = 0;
    };
    dfs(root);
  }
  return out;
}

} // namespace detail

/// Primitive circuits (up to rotation) arising from elementary cycles of the
/// alternating cell graph, with their orbit decomposition. Powers are not
/// listed; they are accounted for analytically by the measurement.
inline std::vector<Circuit> circuits(const GraphingRep &f, const GraphingRep &g,
                                     std::size_t cap = 1000000) {
  detail::ProductGraph pg(f, g);
  pg.build();
  std::vector<Circuit> out;
  for (auto &labels : detail::elementary_label_cycles(pg, cap)) {
    Circuit c = detail::orbit_data(pg, labels);
    if (!c.orbits.empty())
      out.push_back(std::move(c));
  }
  return out;
}

/// Measurement of two measure-preserving cell-rigid graphings under the
/// parameter map m(a, flag) = a * flag.
inline MeasurementValue measure_graphings(const GraphingRep &f, const GraphingRep &g,
                                          const MeasureOptions &opts = {}) {
  detail::require_measure_preserving(f, "left");
  detail::require_measure_preserving(g, "right");
  detail::ProductGraph pg(f, g);
  pg.build();
  auto comp = detail::strong_components(pg);
  bool non_unit = false;
  Rational amax[2] = {0, 0};
  std::size_t degree[2] = {0, 0};
  bool flagged_cycle = false;
  for (std::size_t v = 0; v < pg.size(); ++v) {
    int side = pg.node(v).next;
    degree[side] = std::max(degree[side], pg.steps(v).size());
    for (const auto &s : pg.steps(v)) {
      if (comp[s.to] != comp[v])
        continue; // not on any cycle
      const Weight &w = s.arrow->weight;
      amax[side] = std::max(amax[side], w.a);
      if (w.a != 1)
        non_unit = true;
      if (w.flag)
        flagged_cycle = true;
    }
  }
  if (opts.mode == MeasureMode::exact) {
    if (non_unit)
      throw InvalidArgument("exact measurement needs weights with a = 1 on cycles; "
                            "use series mode");
    return flagged_cycle ? MeasurementValue::inf() : MeasurementValue::finite(0);
  }
  if (!flagged_cycle)
    return MeasurementValue::finite(0);
  // Closed walks alternate sides, so they are bounded two steps at a time.
  Rational ratio = amax[0] * Rational(std::int64_t(degree[0])) * amax[1] *
                   Rational(std::int64_t(degree[1]));
  if (ratio >= 1)
    throw SeriesNotCertified("per-round growth " + to_string(ratio) + " is not below 1");
  // Every rooted closed walk of 2m steps contributes at most
  // cell_measure * ratio^m; pick the length so that the tail is below tol.
  Rational scale = pg.grid().cell_measure() * Rational(std::int64_t(pg.size()));
  std::size_t len = 2;
  Rational tail = scale * ratio * ratio / (1 - ratio);
  while (tail >= opts.tolerance) {
    tail *= ratio;
    len += 2;
  }
  Rational total = 0;
  for (auto &labels : detail::closed_label_cycles(pg, len, 50000000))
    total += detail::circuit_value(detail::orbit_data(pg, labels));
  MeasurementValue mv = MeasurementValue::finite(total);
  mv.tail_bound = tail;
  return mv;
}

/// Measurement of projects: finite part linear in the test symbol plus a
/// possible signed infinity.
struct ProjectMeasure {
  Scalar finite;
  int infinity = 0; // +1, -1 or 0

  std::string to_string() const {
    if (infinity)
      return infinity > 0 ? "inf" : "-inf";
    std::string s = igm::to_string(finite.value);
    if (finite.zeta != 0)
      s += (finite.zeta >= 0 ? " + " : " - ") + igm::to_string(abs(finite.zeta)) + "*zeta";
    return s;
  }
};

inline ProjectMeasure measure_projects(const Project &p, const Project &q,
                                       const MeasureOptions &opts = {}) {
  if (!p.support().equal_ae(q.support()))
    throw SupportMismatch("projects have different supports");
  ProjectMeasure out;
  out.finite = p.wrapper * q.coefficient_sum() + q.wrapper * p.coefficient_sum();
  bool plus = false, minus = false;
  for (auto &a : p.terms)
    for (auto &b : q.terms) {
      Rational c = a.coefficient * b.coefficient;
      if (c == 0)
        continue;
      MeasurementValue m = measure_graphings(a.graphing, b.graphing, opts);
      if (m.infinite)
        (c > 0 ? plus : minus) = true;
      else
        out.finite = out.finite + Scalar::constant(c * m.value);
    }
  if (plus && minus)
    throw IndeterminateMeasure("both +inf and -inf occur in the project measurement");
  out.infinity = plus ? 1 : minus ? -1 : 0;
  return out;
}

/// Orthogonality: measurement neither 0 nor infinite. With a symbolic test
/// parameter the answer must hold for every nonzero value of it.
inline bool orthogonal(const Project &p, const Project &q, const MeasureOptions &opts = {}) {
  ProjectMeasure m = measure_projects(p, q, opts);
  if (m.infinity)
    return false;
  if (m.finite.zeta == 0)
    return m.finite.value != 0;
  return m.finite.value == 0;
}

/// Tests: the family {(zeta, T) : zeta != 0} for a fixed graphing T.
struct TestFamily {
  GraphingRep test;
  Project member() const { return Project::of(test, Scalar::symbol()); }
};

/// The reject test: one flagged identity loop on the reject block, over the
/// given support.
inline TestFamily reject_test(std::int64_t reject_block, const MSet &support) {
  GraphingRep t;
  t.support = support;
  t.dialect_size = 1;
  t.edges.push_back({MSet::block(reject_block), 0, 0, Descriptor::identity(), Weight::flagged()});
  return {t};
}

enum class Verdict { pass, fail };

namespace detail {

// Alternating cycles against a loop test on block r are cycles of the
// graphing's own arrows that stay inside block r.
inline bool has_block_cycle(const GraphingRep &g, std::int64_t block) {
  GraphingRep loop;
  loop.support = MSet::block(block);
  CellGrid grid = detect_grid({&g, &loop});
  CellGraphing cg(g, grid);
  std::map<std::pair<std::int64_t, int>, int> color;
  std::vector<std::pair<std::int64_t, int>> starts;
  cg.for_each([&](const Arrow &a) {
    if (grid.block_of(a.from) == block)
      starts.push_back({a.from, a.in});
  });
  for (auto &s0 : starts) {
    if (color[s0])
      continue;
    std::vector<std::pair<std::pair<std::int64_t, int>, std::size_t>> stack{{s0, 0}};
    color[s0] = 1;
    while (!stack.empty()) {
      auto &[v, i] = stack.back();
      auto arrows = cg.out(v.first, v.second);
      bool pushed = false;
      while (i < arrows.size()) {
        const Arrow &a = arrows[i++];
        if (grid.block_of(a.to) != block)
          continue;
        std::pair<std::int64_t, int> w{a.to, a.out};
        int &cw = color[w];
        if (cw == 1)
          return true;
        if (cw == 0) {
          cw = 1;
          stack.push_back({w, 0});
          pushed = true;
          break;
        }
      }
      if (!pushed && !stack.empty() && stack.back().second >= cg.out(stack.back().first.first,
                                                                      stack.back().first.second)
                                                                    .size()) {
        color[stack.back().first] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

} // namespace detail

/// Decide a result project against a test family through orthogonality and,
/// independently, through a direct cycle search on the test's loop block.
/// The two must agree.
inline Verdict decide_against_test(const Project &p, const TestFamily &t) {
  bool ortho = orthogonal(p, t.member());
  if (t.test.edges.size() == 1 && p.terms.size() == 1 &&
      t.test.edges[0].map.is_identity() && t.test.edges[0].source.boxes().size() == 1) {
    const Box &b = t.test.edges[0].source.boxes()[0];
    std::int64_t block = to_int64(floor_of(b.line().lo));
    bool cycle = detail::has_block_cycle(p.terms[0].graphing, block);
    if (cycle == ortho)
      throw InternalError("orthogonality and cycle search disagree");
  }
  return ortho ? Verdict::pass : Verdict::fail;
}

} // namespace igm
