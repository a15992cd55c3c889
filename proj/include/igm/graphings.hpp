#pragma once

// Graphing representatives over Z x [0,1)^N: weighted, dialected edge sets,
// refinement / equivalence, dialect renaming, projects and their tensor.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "igm/errors.hpp"
#include "igm/microcosm.hpp"
#include "igm/rational.hpp"
#include "igm/space.hpp"

namespace igm {

/// Element of [0,1] x {0,1}. The flag combines by OR so that a cycle through
/// one flagged edge stays flagged.
struct Weight {
  Rational a{1};
  int flag = 0;

  static Weight one() { return {}; }
  static Weight flagged() { return {Rational(1), 1}; }

  Weight operator*(const Weight &o) const { return {a * o.a, std::max(flag, o.flag)}; }
  Weight pow(std::int64_t n) const {
    Weight w;
    w.a = 1;
    w.flag = n > 0 ? flag : 0;
    for (std::int64_t i = 0; i < n; ++i)
      w.a *= a;
    return w;
  }
  /// Parameter map m(a, f) = a * f.
  Rational parameter() const { return flag ? a : Rational(0); }

  friend bool operator==(const Weight &, const Weight &) = default;
  friend bool operator<(const Weight &x, const Weight &y) {
    if (x.a != y.a)
      return x.a < y.a;
    return x.flag < y.flag;
  }
};

struct Edge {
  MSet source;
  int in = 0;
  int out = 0;
  Descriptor map;
  Weight weight;

  MSet target() const { return image(map, source); }
  friend bool operator==(const Edge &, const Edge &) = default;
};

struct GraphingRep {
  MSet support;
  int dialect_size = 1; // dialect is {0, ..., dialect_size - 1}
  std::vector<Edge> edges;

  friend bool operator==(const GraphingRep &, const GraphingRep &) = default;

  /// Largest coordinate index touched by supports, sources or maps.
  int depth() const {
    int d = support.depth();
    for (auto &e : edges)
      d = std::max({d, e.source.depth(), e.map.depth()});
    return d;
  }
};

/// Every source and image lies in support x dialect and every map belongs to
/// the given microcosm. Empty result means valid.
inline std::vector<std::string> validate(const GraphingRep &g,
                                         const MicrocosmSpec &spec) {
  std::vector<std::string> diag;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const Edge &e = g.edges[k];
    std::string tag = "edge " + std::to_string(k) + ": ";
    if (e.in < 0 || e.in >= g.dialect_size || e.out < 0 || e.out >= g.dialect_size)
      diag.push_back(tag + "dialect state out of range");
    if (!e.source.subset_ae(g.support))
      diag.push_back(tag + "source leaves the support");
    if (!e.target().subset_ae(g.support))
      diag.push_back(tag + "image leaves the support");
    if (!member(e.map, spec))
      diag.push_back(tag + "map not in " + spec.name());
  }
  return diag;
}

/// a.e. every point lies in at most one edge source (per dialect state).
inline bool is_deterministic(const GraphingRep &g) {
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (std::size_t j = i + 1; j < g.edges.size(); ++j)
      if (g.edges[i].in == g.edges[j].in &&
          !g.edges[i].source.disjoint_ae(g.edges[j].source))
        return false;
  return true;
}

namespace detail {

inline bool same_label(const Edge &a, const Edge &b) {
  return a.in == b.in && a.out == b.out && a.map == b.map && a.weight == b.weight;
}

} // namespace detail

/// True iff `f` is a refinement of `g`: f's edges split into classes indexed
/// by g's edges, each class partitioning (a.e.) the source of its g-edge with
/// the same map, weight and dialect states.
inline bool refines(const GraphingRep &f, const GraphingRep &g) {
  if (!f.support.equal_ae(g.support) || f.dialect_size != g.dialect_size)
    return false;
  std::vector<std::vector<std::size_t>> candidates(f.edges.size());
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    if (f.edges[i].source.is_null())
      continue;
    live.push_back(i);
    for (std::size_t j = 0; j < g.edges.size(); ++j)
      if (detail::same_label(f.edges[i], g.edges[j]) &&
          f.edges[i].source.subset_ae(g.edges[j].source))
        candidates[i].push_back(j);
    if (candidates[i].empty())
      return false;
  }
  std::vector<std::size_t> assign(f.edges.size(), 0);
  // Backtracking over the (usually unique) class choice of every f-edge.
  std::function<bool(std::size_t)> search = [&](std::size_t pos) -> bool {
    if (pos == live.size()) {
      for (std::size_t j = 0; j < g.edges.size(); ++j) {
        MSet acc;
        Rational total = 0;
        for (std::size_t i : live)
          if (assign[i] == j) {
            acc = acc.unite(f.edges[i].source);
            total += f.edges[i].source.measure();
          }
        // pairwise null overlaps <=> measure is additive over the class
        if (!acc.equal_ae(g.edges[j].source) || total != acc.measure())
          return false;
      }
      return true;
    }
    std::size_t i = live[pos];
    for (std::size_t j : candidates[i]) {
      assign[i] = j;
      if (search(pos + 1))
        return true;
    }
    return false;
  };
  return search(0);
}

/// Equivalence = existence of a common refinement. Decided on the overlay of
/// both source partitions: on every atom the multisets of (in, out, map,
/// weight) labels covering it must coincide.
inline bool equivalent(const GraphingRep &f, const GraphingRep &g) {
  if (!f.support.equal_ae(g.support))
    throw NonComparable("supports differ");
  if (f.dialect_size != g.dialect_size)
    throw NonComparable("dialect sizes differ");
  std::vector<const Box *> all;
  int depth = 0;
  for (auto *gr : {&f, &g})
    for (auto &e : gr->edges)
      for (auto &b : e.source.boxes()) {
        all.push_back(&b);
        depth = std::max(depth, b.depth());
      }
  std::vector<std::vector<Rational>> cuts(depth + 1);
  for (const Box *b : all)
    for (int d = 0; d <= depth; ++d) {
      cuts[d].push_back(b->dim(d).lo);
      cuts[d].push_back(b->dim(d).hi);
    }
  for (auto &c : cuts) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  using Label = std::tuple<int, int, Descriptor, Weight>;
  auto labels_at = [](const GraphingRep &gr, const Box &atom) {
    std::vector<Label> out;
    for (auto &e : gr.edges)
      for (auto &b : e.source.boxes())
        if (b.covers(atom)) {
          out.emplace_back(e.in, e.out, e.map, e.weight);
          break;
        }
    std::sort(out.begin(), out.end());
    return out;
  };
  if (all.empty())
    return true; // every edge has a null source on both sides
  std::vector<std::size_t> idx(depth + 1, 0);
  while (true) {
    std::map<int, Interval> coords;
    for (int d = 1; d <= depth; ++d)
      coords[d] = Interval(cuts[d][idx[d]], cuts[d][idx[d] + 1]);
    Box atom(Interval(cuts[0][idx[0]], cuts[0][idx[0] + 1]), coords);
    if (labels_at(f, atom) != labels_at(g, atom))
      return false;
    int d = depth;
    while (d >= 0 && ++idx[d] + 1 >= cuts[d].size()) {
      idx[d] = 0;
      --d;
    }
    if (d < 0)
      break;
  }
  return true;
}

/// Rename dialect states through an injection {0..size-1} -> N; the new
/// dialect is the initial segment up to the largest image.
inline GraphingRep rename_dialect(const GraphingRep &g,
                                  const std::vector<int> &injection) {
  if (int(injection.size()) != g.dialect_size)
    throw InvalidArgument("renaming must be defined on the whole dialect");
  std::set<int> seen;
  int top = 0;
  for (int v : injection) {
    if (v < 0 || !seen.insert(v).second)
      throw NotInjective("dialect renaming is not injective");
    top = std::max(top, v);
  }
  GraphingRep out = g;
  out.dialect_size = top + 1;
  for (auto &e : out.edges) {
    e.in = injection[e.in];
    e.out = injection[e.out];
  }
  return out;
}

/// Juxtaposition of graphings of disjoint supports; dialect is the product
/// D^f x D^g flattened as df * |D^g| + dg.
inline GraphingRep tensor_graphings(const GraphingRep &f, const GraphingRep &g) {
  if (!f.support.disjoint_ae(g.support))
    throw OverlappingSupports("tensor needs a.e. disjoint supports");
  GraphingRep out;
  out.support = f.support.unite(g.support);
  out.dialect_size = f.dialect_size * g.dialect_size;
  int ng = g.dialect_size;
  for (auto &e : f.edges)
    for (int d = 0; d < ng; ++d)
      out.edges.push_back({e.source, e.in * ng + d, e.out * ng + d, e.map, e.weight});
  for (auto &e : g.edges)
    for (int d = 0; d < f.dialect_size; ++d)
      out.edges.push_back({e.source, d * ng + e.in, d * ng + e.out, e.map, e.weight});
  return out;
}

/// Scalar linear in the symbolic test parameter zeta: value + zeta * coeff.
struct Scalar {
  Rational value{0};
  Rational zeta{0};

  static Scalar constant(Rational v) { return {std::move(v), 0}; }
  static Scalar symbol() { return {0, 1}; }

  Scalar operator+(const Scalar &o) const { return {value + o.value, zeta + o.zeta}; }
  Scalar operator*(const Rational &r) const { return {value * r, zeta * r}; }
  bool is_zero() const { return value == 0 && zeta == 0; }
  friend bool operator==(const Scalar &, const Scalar &) = default;
};

struct Term {
  Rational coefficient{1};
  GraphingRep graphing;
};

/// A scalar wrapper plus a finite formal sum of graphings of one support.
struct Project {
  Scalar wrapper;
  std::vector<Term> terms;

  static Project of(GraphingRep g, Scalar wrapper = {}) {
    Project p;
    p.wrapper = wrapper;
    p.terms.push_back({Rational(1), std::move(g)});
    return p;
  }
  Rational coefficient_sum() const {
    Rational s = 0;
    for (auto &t : terms)
      s += t.coefficient;
    return s;
  }
  MSet support() const {
    return terms.empty() ? MSet() : terms.front().graphing.support;
  }
  bool well_formed() const {
    for (auto &t : terms)
      if (!t.graphing.support.equal_ae(support()))
        return false;
    return true;
  }
};

/// Tensor of projects on disjoint supports: execution over an empty cut,
/// so the wrapper is a(sum beta) + b(sum alpha) (no circuits cross) and the
/// terms are the pairwise juxtapositions.
inline Project tensor(const Project &p, const Project &q) {
  if (!p.support().disjoint_ae(q.support()))
    throw OverlappingSupports("tensor needs a.e. disjoint supports");
  Project out;
  out.wrapper = p.wrapper * q.coefficient_sum() + q.wrapper * p.coefficient_sum();
  for (auto &a : p.terms)
    for (auto &b : q.terms)
      out.terms.push_back({a.coefficient * b.coefficient,
                           tensor_graphings(a.graphing, b.graphing)});
  return out;
}

} // namespace igm
