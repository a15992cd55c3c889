#pragma once

// Alternating paths between two graphings, restriction to a cut, and the
// execution (plug) of graphings and projects. Cell-rigid inputs are executed
// exactly on their cell graph; anything else falls back to a bounded
// enumeration of paths over exact rational sets.

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "igm/cells.hpp"
#include "igm/errors.hpp"
#include "igm/graphings.hpp"
#include "igm/microcosm.hpp"
#include "igm/space.hpp"

namespace igm {

/// Default cap on explored path prefixes / cell-arrow expansions; the
/// GM_MAX_PATH_LEN environment variable overrides it.
inline std::size_t default_iteration_cap() {
  if (const char *env = std::getenv("GM_MAX_PATH_LEN")) {
    try {
      long long v = std::stoll(env);
      if (v > 0)
        return std::size_t(v);
    } catch (const std::exception &) {
    }
  }
  return 10000;
}

enum class Side { left = 0, right = 1 };

struct PathStep {
  Side side;
  int edge;
  friend bool operator==(const PathStep &, const PathStep &) = default;
  friend auto operator<=>(const PathStep &, const PathStep &) = default;
};

/// Dialect pair of the product D^F x D^G; a component is unset while the
/// path has not used an edge of that graphing.
struct DialectPair {
  std::optional<int> left;
  std::optional<int> right;
  friend bool operator==(const DialectPair &, const DialectPair &) = default;
};

struct AlternatingPath {
  std::vector<PathStep> steps;
  Descriptor map;   // composition of the edge maps, first edge applied first
  MSet source;      // points on which the whole path is defined
  DialectPair in;
  DialectPair out;
  Weight weight;
};

struct PathOptions {
  std::optional<std::size_t> max_len;
  std::size_t cap = default_iteration_cap();
};

/// Every alternating path of length <= max_len whose successive images have
/// positive measure. Without max_len the enumeration must die out on its
/// own; more than `cap` explored prefixes raises IterationCapExceeded.
inline std::vector<AlternatingPath> alternating_paths(const GraphingRep &f,
                                                      const GraphingRep &g,
                                                      const PathOptions &opts = {}) {
  const GraphingRep *sides[2] = {&f, &g};
  std::vector<AlternatingPath> out;
  struct Live {
    AlternatingPath path;
    MSet image;
  };
  std::deque<Live> frontier;
  for (int s = 0; s < 2; ++s)
    for (std::size_t k = 0; k < sides[s]->edges.size(); ++k) {
      const Edge &e = sides[s]->edges[k];
      if (e.source.is_null())
        continue;
      AlternatingPath p;
      p.steps = {{Side(s), int(k)}};
      p.map = e.map;
      p.source = e.source;
      (s == 0 ? p.in.left : p.in.right) = e.in;
      (s == 0 ? p.out.left : p.out.right) = e.out;
      p.weight = e.weight;
      frontier.push_back({p, image(e.map, e.source)});
    }
  std::size_t explored = 0;
  while (!frontier.empty()) {
    Live cur = std::move(frontier.front());
    frontier.pop_front();
    if (++explored > opts.cap)
      throw IterationCapExceeded("more than " + std::to_string(opts.cap) +
                                 " live path prefixes");
    out.push_back(cur.path);
    if (opts.max_len && cur.path.steps.size() >= *opts.max_len)
      continue;
    int next = 1 - int(cur.path.steps.back().side);
    const auto &expect = next == 0 ? cur.path.out.left : cur.path.out.right;
    for (std::size_t k = 0; k < sides[next]->edges.size(); ++k) {
      const Edge &e = sides[next]->edges[k];
      if (expect && *expect != e.in)
        continue;
      MSet meet = cur.image.intersect(e.source);
      if (meet.is_null())
        continue;
      Live nx{cur.path, image(e.map, meet)};
      nx.path.steps.push_back({Side(next), int(k)});
      nx.path.source = preimage(cur.path.map, meet);
      nx.path.map = compose(e.map, cur.path.map);
      auto &in_slot = next == 0 ? nx.path.in.left : nx.path.in.right;
      if (!in_slot)
        in_slot = e.in;
      (next == 0 ? nx.path.out.left : nx.path.out.right) = e.out;
      nx.path.weight = cur.path.weight * e.weight;
      frontier.push_back(std::move(nx));
    }
  }
  return out;
}

/// A path restricted to the part of its source that starts and ends outside
/// the cut.
struct RestrictedPath {
  MSet source;
  Descriptor map;
  DialectPair in;
  DialectPair out;
  Weight weight;
};

inline std::optional<RestrictedPath> restrict_path(const AlternatingPath &p,
                                                   const MSet &cut) {
  MSet s = p.source.difference(cut).difference(preimage(p.map, cut));
  if (s.is_null())
    return std::nullopt;
  return RestrictedPath{s, p.map, p.in, p.out, p.weight};
}

struct PlugResult {
  GraphingRep graphing;
  bool truncated = false;
  bool cell_route = false;
};

namespace detail {

inline MSet plug_support(const GraphingRep &f, const GraphingRep &g, const MSet &cut) {
  return f.support.unite(g.support).difference(cut);
}

// Expand a (possibly half-unset) dialect pair into product-dialect edges.
template <typename Emit>
void expand_pairs(const DialectPair &in, const DialectPair &out, int nf, int ng,
                  Emit &&emit) {
  auto flat = [ng](int a, int b) { return a * ng + b; };
  if (in.left && in.right)
    emit(flat(*in.left, *in.right), flat(*out.left, *out.right));
  else if (in.left)
    for (int b = 0; b < ng; ++b)
      emit(flat(*in.left, b), flat(*out.left, b));
  else
    for (int a = 0; a < nf; ++a)
      emit(flat(a, *in.right), flat(a, *out.right));
}

inline void dedupe_edges(std::vector<Edge> &edges) {
  std::vector<Edge> uniq;
  std::set<std::tuple<int, int, Descriptor, Weight, std::vector<Box>>> seen;
  for (auto &e : edges)
    if (seen.insert({e.in, e.out, e.map, e.weight, e.source.boxes()}).second)
      uniq.push_back(std::move(e));
  edges = std::move(uniq);
}

inline PlugResult plug_general(const GraphingRep &f, const GraphingRep &g,
                               const MSet &cut, const PathOptions &opts) {
  PlugResult res;
  res.graphing.support = plug_support(f, g, cut);
  res.graphing.dialect_size = f.dialect_size * g.dialect_size;
  std::vector<AlternatingPath> paths;
  try {
    paths = alternating_paths(f, g, opts);
  } catch (const IterationCapExceeded &e) {
    throw NonTerminating(std::string("execution does not terminate: ") + e.what());
  }
  if (opts.max_len)
    for (auto &p : paths)
      if (p.steps.size() == *opts.max_len)
        res.truncated = true; // prefixes of this length may extend further
  for (auto &p : paths) {
    auto r = restrict_path(p, cut);
    if (!r)
      continue;
    expand_pairs(r->in, r->out, f.dialect_size, g.dialect_size, [&](int i, int o) {
      res.graphing.edges.push_back({r->source, i, o, r->map, r->weight});
    });
  }
  dedupe_edges(res.graphing.edges);
  return res;
}

struct PathState {
  std::int64_t cell;
  int cur_left;  // -1 while unset
  int cur_right;
  int in_other;  // in-dialect of the first edge of the non-starting side
  int last;      // side of the last arrow
  int perm;      // interned composed permutation
  int weight;    // interned weight
  friend bool operator==(const PathState &, const PathState &) = default;
};

struct PathStateHash {
  std::size_t operator()(const PathState &s) const {
    std::size_t h = std::hash<std::int64_t>()(s.cell);
    for (int v : {s.cur_left, s.cur_right, s.in_other, s.last, s.perm, s.weight})
      h = h * 1000003u ^ std::hash<int>()(v);
    return h;
  }
};

template <typename T> class Interner {
public:
  int id(const T &v) {
    auto [it, fresh] = ids_.emplace(v, int(values_.size()));
    if (fresh)
      values_.push_back(v);
    return it->second;
  }
  const T &value(int i) const { return values_[i]; }

private:
  std::map<T, int> ids_;
  std::vector<T> values_;
};

inline std::vector<int> compose_perm(const std::vector<int> &f, const std::vector<int> &g) {
  // apply g then f: coordinate i -> g[i] -> f[g[i]-1]
  std::vector<int> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = f[g[i] - 1];
  return out;
}

inline PlugResult plug_cells(const GraphingRep &f, const GraphingRep &g, const MSet &cut,
                             const CellGrid &grid, const PathOptions &opts) {
  PlugResult res;
  res.cell_route = true;
  res.graphing.support = plug_support(f, g, cut);
  res.graphing.dialect_size = f.dialect_size * g.dialect_size;
  CellGraphing parts[2] = {CellGraphing(f, grid), CellGraphing(g, grid)};
  auto cut_cells = grid.cells_of(cut);
  std::vector<char> in_cut(grid.size(), 0);
  for (auto c : cut_cells)
    in_cut[c] = 1;

  Interner<std::vector<int>> perms;
  Interner<Weight> weights;
  std::vector<int> ident(grid.dims());
  std::iota(ident.begin(), ident.end(), 1);

  using Key = std::tuple<std::int64_t, std::int64_t, int, int, int, int>;
  std::set<Key> emitted;
  std::size_t budget = opts.cap * 100; // cell-arrow expansions

  int nd[2] = {f.dialect_size, g.dialect_size};
  for (int first = 0; first < 2; ++first) {
    for (std::int64_t c = 0; c < grid.size(); ++c) {
      if (in_cut[c])
        continue;
      for (int d = 0; d < nd[first]; ++d) {
        auto starts = parts[first].out(c, d);
        if (starts.empty())
          continue;
        std::unordered_map<PathState, char, PathStateHash> seen;
        std::deque<PathState> queue;
        auto push = [&](PathState s) {
          if (seen.emplace(s, 1).second)
            queue.push_back(s);
        };
        auto finish = [&](const PathState &s) {
          if (in_cut[s.cell])
            return;
          DialectPair in, out;
          int other = 1 - first;
          int cur[2] = {s.cur_left, s.cur_right};
          (first == 0 ? in.left : in.right) = d;
          (first == 0 ? out.left : out.right) = cur[first];
          if (cur[other] >= 0) {
            (other == 0 ? in.left : in.right) = s.in_other;
            (other == 0 ? out.left : out.right) = cur[other];
          }
          expand_pairs(in, out, nd[0], nd[1], [&](int i, int o) {
            emitted.insert({c, s.cell, i, o, s.perm, s.weight});
          });
        };
        for (const Arrow &a : starts) {
          PathState s{a.to, -1, -1, -1, first, perms.id(a.perm), weights.id(a.weight)};
          (first == 0 ? s.cur_left : s.cur_right) = a.out;
          push(s);
        }
        while (!queue.empty()) {
          PathState s = queue.front();
          queue.pop_front();
          if (budget-- == 0)
            throw NonTerminating("cell execution exceeded its expansion budget");
          finish(s);
          int next = 1 - s.last;
          int cur = next == 0 ? s.cur_left : s.cur_right;
          for (int st = 0; st < nd[next]; ++st) {
            if (cur >= 0 && st != cur)
              continue;
            for (const Arrow &a : parts[next].out(s.cell, st)) {
              PathState t = s;
              t.cell = a.to;
              t.last = next;
              if (cur < 0)
                t.in_other = a.in;
              (next == 0 ? t.cur_left : t.cur_right) = a.out;
              t.perm = perms.id(compose_perm(a.perm, perms.value(s.perm)));
              t.weight = weights.id(weights.value(s.weight) * a.weight);
              push(t);
            }
            if (cur >= 0)
              break;
          }
        }
      }
    }
  }
  for (auto &[from, to, i, o, p, w] : emitted)
    res.graphing.edges.push_back({MSet(grid.box(from)), i, o,
                                  cell_map(grid, from, to, perms.value(p)),
                                  weights.value(w)});
  return res;
}

} // namespace detail

/// Execution with explicit options. Cell-rigid inputs are executed exactly
/// on the cell graph (duplicate realisations coalesced); otherwise paths are
/// enumerated and `truncated` reports a max_len cut-off.
inline PlugResult plug_with(const GraphingRep &f, const GraphingRep &g, const MSet &cut,
                            const PathOptions &opts = {}) {
  if (!f.support.difference(cut).disjoint_ae(g.support.difference(cut)))
    throw OverlappingSupports("supports overlap outside the cut");
  std::optional<CellGrid> grid;
  try {
    grid = detect_grid({&f, &g}, {&cut});
  } catch (const NotCellRigid &) {
  }
  if (grid)
    return detail::plug_cells(f, g, cut, *grid, opts);
  return detail::plug_general(f, g, cut, opts);
}

inline GraphingRep plug(const GraphingRep &f, const GraphingRep &g, const MSet &cut,
                        const PathOptions &opts = {}) {
  return plug_with(f, g, cut, opts).graphing;
}

} // namespace igm
