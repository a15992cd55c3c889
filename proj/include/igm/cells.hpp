#pragma once

// Finite combinatorial quotient of cell-rigid graphings: every unit block of
// the line is cut into n^N cubes of side 1/n, and each edge restricted to a
// cube is a translation (possibly composed with a coordinate permutation)
// onto another cube.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "igm/errors.hpp"
#include "igm/graphings.hpp"
#include "igm/microcosm.hpp"
#include "igm/space.hpp"

namespace igm {

/// Grid of cells: `blocks` are the line blocks [k, k+1), each split into
/// `n`^`dims` cubes over coordinates 1..dims.
class CellGrid {
public:
  CellGrid() = default;
  CellGrid(std::vector<std::int64_t> blocks, int dims, int n)
      : blocks_(std::move(blocks)), dims_(dims), n_(n) {
    std::sort(blocks_.begin(), blocks_.end());
    blocks_.erase(std::unique(blocks_.begin(), blocks_.end()), blocks_.end());
    per_block_ = 1;
    for (int i = 0; i < dims_; ++i)
      per_block_ *= n_;
  }

  int dims() const { return dims_; }
  int n() const { return n_; }
  const std::vector<std::int64_t> &blocks() const { return blocks_; }
  std::int64_t cells_per_block() const { return per_block_; }
  std::int64_t size() const { return per_block_ * std::int64_t(blocks_.size()); }

  int block_index(std::int64_t k) const {
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), k);
    if (it == blocks_.end() || *it != k)
      return -1;
    return int(it - blocks_.begin());
  }

  /// Cell id from a block value and a grid index vector (size dims).
  std::int64_t cell(std::int64_t block, const std::vector<int> &idx) const {
    int b = block_index(block);
    if (b < 0)
      throw NotCellRigid("block [" + std::to_string(block) + "," +
                         std::to_string(block + 1) + ") is outside the grid");
    std::int64_t lin = 0;
    for (int i = dims_ - 1; i >= 0; --i)
      lin = lin * n_ + idx[i];
    return b * per_block_ + lin;
  }
  std::int64_t block_of(std::int64_t cell) const { return blocks_[cell / per_block_]; }
  std::vector<int> index_of(std::int64_t cell) const {
    std::vector<int> idx(dims_);
    std::int64_t lin = cell % per_block_;
    for (int i = 0; i < dims_; ++i) {
      idx[i] = int(lin % n_);
      lin /= n_;
    }
    return idx;
  }

  Box box(std::int64_t cell) const {
    auto idx = index_of(cell);
    std::map<int, Interval> coords;
    for (int i = 0; i < dims_; ++i)
      coords[i + 1] = Interval(rat(idx[i], n_), rat(idx[i] + 1, n_));
    return Box(Interval::block(block_of(cell)), coords);
  }
  Rational cell_measure() const { return Rational(1) / Rational(per_block_); }

  /// Cells a.e. contained in the set; throws when the set is not a union of
  /// cells.
  std::vector<std::int64_t> cells_of(const MSet &s) const;

  /// Image cell of `cell` under a cell-rigid descriptor.
  std::int64_t image(const Descriptor &f, std::int64_t cell) const;

private:
  std::vector<std::int64_t> blocks_;
  int dims_ = 0;
  int n_ = 1;
  std::int64_t per_block_ = 1;
};

namespace detail {

inline std::int64_t grid_steps(const Rational &v, int n, const std::string &what) {
  Rational scaled = v * n;
  if (!is_integer(scaled))
    throw NotCellRigid(what + " " + to_string(v) + " is not on the 1/" +
                       std::to_string(n) + " grid");
  return to_int64(scaled);
}

} // namespace detail

inline std::vector<std::int64_t> CellGrid::cells_of(const MSet &s) const {
  std::vector<std::int64_t> out;
  for (const Box &b : s.boxes()) {
    if (b.depth() > dims_)
      throw NotCellRigid("set constrains a coordinate beyond the grid");
    std::int64_t lo = detail::grid_steps(b.line().lo, 1, "line endpoint");
    std::int64_t hi = detail::grid_steps(b.line().hi, 1, "line endpoint");
    std::vector<std::int64_t> first(dims_), last(dims_);
    for (int i = 0; i < dims_; ++i) {
      Interval iv = b.coord(i + 1);
      first[i] = detail::grid_steps(iv.lo, n_, "coordinate endpoint");
      last[i] = detail::grid_steps(iv.hi, n_, "coordinate endpoint");
    }
    for (std::int64_t k = lo; k < hi; ++k) {
      std::vector<int> idx(dims_);
      for (int i = 0; i < dims_; ++i)
        idx[i] = int(first[i]);
      while (true) {
        out.push_back(cell(k, idx));
        int i = 0;
        while (i < dims_ && ++idx[i] >= last[i]) {
          idx[i] = int(first[i]);
          ++i;
        }
        if (i == dims_)
          break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::int64_t CellGrid::image(const Descriptor &f, std::int64_t c) const {
  auto idx = index_of(c);
  std::vector<int> out(dims_);
  for (int i = 0; i < dims_; ++i) {
    int j = f.perm().image(i + 1);
    std::int64_t step = detail::grid_steps(f.shift(j), n_, "shift");
    out[j - 1] = int((idx[i] + step) % n_);
  }
  std::int64_t block = block_of(c) + to_int64(f.offset());
  return cell(block, out);
}

/// Throws NotCellRigid naming the edge when its map is not a cell translation.
inline void require_cell_rigid(const Descriptor &f, int dims, int n,
                               const std::string &who) {
  if (f.slope() != 1)
    throw NotCellRigid(who + ": slope " + to_string(f.slope()) + " is not 1");
  if (!is_integer(f.offset()))
    throw NotCellRigid(who + ": offset is not an integer");
  if (f.depth() > dims)
    throw NotCellRigid(who + ": map acts beyond coordinate " + std::to_string(dims));
  for (auto &[j, t] : f.shifts())
    detail::grid_steps(t, n, who + ": shift");
}

/// Smallest grid (dims, n, blocks) on which all the given graphings (and
/// extra sets) are cell-rigid. Throws NotCellRigid otherwise.
inline CellGrid detect_grid(const std::vector<const GraphingRep *> &gs,
                            const std::vector<const MSet *> &extra = {},
                            int min_dims = 0) {
  int dims = min_dims;
  BigInt n = 1;
  std::vector<std::int64_t> blocks;
  auto absorb_set = [&](const MSet &s) {
    dims = std::max(dims, s.depth());
    for (auto &b : s.boxes()) {
      if (!is_integer(b.line().lo) || !is_integer(b.line().hi))
        throw NotCellRigid("line endpoints must be integers");
      for (auto k = to_int64(b.line().lo); k < to_int64(b.line().hi); ++k)
        blocks.push_back(k);
      for (auto &[j, iv] : b.coords()) {
        n = boost::multiprecision::lcm(n, boost::multiprecision::denominator(iv.lo));
        n = boost::multiprecision::lcm(n, boost::multiprecision::denominator(iv.hi));
      }
    }
  };
  for (auto *g : gs) {
    absorb_set(g->support);
    for (std::size_t k = 0; k < g->edges.size(); ++k) {
      const Edge &e = g->edges[k];
      absorb_set(e.source);
      if (e.map.slope() != 1 || !is_integer(e.map.offset()))
        throw NotCellRigid("edge " + std::to_string(k) + " is not a translation");
      dims = std::max(dims, e.map.depth());
      for (auto &[j, t] : e.map.shifts())
        n = boost::multiprecision::lcm(n, boost::multiprecision::denominator(t));
    }
  }
  for (auto *s : extra)
    absorb_set(*s);
  if (n > 4096)
    throw NotCellRigid("grid denominator too large");
  return CellGrid(blocks, dims, n.convert_to<int>());
}

/// One edge of a graphing restricted to one cell.
struct Arrow {
  std::int64_t from = 0;
  std::int64_t to = 0;
  int in = 0;
  int out = 0;
  int edge = 0;       // index of the originating edge
  std::vector<int> perm; // coordinate i+1 is sent to perm[i]
  Weight weight;
};

/// Cell-level view of one graphing: arrows indexed by (cell, dialect state).
class CellGraphing {
public:
  CellGraphing() = default;
  CellGraphing(const GraphingRep &g, const CellGrid &grid) : dialect_(g.dialect_size) {
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const Edge &e = g.edges[k];
      std::string who = "edge " + std::to_string(k);
      require_cell_rigid(e.map, grid.dims(), grid.n(), who);
      std::vector<int> perm(grid.dims());
      for (int i = 0; i < grid.dims(); ++i)
        perm[i] = e.map.perm().image(i + 1);
      for (std::int64_t c : grid.cells_of(e.source)) {
        Arrow a{c, grid.image(e.map, c), e.in, e.out, int(k), perm, e.weight};
        arrows_[key(c, e.in)].push_back(std::move(a));
        ++count_;
      }
    }
  }

  int dialect_size() const { return dialect_; }
  std::size_t arrow_count() const { return count_; }
  std::span<const Arrow> out(std::int64_t cell, int state) const {
    auto it = arrows_.find(key(cell, state));
    if (it == arrows_.end())
      return {};
    return it->second;
  }
  template <typename F> void for_each(F &&fn) const {
    for (auto &[k, list] : arrows_)
      for (auto &a : list)
        fn(a);
  }

private:
  std::uint64_t key(std::int64_t cell, int state) const {
    return std::uint64_t(cell) * std::uint64_t(dialect_) + std::uint64_t(state);
  }
  int dialect_ = 1;
  std::size_t count_ = 0;
  std::unordered_map<std::uint64_t, std::vector<Arrow>> arrows_;
};

/// Cells plus the arrows of every input graphing on a common grid.
struct CellGraph {
  CellGrid grid;
  std::vector<CellGraphing> parts;
};

/// Decompose graphings on a grid of side 1/n (dims chosen from the inputs).
inline CellGraph cell_decompose(const std::vector<const GraphingRep *> &gs, int n) {
  CellGrid detected = detect_grid(gs);
  if (n % detected.n() != 0)
    throw NotCellRigid("grid 1/" + std::to_string(n) + " does not refine the inputs");
  CellGraph out{CellGrid(detected.blocks(), detected.dims(), n), {}};
  for (auto *g : gs)
    out.parts.emplace_back(*g, out.grid);
  return out;
}

inline CellGraph cell_decompose(const std::vector<const GraphingRep *> &gs) {
  CellGrid detected = detect_grid(gs);
  return cell_decompose(gs, detected.n());
}

/// Descriptor of the cell translation sending `from` to `to` with the given
/// coordinate permutation.
inline Descriptor cell_map(const CellGrid &grid, std::int64_t from, std::int64_t to,
                           const std::vector<int> &perm) {
  auto a = grid.index_of(from), b = grid.index_of(to);
  std::map<int, int> moves;
  std::map<int, Rational> shifts;
  for (int i = 0; i < grid.dims(); ++i) {
    int j = perm[i];
    moves[i + 1] = j;
    shifts[j] = rat(b[j - 1] - a[i], grid.n());
  }
  return Descriptor(1, rat(grid.block_of(to) - grid.block_of(from)), Perm(moves), shifts);
}

} // namespace igm
