#pragma once

// Exact geometry of Z x [0,1)^N: half-open rational boxes, finite unions kept
// in a canonical normal form, Lebesgue measure and a.e. set algebra.

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "igm/errors.hpp"
#include "igm/rational.hpp"

namespace igm {

/// Half-open [lo, hi). Empty iff lo == hi.
struct Interval {
  Rational lo{0};
  Rational hi{0};

  Interval() = default;
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo)
      throw InvalidArgument("interval with hi < lo");
  }

  static Interval unit() { return {Rational(0), Rational(1)}; }
  static Interval block(std::int64_t k) { return {rat(k), rat(k + 1)}; }

  bool empty() const { return lo == hi; }
  Rational length() const { return hi - lo; }
  bool is_unit() const { return lo == 0 && hi == 1; }
  bool covers(const Interval &o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const Interval &o) const {
    return std::max(lo, o.lo) < std::min(hi, o.hi);
  }
  Interval intersect(const Interval &o) const {
    Rational l = std::max(lo, o.lo), h = std::min(hi, o.hi);
    if (h < l)
      h = l;
    return {l, h};
  }

  friend bool operator==(const Interval &a, const Interval &b) = default;
  friend bool operator<(const Interval &a, const Interval &b) {
    if (a.lo != b.lo)
      return a.lo < b.lo;
    return a.hi < b.hi;
  }
};

/// Rational box: a line interval times finitely many constrained unit-interval
/// coordinates (indices >= 1). Unmentioned coordinates are the full [0,1).
class Box {
public:
  Box() = default;
  explicit Box(Interval line, std::map<int, Interval> coords = {})
      : line_(std::move(line)) {
    for (auto &[j, iv] : coords) {
      if (j < 1)
        throw InvalidArgument("coordinate indices start at 1");
      if (iv.lo < 0 || iv.hi > 1)
        throw InvalidArgument("coordinate interval outside [0,1)");
      if (iv.empty())
        empty_ = true;
      if (!iv.is_unit())
        coords_.emplace(j, iv);
    }
    if (line_.empty())
      empty_ = true;
  }

  static Box block(std::int64_t k) { return Box(Interval::block(k)); }

  const Interval &line() const { return line_; }
  const std::map<int, Interval> &coords() const { return coords_; }
  Interval coord(int j) const {
    auto it = coords_.find(j);
    return it == coords_.end() ? Interval::unit() : it->second;
  }
  /// Largest constrained coordinate index, 0 when none.
  int depth() const { return coords_.empty() ? 0 : coords_.rbegin()->first; }
  /// Interval on dimension `d` where d = 0 is the line.
  Interval dim(int d) const { return d == 0 ? line_ : coord(d); }

  bool empty() const { return empty_; }

  Rational measure() const {
    if (empty_)
      return 0;
    Rational m = line_.length();
    for (auto &[j, iv] : coords_)
      m *= iv.length();
    return m;
  }

  std::optional<Box> intersect(const Box &o) const {
    Interval l = line_.intersect(o.line_);
    if (l.empty())
      return std::nullopt;
    std::map<int, Interval> cs = coords_;
    for (auto &[j, iv] : o.coords_) {
      auto it = cs.find(j);
      Interval v = it == cs.end() ? iv : it->second.intersect(iv);
      if (v.empty())
        return std::nullopt;
      cs[j] = v;
    }
    for (auto &[j, iv] : cs)
      if (iv.empty())
        return std::nullopt;
    return Box(l, cs);
  }

  bool covers(const Box &o) const {
    if (o.empty())
      return true;
    if (!line_.covers(o.line_))
      return false;
    for (auto &[j, iv] : coords_)
      if (!iv.covers(o.coord(j)))
        return false;
    return true;
  }

  friend bool operator==(const Box &a, const Box &b) {
    return a.empty_ == b.empty_ && a.line_ == b.line_ && a.coords_ == b.coords_;
  }
  friend bool operator<(const Box &a, const Box &b) {
    if (!(a.line_ == b.line_))
      return a.line_ < b.line_;
    return a.coords_ < b.coords_;
  }

private:
  Interval line_;
  std::map<int, Interval> coords_;
  bool empty_ = false;
};

namespace detail {

// Canonical nested decomposition: along dimension d the set is a sorted list
// of maximal intervals, each carrying the (canonical) cross-section in the
// remaining dimensions.
struct Nested {
  bool leaf = false;
  std::vector<std::pair<Interval, Nested>> parts;
  friend bool operator==(const Nested &, const Nested &) = default;
};

inline Nested build_nested(const std::vector<const Box *> &boxes, int d,
                           int max_dim) {
  Nested out;
  if (boxes.empty())
    return out;
  if (d > max_dim) {
    out.leaf = true;
    return out;
  }
  std::vector<Rational> cuts;
  for (const Box *b : boxes) {
    Interval iv = b->dim(d);
    cuts.push_back(iv.lo);
    cuts.push_back(iv.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval piece(cuts[i], cuts[i + 1]);
    std::vector<const Box *> sub;
    for (const Box *b : boxes)
      if (b->dim(d).covers(piece))
        sub.push_back(b);
    if (sub.empty())
      continue;
    Nested inner = build_nested(sub, d + 1, max_dim);
    if (!inner.leaf && inner.parts.empty())
      continue;
    if (!out.parts.empty() && out.parts.back().first.hi == piece.lo &&
        out.parts.back().second == inner) {
      out.parts.back().first.hi = piece.hi;
    } else {
      out.parts.emplace_back(piece, std::move(inner));
    }
  }
  return out;
}

inline void flatten_nested(const Nested &n, int d, Interval line,
                           std::map<int, Interval> &coords,
                           std::vector<Box> &out) {
  if (n.leaf) {
    out.emplace_back(line, coords);
    return;
  }
  for (auto &[iv, inner] : n.parts) {
    if (d == 0) {
      flatten_nested(inner, d + 1, iv, coords, out);
    } else {
      coords[d] = iv;
      flatten_nested(inner, d + 1, line, coords, out);
      coords.erase(d);
    }
  }
}

// a \ b as disjoint boxes.
inline void box_difference(const Box &a, const Box &b, std::vector<Box> &out) {
  auto inter = a.intersect(b);
  if (!inter) {
    out.push_back(a);
    return;
  }
  int depth = std::max(a.depth(), b.depth());
  Interval line = a.line();
  std::map<int, Interval> coords = a.coords();
  auto emit = [&](int d, Interval piece) {
    if (piece.empty())
      return;
    if (d == 0)
      out.emplace_back(piece, coords);
    else {
      auto c = coords;
      c[d] = piece;
      out.emplace_back(line, c);
    }
  };
  for (int d = 0; d <= depth; ++d) {
    Interval ai = d == 0 ? line : (coords.count(d) ? coords[d] : Interval::unit());
    Interval bi = b.dim(d);
    emit(d, Interval(ai.lo, std::max(ai.lo, std::min(ai.hi, bi.lo))));
    emit(d, Interval(std::min(ai.hi, std::max(ai.lo, bi.hi)), ai.hi));
    Interval keep = ai.intersect(bi);
    if (d == 0)
      line = keep;
    else
      coords[d] = keep;
  }
}

} // namespace detail

/// Finite union of boxes, always held in canonical normal form: pairwise
/// disjoint boxes, maximal along the line first, then coordinate 1, 2, ...
/// Two MSets are a.e. equal iff their normal forms are identical.
class MSet {
public:
  MSet() = default;
  MSet(std::initializer_list<Box> boxes) : MSet(std::vector<Box>(boxes)) {}
  explicit MSet(const std::vector<Box> &boxes) { normalize(boxes); }
  explicit MSet(const Box &b) : MSet(std::vector<Box>{b}) {}

  static MSet block(std::int64_t k) { return MSet(Box::block(k)); }
  static MSet blocks(const std::vector<std::int64_t> &ks) {
    std::vector<Box> bs;
    for (auto k : ks)
      bs.push_back(Box::block(k));
    return MSet(bs);
  }

  const std::vector<Box> &boxes() const { return boxes_; }
  bool is_null() const { return boxes_.empty(); }
  int depth() const {
    int d = 0;
    for (auto &b : boxes_)
      d = std::max(d, b.depth());
    return d;
  }

  Rational measure() const {
    Rational m = 0;
    for (auto &b : boxes_)
      m += b.measure();
    return m;
  }

  MSet intersect(const MSet &o) const {
    std::vector<Box> out;
    for (auto &a : boxes_)
      for (auto &b : o.boxes_)
        if (auto c = a.intersect(b))
          out.push_back(*c);
    return MSet(out);
  }

  MSet difference(const MSet &o) const {
    std::vector<Box> cur = boxes_;
    for (auto &b : o.boxes_) {
      std::vector<Box> next;
      for (auto &a : cur)
        detail::box_difference(a, b, next);
      cur = std::move(next);
    }
    return MSet(cur);
  }

  MSet unite(const MSet &o) const {
    std::vector<Box> all = boxes_;
    all.insert(all.end(), o.boxes_.begin(), o.boxes_.end());
    return MSet(all);
  }

  bool subset_ae(const MSet &o) const { return difference(o).is_null(); }
  bool equal_ae(const MSet &o) const { return boxes_ == o.boxes_; }
  bool disjoint_ae(const MSet &o) const { return intersect(o).is_null(); }

  friend bool operator==(const MSet &a, const MSet &b) = default;

private:
  void normalize(const std::vector<Box> &input) {
    std::vector<const Box *> live;
    int max_dim = 0;
    for (auto &b : input)
      if (!b.empty()) {
        live.push_back(&b);
        max_dim = std::max(max_dim, b.depth());
      }
    detail::Nested n = detail::build_nested(live, 0, max_dim);
    std::map<int, Interval> coords;
    detail::flatten_nested(n, 0, Interval(), coords, boxes_);
  }

  std::vector<Box> boxes_;
};

inline MSet intersect(const MSet &a, const MSet &b) { return a.intersect(b); }
inline MSet difference(const MSet &a, const MSet &b) { return a.difference(b); }
inline MSet unite(const MSet &a, const MSet &b) { return a.unite(b); }
inline Rational measure(const MSet &a) { return a.measure(); }
inline bool equal_ae(const MSet &a, const MSet &b) { return a.equal_ae(b); }

} // namespace igm
