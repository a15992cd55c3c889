#pragma once

// Rigid transformations of Z x [0,1)^N in normal form and the microcosm
// membership tests (z, h, aff, m(i), m-bar(i), m(inf), m-bar(inf), macrocosm).

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "igm/errors.hpp"
#include "igm/rational.hpp"
#include "igm/space.hpp"

namespace igm {

/// Coordinate permutation with finite support. `image(i)` is the coordinate
/// the content of coordinate i is moved to.
class Perm {
public:
  Perm() = default;
  explicit Perm(const std::map<int, int> &moves) {
    std::set<int> targets;
    for (auto &[from, to] : moves) {
      if (from < 1 || to < 1)
        throw InvalidArgument("permutation entries start at 1");
      targets.insert(to);
      if (from != to)
        map_[from] = to;
    }
    std::set<int> sources;
    for (auto &[from, to] : moves)
      sources.insert(from);
    if (sources != targets || targets.size() != moves.size())
      throw InvalidArgument("not a permutation of its support");
  }

  static Perm transposition(int a, int b) {
    if (a == b)
      return {};
    return Perm({{a, b}, {b, a}});
  }
  /// Build from a 1-based image vector: coordinate i+1 goes to img[i].
  static Perm from_images(const std::vector<int> &img) {
    std::map<int, int> m;
    for (std::size_t i = 0; i < img.size(); ++i)
      m[int(i) + 1] = img[i];
    return Perm(m);
  }

  int image(int i) const {
    auto it = map_.find(i);
    return it == map_.end() ? i : it->second;
  }
  int preimage(int j) const {
    for (auto &[from, to] : map_)
      if (to == j)
        return from;
    return j;
  }
  bool is_identity() const { return map_.empty(); }
  const std::map<int, int> &moves() const { return map_; }
  int max_moved() const { return map_.empty() ? 0 : map_.rbegin()->first; }

  /// (f * g)(i) = f(g(i)): apply g first.
  friend Perm operator*(const Perm &f, const Perm &g) {
    std::map<int, int> m;
    std::set<int> support;
    for (auto &[a, b] : f.map_)
      support.insert(a);
    for (auto &[a, b] : g.map_)
      support.insert(a);
    for (int i : support)
      m[i] = f.image(g.image(i));
    return Perm(m);
  }
  Perm inverse() const {
    std::map<int, int> m;
    for (auto &[a, b] : map_)
      m[b] = a;
    return Perm(m);
  }
  /// Smallest n >= 1 with p^n = id.
  std::int64_t order() const;

  friend bool operator==(const Perm &, const Perm &) = default;
  friend bool operator<(const Perm &a, const Perm &b) { return a.map_ < b.map_; }

private:
  std::map<int, int> map_;
};

inline std::int64_t Perm::order() const {
  std::set<int> seen;
  std::int64_t ord = 1;
  for (auto &[start, to] : map_) {
    if (seen.count(start))
      continue;
    std::int64_t len = 0;
    int cur = start;
    do {
      seen.insert(cur);
      cur = image(cur);
      ++len;
    } while (cur != start);
    ord = std::lcm(ord, len);
  }
  return ord;
}

/// Point of the space restricted to its first coordinates; used to check
/// descriptor algebra pointwise.
struct Point {
  Rational x;
  std::map<int, Rational> s; // unmentioned coordinates are irrelevant
};

/// Normal form: permute coordinates, then add fractional shifts (mod 1),
/// with the line mapped by x -> slope*x + offset.
class Descriptor {
public:
  Descriptor() = default;
  Descriptor(Rational slope, Rational offset, Perm perm = {},
             std::map<int, Rational> shifts = {})
      : slope_(std::move(slope)), offset_(std::move(offset)),
        perm_(std::move(perm)) {
    if (slope_ == 0)
      throw InvalidArgument("descriptor slope must be nonzero");
    for (auto &[j, t] : shifts) {
      if (j < 1)
        throw InvalidArgument("shift coordinates start at 1");
      Rational f = frac(t);
      if (f != 0)
        shifts_[j] = f;
    }
  }

  static Descriptor identity() { return {}; }
  static Descriptor translation(Rational z) { return {1, std::move(z)}; }
  static Descriptor permutation(Perm p) { return {1, 0, std::move(p)}; }
  static Descriptor affine(Rational slope, Rational offset) {
    return {std::move(slope), std::move(offset)};
  }

  const Rational &slope() const { return slope_; }
  const Rational &offset() const { return offset_; }
  const Perm &perm() const { return perm_; }
  const std::map<int, Rational> &shifts() const { return shifts_; }
  Rational shift(int j) const {
    auto it = shifts_.find(j);
    return it == shifts_.end() ? Rational(0) : it->second;
  }

  bool is_identity() const {
    return slope_ == 1 && offset_ == 0 && perm_.is_identity() && shifts_.empty();
  }
  /// Largest coordinate this map touches.
  int depth() const {
    int d = perm_.max_moved();
    if (!shifts_.empty())
      d = std::max(d, shifts_.rbegin()->first);
    return d;
  }
  bool measure_preserving() const { return slope_ == 1 || slope_ == -1; }

  Point apply(const Point &p) const {
    Point out;
    out.x = slope_ * p.x + offset_;
    for (auto &[i, v] : p.s) {
      int j = perm_.image(i);
      out.s[j] = frac(v + shift(j));
    }
    return out;
  }

  Descriptor inverse() const {
    Perm inv = perm_.inverse();
    std::map<int, Rational> sh;
    // s'_{p(i)} = s_i + t_{p(i)}  =>  s_i = s'_{p(i)} - t_{p(i)}
    for (auto &[j, t] : shifts_)
      sh[inv.image(j)] = frac(-t);
    return {1 / slope_, -offset_ / slope_, inv, sh};
  }

  friend bool operator==(const Descriptor &, const Descriptor &) = default;
  friend bool operator<(const Descriptor &a, const Descriptor &b) {
    if (a.slope_ != b.slope_)
      return a.slope_ < b.slope_;
    if (a.offset_ != b.offset_)
      return a.offset_ < b.offset_;
    if (!(a.perm_ == b.perm_))
      return a.perm_ < b.perm_;
    return a.shifts_ < b.shifts_;
  }

private:
  Rational slope_{1};
  Rational offset_{0};
  Perm perm_;
  std::map<int, Rational> shifts_;
};

/// compose(f, g) = f o g (apply g first).
inline Descriptor compose(const Descriptor &f, const Descriptor &g) {
  Perm p = f.perm() * g.perm();
  std::map<int, Rational> sh;
  // coordinate c = f.perm(g.perm(i)) receives s_i + t_g[g.perm(i)] + t_f[c]
  std::set<int> touched;
  for (auto &[j, t] : g.shifts())
    touched.insert(f.perm().image(j));
  for (auto &[j, t] : f.shifts())
    touched.insert(j);
  for (int c : touched)
    sh[c] = frac(g.shift(f.perm().preimage(c)) + f.shift(c));
  return {f.slope() * g.slope(), f.slope() * g.offset() + f.offset(), p, sh};
}

namespace detail {

inline Interval map_line(const Descriptor &f, const Interval &iv) {
  Rational a = f.slope() * iv.lo + f.offset();
  Rational b = f.slope() * iv.hi + f.offset();
  return a <= b ? Interval(a, b) : Interval(b, a);
}

// Shifted pieces of a coordinate interval (one piece unless it wraps).
inline std::vector<Interval> shift_interval(const Interval &iv, const Rational &t) {
  if (t == 0 || iv.is_unit())
    return {iv};
  Rational lo = iv.lo + t, hi = iv.hi + t;
  if (hi <= 1)
    return {Interval(lo, hi)};
  if (lo >= 1)
    return {Interval(lo - 1, hi - 1)};
  return {Interval(lo, Rational(1)), Interval(Rational(0), hi - 1)};
}

} // namespace detail

/// Image of one box. Throws WrapSplitRequired when a fractional shift would
/// carry a coordinate interval across 1 (the image is then two boxes).
inline Box apply(const Descriptor &f, const Box &b) {
  if (b.empty())
    return b;
  std::map<int, Interval> coords;
  std::set<int> dims;
  for (auto &[i, iv] : b.coords())
    dims.insert(i);
  for (auto &[i, j] : f.perm().moves())
    dims.insert(i);
  for (auto &[j, t] : f.shifts())
    dims.insert(f.perm().preimage(j));
  for (int i : dims) {
    int j = f.perm().image(i);
    auto pieces = detail::shift_interval(b.coord(i), f.shift(j));
    if (pieces.size() != 1)
      throw WrapSplitRequired("shift " + to_string(f.shift(j)) +
                              " carries coordinate " + std::to_string(j) +
                              " across 1");
    coords[j] = pieces.front();
  }
  return Box(detail::map_line(f, b.line()), coords);
}

/// Image of a measurable set; wrapping intervals are split automatically.
inline MSet image(const Descriptor &f, const MSet &s) {
  std::vector<Box> out;
  for (const Box &b : s.boxes()) {
    std::vector<std::map<int, Interval>> partial{{}};
    std::set<int> dims;
    for (auto &[i, iv] : b.coords())
      dims.insert(i);
    for (auto &[i, j] : f.perm().moves())
      dims.insert(i);
    for (auto &[j, t] : f.shifts())
      dims.insert(f.perm().preimage(j));
    for (int i : dims) {
      int j = f.perm().image(i);
      auto pieces = detail::shift_interval(b.coord(i), f.shift(j));
      std::vector<std::map<int, Interval>> next;
      for (auto &m : partial)
        for (auto &p : pieces) {
          auto c = m;
          c[j] = p;
          next.push_back(std::move(c));
        }
      partial = std::move(next);
    }
    Interval line = detail::map_line(f, b.line());
    for (auto &c : partial)
      out.emplace_back(line, c);
  }
  return MSet(out);
}

inline MSet preimage(const Descriptor &f, const MSet &s) {
  return image(f.inverse(), s);
}

/// Microcosm kinds.
enum class MicrocosmKind { z, h, aff, m, mbar, m_inf, mbar_inf, macrocosm };

struct MicrocosmSpec {
  MicrocosmKind kind = MicrocosmKind::macrocosm;
  int index = 0; // for m(i) / m-bar(i)

  static MicrocosmSpec z() { return {MicrocosmKind::z}; }
  static MicrocosmSpec h() { return {MicrocosmKind::h}; }
  static MicrocosmSpec aff() { return {MicrocosmKind::aff}; }
  static MicrocosmSpec m(int i) { return {MicrocosmKind::m, i}; }
  static MicrocosmSpec mbar(int i) { return {MicrocosmKind::mbar, i}; }
  static MicrocosmSpec m_inf() { return {MicrocosmKind::m_inf}; }
  static MicrocosmSpec mbar_inf() { return {MicrocosmKind::mbar_inf}; }
  static MicrocosmSpec macrocosm() { return {MicrocosmKind::macrocosm}; }

  std::string name() const;
  static MicrocosmSpec parse(const std::string &text);
  friend bool operator==(const MicrocosmSpec &, const MicrocosmSpec &) = default;
};

/// Every microcosm a descriptor belongs to, summarised by the least index of
/// the m / m-bar chains (nullopt when outside them).
struct Classification {
  bool z = false;
  bool h = false;
  bool aff = false;
  std::optional<int> m_least;
  std::optional<int> mbar_least;
  bool macrocosm = true;

  bool member(const MicrocosmSpec &spec) const {
    switch (spec.kind) {
    case MicrocosmKind::z: return z;
    case MicrocosmKind::h: return h;
    case MicrocosmKind::aff: return aff;
    case MicrocosmKind::m: return m_least && *m_least <= spec.index;
    case MicrocosmKind::mbar: return mbar_least && *mbar_least <= spec.index;
    case MicrocosmKind::m_inf: return m_least.has_value();
    case MicrocosmKind::mbar_inf: return mbar_least.has_value();
    case MicrocosmKind::macrocosm: return macrocosm;
    }
    return false;
  }
};

inline Classification classify(const Descriptor &f) {
  Classification c;
  bool rigid_coords = f.perm().is_identity() && f.shifts().empty();
  bool int_slope = is_integer(f.slope());
  bool int_offset = is_integer(f.offset());
  c.aff = rigid_coords && int_slope && int_offset;
  c.z = c.aff && f.slope() == 1;
  c.h = rigid_coords && int_slope && f.offset() == 0;
  if (f.slope() == 1 && int_offset) {
    if (f.shifts().empty())
      c.m_least = std::max(1, f.perm().max_moved());
    c.mbar_least = std::max(1, f.depth());
  }
  return c;
}

inline bool member(const Descriptor &f, const MicrocosmSpec &spec) {
  return classify(f).member(spec);
}

inline std::string MicrocosmSpec::name() const {
  switch (kind) {
  case MicrocosmKind::z: return "z";
  case MicrocosmKind::h: return "h";
  case MicrocosmKind::aff: return "aff";
  case MicrocosmKind::m: return "m" + std::to_string(index);
  case MicrocosmKind::mbar: return "mbar" + std::to_string(index);
  case MicrocosmKind::m_inf: return "minf";
  case MicrocosmKind::mbar_inf: return "mbarinf";
  case MicrocosmKind::macrocosm: return "macrocosm";
  }
  return "?";
}

inline MicrocosmSpec MicrocosmSpec::parse(const std::string &t) {
  if (t == "z") return z();
  if (t == "h") return h();
  if (t == "aff") return aff();
  if (t == "minf") return m_inf();
  if (t == "mbarinf") return mbar_inf();
  if (t == "macrocosm") return macrocosm();
  try {
    if (t.rfind("mbar", 0) == 0)
      return mbar(std::stoi(t.substr(4)));
    if (t.rfind("m", 0) == 0)
      return m(std::stoi(t.substr(1)));
  } catch (const std::exception &) {
  }
  throw ParseError("unknown microcosm '" + t + "'");
}

/// Star transpositions tau(1, j) whose left-to-right application realises
/// `p`: applying result[0] first, then result[1], ... yields p.
inline std::vector<int> decompose_star(const Perm &p) {
  // arrangement[pos] = original coordinate whose content sits at pos
  std::map<int, int> arr, goal;
  std::set<int> support;
  for (auto &[a, b] : p.moves())
    support.insert(a);
  if (support.empty())
    return {};
  support.insert(1);
  for (int i : support) {
    arr[i] = i;
    goal[p.image(i)] = i;
  }
  std::vector<int> seq;
  auto swap1 = [&](int j) {
    std::swap(arr[1], arr[j]);
    seq.push_back(j);
  };
  while (arr != goal) {
    if (arr[1] != goal[1]) {
      swap1(p.image(arr[1]));
    } else {
      for (int i : support)
        if (arr[i] != goal[i]) {
          swap1(i);
          break;
        }
    }
  }
  return seq;
}

} // namespace igm
