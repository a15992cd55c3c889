#pragma once

// Vertex tables, word graphs, word graphings, promotion and word
// representations.

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "igm/errors.hpp"
#include "igm/graphings.hpp"
#include "igm/microcosm.hpp"
#include "igm/space.hpp"

namespace igm {

enum class Symbol { star = 0, zero = 1, one = 2 };
enum class Dir { in = 0, out = 1 };

inline char symbol_char(Symbol s) {
  return s == Symbol::star ? '*' : s == Symbol::zero ? '0' : '1';
}

/// Vertices of the extended alphabet: (symbol, direction) pairs plus the
/// accept and reject vertices, numbered 0..7.
struct Vertex {
  static constexpr int count = 8;
  static constexpr int accept = 6;
  static constexpr int reject = 7;
  static constexpr int of(Symbol s, Dir d) { return int(s) * 2 + int(d); }
  static std::string name(int v) {
    if (v == accept)
      return "a";
    if (v == reject)
      return "r";
    return std::string(1, symbol_char(Symbol(v / 2))) + (v % 2 ? "Out" : "In");
  }
};

/// Injection of the vertices into unit blocks [k, k+1).
class VertexTable {
public:
  VertexTable() : VertexTable({0, 1, 2, 3, 4, 5, 6, 7}) {}
  explicit VertexTable(std::array<std::int64_t, Vertex::count> blocks) : blocks_(blocks) {
    std::set<std::int64_t> seen(blocks.begin(), blocks.end());
    if (seen.size() != blocks.size())
      throw NotInjective("vertex table maps two vertices to one block");
  }
  static VertexTable standard() { return VertexTable(); }
  // Second packaged table, used to check independence from the choice.
  static VertexTable alternate() { return VertexTable({20, 23, 21, 25, 22, 24, -3, 30}); }

  std::int64_t block(int vertex) const { return blocks_.at(vertex); }
  std::int64_t block(Symbol s, Dir d) const { return block(Vertex::of(s, d)); }
  std::int64_t accept() const { return block(Vertex::accept); }
  std::int64_t reject() const { return block(Vertex::reject); }
  const std::array<std::int64_t, Vertex::count> &blocks() const { return blocks_; }

  MSet symbol_support() const {
    return MSet::blocks({blocks_[0], blocks_[1], blocks_[2], blocks_[3], blocks_[4], blocks_[5]});
  }
  MSet result_support() const { return MSet::blocks({accept(), reject()}); }

private:
  std::array<std::int64_t, Vertex::count> blocks_;
};

/// Parse a bare binary word; the start marker is implicit.
inline std::vector<Symbol> parse_word(const std::string &w) {
  std::vector<Symbol> out{Symbol::star};
  for (char c : w) {
    if (c == '0')
      out.push_back(Symbol::zero);
    else if (c == '1')
      out.push_back(Symbol::one);
    else
      throw BadAlphabet(std::string("word letter '") + c + "' is not 0 or 1");
  }
  return out;
}

struct WordGraphEdge {
  bool right = true; // r-edges move to the next position, l-edges back
  int position = 0;
  int source = 0;    // vertex
  int target = 0;
  int in = 0;
  int out = 0;
};

/// Discrete representation of a word: edge 2i is (r,i), edge 2i+1 is (l,i).
struct WordGraph {
  std::vector<Symbol> letters; // starts with the marker
  std::vector<WordGraphEdge> edges;
  int dialect_size() const { return int(letters.size()); }
};

inline WordGraph word_graph(const std::string &w) {
  WordGraph g;
  g.letters = parse_word(w);
  int n = int(g.letters.size());
  for (int i = 0; i < n; ++i) {
    int nx = (i + 1) % n, pv = (i + n - 1) % n;
    g.edges.push_back({true, i, Vertex::of(g.letters[i], Dir::out),
                       Vertex::of(g.letters[nx], Dir::in), i, nx});
    g.edges.push_back({false, i, Vertex::of(g.letters[i], Dir::in),
                       Vertex::of(g.letters[pv], Dir::out), i, pv});
  }
  return g;
}

/// Word graphing: every word-graph edge realised as a block translation.
inline GraphingRep word_graphing(const std::string &w, const VertexTable &psi = {}) {
  WordGraph wg = word_graph(w);
  GraphingRep g;
  g.support = psi.symbol_support();
  g.dialect_size = wg.dialect_size();
  for (auto &e : wg.edges)
    g.edges.push_back({MSet::block(psi.block(e.source)), e.in, e.out,
                       Descriptor::translation(psi.block(e.target) - psi.block(e.source)),
                       Weight::one()});
  return g;
}

/// Promotion: fold the dialect into coordinate 1, state i living on
/// [i/n, (i+1)/n). The result has the trivial dialect.
inline GraphingRep promote(const GraphingRep &g) {
  int n = g.dialect_size;
  GraphingRep out;
  out.support = g.support;
  out.dialect_size = 1;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const Edge &e = g.edges[k];
    const Descriptor &f = e.map;
    if (f.perm().image(1) != 1 || f.perm().preimage(1) != 1 || f.shift(1) != 0)
      throw PairingRequired("edge " + std::to_string(k) + " already acts on coordinate 1");
    std::vector<Box> boxes;
    Interval slot(rat(e.in, n), rat(e.in + 1, n));
    for (const Box &b : e.source.boxes()) {
      Interval c1 = b.coord(1);
      if (!c1.intersects(slot))
        continue;
      auto coords = b.coords();
      coords[1] = c1.intersect(slot);
      boxes.emplace_back(b.line(), coords);
    }
    auto shifts = f.shifts();
    shifts[1] = frac(rat(e.out - e.in, n));
    out.edges.push_back({MSet(boxes), 0, 0,
                         Descriptor(f.slope(), f.offset(), f.perm(), shifts), e.weight});
  }
  return out;
}

/// A representation of a word: promotion of a renamed word graphing.
inline GraphingRep representation(const std::string &w, const std::vector<int> &renaming,
                                  const VertexTable &psi = {}) {
  return promote(rename_dialect(word_graphing(w, psi), renaming));
}

inline GraphingRep representation(const std::string &w, const VertexTable &psi = {}) {
  GraphingRep g = word_graphing(w, psi);
  std::vector<int> id(g.dialect_size);
  for (int i = 0; i < g.dialect_size; ++i)
    id[i] = i;
  return promote(rename_dialect(g, id));
}

} // namespace igm
