#pragma once

// Translations between multihead automata and machines, and the checker
// for the correspondence between automaton traces and alternating paths.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "igm/automata.hpp"
#include "igm/cells.hpp"
#include "igm/errors.hpp"
#include "igm/machines.hpp"
#include "igm/words.hpp"

namespace igm {

/// Dialect state of an encoded automaton: automaton state, head placement
/// (head h sits on coordinate sigma[h-1]) and the symbols last read by each
/// head, the moving head's entry being the one before its latest move.
struct EncodingTag {
  int state = 0;
  std::vector<int> sigma;
  std::vector<Symbol> memory;
  friend auto operator<=>(const EncodingTag &, const EncodingTag &) = default;
};

/// Which edge family an encoded edge comes from.
struct EncodingKey {
  int transition = 0;
  int root = 0;                      // 0: none, 1: accept block, 2: reject block
  Symbol stale = Symbol::star;       // memory entry of the moving head
  Dir arrival = Dir::in;             // how the head reached its symbol
  std::vector<int> sigma;
  friend auto operator<=>(const EncodingKey &, const EncodingKey &) = default;
};

struct EncodedAutomaton {
  Machine machine;
  std::vector<EncodingKey> keys; // parallel to machine.graphing.edges
  std::map<EncodingKey, int> edge_of;
  int heads = 1;
  int states = 0;

  int tag_index(const EncodingTag &t) const {
    int perm = perm_index(t.sigma);
    int mem = 0;
    for (Symbol s : t.memory)
      mem = mem * 3 + int(s);
    return (t.state * factorial(heads) + perm) * ipow3(heads) + mem;
  }
  int dialect_size() const { return states * factorial(heads) * ipow3(heads); }

  static int factorial(int k) { return k <= 1 ? 1 : k * factorial(k - 1); }
  static int ipow3(int k) { return k == 0 ? 1 : 3 * ipow3(k - 1); }
  // Rank of a permutation of 1..k in lexicographic order.
  static int perm_index(const std::vector<int> &p) {
    int k = int(p.size()), rank = 0;
    for (int i = 0; i < k; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < k; ++j)
        smaller += p[j] < p[i];
      rank += smaller * factorial(k - 1 - i);
    }
    return rank;
  }
};

namespace detail {

inline std::vector<std::vector<int>> all_perms(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do
    out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<std::vector<Symbol>> all_symbol_vectors(int k) {
  std::vector<std::vector<Symbol>> out{{}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::vector<Symbol>> next;
    for (auto &v : out)
      for (Symbol s : {Symbol::star, Symbol::zero, Symbol::one}) {
        next.push_back(v);
        next.back().push_back(s);
      }
    out = std::move(next);
  }
  return out;
}

// Machine target block for a head move: the word moves a head rightward
// from an Out block and leftward from an In block.
inline Dir emission_block(Dir move) { return move == Dir::in ? Dir::out : Dir::in; }

} // namespace detail

/// Encode an automaton as a machine. Edge families are indexed by
/// (transition, stale symbol, arrival direction, head placement); init
/// transitions only exist on the all-marker read and are rooted once at the
/// accept block and once at the reject block.
inline EncodedAutomaton automaton_to_machine(const MultiheadAutomaton &a,
                                             const VertexTable &psi = {}) {
  EncodedAutomaton enc;
  int k = a.heads();
  enc.heads = k;
  enc.states = int(a.states().size());
  GraphingRep &g = enc.machine.graphing;
  g.support = machine_support(psi);
  g.dialect_size = enc.dialect_size();
  std::vector<int> id(k);
  std::iota(id.begin(), id.end(), 1);
  const std::vector<Symbol> markers(k, Symbol::star);
  int init_tag = enc.tag_index({a.state_index(init_state), id, markers});

  auto add = [&](EncodingKey key, std::int64_t from, int in, std::int64_t to, int out,
                 Perm perm) {
    enc.edge_of[key] = int(g.edges.size());
    enc.keys.push_back(key);
    g.edges.push_back({MSet::block(from), in, out,
                       Descriptor(1, rat(to - from), std::move(perm)), Weight::one()});
  };

  // Target of transition t from head placement sigma.
  auto target = [&](const Transition &t, const std::vector<int> &sigma, std::int64_t &block,
                    int &tag, Perm &perm) {
    if (MultiheadAutomaton::is_halting(t.next)) {
      block = t.next == accept_state ? psi.accept() : psi.reject();
      tag = init_tag;
      std::vector<int> img(k);
      for (int h = 0; h < k; ++h)
        img[sigma[h] - 1] = h + 1; // coordinate sigma(h) goes back to h
      perm = Perm::from_images(img);
      return;
    }
    int c = sigma[t.head - 1];
    std::vector<int> next = sigma;
    for (int &v : next)
      v = v == 1 ? c : v == c ? 1 : v;
    block = psi.block(t.read[t.head - 1], detail::emission_block(t.dir));
    tag = enc.tag_index({a.state_index(t.next), next, t.read});
    perm = c == 1 ? Perm() : Perm::transposition(1, c);
  };

  auto perms = detail::all_perms(k);
  const auto &ts = a.transitions();
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    const Transition &t = ts[ti];
    if (t.state == init_state) {
      if (t.read != markers)
        continue; // never enabled: every head starts on the marker
      std::int64_t to;
      int tag;
      Perm perm;
      target(t, id, to, tag, perm);
      add({int(ti), 1, Symbol::star, Dir::in, id}, psi.accept(), init_tag, to, tag, perm);
      add({int(ti), 2, Symbol::star, Dir::out, id}, psi.reject(), init_tag, to, tag, perm);
      continue;
    }
    for (auto &sigma : perms) {
      int h = int(std::find(sigma.begin(), sigma.end(), 1) - sigma.begin()); // 0-based
      std::int64_t to;
      int tag;
      Perm perm;
      target(t, sigma, to, tag, perm);
      for (Symbol stale : {Symbol::star, Symbol::zero, Symbol::one})
        for (Dir d : {Dir::in, Dir::out}) {
          std::vector<Symbol> mem = t.read;
          mem[h] = stale;
          int in = enc.tag_index({a.state_index(t.state), sigma, mem});
          add({int(ti), 0, stale, d, sigma}, psi.block(t.read[h], d), in, to, tag, perm);
        }
    }
  }
  enc.machine.head_bound = std::max(1, k);
  // the computed bound may be smaller when some head never leaves coordinate 1
  for (auto &e : g.edges)
    if (e.map.perm().max_moved() > 0)
      enc.machine.head_bound = std::max(enc.machine.head_bound, e.map.perm().max_moved());
  return enc;
}

struct CorrespondenceReport {
  struct Row {
    int root = 0;        // 1: accept block, 2: reject block
    int length = 0;      // path length (odd)
    std::size_t traces = 0;
    std::size_t paths = 0;
    std::size_t matched = 0;
  };
  std::vector<Row> rows;
  std::vector<std::string> mismatches;
  bool bijective() const { return mismatches.empty(); }
};

/// Map every trace (up to max_steps) to its alternating path between the
/// encoded machine and the word representation, and compare with the paths
/// enumerated directly on the cell graph from the accept and reject blocks
/// at the all-marker cell.
inline CorrespondenceReport trace_path_correspondence(const MultiheadAutomaton &a,
                                                      const std::string &w, int max_steps,
                                                      const VertexTable &psi = {}) {
  CorrespondenceReport report;
  EncodedAutomaton enc = automaton_to_machine(a, psi);
  GraphingRep rep = representation(w, psi);
  CellGrid grid = detect_grid({&enc.machine.graphing, &rep}, {}, a.heads());
  CellGraphing cm(enc.machine.graphing, grid), cw(rep, grid);
  int k = a.heads();
  int n = int(parse_word(w).size());
  std::vector<int> origin(grid.dims(), 0);
  using Path = std::vector<int>; // edge indices, machine and word alternating

  std::vector<int> id(k);
  std::iota(id.begin(), id.end(), 1);
  int init_tag = enc.tag_index({a.state_index(init_state), id, std::vector<Symbol>(k, Symbol::star)});
  auto trace_list = traces(a, w, max_steps);

  for (int root : {1, 2}) {
    std::int64_t start = grid.cell(root == 1 ? psi.accept() : psi.reject(), origin);
    // paths on the cell graph
    std::map<int, std::set<Path>> by_len;
    Path cur;
    std::function<void(std::int64_t, int)> walk = [&](std::int64_t cell, int state) {
      for (const Arrow &m : cm.out(cell, state)) {
        cur.push_back(m.edge);
        by_len[int(cur.size())].insert(cur);
        if (int(cur.size()) < 2 * max_steps - 1)
          for (const Arrow &x : cw.out(m.to, 0)) {
            cur.push_back(x.edge);
            walk(x.to, m.out);
            cur.pop_back();
          }
        cur.pop_back();
      }
    };
    walk(start, init_tag);

    // traces mapped to paths
    std::map<int, std::map<Path, int>> image;
    for (std::size_t ti = 0; ti < trace_list.size(); ++ti) {
      const auto &tr = trace_list[ti];
      std::vector<int> sigma = id, pos(k, 0);
      std::vector<Symbol> mem(k, Symbol::star);
      Dir arrival = Dir::in;
      Path p;
      bool ok = true;
      for (std::size_t step = 0; step < tr.transitions.size(); ++step) {
        const Transition &t = a.transitions()[tr.transitions[step]];
        EncodingKey key;
        if (step == 0)
          key = {tr.transitions[step], root, Symbol::star, root == 1 ? Dir::in : Dir::out, id};
        else {
          int h = int(std::find(sigma.begin(), sigma.end(), 1) - sigma.begin());
          key = {tr.transitions[step], 0, mem[h], arrival, sigma};
        }
        auto it = enc.edge_of.find(key);
        if (it == enc.edge_of.end()) {
          report.mismatches.push_back("trace " + std::to_string(ti) + ": no machine edge for step " +
                                      std::to_string(step));
          ok = false;
          break;
        }
        p.push_back(it->second);
        if (MultiheadAutomaton::is_halting(t.next))
          break;
        int hd = t.head - 1;
        int at = pos[hd];
        int word_edge = t.dir == Dir::in ? 2 * at : 2 * at + 1;
        pos[hd] = (at + (t.dir == Dir::in ? 1 : n - 1)) % n;
        arrival = t.dir;
        int c = sigma[hd];
        for (int &v : sigma)
          v = v == 1 ? c : v == c ? 1 : v;
        mem = t.read;
        if (step + 1 < tr.transitions.size())
          p.push_back(word_edge);
      }
      if (!ok)
        continue;
      auto [slot, fresh] = image[int(p.size())].emplace(p, int(ti));
      if (!fresh)
        report.mismatches.push_back("traces " + std::to_string(slot->second) + " and " +
                                    std::to_string(ti) + " share a path");
    }

    std::set<int> lengths;
    for (auto &[len, _] : by_len)
      lengths.insert(len);
    for (auto &[len, _] : image)
      lengths.insert(len);
    for (int len : lengths) {
      CorrespondenceReport::Row row{root, len, image[len].size(), by_len[len].size(), 0};
      for (auto &[path, ti] : image[len]) {
        if (by_len[len].count(path))
          ++row.matched;
        else
          report.mismatches.push_back("trace " + std::to_string(ti) +
                                      " maps to a path missing from the cell graph");
      }
      if (row.matched != row.paths)
        report.mismatches.push_back(std::to_string(row.paths - row.matched) +
                                    " paths of length " + std::to_string(len) +
                                    " have no trace (root " + std::to_string(root) + ")");
      report.rows.push_back(row);
    }
  }
  return report;
}

enum class ExtractionMode { verbatim, preamble };

struct ExtractionReport {
  MultiheadAutomaton automaton;
  std::vector<int> anchors;            // dialect states with reject-block loops
  std::size_t declared_states = 0;
  std::vector<std::string> notes;
};

namespace detail {

// One machine edge split to a single source block, classified by vertices.
struct EssentialEdge {
  int source = 0; // vertex, see Vertex
  int target = 0;
  int in = 0;
  int out = 0;
  int swap = 1;   // coordinate exchanged with coordinate 1 (1: none)
};

inline std::vector<EssentialEdge> essential_edges(const Machine &m, const VertexTable &psi) {
  std::map<std::int64_t, int> vertex_of;
  for (int v = 0; v < Vertex::count; ++v)
    vertex_of[psi.block(v)] = v;
  std::vector<EssentialEdge> out;
  for (std::size_t k = 0; k < m.graphing.edges.size(); ++k) {
    const Edge &e = m.graphing.edges[k];
    std::string who = "edge " + std::to_string(k);
    const Descriptor &f = e.map;
    if (f.slope() != 1 || !is_integer(f.offset()) || !f.shifts().empty())
      throw NotEssential(who + " is not a block translation");
    const auto &moves = f.perm().moves();
    int swap = 1;
    if (!moves.empty()) {
      if (moves.size() != 2 || !moves.count(1))
        throw NotEssential(who + " permutes coordinates beyond one star transposition");
      swap = moves.at(1);
    }
    for (const Box &b : e.source.boxes()) {
      if (!b.coords().empty() || !is_integer(b.line().lo) || !is_integer(b.line().hi))
        throw NotEssential(who + " has a source that is not a union of blocks");
      for (auto blk = to_int64(b.line().lo); blk < to_int64(b.line().hi); ++blk) {
        auto s = vertex_of.find(blk);
        auto t = vertex_of.find(blk + to_int64(f.offset()));
        if (s == vertex_of.end() || t == vertex_of.end())
          throw NotEssential(who + " leaves the vertex blocks");
        out.push_back({s->second, t->second, e.in, e.out, swap});
      }
    }
  }
  return out;
}

inline bool is_word_vertex(int v) { return v < 6; }
inline Symbol vertex_symbol(int v) { return Symbol(v / 2); }
inline Dir vertex_dir(int v) { return Dir(v % 2); }

// Abstract control state of the extracted automaton. Head placement pi maps
// coordinates to heads; `arrival` is only tracked in preamble mode.
struct Control {
  int q = 0;
  std::vector<int> pi;
  int anchor = 0;
  std::vector<Symbol> start;
  int arrival = -1;
  friend auto operator<=>(const Control &, const Control &) = default;
};

inline std::string control_name(const Control &c) {
  std::string s = "q" + std::to_string(c.q) + "|";
  for (int h : c.pi)
    s += std::to_string(h);
  s += "|i" + std::to_string(c.anchor) + "|";
  for (Symbol x : c.start)
    s += symbol_char(x);
  if (c.arrival >= 0)
    s += c.arrival == int(Dir::in) ? "|In" : "|Out";
  return s;
}

struct Outcome {
  bool reject = false;
  int head = 1;
  Dir dir = Dir::in;
  Control next;
  friend auto operator<=>(const Outcome &, const Outcome &) = default;
};

class Extractor {
public:
  Extractor(const Machine &m, const VertexTable &psi, ExtractionMode mode)
      : edges_(essential_edges(m, psi)), n_(m.head_bound), mode_(mode) {
    std::set<int> from_r, to_r;
    for (auto &e : edges_) {
      if (e.source == Vertex::reject)
        from_r.insert(e.in);
      if (e.target == Vertex::reject)
        to_r.insert(e.out);
    }
    for (int q : from_r)
      if (to_r.count(q))
        anchors_.push_back(q);
    for (std::size_t k = 0; k < edges_.size(); ++k)
      by_state_[{edges_[k].source, edges_[k].in}].push_back(int(k));
  }

  const std::vector<int> &anchors() const { return anchors_; }
  int heads() const { return n_; }

  // Outcomes of being on the reject block in state q with placement pi,
  // reading a: either the path closes (reject) or it leaves through an
  // edge into a word block, possibly after more reject-to-reject edges.
  void from_reject(int q, const std::vector<int> &pi, const std::vector<Symbol> &a,
                   const Control &base, bool check_here, std::set<Outcome> &out) const {
    std::set<std::pair<int, std::vector<int>>> seen;
    std::vector<std::tuple<int, std::vector<int>, bool>> stack{{q, pi, check_here}};
    while (!stack.empty()) {
      auto [cq, cpi, check] = stack.back();
      stack.pop_back();
      if (check && cq == base.anchor && closes(a, base.start, cpi))
        out.insert({true, 1, Dir::in, base});
      if (!seen.insert({cq, cpi}).second)
        continue;
      auto it = by_state_.find({Vertex::reject, cq});
      if (it == by_state_.end())
        continue;
      for (int k : it->second) {
        const EssentialEdge &e = edges_[k];
        std::vector<int> npi = swapped(cpi, e.swap);
        if (e.target == Vertex::reject)
          stack.push_back({e.out, npi, true});
        else if (is_word_vertex(e.target))
          emit(e, npi, a, base, out);
      }
    }
  }

  // Outcomes of firing the edges out of word vertex (s, d) in control c.
  void from_word(const Control &c, const std::vector<Symbol> &a, std::set<Outcome> &out) const {
    for (int v = 0; v < 6; ++v) {
      if (a[c.pi[0] - 1] != vertex_symbol(v))
        continue;
      if (mode_ == ExtractionMode::preamble && int(vertex_dir(v)) != c.arrival)
        continue;
      auto it = by_state_.find({v, c.q});
      if (it == by_state_.end())
        continue;
      for (int k : it->second) {
        const EssentialEdge &e = edges_[k];
        std::vector<int> npi = swapped(c.pi, e.swap);
        if (is_word_vertex(e.target))
          emit(e, npi, a, c, out);
        else if (e.target == Vertex::reject)
          from_reject(e.out, npi, a, c, true, out);
      }
    }
  }

private:
  static std::vector<int> swapped(std::vector<int> pi, int j) {
    std::swap(pi[0], pi[j - 1]);
    return pi;
  }

  // Reject-block revisit test: verbatim compares the read symbols with the
  // remembered ones; preamble compares them coordinate by coordinate.
  bool closes(const std::vector<Symbol> &a, const std::vector<Symbol> &start,
              const std::vector<int> &pi) const {
    if (mode_ == ExtractionMode::verbatim)
      return a == start;
    for (std::size_t c = 0; c < pi.size(); ++c)
      if (a[pi[c] - 1] != start[c])
        return false;
    return true;
  }

  void emit(const EssentialEdge &e, const std::vector<int> &npi, const std::vector<Symbol> &a,
            const Control &base, std::set<Outcome> &out) const {
    int head = npi[0];
    if (a[head - 1] != vertex_symbol(e.target))
      return;
    Dir move = vertex_dir(e.target) == Dir::out ? Dir::in : Dir::out;
    Control next = base;
    next.q = e.out;
    next.pi = npi;
    if (mode_ == ExtractionMode::preamble)
      next.arrival = int(move);
    out.insert({false, head, move, next});
  }

  std::vector<EssentialEdge> edges_;
  std::map<std::pair<int, int>, std::vector<int>> by_state_;
  std::vector<int> anchors_;
  int n_;
  ExtractionMode mode_;
};

} // namespace detail

/// Build an automaton that follows the alternating paths between an
/// essential machine and the word through the reject block, and rejects
/// when such a path closes at its anchor.
inline ExtractionReport machine_to_automaton(const Machine &m, ExtractionMode mode,
                                             const VertexTable &psi = {}) {
  detail::Extractor ex(m, psi, mode);
  ExtractionReport report;
  report.anchors = ex.anchors();
  int n = ex.heads();
  auto reads = detail::all_symbol_vectors(n);
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 1);
  const std::vector<Symbol> markers(n, Symbol::star);
  std::vector<std::string> states{init_state};
  std::vector<Transition> ts;
  std::set<std::tuple<std::vector<Symbol>, std::string, int, int, std::string>> dedupe;
  auto add = [&](const std::vector<Symbol> &r, const std::string &from, int head, Dir dir,
                 const std::string &to) {
    if (dedupe.insert({r, from, head, int(dir), to}).second)
      ts.push_back({r, from, head, dir, to});
  };
  const std::string walk = "walk", cleanup = "cleanup";
  std::size_t off_marker_rejects = 0;

  if (report.anchors.empty()) {
    report.notes.push_back("no reject-block loops: nothing is ever rejected");
    report.automaton = MultiheadAutomaton(n, {init_state, accept_state, reject_state}, {});
    report.declared_states = 3;
    return report;
  }

  // Halting needs every head on the marker; elsewhere walk heads home first.
  auto reject_from = [&](const std::vector<Symbol> &r, const std::string &from) {
    if (r == markers) {
      add(r, from, 1, Dir::in, reject_state);
      return;
    }
    if (mode == ExtractionMode::verbatim) {
      ++off_marker_rejects;
      add(r, from, 1, Dir::in, reject_state);
      return;
    }
    int h = int(std::find_if(r.begin(), r.end(), [](Symbol s) { return s != Symbol::star; }) -
                r.begin());
    add(r, from, h + 1, Dir::out, cleanup);
  };
  auto apply = [&](const std::set<detail::Outcome> &outs, const std::vector<Symbol> &r,
                   const std::string &from, std::vector<detail::Control> &fresh) {
    for (auto &o : outs) {
      if (o.reject)
        reject_from(r, from);
      else {
        add(r, from, o.head, o.dir, detail::control_name(o.next));
        fresh.push_back(o.next);
      }
    }
  };

  std::vector<detail::Control> frontier;
  // Anchoring: start on the reject block in an anchor state, remembering the
  // symbols under the heads.
  auto anchor_from = [&](const std::string &from, const std::vector<Symbol> &r) {
    for (int i : report.anchors) {
      detail::Control base{i, id, i, r, -1};
      std::set<detail::Outcome> outs;
      ex.from_reject(i, id, r, base, false, outs);
      apply(outs, r, from, frontier);
    }
  };
  if (mode == ExtractionMode::verbatim) {
    anchor_from(init_state, markers);
  } else {
    states.push_back(walk);
    states.push_back(cleanup);
    for (auto &r : reads) {
      for (const std::string &from : {init_state, walk}) {
        for (int h = 1; h <= n; ++h)
          for (Dir d : {Dir::in, Dir::out})
            add(r, from, h, d, walk);
        anchor_from(from, r);
      }
      reject_from(r, cleanup);
    }
  }

  std::set<detail::Control> done;
  auto expand = [&](const detail::Control &c) {
    std::string name = detail::control_name(c);
    std::vector<detail::Control> fresh;
    for (auto &r : reads) {
      std::set<detail::Outcome> outs;
      ex.from_word(c, r, outs);
      apply(outs, r, name, fresh);
    }
    return fresh;
  };
  if (mode == ExtractionMode::verbatim) {
    // The full declared state space, reachable or not.
    auto perms = detail::all_perms(n);
    for (int q = 0; q < m.graphing.dialect_size; ++q)
      for (auto &pi : perms)
        for (int i : report.anchors)
          for (auto &st : reads) {
            detail::Control c{q, pi, i, st, -1};
            states.push_back(detail::control_name(c));
            expand(c);
          }
  } else {
    while (!frontier.empty()) {
      detail::Control c = frontier.back();
      frontier.pop_back();
      if (!done.insert(c).second)
        continue;
      states.push_back(detail::control_name(c));
      for (auto &nx : expand(c))
        if (!done.count(nx))
          frontier.push_back(nx);
    }
  }
  if (off_marker_rejects)
    report.notes.push_back(std::to_string(off_marker_rejects) +
                           " reject transitions read a remembered non-marker vector; they fire "
                           "only with heads off the marker");
  states.push_back(accept_state);
  states.push_back(reject_state);
  report.declared_states = states.size();
  report.automaton = MultiheadAutomaton(n, std::move(states), std::move(ts));
  return report;
}

} // namespace igm
