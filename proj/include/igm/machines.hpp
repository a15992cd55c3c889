#pragma once

// Predicate machines: finite graphings over the symbol and result blocks,
// their computation against word representations, acceptance through the
// reject test, essentialization and language enumeration.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "igm/automata.hpp"
#include "igm/errors.hpp"
#include "igm/execution.hpp"
#include "igm/graphings.hpp"
#include "igm/measurement.hpp"
#include "igm/microcosm.hpp"
#include "igm/words.hpp"

namespace igm {

struct Machine {
  GraphingRep graphing;
  int head_bound = 1;
};

struct MachineCheck {
  std::optional<Machine> machine;
  std::vector<std::string> diagnostics;
  bool ok() const { return machine.has_value(); }
};

inline MSet machine_support(const VertexTable &psi) {
  return psi.symbol_support().unite(psi.result_support());
}

inline MachineCheck validate_machine(const GraphingRep &g, const VertexTable &psi = {}) {
  MachineCheck out;
  if (!g.support.equal_ae(machine_support(psi)))
    out.diagnostics.push_back("support is not the symbol and result blocks");
  int bound = 1;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const Edge &e = g.edges[k];
    std::string who = "edge " + std::to_string(k);
    if (e.weight.a != 1 || e.weight.flag)
      out.diagnostics.push_back(who + ": weight is not (1, 0)");
    auto c = classify(e.map);
    if (!c.m_least)
      out.diagnostics.push_back(who + ": map lies in no m(i)");
    else
      bound = std::max(bound, *c.m_least);
    if (!e.source.subset_ae(g.support) || !e.target().subset_ae(g.support))
      out.diagnostics.push_back(who + ": leaves the support");
    if (e.in < 0 || e.in >= g.dialect_size || e.out < 0 || e.out >= g.dialect_size)
      out.diagnostics.push_back(who + ": dialect state out of range");
  }
  if (out.diagnostics.empty())
    out.machine = Machine{g, bound};
  return out;
}

inline Machine require_machine(const GraphingRep &g, const VertexTable &psi = {}) {
  auto check = validate_machine(g, psi);
  if (!check.ok()) {
    std::string msg;
    for (auto &d : check.diagnostics)
      msg += (msg.empty() ? "" : "; ") + d;
    throw InvalidMachine(msg);
  }
  return *check.machine;
}

/// Execution of the machine against a word representation over the symbol
/// blocks; the result project has the result blocks as support.
inline Project compute(const Machine &m, const GraphingRep &rep, const VertexTable &psi = {},
                       const PathOptions &opts = {}) {
  PlugResult r = plug_with(m.graphing, rep, psi.symbol_support(), opts);
  if (r.truncated)
    throw NonTerminating("computation was truncated");
  return Project::of(std::move(r.graphing));
}

inline bool accepts_representation(const Machine &m, const GraphingRep &rep,
                                   const VertexTable &psi = {}) {
  Project result = compute(m, rep, psi);
  return decide_against_test(result, reject_test(psi.reject(), psi.result_support())) ==
         Verdict::pass;
}

inline bool accepts(const Machine &m, const std::string &w, const VertexTable &psi = {}) {
  return accepts_representation(m, representation(w, psi), psi);
}

inline std::set<std::string> language(const Machine &m, int max_len,
                                      const VertexTable &psi = {}) {
  std::set<std::string> out;
  for (auto &w : words_up_to(max_len))
    if (accepts(m, w, psi))
      out.insert(w);
  return out;
}

/// True when every edge permutes coordinates by at most one star
/// transposition (1 j).
inline bool is_essential(const Machine &m) {
  for (auto &e : m.graphing.edges) {
    const auto &moves = e.map.perm().moves();
    if (moves.empty())
      continue;
    if (moves.size() != 2 || !moves.count(1) || !e.map.shifts().empty())
      return false;
  }
  return true;
}

/// Replace every edge whose permutation is not a single star transposition
/// by a chain of star-transposition edges. Between two links the machine
/// hands the active coordinate to the word, which moves it right and back,
/// so the chain stalls without changing any position.
inline Machine essentialize(const Machine &m, const VertexTable &psi = {}) {
  Machine out;
  out.head_bound = m.head_bound;
  out.graphing.support = m.graphing.support;
  int next_state = m.graphing.dialect_size;
  const Symbol symbols[3] = {Symbol::star, Symbol::zero, Symbol::one};
  for (const Edge &e : m.graphing.edges) {
    auto steps = decompose_star(e.map.perm());
    if (steps.size() <= 1) {
      out.graphing.edges.push_back(e);
      continue;
    }
    if (!e.map.shifts().empty())
      throw NotEssential("edge map shifts coordinates");
    std::set<std::int64_t> src_blocks;
    for (const Box &b : e.source.boxes())
      src_blocks.insert(to_int64(floor_of(b.line().lo)));
    if (src_blocks.size() != 1 || e.map.slope() != 1)
      throw NotEssential("a stalled edge needs a translation from a single block");
    std::int64_t target_block = *src_blocks.begin() + to_int64(e.map.offset());
    std::size_t links = steps.size();
    int first_fresh = next_state;
    next_state += 2 * int(links - 1);
    auto parked = [&](std::size_t j) { return first_fresh + 2 * int(j); };     // after link j
    auto returning = [&](std::size_t j) { return first_fresh + 2 * int(j) + 1; };
    // first link: from the original source into every Out block
    for (Symbol x : symbols) {
      std::int64_t to = psi.block(x, Dir::out);
      for (const Box &b : e.source.boxes()) {
        std::int64_t from = to_int64(floor_of(b.line().lo));
        out.graphing.edges.push_back(
            {MSet(b), e.in, parked(0),
             Descriptor(1, rat(to - from), Perm::transposition(1, steps[0])), e.weight});
      }
    }
    for (std::size_t j = 0; j + 1 < links; ++j) {
      // the word moved right: send it back left without touching coordinates
      for (Symbol y : symbols) {
        std::int64_t blk = psi.block(y, Dir::in);
        out.graphing.edges.push_back(
            {MSet::block(blk), parked(j), returning(j), Descriptor::identity(), e.weight});
      }
      bool last = j + 2 == links;
      for (Symbol x : symbols) {
        std::int64_t from = psi.block(x, Dir::out);
        Perm t = Perm::transposition(1, steps[j + 1]);
        if (last) {
          out.graphing.edges.push_back({MSet::block(from), returning(j), e.out,
                                        Descriptor(1, rat(target_block - from), t), e.weight});
        } else {
          out.graphing.edges.push_back(
              {MSet::block(from), returning(j), parked(j + 1), Descriptor(1, 0, t), e.weight});
        }
      }
    }
  }
  out.graphing.dialect_size = next_state;
  return out;
}

} // namespace igm
