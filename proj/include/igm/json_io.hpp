#pragma once

// JSON (de)serialisation of sets, descriptors, graphings, machines and
// automata. Rationals travel as "p/q" strings.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "igm/automata.hpp"
#include "igm/errors.hpp"
#include "igm/graphings.hpp"
#include "igm/machines.hpp"
#include "igm/microcosm.hpp"
#include "igm/space.hpp"

namespace igm::io {

using Json = nlohmann::ordered_json;

inline Rational rational_from(const Json &j) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(j.get<std::int64_t>());
  throw ParseError("expected a rational, got " + j.dump());
}

inline Json to_json(const Interval &iv) { return Json::array({to_string(iv.lo), to_string(iv.hi)}); }

inline Interval interval_from(const Json &j) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError("interval must be [lo, hi]");
  return Interval(rational_from(j[0]), rational_from(j[1]));
}

inline Json to_json(const Box &b) {
  Json coords = Json::object();
  for (auto &[i, iv] : b.coords())
    coords[std::to_string(i)] = to_json(iv);
  return {{"line", to_json(b.line())}, {"coords", coords}};
}

inline Box box_from(const Json &j) {
  std::map<int, Interval> coords;
  if (j.contains("coords"))
    for (auto &[k, v] : j.at("coords").items())
      coords[std::stoi(k)] = interval_from(v);
  return Box(interval_from(j.at("line")), coords);
}

inline Json to_json(const MSet &s) {
  Json out = Json::array();
  for (auto &b : s.boxes())
    out.push_back(to_json(b));
  return out;
}

inline MSet mset_from(const Json &j) {
  if (!j.is_array())
    throw ParseError("a set is a list of boxes");
  std::vector<Box> boxes;
  for (auto &b : j)
    boxes.push_back(box_from(b));
  return MSet(boxes);
}

inline Json to_json(const Descriptor &f) {
  Json perm = Json::object(), shifts = Json::object();
  for (auto &[i, j] : f.perm().moves())
    perm[std::to_string(i)] = j;
  for (auto &[i, t] : f.shifts())
    shifts[std::to_string(i)] = to_string(t);
  return {{"slope", to_string(f.slope())}, {"offset", to_string(f.offset())},
          {"perm", perm}, {"shifts", shifts}};
}

inline Descriptor descriptor_from(const Json &j) {
  std::map<int, int> moves;
  std::map<int, Rational> shifts;
  if (j.contains("perm"))
    for (auto &[k, v] : j.at("perm").items())
      moves[std::stoi(k)] = v.get<int>();
  if (j.contains("shifts"))
    for (auto &[k, v] : j.at("shifts").items())
      shifts[std::stoi(k)] = rational_from(v);
  Rational slope = j.contains("slope") ? rational_from(j.at("slope")) : Rational(1);
  Rational offset = j.contains("offset") ? rational_from(j.at("offset")) : Rational(0);
  return Descriptor(slope, offset, Perm(moves), shifts);
}

inline Json to_json(const Weight &w) { return {{"a", to_string(w.a)}, {"flag", w.flag}}; }

inline Weight weight_from(const Json &j) {
  Weight w;
  if (j.contains("a"))
    w.a = rational_from(j.at("a"));
  if (j.contains("flag"))
    w.flag = j.at("flag").get<int>() ? 1 : 0;
  return w;
}

inline Json to_json(const GraphingRep &g) {
  Json edges = Json::array();
  for (auto &e : g.edges)
    edges.push_back({{"source", to_json(e.source)}, {"in", e.in}, {"out", e.out},
                     {"map", to_json(e.map)}, {"weight", to_json(e.weight)}});
  return {{"support", to_json(g.support)}, {"dialect", g.dialect_size}, {"edges", edges}};
}

inline GraphingRep graphing_from(const Json &j) {
  try {
    GraphingRep g;
    g.support = mset_from(j.at("support"));
    g.dialect_size = j.value("dialect", 1);
    if (g.dialect_size < 1)
      throw ParseError("dialect size must be positive");
    for (auto &e : j.at("edges")) {
      Edge edge;
      edge.source = mset_from(e.at("source"));
      edge.in = e.value("in", 0);
      edge.out = e.value("out", 0);
      edge.map = e.contains("map") ? descriptor_from(e.at("map")) : Descriptor();
      if (e.contains("weight"))
        edge.weight = weight_from(e.at("weight"));
      g.edges.push_back(std::move(edge));
    }
    return g;
  } catch (const nlohmann::json::exception &ex) {
    throw ParseError(std::string("graphing: ") + ex.what());
  }
}

inline Json to_json(const Machine &m) {
  Json j = to_json(m.graphing);
  j["headBound"] = m.head_bound;
  return j;
}

inline Machine machine_from(const Json &j, const VertexTable &psi = {}) {
  Machine m = require_machine(graphing_from(j), psi);
  if (j.contains("headBound")) {
    int declared = j.at("headBound").get<int>();
    if (declared < m.head_bound)
      throw InvalidMachine("declared headBound " + std::to_string(declared) +
                           " is below the computed " + std::to_string(m.head_bound));
    m.head_bound = declared;
  }
  return m;
}

inline std::string symbol_name(Symbol s) { return std::string(1, symbol_char(s)); }

inline Symbol symbol_from(const Json &j) {
  std::string s = j.get<std::string>();
  if (s == "*")
    return Symbol::star;
  if (s == "0")
    return Symbol::zero;
  if (s == "1")
    return Symbol::one;
  throw ParseError("unknown symbol '" + s + "'");
}

inline Json to_json(const MultiheadAutomaton &a) {
  Json ts = Json::array();
  for (auto &t : a.transitions()) {
    Json read = Json::array();
    for (Symbol s : t.read)
      read.push_back(symbol_name(s));
    ts.push_back({{"read", read}, {"state", t.state}, {"head", t.head},
                  {"dir", t.dir == Dir::in ? "In" : "Out"}, {"next", t.next}});
  }
  return {{"heads", a.heads()}, {"states", a.states()}, {"transitions", ts}};
}

inline MultiheadAutomaton automaton_from(const Json &j) {
  try {
    int heads = j.at("heads").get<int>();
    std::vector<std::string> states = j.value("states", std::vector<std::string>{});
    std::vector<Transition> ts;
    for (auto &t : j.at("transitions")) {
      Transition tr;
      for (auto &s : t.at("read"))
        tr.read.push_back(symbol_from(s));
      tr.state = t.at("state").get<std::string>();
      tr.head = t.value("head", 1);
      std::string dir = t.value("dir", std::string("In"));
      if (dir != "In" && dir != "Out")
        throw ParseError("direction must be In or Out");
      tr.dir = dir == "In" ? Dir::in : Dir::out;
      tr.next = t.at("next").get<std::string>();
      ts.push_back(std::move(tr));
    }
    return MultiheadAutomaton(heads, states, ts);
  } catch (const nlohmann::json::exception &ex) {
    throw ParseError(std::string("automaton: ") + ex.what());
  }
}

inline Json read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception &ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

inline void write_file(const std::string &path, const Json &j) {
  std::ofstream out(path);
  if (!out)
    throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << "\n";
}

} // namespace igm::io
