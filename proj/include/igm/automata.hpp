#pragma once

// Two-way multihead nondeterministic automata on the circular tape
// *a1...a(n-1), read co-nondeterministically: a word is accepted when no
// run reaches the reject state.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "igm/errors.hpp"
#include "igm/words.hpp"

namespace igm {

inline const std::string init_state = "init";
inline const std::string accept_state = "accept";
inline const std::string reject_state = "reject";

/// Head moves: In is rightward (index + 1), Out is leftward.
struct Transition {
  std::vector<Symbol> read;
  std::string state;
  int head = 1; // 1-based
  Dir dir = Dir::in;
  std::string next;
  friend bool operator==(const Transition &, const Transition &) = default;
};

class MultiheadAutomaton {
public:
  MultiheadAutomaton() = default;
  MultiheadAutomaton(int heads, std::vector<std::string> states,
                     std::vector<Transition> transitions)
      : heads_(heads), states_(std::move(states)), transitions_(std::move(transitions)) {
    if (heads_ < 1)
      throw InvalidArgument("an automaton needs at least one head");
    for (const auto &reserved : {init_state, accept_state, reject_state})
      if (std::find(states_.begin(), states_.end(), reserved) == states_.end())
        states_.push_back(reserved);
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (!index_.emplace(states_[i], int(i)).second)
        throw InvalidArgument("duplicate state '" + states_[i] + "'");
    for (std::size_t k = 0; k < transitions_.size(); ++k) {
      const auto &t = transitions_[k];
      std::string who = "transition " + std::to_string(k);
      if (int(t.read.size()) != heads_)
        throw InvalidArgument(who + " reads " + std::to_string(t.read.size()) + " symbols");
      if (t.head < 1 || t.head > heads_)
        throw InvalidArgument(who + " moves head " + std::to_string(t.head));
      if (!index_.count(t.state) || !index_.count(t.next))
        throw InvalidArgument(who + " uses an undeclared state");
      if (is_halting(t.state))
        throw InvalidArgument(who + " leaves a halting state");
    }
    by_state_.resize(states_.size());
    for (std::size_t k = 0; k < transitions_.size(); ++k)
      by_state_[index_.at(transitions_[k].state)].push_back(int(k));
  }

  int heads() const { return heads_; }
  const std::vector<std::string> &states() const { return states_; }
  const std::vector<Transition> &transitions() const { return transitions_; }
  int state_index(const std::string &s) const {
    auto it = index_.find(s);
    if (it == index_.end())
      throw InvalidArgument("unknown state '" + s + "'");
    return it->second;
  }
  const std::vector<int> &leaving(const std::string &s) const {
    return by_state_[state_index(s)];
  }
  static bool is_halting(const std::string &s) { return s == accept_state || s == reject_state; }
  bool deterministic() const {
    std::set<std::pair<std::vector<Symbol>, std::string>> seen;
    for (auto &t : transitions_)
      if (!seen.insert({t.read, t.state}).second)
        return false;
    return true;
  }

private:
  int heads_ = 1;
  std::vector<std::string> states_;
  std::vector<Transition> transitions_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> by_state_;
};

struct Configuration {
  std::string state;
  std::vector<int> positions;
  friend auto operator<=>(const Configuration &, const Configuration &) = default;
};

inline Configuration initial_configuration(const MultiheadAutomaton &a) {
  return {init_state, std::vector<int>(a.heads(), 0)};
}

namespace detail {

inline bool reads(const Transition &t, const std::vector<Symbol> &tape, const Configuration &c) {
  for (std::size_t h = 0; h < c.positions.size(); ++h)
    if (tape[c.positions[h]] != t.read[h])
      return false;
  return true;
}

inline Configuration fire(const Transition &t, const Configuration &c, int n) {
  Configuration d{t.next, c.positions};
  if (MultiheadAutomaton::is_halting(t.next)) {
    for (int p : c.positions)
      if (p != 0)
        throw MalformedHalt("halting into " + t.next + " with a head off the marker");
    return d;
  }
  int &p = d.positions[t.head - 1];
  p = (p + (t.dir == Dir::in ? 1 : n - 1)) % n;
  return d;
}

} // namespace detail

inline std::vector<Configuration> successors(const MultiheadAutomaton &a,
                                             const std::string &w, const Configuration &c) {
  auto tape = parse_word(w);
  std::set<Configuration> out;
  for (int k : a.leaving(c.state)) {
    const auto &t = a.transitions()[k];
    if (detail::reads(t, tape, c))
      out.insert(detail::fire(t, c, int(tape.size())));
  }
  return {out.begin(), out.end()};
}

/// True iff no run reaches the reject state.
inline bool co_accepts(const MultiheadAutomaton &a, const std::string &w) {
  auto tape = parse_word(w);
  int n = int(tape.size());
  std::set<Configuration> seen{initial_configuration(a)};
  std::deque<Configuration> queue{initial_configuration(a)};
  while (!queue.empty()) {
    Configuration c = std::move(queue.front());
    queue.pop_front();
    if (c.state == reject_state)
      return false;
    for (int k : a.leaving(c.state)) {
      const auto &t = a.transitions()[k];
      if (!detail::reads(t, tape, c))
        continue;
      Configuration d = detail::fire(t, c, n);
      if (seen.insert(d).second)
        queue.push_back(std::move(d));
    }
  }
  return true;
}

struct Trace {
  std::vector<int> transitions; // indices into the automaton's transition list
  bool halting = false;
};

/// Every transition sequence of length 1..max_steps from the initial
/// configuration, in depth-first order of transition indices.
inline std::vector<Trace> traces(const MultiheadAutomaton &a, const std::string &w,
                                 int max_steps) {
  if (max_steps < 1)
    throw InvalidArgument("max_steps must be at least 1");
  auto tape = parse_word(w);
  int n = int(tape.size());
  std::vector<Trace> out;
  std::vector<int> seq;
  auto rec = [&](auto &&self, const Configuration &c) -> void {
    const auto &ts = a.transitions();
    for (int k : a.leaving(c.state)) {
      if (!detail::reads(ts[k], tape, c))
        continue;
      Configuration d = detail::fire(ts[k], c, n);
      seq.push_back(k);
      out.push_back({seq, MultiheadAutomaton::is_halting(d.state)});
      if (int(seq.size()) < max_steps)
        self(self, d);
      seq.pop_back();
    }
  };
  rec(rec, initial_configuration(a));
  return out;
}

/// All binary words of length 0..max_len, shortest first.
inline std::vector<std::string> words_up_to(int max_len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (int(out[i].size()) < max_len) {
      out.push_back(out[i] + "0");
      out.push_back(out[i] + "1");
    }
  std::stable_sort(out.begin(), out.end(),
                   [](auto &x, auto &y) { return x.size() < y.size(); });
  return out;
}

inline std::set<std::string> language_a(const MultiheadAutomaton &a, int max_len) {
  std::set<std::string> out;
  for (auto &w : words_up_to(max_len))
    if (co_accepts(a, w))
      out.insert(w);
  return out;
}

} // namespace igm
