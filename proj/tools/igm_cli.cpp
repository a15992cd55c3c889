// Command-line front end: encode automata, decide words, compare languages,
// run executions and measurements on graphing files.
//
// Exit codes: 0 pass / agreement, 1 fail / disagreement, 2 error.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "igm/igm.hpp"
#include "igm/json_io.hpp"

using namespace igm;
using io::Json;

namespace {

struct Globals {
  std::string psi = "standard";
  std::string format = "table";
  std::string output;
  unsigned jobs = 0;
};

VertexTable load_psi(const std::string &spec) {
  if (spec == "standard")
    return VertexTable::standard();
  if (spec == "alternate")
    return VertexTable::alternate();
  Json j = io::read_file(spec);
  if (!j.is_array() || j.size() != Vertex::count)
    throw ParseError("a vertex table file lists 8 block indices");
  std::array<std::int64_t, Vertex::count> blocks;
  for (int i = 0; i < Vertex::count; ++i)
    blocks[i] = j[i].get<std::int64_t>();
  return VertexTable(blocks);
}

void emit(const Globals &g, const Json &j, const std::string &table) {
  std::string text = g.format == "json" ? j.dump(2) + "\n" : table;
  if (g.output.empty())
    std::cout << text;
  else {
    std::ofstream out(g.output);
    if (!out)
      throw InvalidArgument("cannot write " + g.output);
    out << text;
  }
}

void emit_json(const Globals &g, const Json &j) {
  if (g.output.empty())
    std::cout << j.dump(2) << "\n";
  else
    io::write_file(g.output, j);
}

// Runs fn(i) for i in [0, n) on a bounded pool; results are stored by index
// so report order never depends on scheduling.
template <typename Fn> void parallel_for(std::size_t n, unsigned jobs, Fn &&fn) {
  unsigned workers = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

MSet parse_cut(const std::string &text) {
  if (text.empty())
    return {};
  Json j;
  if (text.front() == '[' || text.front() == '{') {
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("--cut: ") + e.what());
    }
  } else {
    j = io::read_file(text);
  }
  if (j.is_array() && j.size() == 2 && !j[0].is_object())
    return MSet(Box(io::interval_from(j)));
  return io::mset_from(j);
}

std::string word_label(const std::string &w) { return w.empty() ? "(empty)" : w; }

int cmd_decide(const Globals &g, const std::string &machine_file, const std::string &word) {
  VertexTable psi = load_psi(g.psi);
  Machine m = io::machine_from(io::read_file(machine_file), psi);
  bool pass = accepts(m, word, psi);
  Json j = {{"word", word}, {"verdict", pass ? "pass" : "fail"}};
  emit(g, j, std::string(pass ? "pass" : "fail") + "\n");
  return pass ? 0 : 1;
}

int cmd_compare(const Globals &g, const std::string &automaton_file, int max_len,
                int renamings, unsigned seed) {
  VertexTable psi = load_psi(g.psi);
  MultiheadAutomaton a = io::automaton_from(io::read_file(automaton_file));
  Machine m = automaton_to_machine(a, psi).machine;
  auto words = words_up_to(max_len);
  struct Row {
    bool automaton = false, machine = false, uniform = true;
  };
  std::vector<Row> rows(words.size());
  parallel_for(words.size(), g.jobs, [&](std::size_t i) {
    const std::string &w = words[i];
    rows[i].automaton = co_accepts(a, w);
    rows[i].machine = accepts(m, w, psi);
    std::mt19937 rng(seed + unsigned(i));
    int size = int(w.size()) + 1;
    for (int r = 0; r < renamings; ++r) {
      std::vector<int> pool(3 * size);
      std::iota(pool.begin(), pool.end(), 0);
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(size);
      bool v = accepts_representation(m, representation(w, pool, psi), psi);
      rows[i].uniform = rows[i].uniform && v == rows[i].machine;
    }
  });
  bool all = true;
  Json arr = Json::array();
  std::ostringstream table;
  table << "word      automaton machine agree\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    bool agree = rows[i].automaton == rows[i].machine && rows[i].uniform;
    all = all && agree;
    arr.push_back({{"word", words[i]}, {"automaton", rows[i].automaton},
                   {"machine", rows[i].machine}, {"uniform", rows[i].uniform},
                   {"agree", agree}});
    table << std::left << std::setw(10) << word_label(words[i]) << std::setw(10)
          << (rows[i].automaton ? "accept" : "reject") << std::setw(8)
          << (rows[i].machine ? "accept" : "reject") << (agree ? "yes" : "NO") << "\n";
  }
  table << (all ? "all agree\n" : "DISAGREEMENT\n");
  emit(g, {{"rows", arr}, {"agree", all}}, table.str());
  return all ? 0 : 1;
}

int cmd_roundtrip(const Globals &g, const std::string &automaton_file, int max_len,
                  const std::string &mode_name) {
  VertexTable psi = load_psi(g.psi);
  MultiheadAutomaton a = io::automaton_from(io::read_file(automaton_file));
  ExtractionMode mode =
      mode_name == "verbatim" ? ExtractionMode::verbatim : ExtractionMode::preamble;
  Machine ess = essentialize(automaton_to_machine(a, psi).machine, psi);
  ExtractionReport ex = machine_to_automaton(ess, mode, psi);
  auto words = words_up_to(max_len);
  std::vector<std::pair<bool, bool>> verdicts(words.size());
  parallel_for(words.size(), g.jobs, [&](std::size_t i) {
    verdicts[i] = {co_accepts(a, words[i]), co_accepts(ex.automaton, words[i])};
  });
  bool all = true;
  Json arr = Json::array();
  std::ostringstream table;
  table << "mode " << mode_name << ", extracted states " << ex.declared_states
        << ", transitions " << ex.automaton.transitions().size() << "\n";
  for (auto &n : ex.notes)
    table << "note: " << n << "\n";
  table << "word      original extracted agree\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto [x, y] = verdicts[i];
    all = all && x == y;
    arr.push_back({{"word", words[i]}, {"original", x}, {"extracted", y}, {"agree", x == y}});
    table << std::left << std::setw(10) << word_label(words[i]) << std::setw(9)
          << (x ? "accept" : "reject") << std::setw(10) << (y ? "accept" : "reject")
          << (x == y ? "yes" : "NO") << "\n";
  }
  table << (all ? "all agree\n" : "DISAGREEMENT\n");
  emit(g,
       {{"mode", mode_name}, {"states", ex.declared_states}, {"notes", ex.notes},
        {"rows", arr}, {"agree", all}},
       table.str());
  return all ? 0 : 1;
}

int cmd_encode(const Globals &g, const std::string &automaton_file) {
  VertexTable psi = load_psi(g.psi);
  EncodedAutomaton enc =
      automaton_to_machine(io::automaton_from(io::read_file(automaton_file)), psi);
  emit_json(g, io::to_json(enc.machine));
  return 0;
}

int cmd_extract(const Globals &g, const std::string &machine_file,
                const std::string &mode_name) {
  VertexTable psi = load_psi(g.psi);
  Machine m = io::machine_from(io::read_file(machine_file), psi);
  ExtractionMode mode =
      mode_name == "verbatim" ? ExtractionMode::verbatim : ExtractionMode::preamble;
  ExtractionReport ex = machine_to_automaton(m, mode, psi);
  for (auto &n : ex.notes)
    std::cerr << "note: " << n << "\n";
  emit_json(g, io::to_json(ex.automaton));
  return 0;
}

int cmd_essentialize(const Globals &g, const std::string &machine_file) {
  VertexTable psi = load_psi(g.psi);
  Machine m = io::machine_from(io::read_file(machine_file), psi);
  emit_json(g, io::to_json(essentialize(m, psi)));
  return 0;
}

PathOptions path_options(std::optional<std::size_t> max_len) {
  PathOptions opts;
  opts.max_len = max_len;
  return opts;
}

int cmd_exec(const Globals &g, const std::string &f_file, const std::string &g_file,
             const std::string &cut, std::optional<std::size_t> max_len) {
  GraphingRep f = io::graphing_from(io::read_file(f_file));
  GraphingRep h = io::graphing_from(io::read_file(g_file));
  PlugResult r = plug_with(f, h, parse_cut(cut), path_options(max_len));
  Json j = io::to_json(r.graphing);
  j["truncated"] = r.truncated;
  if (r.truncated)
    std::cerr << "warning: result truncated at path length " << *max_len << "\n";
  emit_json(g, j);
  return 0;
}

int cmd_paths(const Globals &g, const std::string &f_file, const std::string &g_file,
              std::optional<std::size_t> max_len) {
  GraphingRep f = io::graphing_from(io::read_file(f_file));
  GraphingRep h = io::graphing_from(io::read_file(g_file));
  auto paths = alternating_paths(f, h, path_options(max_len));
  Json arr = Json::array();
  std::ostringstream table;
  auto state = [](const std::optional<int> &s) { return s ? Json(*s) : Json(nullptr); };
  for (auto &p : paths) {
    Json steps = Json::array();
    std::string label;
    for (auto &s : p.steps) {
      std::string name = (s.side == Side::left ? "F" : "G") + std::to_string(s.edge);
      steps.push_back(name);
      label += (label.empty() ? "" : " ") + name;
    }
    arr.push_back({{"steps", steps}, {"source", io::to_json(p.source)},
                   {"map", io::to_json(p.map)}, {"weight", io::to_json(p.weight)},
                   {"in", {state(p.in.left), state(p.in.right)}},
                   {"out", {state(p.out.left), state(p.out.right)}}});
    table << label << "  measure " << to_string(p.source.measure()) << "\n";
  }
  table << paths.size() << " paths\n";
  emit(g, arr, table.str());
  return 0;
}

int cmd_measure(const Globals &g, const std::string &f_file, const std::string &g_file,
                const std::string &mode_name, const std::string &tol) {
  GraphingRep f = io::graphing_from(io::read_file(f_file));
  GraphingRep h = io::graphing_from(io::read_file(g_file));
  MeasureOptions opts;
  opts.mode = mode_name == "series" ? MeasureMode::series : MeasureMode::exact;
  if (!tol.empty())
    opts.tolerance = io::rational_from(Json(tol));
  MeasurementValue v = measure_graphings(f, h, opts);
  Json j = {{"value", v.to_string()}};
  std::string table = v.to_string() + "\n";
  if (opts.mode == MeasureMode::series && !v.infinite) {
    j["tailBound"] = to_string(v.tail_bound);
    table += "tail bound " + to_string(v.tail_bound) + "\n";
  }
  emit(g, j, table);
  return 0;
}

int cmd_correspond(const Globals &g, const std::string &automaton_file,
                   const std::string &word, int max_steps) {
  VertexTable psi = load_psi(g.psi);
  MultiheadAutomaton a = io::automaton_from(io::read_file(automaton_file));
  CorrespondenceReport r = trace_path_correspondence(a, word, max_steps, psi);
  Json rows = Json::array();
  std::ostringstream table;
  table << "root    length traces paths matched\n";
  for (auto &row : r.rows) {
    std::string root = row.root == 1 ? "accept" : "reject";
    rows.push_back({{"root", root}, {"length", row.length}, {"traces", row.traces},
                    {"paths", row.paths}, {"matched", row.matched}});
    table << std::left << std::setw(8) << root << std::setw(7) << row.length
          << std::setw(7) << row.traces << std::setw(6) << row.paths << row.matched
          << "\n";
  }
  for (auto &m : r.mismatches)
    table << "mismatch: " << m << "\n";
  table << (r.bijective() ? "bijective\n" : "NOT bijective\n");
  emit(g, {{"rows", rows}, {"mismatches", r.mismatches}, {"bijective", r.bijective()}},
       table.str());
  return r.bijective() ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Interaction graph machines: encode, decide, execute, measure"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--psi", g.psi, "vertex table: standard, alternate or a JSON file")
      ->capture_default_str();
  app.add_option("--format", g.format, "report format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  app.add_option("-o,--output", g.output, "write the result to a file");
  app.add_option("--jobs", g.jobs, "worker threads for per-word work (0 = all cores)");

  std::string file, file2, word, mode = "exact", extract_mode = "preamble", cut, tol;
  int max_len = 6, max_steps = 12, renamings = 0;
  unsigned seed = 1;
  std::optional<std::size_t> path_len;
  int code = 0;

  auto *decide = app.add_subcommand("decide", "run a machine on a word (exit 0 pass, 1 fail)");
  decide->add_option("machine", file)->required();
  decide->add_option("word", word)->required();
  decide->callback([&] { code = cmd_decide(g, file, word); });

  auto *compare = app.add_subcommand("compare", "encode an automaton and compare verdicts");
  compare->add_option("automaton", file)->required();
  compare->add_option("--max-len", max_len)->capture_default_str();
  compare->add_option("--renamings", renamings, "random word renamings per word");
  compare->add_option("--seed", seed)->capture_default_str();
  compare->callback([&] { code = cmd_compare(g, file, max_len, renamings, seed); });

  auto *roundtrip = app.add_subcommand(
      "roundtrip", "encode, essentialize and extract an automaton, then compare languages");
  roundtrip->add_option("automaton", file)->required();
  roundtrip->add_option("--max-len", max_len)->capture_default_str();
  roundtrip->add_option("--mode", extract_mode)
      ->check(CLI::IsMember({"verbatim", "preamble"}))
      ->capture_default_str();
  roundtrip->callback([&] { code = cmd_roundtrip(g, file, max_len, extract_mode); });

  auto *encode = app.add_subcommand("encode-automaton", "automaton JSON to machine JSON");
  encode->add_option("automaton", file)->required();
  encode->callback([&] { code = cmd_encode(g, file); });

  auto *extract = app.add_subcommand("extract-automaton", "essential machine to automaton");
  extract->add_option("machine", file)->required();
  extract->add_option("--mode", extract_mode)
      ->check(CLI::IsMember({"verbatim", "preamble"}))
      ->capture_default_str();
  extract->callback([&] { code = cmd_extract(g, file, extract_mode); });

  auto *ess = app.add_subcommand("essentialize", "make every word-vertex edge a flip");
  ess->add_option("machine", file)->required();
  ess->callback([&] { code = cmd_essentialize(g, file); });

  auto *exec = app.add_subcommand("exec", "execute two graphings over a cut");
  exec->add_option("left", file)->required();
  exec->add_option("right", file2)->required();
  exec->add_option("--cut", cut, "interval [lo,hi], inline set JSON or a set file");
  exec->add_option("--max-len", path_len, "truncate alternating paths at this length");
  exec->callback([&] { code = cmd_exec(g, file, file2, cut, path_len); });

  auto *paths = app.add_subcommand("paths", "list alternating paths");
  paths->add_option("left", file)->required();
  paths->add_option("right", file2)->required();
  paths->add_option("--max-len", path_len);
  paths->callback([&] { code = cmd_paths(g, file, file2, path_len); });

  auto *measure = app.add_subcommand("measure", "measure of the interaction of two graphings");
  measure->add_option("left", file)->required();
  measure->add_option("right", file2)->required();
  measure->add_option("--mode", mode)
      ->check(CLI::IsMember({"exact", "series"}))
      ->capture_default_str();
  measure->add_option("--tol", tol, "series tolerance as a rational, e.g. 1/1024");
  measure->callback([&] { code = cmd_measure(g, file, file2, mode, tol); });

  auto *corr = app.add_subcommand("correspond", "match automaton traces with machine paths");
  corr->add_option("automaton", file)->required();
  corr->add_option("word", word)->required();
  corr->add_option("--max-steps", max_steps)->capture_default_str();
  corr->callback([&] { code = cmd_correspond(g, file, word, max_steps); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
