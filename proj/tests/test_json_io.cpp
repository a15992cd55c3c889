#include <random>

#include <gtest/gtest.h>

#include "igm/encodings.hpp"
#include "igm/json_io.hpp"
#include "oracles.hpp"

using namespace igm;
using io::Json;

TEST(Json, IntervalAndBoxWireFormat) {
  Box b(Interval(0, 2), {{1, Interval(0, rat(1, 2))}});
  Json j = io::to_json(b);
  EXPECT_EQ(j.dump(), R"({"line":["0/1","2/1"],"coords":{"1":["0/1","1/2"]}})");
  EXPECT_EQ(io::box_from(j), b);
  EXPECT_EQ(io::interval_from(Json::parse(R"([0, "3/4"])")), Interval(0, rat(3, 4)));
}

TEST(Json, DescriptorWireFormat) {
  Json j = Json::parse(R"({"slope":"1/1","offset":"1/1","perm":{"1":2,"2":1},"shifts":{"1":"1/2"}})");
  Descriptor f = io::descriptor_from(j);
  EXPECT_EQ(f, Descriptor(1, 1, Perm::transposition(1, 2), {{1, rat(1, 2)}}));
  EXPECT_EQ(io::to_json(f), j);
}

TEST(Json, WeightDefaultsToUnitUnflagged) {
  Json g = Json::parse(R"({"support":[{"line":["0/1","1/1"]}],"dialect":1,
                            "edges":[{"source":[{"line":["0/1","1/1"]}],"in":0,"out":0,
                                      "map":{"slope":"1/1","offset":"0/1"}}]})");
  GraphingRep rep = io::graphing_from(g);
  ASSERT_EQ(rep.edges.size(), 1u);
  EXPECT_EQ(rep.edges[0].weight, Weight::one());
}

TEST(Json, RandomGraphingsRoundTrip) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    GraphingRep g = oracle::random_cell_graphing(rng, {0, 1, 2}, 2, 3, 3, 6, 30);
    g.edges[0].weight.a = rat(2, 7);
    EXPECT_EQ(io::graphing_from(Json::parse(io::to_json(g).dump())), g);
  }
}

TEST(Json, AutomatonAndMachineRoundTrip) {
  MultiheadAutomaton a =
      io::automaton_from(io::read_file(std::string(IGM_DATA_DIR) + "/anbn.json"));
  MultiheadAutomaton back = io::automaton_from(io::to_json(a));
  EXPECT_EQ(back.states(), a.states());
  EXPECT_EQ(back.transitions(), a.transitions());

  Machine m = automaton_to_machine(a).machine;
  Machine mb = io::machine_from(io::to_json(m));
  EXPECT_EQ(mb.graphing, m.graphing);
  EXPECT_EQ(mb.head_bound, m.head_bound);
}

TEST(Json, MalformedInputsRaiseParseErrors) {
  EXPECT_THROW(io::interval_from(Json::parse("[1]")), ParseError);
  EXPECT_THROW(io::rational_from(Json::parse("1.5")), ParseError);
  EXPECT_THROW(io::graphing_from(Json::parse(R"({"dialect":1})")), ParseError);
  EXPECT_THROW(io::graphing_from(Json::parse(R"({"support":[],"dialect":0,"edges":[]})")),
               ParseError);
  EXPECT_THROW(io::automaton_from(Json::parse(R"({"heads":1,"transitions":[{"read":["2"]}]})")),
               ParseError);
  EXPECT_THROW(io::read_file("/nonexistent/graphing.json"), ParseError);
}

TEST(Json, MachinesAreValidatedOnLoad) {
  GraphingRep g{MSet::block(0), 1, {}};
  EXPECT_THROW(io::machine_from(io::to_json(Machine{g, 1})), InvalidMachine);
}
