#include <gtest/gtest.h>

#include "igm/words.hpp"

using namespace igm;

TEST(Words, ParseAddsMarkerAndRejectsForeignLetters) {
  auto w = parse_word("01");
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], Symbol::star);
  EXPECT_EQ(w[2], Symbol::one);
  EXPECT_EQ(parse_word("").size(), 1u);
  EXPECT_THROW(parse_word("012"), BadAlphabet);
}

TEST(Words, VertexNames) {
  EXPECT_EQ(Vertex::of(Symbol::zero, Dir::out), 3);
  EXPECT_EQ(Vertex::name(Vertex::of(Symbol::one, Dir::in)), "1In");
}

TEST(WordGraph, MarkerZeroOneHasSixEdges) {
  WordGraph g = word_graph("01");
  ASSERT_EQ(g.edges.size(), 6u);
  const WordGraphEdge &r1 = g.edges[2];
  EXPECT_TRUE(r1.right);
  EXPECT_EQ(r1.source, Vertex::of(Symbol::zero, Dir::out));
  EXPECT_EQ(r1.in, 1);
  EXPECT_EQ(r1.target, Vertex::of(Symbol::one, Dir::in));
  EXPECT_EQ(r1.out, 2);
  // the tape is circular: the last r-edge returns to the marker
  EXPECT_EQ(g.edges[4].target, Vertex::of(Symbol::star, Dir::in));
  EXPECT_EQ(g.edges[4].out, 0);
  EXPECT_EQ(g.edges[1].target, Vertex::of(Symbol::one, Dir::out));
}

TEST(WordGraphing, EdgesAreBlockTranslations) {
  for (auto psi : {VertexTable::standard(), VertexTable::alternate()}) {
    GraphingRep g = word_graphing("0", psi);
    ASSERT_EQ(g.edges.size(), 4u);
    WordGraph wg = word_graph("0");
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const Edge &e = g.edges[k];
      EXPECT_TRUE(member(e.map, MicrocosmSpec::z()));
      EXPECT_EQ(e.source, MSet::block(psi.block(wg.edges[k].source)));
      EXPECT_EQ(e.target(), MSet::block(psi.block(wg.edges[k].target)));
    }
    EXPECT_TRUE(validate(g, MicrocosmSpec::z()).empty());
  }
}

TEST(Promotion, DialectFoldsIntoFirstCoordinate) {
  GraphingRep p = promote(word_graphing("0"));
  EXPECT_EQ(p.dialect_size, 1);
  ASSERT_EQ(p.edges.size(), 4u);
  // (r,0): state 0 to state 1, slot [0,1/2) shifted by 1/2
  const Edge &e = p.edges[0];
  ASSERT_EQ(e.source.boxes().size(), 1u);
  EXPECT_EQ(e.source.boxes()[0].coord(1), Interval(0, rat(1, 2)));
  EXPECT_EQ(e.map.shift(1), rat(1, 2));
  EXPECT_EQ(e.target().boxes()[0].coord(1), Interval(rat(1, 2), 1));
}

TEST(Promotion, ShiftIsStateDifferenceOverDialectSize) {
  GraphingRep g{MSet::block(0), 3, {{MSet::block(0), 0, 1, Descriptor::identity(), {}}}};
  EXPECT_EQ(promote(g).edges[0].map.shift(1), rat(1, 3));
  g.edges[0].in = 2;
  g.edges[0].out = 0;
  EXPECT_EQ(promote(g).edges[0].map.shift(1), rat(1, 3)); // -2/3 mod 1
}

TEST(Promotion, RenamingWidensTheGrid) {
  GraphingRep rep = representation("0", {2, 3});
  for (auto &e : rep.edges) {
    Interval c = e.source.boxes().at(0).coord(1);
    EXPECT_EQ(c.length(), rat(1, 4));
    EXPECT_TRUE(c.lo == rat(2, 4) || c.lo == rat(3, 4));
  }
}

TEST(Promotion, CoordinateOneMustBeFree) {
  GraphingRep g{MSet::block(0), 1, {}};
  g.edges.push_back({MSet::block(0), 0, 0, Descriptor(1, 0, {}, {{1, rat(1, 2)}}), {}});
  EXPECT_THROW(promote(g), PairingRequired);
}

TEST(VertexTable, AlternateTableIsInjectiveAndDistinct) {
  VertexTable alt = VertexTable::alternate();
  std::set<std::int64_t> seen(alt.blocks().begin(), alt.blocks().end());
  EXPECT_EQ(seen.size(), std::size_t(Vertex::count));
  EXPECT_NE(alt.reject(), VertexTable::standard().reject());
  EXPECT_EQ(alt.symbol_support().measure(), 6);
}
