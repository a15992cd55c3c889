#include <gtest/gtest.h>

#include "igm/graphings.hpp"

using namespace igm;

namespace {

MSet line(Rational lo, Rational hi) { return MSet(Box(Interval(lo, hi))); }

// Translation by one from [0,1) to [1,2), as a single edge or split in halves.
GraphingRep shift_whole() {
  return {line(0, 2), 1, {{line(0, 1), 0, 0, Descriptor::translation(1), {}}}};
}

GraphingRep shift_split() {
  return {line(0, 2),
          1,
          {{line(0, rat(1, 2)), 0, 0, Descriptor::translation(1), {}},
           {line(rat(1, 2), 1), 0, 0, Descriptor::translation(1), {}}}};
}

} // namespace

TEST(Graphing, ValidationReportsEveryProblem) {
  GraphingRep g = shift_whole();
  EXPECT_TRUE(validate(g, MicrocosmSpec::z()).empty());
  g.edges.push_back({line(1, 2), 0, 3, Descriptor::translation(1), {}});
  g.edges.push_back({line(0, 1), 0, 0, Descriptor::affine(2, 0), {}});
  auto diag = validate(g, MicrocosmSpec::z());
  ASSERT_EQ(diag.size(), 3u); // dialect range and image of edge 1, map of edge 2
  EXPECT_NE(diag[0].find("edge 1"), std::string::npos);
  EXPECT_EQ(validate(g, MicrocosmSpec::macrocosm()).size(), 2u);
}

TEST(Graphing, Determinism) {
  EXPECT_TRUE(is_deterministic(shift_split()));
  GraphingRep g = shift_whole();
  g.edges.push_back({line(rat(1, 2), 1), 0, 0, Descriptor::identity(), {}});
  EXPECT_FALSE(is_deterministic(g));
  g.edges.back().in = 1;
  g.dialect_size = 2;
  EXPECT_TRUE(is_deterministic(g));
}

TEST(Graphing, SplitEdgeRefinesTheWholeEdge) {
  EXPECT_TRUE(refines(shift_split(), shift_whole()));
  EXPECT_FALSE(refines(shift_whole(), shift_split()));
  EXPECT_TRUE(refines(shift_whole(), shift_whole()));
}

TEST(Graphing, OverlappingPiecesAreNotARefinement) {
  GraphingRep g = shift_split();
  g.edges[0].source = line(0, rat(3, 4));
  EXPECT_FALSE(refines(g, shift_whole()));
}

TEST(Graphing, Equivalence) {
  EXPECT_TRUE(equivalent(shift_split(), shift_whole()));
  GraphingRep other = shift_split();
  other.edges[1].weight = {rat(1, 2), 0};
  EXPECT_FALSE(equivalent(other, shift_whole()));
  GraphingRep missing = shift_split();
  missing.edges.pop_back();
  EXPECT_FALSE(equivalent(missing, shift_whole()));
  GraphingRep wider = shift_whole();
  wider.support = line(0, 3);
  EXPECT_THROW(equivalent(wider, shift_whole()), NonComparable);
}

TEST(Graphing, DialectRenaming) {
  GraphingRep g{line(0, 2), 2, {{line(0, 1), 0, 1, Descriptor::translation(1), {}}}};
  GraphingRep r = rename_dialect(g, {4, 2});
  EXPECT_EQ(r.dialect_size, 5);
  EXPECT_EQ(r.edges[0].in, 4);
  EXPECT_EQ(r.edges[0].out, 2);
  EXPECT_THROW(rename_dialect(g, {1, 1}), NotInjective);
  EXPECT_THROW(rename_dialect(g, {1}), InvalidArgument);
}

TEST(Graphing, TensorFlattensDialects) {
  GraphingRep f{line(0, 2), 2, {{line(0, 1), 0, 1, Descriptor::translation(1), {}}}};
  GraphingRep g{line(5, 6), 3, {{line(5, 6), 2, 0, Descriptor::identity(), {}}}};
  GraphingRep t = tensor_graphings(f, g);
  EXPECT_EQ(t.dialect_size, 6);
  ASSERT_EQ(t.edges.size(), 3u + 2u);
  EXPECT_EQ(t.edges[1].in, 0 * 3 + 1);
  EXPECT_EQ(t.edges[1].out, 1 * 3 + 1);
  EXPECT_EQ(t.edges[4].in, 1 * 3 + 2);
  EXPECT_EQ(t.edges[4].out, 1 * 3 + 0);
  EXPECT_THROW(tensor_graphings(f, f), OverlappingSupports);
}

TEST(Project, TensorWrapperAndTerms) {
  Project p = Project::of(shift_whole(), Scalar::constant(2));
  p.terms.push_back({rat(1, 2), shift_split()});
  Project q = Project::of({line(4, 5), 1, {}}, Scalar::symbol());
  Project t = tensor(p, q);
  // wrapper: 2 * (sum of q coefficients) + zeta * (sum of p coefficients)
  EXPECT_EQ(t.wrapper, (Scalar{2, rat(3, 2)}));
  EXPECT_EQ(t.terms.size(), 2u);
  EXPECT_EQ(t.terms[1].coefficient, rat(1, 2));
  EXPECT_TRUE(t.well_formed());
}

TEST(Weight, FlagSurvivesProducts) {
  Weight w{rat(1, 2), 1};
  EXPECT_EQ(w.pow(3), (Weight{rat(1, 8), 1}));
  EXPECT_EQ(w.pow(0), Weight::one());
  EXPECT_EQ((Weight::one() * w).parameter(), rat(1, 2));
  EXPECT_EQ(Weight{rat(1, 2)}.parameter(), 0);
}
