#include <random>

#include <gtest/gtest.h>

#include "igm/space.hpp"

using namespace igm;

namespace {

// Oracle: boxes drawn on the grid 1/kGrid over line [0,3) and coordinates
// 1..2; membership of every grid-cell centre is decided on the raw box list.
constexpr int kGrid = 4;
constexpr int kLine = 3 * kGrid;

struct RawBox {
  int lo[3], hi[3]; // grid steps on line, coord 1, coord 2
};

bool raw_contains(const std::vector<RawBox> &bs, int x, int y, int z) {
  for (auto &b : bs)
    if (b.lo[0] <= x && x < b.hi[0] && b.lo[1] <= y && y < b.hi[1] && b.lo[2] <= z &&
        z < b.hi[2])
      return true;
  return false;
}

std::vector<RawBox> random_boxes(std::mt19937 &rng, int count) {
  std::vector<RawBox> out;
  for (int i = 0; i < count; ++i) {
    RawBox b;
    for (int d = 0; d < 3; ++d) {
      int top = d == 0 ? kLine : kGrid;
      std::uniform_int_distribution<int> pick(0, top);
      int a = pick(rng), c = pick(rng);
      if (a > c)
        std::swap(a, c);
      b.lo[d] = a;
      b.hi[d] = c;
    }
    out.push_back(b);
  }
  return out;
}

MSet to_mset(const std::vector<RawBox> &bs) {
  std::vector<Box> boxes;
  for (auto &b : bs)
    boxes.emplace_back(Interval(rat(b.lo[0], kGrid), rat(b.hi[0], kGrid)),
                       std::map<int, Interval>{
                           {1, Interval(rat(b.lo[1], kGrid), rat(b.hi[1], kGrid))},
                           {2, Interval(rat(b.lo[2], kGrid), rat(b.hi[2], kGrid))}});
  return MSet(boxes);
}

template <typename Pred> Rational count_cells(Pred &&in) {
  std::int64_t hits = 0;
  for (int x = 0; x < kLine; ++x)
    for (int y = 0; y < kGrid; ++y)
      for (int z = 0; z < kGrid; ++z)
        hits += in(x, y, z) ? 1 : 0;
  return rat(hits, kGrid * kGrid * kGrid);
}

} // namespace

TEST(Interval, LengthAndIntersection) {
  Interval a(rat(1, 4), rat(3, 4)), b(rat(1, 2), 2);
  EXPECT_EQ(a.length(), rat(1, 2));
  EXPECT_EQ(a.intersect(b), Interval(rat(1, 2), rat(3, 4)));
  EXPECT_FALSE(Interval(0, 1).intersects(Interval(1, 2)));
}

TEST(Box, CoordinateOutsideUnitRejected) {
  EXPECT_THROW(Box(Interval(0, 1), {{1, Interval(rat(1, 2), rat(3, 2))}}), InvalidArgument);
  EXPECT_THROW(Box(Interval(0, 1), {{0, Interval(0, 1)}}), InvalidArgument);
}

TEST(Box, MeasureIsProductOfSides) {
  Box b(Interval(0, 2), {{1, Interval(0, rat(1, 2))}, {3, Interval(rat(1, 3), 1)}});
  EXPECT_EQ(b.measure(), rat(2, 3));
}

TEST(MSet, NullSetsAndBlocks) {
  EXPECT_TRUE(MSet().is_null());
  EXPECT_TRUE(MSet(Box(Interval(1, 1))).is_null());
  EXPECT_EQ(MSet::blocks({0, 2, 3}).measure(), 3);
  EXPECT_TRUE(MSet::block(0).unite(MSet::block(1)).equal_ae(MSet(Box(Interval(0, 2)))));
}

TEST(MSet, MeasureAndBooleanOpsMatchCellOracle) {
  std::mt19937 rng(20261019);
  for (int trial = 0; trial < 150; ++trial) {
    auto ra = random_boxes(rng, 1 + trial % 4), rb = random_boxes(rng, 1 + trial % 3);
    MSet a = to_mset(ra), b = to_mset(rb);
    auto in_a = [&](int x, int y, int z) { return raw_contains(ra, x, y, z); };
    auto in_b = [&](int x, int y, int z) { return raw_contains(rb, x, y, z); };
    SCOPED_TRACE(trial);
    EXPECT_EQ(a.measure(), count_cells(in_a));
    EXPECT_EQ(a.unite(b).measure(),
              count_cells([&](int x, int y, int z) { return in_a(x, y, z) || in_b(x, y, z); }));
    EXPECT_EQ(a.intersect(b).measure(),
              count_cells([&](int x, int y, int z) { return in_a(x, y, z) && in_b(x, y, z); }));
    EXPECT_EQ(a.difference(b).measure(),
              count_cells([&](int x, int y, int z) { return in_a(x, y, z) && !in_b(x, y, z); }));
    // inclusion-exclusion
    EXPECT_EQ(a.unite(b).measure() + a.intersect(b).measure(), a.measure() + b.measure());
  }
}

TEST(MSet, BooleanLaws) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    MSet a = to_mset(random_boxes(rng, 2)), b = to_mset(random_boxes(rng, 2)),
         c = to_mset(random_boxes(rng, 2));
    SCOPED_TRACE(trial);
    EXPECT_TRUE(a.unite(b).equal_ae(b.unite(a)));
    EXPECT_TRUE(a.intersect(b.unite(c)).equal_ae(a.intersect(b).unite(a.intersect(c))));
    EXPECT_TRUE(a.difference(b.unite(c)).equal_ae(a.difference(b).difference(c)));
    EXPECT_TRUE(a.difference(b).disjoint_ae(b));
    EXPECT_TRUE(a.intersect(b).subset_ae(a));
    EXPECT_TRUE(a.subset_ae(a.unite(c)));
    EXPECT_EQ(a.unite(a), a);
  }
}

TEST(MSet, NormalFormIsCanonical) {
  // the same region split two different ways has one normal form
  MSet split({Box(Interval(0, rat(1, 2))), Box(Interval(rat(1, 2), 1))});
  MSet whole(Box(Interval(0, 1)));
  EXPECT_EQ(split, whole);
  MSet quarters({Box(Interval(0, 1), {{1, Interval(0, rat(1, 2))}}),
                 Box(Interval(0, 1), {{1, Interval(rat(1, 2), 1)}})});
  EXPECT_EQ(quarters, whole);
}
