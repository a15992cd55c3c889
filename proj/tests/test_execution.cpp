#include <random>

#include <gtest/gtest.h>

#include "igm/execution.hpp"

using namespace igm;

namespace {

MSet line(Rational lo, Rational hi) { return MSet(Box(Interval(lo, hi))); }

bool box_contains(const Box &b, const Point &p) {
  if (p.x < b.line().lo || p.x >= b.line().hi)
    return false;
  for (auto &[j, iv] : b.coords())
    if (p.s.at(j) < iv.lo || p.s.at(j) >= iv.hi)
      return false;
  return true;
}

bool set_contains(const MSet &s, const Point &p) {
  for (auto &b : s.boxes())
    if (box_contains(b, p))
      return true;
  return false;
}

const Edge *edge_at(const GraphingRep &g, const Point &p) {
  for (auto &e : g.edges)
    if (set_contains(e.source, p))
      return &e;
  return nullptr;
}

// Oracle for deterministic single-state graphings: follow the unique edge of
// alternating sides from p until the point leaves the cut. Returns the exit
// point, or nothing when the walk dies, loops or exceeds max_len.
std::optional<Point> walk(const GraphingRep &f, const GraphingRep &g, const MSet &cut,
                          Point p, std::size_t max_len) {
  const GraphingRep *sides[2] = {&f, &g};
  int side = edge_at(f, p) ? 0 : 1;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const Edge *e = edge_at(*sides[side], p);
    if (!e)
      return std::nullopt;
    p = e->map.apply(p);
    if (!set_contains(cut, p))
      return p;
    side = 1 - side;
  }
  return std::nullopt;
}

void expect_matches_oracle(const GraphingRep &f, const GraphingRep &g, const MSet &cut,
                           const GraphingRep &result, const std::vector<Point> &samples,
                           std::size_t max_len) {
  for (const Point &p : samples) {
    if (set_contains(cut, p))
      continue;
    auto expected = walk(f, g, cut, p, max_len);
    std::vector<const Edge *> hits;
    for (auto &e : result.edges)
      if (set_contains(e.source, p))
        hits.push_back(&e);
    SCOPED_TRACE(to_string(p.x));
    if (!expected) {
      EXPECT_TRUE(hits.empty());
      continue;
    }
    ASSERT_EQ(hits.size(), 1u);
    Point got = hits[0]->map.apply(p);
    EXPECT_EQ(got.x, expected->x);
    EXPECT_EQ(got.s, expected->s);
  }
}

// Dilation example: F translates blocks, G doubles inside the cut [1,4).
GraphingRep dilation_left() {
  return {line(0, 5),
          1,
          {{line(0, 1), 0, 0, Descriptor::affine(1, 1), {}},
           {line(2, 3), 0, 0, Descriptor::affine(1, -1), {}},
           {line(3, 4), 0, 0, Descriptor::affine(1, 1), {}}}};
}

GraphingRep dilation_right() {
  return {line(1, 4),
          1,
          {{line(rat(3, 2), 2), 0, 0, Descriptor::affine(2, -1), {}},
           {line(1, rat(3, 2)), 0, 0, Descriptor::affine(2, 1), {}}}};
}

} // namespace

TEST(Execution, DilationExampleMatchesPointwiseWalk) {
  GraphingRep f = dilation_left(), g = dilation_right();
  MSet cut = line(1, 4);
  std::vector<Point> samples;
  for (int k = 0; k < 512; ++k)
    samples.push_back({rat(2 * k + 1, 1024), {}});
  for (std::size_t max_len : {3u, 5u, 7u, 9u}) {
    SCOPED_TRACE(max_len);
    PlugResult r = plug_with(f, g, cut, PathOptions{max_len});
    EXPECT_FALSE(r.cell_route);
    EXPECT_TRUE(r.truncated);
    expect_matches_oracle(f, g, cut, r.graphing, samples, max_len);
  }
}

TEST(Execution, DilationExampleFirstPieces) {
  GraphingRep r = plug(dilation_left(), dilation_right(), line(1, 4), PathOptions{7});
  ASSERT_EQ(r.edges.size(), 3u);
  std::map<Rational, Descriptor> by_start;
  for (auto &e : r.edges)
    by_start.emplace(e.source.boxes().front().line().lo, e.map);
  EXPECT_EQ(by_start.at(0), Descriptor::affine(2, 4));
  EXPECT_EQ(by_start.at(rat(1, 2)), Descriptor::affine(4, 2));
  EXPECT_EQ(by_start.at(rat(3, 4)), Descriptor::affine(8, -2));
  EXPECT_TRUE(r.support.equal_ae(line(0, 1).unite(line(4, 5))));
}

TEST(Execution, InfinitePathFamilyIsReportedAsNonTerminating) {
  EXPECT_THROW(plug(dilation_left(), dilation_right(), line(1, 4)), NonTerminating);
}

TEST(Execution, TwoTranslationsCompose) {
  GraphingRep f{line(0, 2), 1, {{line(0, 1), 0, 0, Descriptor::translation(1), {}}}};
  GraphingRep g{line(1, 3), 1, {{line(1, 2), 0, 0, Descriptor::translation(1), {}}}};
  PlugResult r = plug_with(f, g, line(1, 2));
  EXPECT_TRUE(r.cell_route);
  EXPECT_FALSE(r.truncated);
  GraphingRep expected{line(0, 1).unite(line(2, 3)),
                       1,
                       {{line(0, 1), 0, 0, Descriptor::translation(2), {}}}};
  EXPECT_TRUE(equivalent(r.graphing, expected));
}

TEST(Execution, SupportsOverlappingOutsideTheCutAreRejected) {
  GraphingRep f{line(0, 2), 1, {}}, g{line(1, 3), 1, {}};
  EXPECT_THROW(plug(f, g, MSet()), OverlappingSupports);
  EXPECT_NO_THROW(plug(f, g, line(1, 2)));
}

TEST(Execution, AlternatingPathsNeverRepeatASide) {
  auto paths = alternating_paths(dilation_left(), dilation_right(), PathOptions{4});
  EXPECT_FALSE(paths.empty());
  for (auto &p : paths)
    for (std::size_t i = 1; i < p.steps.size(); ++i)
      EXPECT_NE(p.steps[i].side, p.steps[i - 1].side);
}

TEST(Execution, RestrictionDropsPathsInsideTheCut) {
  auto paths = alternating_paths(dilation_left(), dilation_right(), PathOptions{3});
  std::size_t kept = 0;
  for (auto &p : paths)
    if (auto r = restrict_path(p, line(1, 4))) {
      ++kept;
      EXPECT_TRUE(r->source.disjoint_ae(line(1, 4)));
    }
  EXPECT_EQ(kept, 1u); // only F0 G1 F2 enters and leaves the cut within 3 steps
}

TEST(Execution, RandomCellRigidInstancesMatchPointwiseWalk) {
  std::mt19937 rng(31);
  MSet cut = MSet::blocks({1, 2});
  for (int trial = 0; trial < 120; ++trial) {
    SCOPED_TRACE(trial);
    GraphingRep sides[2];
    std::vector<std::int64_t> blocks[2] = {{0, 1, 2}, {1, 2, 3}};
    for (int s = 0; s < 2; ++s) {
      sides[s].support = MSet::blocks(blocks[s]);
      for (auto b : blocks[s])
        for (int half = 0; half < 2; ++half) {
          if (rng() % 5 < 2)
            continue;
          auto to = blocks[s][rng() % 3];
          int to_half = int(rng() % 2);
          Box src(Interval::block(b), {{1, Interval(rat(half, 2), rat(half + 1, 2))}});
          Descriptor m(1, rat(to - b), {}, {{1, rat(to_half - half, 2)}});
          sides[s].edges.push_back({MSet(src), 0, 0, m, {}});
        }
    }
    PlugResult r = plug_with(sides[0], sides[1], cut);
    EXPECT_TRUE(r.cell_route);
    std::vector<Point> samples;
    for (int x = 0; x < 16; ++x)
      for (int y = 0; y < 4; ++y)
        samples.push_back({rat(2 * x + 1, 4), {{1, rat(2 * y + 1, 8)}}});
    expect_matches_oracle(sides[0], sides[1], cut, r.graphing, samples, 64);
  }
}

TEST(Execution, IterationCapHonoursEnvironment) {
  setenv("GM_MAX_PATH_LEN", "25", 1);
  EXPECT_EQ(default_iteration_cap(), 25u);
  unsetenv("GM_MAX_PATH_LEN");
  EXPECT_EQ(default_iteration_cap(), 10000u);
}
