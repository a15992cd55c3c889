#include <gtest/gtest.h>

#include "igm/encodings.hpp"
#include "igm/json_io.hpp"
#include "igm/machines.hpp"

using namespace igm;

namespace {

MultiheadAutomaton load(const std::string &name) {
  return io::automaton_from(io::read_file(std::string(IGM_DATA_DIR) + "/" + name));
}

Machine parity_machine(const VertexTable &psi = {}) {
  return automaton_to_machine(load("parity.json"), psi).machine;
}

bool has_edge_within(const GraphingRep &g, std::int64_t block) {
  for (auto &e : g.edges)
    if (e.source.subset_ae(MSet::block(block)) && e.target().subset_ae(MSet::block(block)))
      return true;
  return false;
}

GraphingRep empty_machine_graphing(const VertexTable &psi = {}) {
  return {machine_support(psi), 1, {}};
}

} // namespace

TEST(Machine, ValidityOfSmallGraphings) {
  GraphingRep g = empty_machine_graphing();
  g.edges.push_back({MSet::block(0), 0, 0, Descriptor::translation(1), {}});
  MachineCheck ok = validate_machine(g);
  ASSERT_TRUE(ok.ok());
  EXPECT_EQ(ok.machine->head_bound, 1);

  GraphingRep swapped = g;
  swapped.edges[0].map = Descriptor(1, 1, Perm::transposition(1, 3));
  EXPECT_EQ(validate_machine(swapped).machine->head_bound, 3);

  GraphingRep doubling = g;
  doubling.edges[0] = {MSet(Box(Interval(0, rat(1, 2)))), 0, 0, Descriptor::affine(2, 0), {}};
  MachineCheck bad = validate_machine(doubling);
  EXPECT_FALSE(bad.ok());
  ASSERT_EQ(bad.diagnostics.size(), 1u);
  EXPECT_NE(bad.diagnostics[0].find("no m(i)"), std::string::npos);
  EXPECT_THROW(require_machine(doubling), InvalidMachine);

  GraphingRep weighted = g;
  weighted.edges[0].weight = Weight::flagged();
  EXPECT_FALSE(validate_machine(weighted).ok());

  GraphingRep wrong_support = g;
  wrong_support.support = MSet::block(0).unite(MSet::block(1));
  EXPECT_FALSE(validate_machine(wrong_support).ok());
}

TEST(Machine, EncodedParityIsValidWithOneHead) {
  Machine m = parity_machine();
  EXPECT_EQ(m.head_bound, 1);
  EXPECT_TRUE(validate_machine(m.graphing).ok());
}

TEST(Machine, ComputationIsAFiniteGraphingOfCellTranslations) {
  Machine m = parity_machine();
  for (auto &w : {std::string("11"), std::string("1"), std::string("0110")}) {
    Project p = compute(m, representation(w));
    ASSERT_EQ(p.terms.size(), 1u);
    const GraphingRep &r = p.terms[0].graphing;
    EXPECT_TRUE(r.support.equal_ae(VertexTable().result_support()));
    for (auto &e : r.edges) {
      EXPECT_EQ(e.map.slope(), 1);
      EXPECT_TRUE(is_integer(e.map.offset()));
      EXPECT_TRUE(member(e.map, MicrocosmSpec::mbar_inf()));
    }
  }
}

TEST(Machine, ResultOfAcceptedWordHasNoRejectCycle) {
  VertexTable psi;
  Machine m = parity_machine();
  GraphingRep accepted = compute(m, representation("11")).terms[0].graphing;
  EXPECT_TRUE(has_edge_within(accepted, psi.accept()));
  EXPECT_FALSE(detail::has_block_cycle(accepted, psi.reject()));
  GraphingRep rejected = compute(m, representation("1")).terms[0].graphing;
  EXPECT_TRUE(detail::has_block_cycle(rejected, psi.reject()));
}

TEST(Machine, DecisionsMatchTheAutomaton) {
  MultiheadAutomaton a = load("parity.json");
  Machine m = parity_machine();
  EXPECT_TRUE(accepts(m, "11"));
  EXPECT_FALSE(accepts(m, "1"));
  EXPECT_EQ(language(m, 3), language_a(a, 3));
  EXPECT_EQ(language(m, 3),
            (std::set<std::string>{"", "0", "00", "11", "000", "011", "101", "110"}));
}

TEST(Machine, TwoHeadLanguage) {
  Machine m = automaton_to_machine(load("anbn.json")).machine;
  EXPECT_EQ(m.head_bound, 2);
  EXPECT_EQ(language(m, 4), (std::set<std::string>{"", "01", "0011"}));
}

TEST(Machine, VerdictsAreUniformInTheRepresentation) {
  Machine m = parity_machine();
  for (auto &w : {std::string("01"), std::string("11"), std::string("")}) {
    int n = int(w.size()) + 1;
    std::vector<int> shifted(n), reversed(n);
    for (int i = 0; i < n; ++i) {
      shifted[i] = i + 3;
      reversed[i] = 2 * (n - i);
    }
    bool base = accepts(m, w);
    EXPECT_EQ(accepts_representation(m, representation(w, shifted)), base) << w;
    EXPECT_EQ(accepts_representation(m, representation(w, reversed)), base) << w;
  }
}

TEST(Machine, AlternateVertexTable) {
  VertexTable alt = VertexTable::alternate();
  Machine m = parity_machine(alt);
  EXPECT_TRUE(accepts(m, "0110", alt));
  EXPECT_FALSE(accepts(m, "010", alt));
  EXPECT_FALSE(validate_machine(m.graphing).ok()); // wrong table
}

TEST(Essentialize, SingleHeadMachinesAreAlreadyEssential) {
  Machine m = parity_machine();
  EXPECT_TRUE(is_essential(m));
  Machine e = essentialize(m);
  EXPECT_EQ(e.graphing.edges.size(), m.graphing.edges.size());
}

TEST(Essentialize, ThreeCyclesBecomeStarChainsWithTheSameLanguage) {
  MultiheadAutomaton a = load("rotate3.json");
  Machine m = automaton_to_machine(a).machine;
  EXPECT_FALSE(is_essential(m));
  Machine e = essentialize(m);
  EXPECT_TRUE(is_essential(e));
  EXPECT_TRUE(validate_machine(e.graphing).ok());
  EXPECT_GT(e.graphing.dialect_size, m.graphing.dialect_size);
  EXPECT_EQ(language(e, 3), language(m, 3));
  EXPECT_EQ(language(e, 3), language_a(a, 3));
}

TEST(Essentialize, ShiftingEdgesAreRefused) {
  GraphingRep g = empty_machine_graphing();
  g.edges.push_back({MSet::block(0), 0, 0,
                     Descriptor(1, 0, Perm({{1, 2}, {2, 3}, {3, 1}}), {{2, rat(1, 2)}}), {}});
  // shifts already make this an invalid machine; essentialize refuses it too
  EXPECT_THROW(require_machine(g), InvalidMachine);
  EXPECT_THROW(essentialize(Machine{g, 3}), NotEssential);
}
