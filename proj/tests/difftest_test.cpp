#include <gtest/gtest.h>

#include "support.hpp"

namespace wmct {
namespace {

std::string golden(const std::string& file) {
  return cli::read_file(std::string(WMCT_LITMUS_DIR) + "/" + file);
}

const Observable kR0 = Observable::reg(1, "r0");
const Observable kY = Observable::memory("y");

struct Goldens {
  LitmusTest source = parse_litmus(golden("mp-xchg-discard.litmus"));
  LitmusTest wzr = parse_litmus(golden("mp-xchg-discard-compiled-wzr.litmus"));
  LitmusTest w15 = parse_litmus(golden("mp-xchg-discard-compiled-w15.litmus"));
  Mapping map = mapping_from_json(nlohmann::json::parse(golden("mp-xchg-discard.map.json")));
};

TEST(Translate, Relabels) {
  const Goldens g;
  const Outcome compiled{{Observable::reg(1, "W4"), 0}, {kY, 2}};
  EXPECT_EQ(translate_outcome(compiled, g.map), (Outcome{{kR0, 0}, {kY, 2}}));
}

TEST(Translate, IdentityMapping) {
  Mapping m;
  m.observables[kY] = kY;
  const Outcome o{{kY, 1}};
  EXPECT_EQ(translate_outcome(o, m), o);
}

TEST(Translate, UnmappedObservable) {
  const Goldens g;
  EXPECT_THROW(translate_outcome({{Observable::reg(1, "W9"), 0}}, g.map), MappingError);
}

TEST(Refinement, ZeroRegisterGoldenIsABug) {
  const Goldens g;
  const Verdict v = check_refinement(g.source, g.wzr, g.map);
  EXPECT_EQ(v.status, VerdictStatus::kBug);
  EXPECT_EQ(v.exit_code(), 1);
  EXPECT_EQ(v.witnesses, (std::vector<Outcome>{{{kR0, 0}, {kY, 2}}}));
  for (const auto& w : v.witnesses) {
    EXPECT_TRUE(v.compiled_outcomes.contains(w));
    EXPECT_FALSE(v.source_outcomes.contains(w));
  }
}

TEST(Refinement, NamedDestinationGoldenPasses) {
  const Goldens g;
  const Verdict v = check_refinement(g.source, g.w15, g.map);
  EXPECT_EQ(v.status, VerdictStatus::kPass);
  EXPECT_EQ(v.exit_code(), 0);
  EXPECT_TRUE(v.witnesses.empty());
}

TEST(Refinement, LegacyModelMissesTheBug) {
  const Goldens g;
  DiffOptions d;
  d.model.legacy_zero_register = true;
  EXPECT_EQ(check_refinement(g.source, g.wzr, g.map, d).status, VerdictStatus::kPass);
}

TEST(Refinement, SequentialAndParallelAgree) {
  const Goldens g;
  DiffOptions seq;
  seq.parallel = false;
  const Verdict a = check_refinement(g.source, g.wzr, g.map);
  const Verdict b = check_refinement(g.source, g.wzr, g.map, seq);
  EXPECT_EQ(a.witnesses, b.witnesses);
  EXPECT_EQ(a.source_outcomes.outcomes, b.source_outcomes.outcomes);
  EXPECT_EQ(a.compiled_outcomes.outcomes, b.compiled_outcomes.outcomes);
}

TEST(Refinement, ErrorsBecomeVerdicts) {
  const Goldens g;
  Verdict v = check_refinement(g.wzr, g.wzr, g.map);
  EXPECT_EQ(v.status, VerdictStatus::kError);
  EXPECT_EQ(v.exit_code(), 2);
  EXPECT_FALSE(v.diagnostic.empty());

  Mapping partial = g.map;
  partial.observables.erase(kR0);
  EXPECT_EQ(check_refinement(g.source, g.wzr, partial).status, VerdictStatus::kError);

  DiffOptions tiny;
  tiny.model.candidate_cap = 2;
  v = check_refinement(g.source, g.wzr, g.map, tiny);
  EXPECT_EQ(v.status, VerdictStatus::kError);
  EXPECT_NE(v.diagnostic.find("cap"), std::string::npos);
}

TEST(Refinement, CompiledConditionCannotHideBehavior) {
  // A compiled test whose exists clause only mentions y is still judged on
  // the image of all source observables.
  Goldens g;
  g.wzr.final = FinalCondition::atom(kY, 2);
  const Verdict v = check_refinement(g.source, g.wzr, g.map);
  EXPECT_EQ(v.status, VerdictStatus::kBug);
}

TEST(Compilation, Pipeline) {
  const Goldens g;
  EXPECT_EQ(check_compilation(g.source, {}).status, VerdictStatus::kPass);
  const Verdict bug = check_compilation(g.source, {true, 15});
  EXPECT_EQ(bug.status, VerdictStatus::kBug);
  EXPECT_EQ(bug.witnesses.size(), 1u);
}

TEST(Compilation, ObserverHidesTheBug) {
  VariantTag tag;
  tag.variant = Variant::kObserve;
  EXPECT_EQ(check_compilation(build_mp_test(tag), {true, 15}).status, VerdictStatus::kPass);
  tag.variant = Variant::kDiscard;
  EXPECT_EQ(check_compilation(build_mp_test(tag), {true, 15}).status, VerdictStatus::kBug);
}

TEST(Compilation, GeneratedCorpusRefines) {
  for (const auto& g : generate_mp_family({})) {
    const Verdict v = check_compilation(g.test, {});
    EXPECT_EQ(v.status, VerdictStatus::kPass) << g.tag.file_stem() << ": " << v.diagnostic;
  }
}

TEST(Compilation, DeadRegisterBugsAreConfinedToDiscard) {
  // The rewrite only fires on discarded exchanges, so historic and observe
  // tests never regress.
  GenParams p;
  p.variants = {Variant::kHistoric, Variant::kObserve};
  for (const auto& g : generate_mp_family(p)) {
    EXPECT_EQ(check_compilation(g.test, {true, 15}).status, VerdictStatus::kPass) << g.tag.file_stem();
  }
}

TEST(Compilation, ReleaseExchangeWithAcquireFenceIsBuggy) {
  // Every discard test whose P0 flag store is at least release and whose
  // data accesses are relaxed reproduces the bug under the rewrite.
  GenParams p;
  p.variants = {Variant::kDiscard};
  p.data_store = {MemoryOrder::kRelaxed};
  p.flag_store = {MemoryOrder::kRelease, MemoryOrder::kSeqCst};
  p.flag_op = {MemoryOrder::kRelease};
  p.fence = {MemoryOrder::kAcquire};
  p.data_load = {MemoryOrder::kRelaxed};
  const auto tests = generate_mp_family(p);
  ASSERT_EQ(tests.size(), 2u);
  for (const auto& g : tests) {
    EXPECT_EQ(check_compilation(g.test, {true, 15}).status, VerdictStatus::kBug) << g.tag.file_stem();
  }
}

}  // namespace
}  // namespace wmct
