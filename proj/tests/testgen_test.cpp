#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace wmct {
namespace {

std::string golden(const std::string& file) {
  return cli::read_file(std::string(WMCT_LITMUS_DIR) + "/" + file);
}

TEST(BuildMpTest, DefaultTagIsTheCanonicalTest) {
  const VariantTag tag;  // discard, rlx data, rel flag store, rel xchg, acq fence, rlx load
  EXPECT_EQ(build_mp_test(tag, "mp-xchg-discard"), parse_litmus(golden("mp-xchg-discard.litmus")));
  EXPECT_EQ(render_litmus(build_mp_test(tag, "mp-xchg-discard")), golden("mp-xchg-discard.litmus"));
  EXPECT_EQ(tag.file_stem(), "mp-discard-rlx-rel-xchgrel-fenceacq-rlx");
}

TEST(BuildMpTest, HistoricShape) {
  VariantTag tag;
  tag.variant = Variant::kHistoric;
  tag.flag_op = MemoryOrder::kAcquire;
  tag.fence.reset();
  const LitmusTest t = build_mp_test(tag);
  EXPECT_EQ(render_exists(t.final), "exists (P1:r1=1 /\\ P1:r0=0)");
  ASSERT_EQ(t.threads[1].source().size(), 2u);
  EXPECT_EQ(*t.threads[1].source()[0].dest, "r1");
  EXPECT_EQ(tag.file_stem(), "mp-historic-rlx-rel-xchgacq-nofence-rlx");
  // The classic shape: C11 forbids seeing the flag but not the data.
  for (const auto& o : allowed_outcomes(t, ModelId::kC11).outcomes) EXPECT_FALSE(t.final.eval(o));
}

TEST(BuildMpTest, FlagLoad) {
  VariantTag tag;
  tag.variant = Variant::kHistoric;
  tag.flag_access = FlagAccess::kLoad;
  tag.flag_op = MemoryOrder::kAcquire;
  const LitmusTest t = build_mp_test(tag);
  EXPECT_EQ(t.threads[1].source()[0].kind, SourceStmt::Kind::kLoad);
  EXPECT_EQ(tag.file_stem(), "mp-historic-rlx-rel-ldacq-fenceacq-rlx");
}

TEST(BuildMpTest, DiscardAndObserveDifferOnlyInTheFlagRegister) {
  GenParams p;
  p.variants = {Variant::kDiscard, Variant::kObserve};
  p.data_store = {MemoryOrder::kRelaxed};
  p.flag_store = {MemoryOrder::kRelease};
  p.flag_op = {MemoryOrder::kRelease};
  p.fence = {MemoryOrder::kAcquire};
  p.data_load = {MemoryOrder::kRelaxed};
  const auto tests = generate_mp_family(p);
  ASSERT_EQ(tests.size(), 2u);
  const auto& discard = tests[0].test.threads[1].source();
  const auto& observe = tests[1].test.threads[1].source();
  ASSERT_EQ(discard.size(), observe.size());
  EXPECT_FALSE(discard[0].dest.has_value());
  EXPECT_EQ(*observe[0].dest, "r1");
  for (std::size_t i = 1; i < discard.size(); ++i) EXPECT_EQ(discard[i], observe[i]);
  EXPECT_EQ(tests[0].test.threads[0], tests[1].test.threads[0]);
}

TEST(Generate, FullProductIsDeterministicAndUnique) {
  const auto a = generate_mp_family({});
  const auto b = generate_mp_family({});
  ASSERT_EQ(a.size(), 3u * 3 * 3 * 5 * 5 * 3);
  std::set<std::string> stems;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].test, b[i].test);
    EXPECT_EQ(render_litmus(a[i].test), render_litmus(b[i].test));
    stems.insert(a[i].tag.file_stem());
    EXPECT_NO_THROW(validate(a[i].test));
  }
  EXPECT_EQ(stems.size(), a.size());
}

TEST(Generate, DuplicateChoicesCollapse) {
  GenParams p;
  p.variants = {Variant::kDiscard, Variant::kDiscard};
  p.data_store = {MemoryOrder::kRelaxed, MemoryOrder::kRelaxed};
  p.flag_store = {MemoryOrder::kRelease};
  p.flag_op = {MemoryOrder::kRelease};
  p.fence = {std::nullopt, std::nullopt};
  p.data_load = {MemoryOrder::kRelaxed};
  EXPECT_EQ(generate_mp_family(p).size(), 1u);
}

TEST(Generate, SeededSample) {
  GenParams p;
  p.limit = 50;
  p.seed = 7;
  const auto a = generate_mp_family(p);
  const auto b = generate_mp_family(p);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].tag, b[i].tag);
  p.seed = 8;
  const auto c = generate_mp_family(p);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || !(a[i].tag == c[i].tag);
  EXPECT_TRUE(differs);
  p.limit = 100000;
  EXPECT_EQ(generate_mp_family(p).size(), 2025u);
}

TEST(Generate, RejectsMalformedParams) {
  GenParams p;
  p.variants.clear();
  EXPECT_THROW(generate_mp_family(p), std::invalid_argument);
  p = {};
  p.data_store = {MemoryOrder::kAcquire};
  EXPECT_THROW(generate_mp_family(p), std::invalid_argument);
  p = {};
  p.data_load = {MemoryOrder::kRelease};
  EXPECT_THROW(generate_mp_family(p), std::invalid_argument);
  p = {};
  p.fence = {MemoryOrder::kRelaxed};
  EXPECT_THROW(generate_mp_family(p), std::invalid_argument);
  p = {};
  p.flag_access = FlagAccess::kLoad;
  EXPECT_THROW(generate_mp_family(p), std::invalid_argument);  // discard needs an exchange
  p.variants = {Variant::kHistoric};
  EXPECT_THROW(generate_mp_family(p), std::invalid_argument);  // release loads
  p.flag_op = {MemoryOrder::kRelaxed, MemoryOrder::kAcquire};
  EXPECT_EQ(generate_mp_family(p).size(), 3u * 3 * 2 * 5 * 3);
}

TEST(Generate, VariantNames) {
  for (auto v : {Variant::kHistoric, Variant::kDiscard, Variant::kObserve})
    EXPECT_EQ(variant_from_name(variant_name(v)), v);
  EXPECT_FALSE(variant_from_name("other").has_value());
}

}  // namespace
}  // namespace wmct
