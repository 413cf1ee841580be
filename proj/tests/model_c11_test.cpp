#include <gtest/gtest.h>

#include <functional>
#include <optional>
#include <tuple>

#include "support.hpp"

namespace wmct {
namespace {

std::string golden(const std::string& file) {
  return cli::read_file(std::string(WMCT_LITMUS_DIR) + "/" + file);
}

using Pick = std::function<bool(const EventGraph&, const Execution&)>;

/// First candidate satisfying `pick`.
std::optional<Execution> find_candidate(const EventGraph& g, const Pick& pick) {
  for (const auto& e : enumerate_candidates(g)) {
    if (pick(g, e)) return e;
  }
  return std::nullopt;
}

int event_where(const EventGraph& g, const std::function<bool(const Event&)>& p) {
  for (const auto& e : g.events) {
    if (p(e)) return e.id;
  }
  return -1;
}

const char* kMessagePassing = R"(C mp-rel-acq
{ x = 0; y = 0; }
P0 (atomic_int* x, atomic_int* y) {
  atomic_store_explicit(x, 1, memory_order_relaxed);
  atomic_store_explicit(y, 1, memory_order_release);
}
P1 (atomic_int* x, atomic_int* y) {
  int r1 = atomic_load_explicit(y, memory_order_acquire);
  int r0 = atomic_load_explicit(x, memory_order_relaxed);
}
exists (P1:r1=1 /\ P1:r0=0)
)";

std::string store_buffering(const std::string& store, const std::string& load,
                            const std::string& fence = "") {
  const std::string f = fence.empty() ? "" : "  atomic_thread_fence(memory_order_" + fence + ");\n";
  std::string text = "C sb\n{ x = 0; y = 0; }\n";
  for (const auto& [id, mine, other] : {std::tuple{"0", "x", "y"}, std::tuple{"1", "y", "x"}}) {
    text += std::string("P") + id + " (atomic_int* x, atomic_int* y) {\n  atomic_store_explicit(" +
            mine + ", 1, memory_order_" + store + ");\n" + f + "  int r0 = atomic_load_explicit(" +
            other + ", memory_order_" + load + ");\n}\n";
  }
  return text + "exists (P0:r0=0 /\\ P1:r0=0)\n";
}

bool allows(const std::string& text) {
  const LitmusTest t = parse_litmus(text);
  for (const auto& o : allowed_outcomes(t, ModelId::kC11).outcomes) {
    if (t.final.eval(o)) return true;
  }
  return false;
}

TEST(SynchronizesWith, ReleaseStoreToAcquireLoad) {
  const LitmusTest t = parse_litmus(kMessagePassing);
  const EventGraph g = build_events(t);
  const int w = event_where(g, [](const Event& e) { return e.is_write() && e.release; });
  const int r = event_where(g, [](const Event& e) { return e.is_read() && e.acquire; });
  const auto e = find_candidate(g, [&](const EventGraph&, const Execution& x) { return x.rf[r] == w; });
  ASSERT_TRUE(e);
  const C11Relations rel = derive_hb(*e);
  EXPECT_TRUE(rel.sw.contains(w, r));
  EXPECT_EQ(rel.sw.edge_count(), 1u);
  EXPECT_FALSE(allows(kMessagePassing));
}

TEST(SynchronizesWith, ExchangeThenAcquireFence) {
  const LitmusTest t = parse_litmus(golden("mp-xchg-discard.litmus"));
  const EventGraph g = build_events(t);
  const int flag = event_where(g, [](const Event& e) { return e.thread == 0 && e.release; });
  const int xchg = event_where(g, [](const Event& e) { return e.is_rmw_read(); });
  const int fence = event_where(g, [](const Event& e) { return e.is_fence(); });
  const auto e = find_candidate(g, [&](const EventGraph&, const Execution& x) { return x.rf[xchg] == flag; });
  ASSERT_TRUE(e);
  const C11Relations rel = derive_hb(*e);
  EXPECT_TRUE(rel.sw.contains(flag, fence));
  EXPECT_FALSE(rel.sw.contains(flag, xchg));  // the exchange itself is only release
}

TEST(SynchronizesWith, RelaxedOnlyHasNoSw) {
  std::string text = kMessagePassing;
  for (const char* o : {"memory_order_release", "memory_order_acquire"}) {
    text.replace(text.find(o), std::string(o).size(), "memory_order_relaxed");
  }
  const LitmusTest t = parse_litmus(text);
  const EventGraph g = build_events(t);
  for (const auto& e : enumerate_candidates(g)) {
    const C11Relations r = derive_hb(e);
    EXPECT_TRUE(r.sw.empty());
    EXPECT_EQ(r.hb, r.sb);
  }
  EXPECT_TRUE(allows(text));
}

TEST(Consistency, CanonicalForbiddenCandidate) {
  const LitmusTest t = parse_litmus(golden("mp-xchg-discard.litmus"));
  const EventGraph g = build_events(t);
  const int xchg = event_where(g, [](const Event& e) { return e.is_rmw_read(); });
  const int load = event_where(g, [](const Event& e) { return e.is_read() && !e.is_rmw_read(); });
  int seen = 0;
  for (const auto& e : enumerate_candidates(g)) {
    if (e.values[xchg] != 1 || e.values[load] != 0) continue;
    ++seen;
    const C11Check c = c11_check(e);
    EXPECT_FALSE(c.coherence);
    EXPECT_FALSE(c.ok());
  }
  EXPECT_GT(seen, 0);
}

TEST(Consistency, ExchangeBeforeFlagStoreIsAllowed) {
  const LitmusTest t = parse_litmus(golden("mp-xchg-discard.litmus"));
  const EventGraph g = build_events(t);
  const int xchg = event_where(g, [](const Event& e) { return e.is_rmw_read(); });
  const int xchg_w = g.events[xchg].rmw_partner;
  const int flag = event_where(g, [](const Event& e) { return e.thread == 0 && e.release; });
  const int load = event_where(g, [](const Event& e) { return e.is_read() && !e.is_rmw_read(); });
  const auto e = find_candidate(g, [&](const EventGraph&, const Execution& x) {
    return x.co[1] == std::vector<int>{1, xchg_w, flag} && x.values[load] == 0;
  });
  ASSERT_TRUE(e);
  EXPECT_TRUE(c11_consistent(*e));
  EXPECT_EQ(final_state(*e, t.final).at(Observable::memory("y")), 1);
}

TEST(Consistency, EmptyExecution) {
  LitmusTest t;
  t.name = "empty";
  t.locations = {{"x", 0}};
  Thread th;
  th.body = std::vector<SourceStmt>{};
  t.threads.push_back(th);
  t.final = FinalCondition::atom(Observable::memory("x"), 0);
  const EventGraph g = build_events(t);
  for (const auto& e : enumerate_candidates(g)) EXPECT_TRUE(c11_consistent(e));
}

TEST(Consistency, CanonicalOutcomes) {
  const LitmusTest t = parse_litmus(golden("mp-xchg-discard.litmus"));
  const auto r0 = Observable::reg(1, "r0");
  const auto y = Observable::memory("y");
  const std::set<Outcome> expected{{{r0, 0}, {y, 1}}, {{r0, 1}, {y, 1}}, {{r0, 1}, {y, 2}}};
  EXPECT_EQ(allowed_outcomes(t, ModelId::kC11).outcomes, expected);
  EXPECT_EQ(testing::naive_outcomes(t, ModelId::kC11), expected);
}

TEST(Consistency, SeqCstForbidsStoreBuffering) {
  EXPECT_TRUE(allows(store_buffering("relaxed", "relaxed")));
  EXPECT_TRUE(allows(store_buffering("release", "acquire")));
  EXPECT_FALSE(allows(store_buffering("seq_cst", "seq_cst")));
  EXPECT_FALSE(allows(store_buffering("relaxed", "relaxed", "seq_cst")));
  EXPECT_TRUE(allows(store_buffering("relaxed", "relaxed", "acq_rel")));
}

TEST(Consistency, ReadReadCoherence) {
  const char* corr = R"(C corr
{ x = 0; }
P0 (atomic_int* x) {
  atomic_store_explicit(x, 1, memory_order_relaxed);
}
P1 (atomic_int* x) {
  int r0 = atomic_load_explicit(x, memory_order_relaxed);
  int r1 = atomic_load_explicit(x, memory_order_relaxed);
}
exists (P1:r0=1 /\ P1:r1=0)
)";
  EXPECT_FALSE(allows(corr));
}

TEST(Consistency, RejectsAsmExecutions) {
  const LitmusTest t = parse_litmus(golden("mp-xchg-discard-compiled-w15.litmus"));
  const EventGraph g = build_events(t);
  const auto cands = enumerate_candidates(g);
  ASSERT_FALSE(cands.empty());
  EXPECT_THROW(c11_consistent(cands[0]), DialectError);
}

TEST(Properties, SingleLocationMatchesSC) {
  int checked = 0;
  for (const auto& t : testing::random_corpus(41, 150, {2, 3, 1, 3, 2})) {
    ++checked;
    EXPECT_EQ(allowed_outcomes(t, ModelId::kC11).outcomes, sc_oracle_outcomes(t).outcomes)
        << render_litmus(t);
  }
  EXPECT_GE(checked, 100);
}

TEST(Properties, SCContainment) {
  for (const auto& t : testing::random_corpus(42, 150, {2, 3, 2, 3, 2})) {
    EXPECT_TRUE(sc_oracle_outcomes(t).subset_of(allowed_outcomes(t, ModelId::kC11)))
        << render_litmus(t);
  }
}

}  // namespace
}  // namespace wmct
