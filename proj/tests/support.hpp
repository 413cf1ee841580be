// Test-only oracles and generators shared by the unit, property and
// acceptance suites.

#ifndef WMCT_TESTS_SUPPORT_HPP_
#define WMCT_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "wmct/wmct.hpp"

namespace wmct::testing {

using CandidateKey = std::tuple<std::vector<int>, std::vector<std::vector<int>>, std::vector<int>>;

/// Generate-then-filter enumeration: every co permutation per location,
/// every rf function (RMW reads included), every value assignment to reads;
/// then keep the combinations whose values agree with rf and whose RMW reads
/// read the immediate co-predecessor of their write.
inline std::set<CandidateKey> naive_candidates(const EventGraph& g) {
  const auto& ev = g.events;
  const std::size_t n = ev.size();
  const std::size_t nloc = g.location_names.size();

  std::vector<std::vector<int>> writes(nloc);
  std::vector<int> reads;
  bool value_flows = false;
  std::set<int> constants{0};
  for (const auto& e : ev) {
    if (e.is_write()) {
      writes[e.location].push_back(e.id);
      if (e.written.from_read >= 0) value_flows = true;
      else constants.insert(e.written.constant);
    }
    if (e.is_read()) reads.push_back(e.id);
  }
  // Without dataflow from reads into writes every value is some constant.
  std::vector<int> domain;
  if (value_flows) {
    for (int v = 0; v <= kMaxValue; ++v) domain.push_back(v);
  } else {
    domain.assign(constants.begin(), constants.end());
  }

  // All co choices.
  std::vector<std::vector<std::vector<int>>> co_choices{{}};
  for (std::size_t l = 0; l < nloc; ++l) {
    std::vector<int> rest;
    int init = -1;
    for (int w : writes[l]) {
      if (ev[w].is_init()) init = w;
      else rest.push_back(w);
    }
    std::sort(rest.begin(), rest.end());
    std::vector<std::vector<std::vector<int>>> next;
    do {
      std::vector<int> order{init};
      order.insert(order.end(), rest.begin(), rest.end());
      for (const auto& prefix : co_choices) {
        auto c = prefix;
        c.push_back(order);
        next.push_back(std::move(c));
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
    co_choices = std::move(next);
  }

  std::set<CandidateKey> out;
  std::vector<int> rf(n, -1), rv(reads.size(), 0);
  std::vector<std::size_t> rf_idx(reads.size(), 0), val_idx(reads.size(), 0);
  for (const auto& co : co_choices) {
    std::fill(rf_idx.begin(), rf_idx.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < reads.size(); ++i) {
        rf[reads[i]] = writes[ev[reads[i]].location][rf_idx[i]];
      }
      std::fill(val_idx.begin(), val_idx.end(), 0);
      while (true) {
        std::vector<int> values(n, 0);
        for (std::size_t i = 0; i < reads.size(); ++i) values[reads[i]] = domain[val_idx[i]];
        for (const auto& e : ev) {
          if (e.is_write())
            values[e.id] = e.written.from_read >= 0 ? values[e.written.from_read] : e.written.constant;
        }
        bool ok = true;
        for (int r : reads) ok = ok && values[r] == values[rf[r]];
        for (int r : reads) {
          if (!ok || ev[r].rmw_partner < 0) continue;
          const auto& order = co[ev[r].location];
          const auto pos = std::find(order.begin(), order.end(), ev[r].rmw_partner) - order.begin();
          ok = pos > 0 && order[pos - 1] == rf[r];
        }
        if (ok) out.insert({rf, co, values});
        std::size_t k = 0;
        while (k < reads.size() && ++val_idx[k] == domain.size()) val_idx[k++] = 0;
        if (k == reads.size()) break;
      }
      std::size_t k = 0;
      while (k < reads.size() && ++rf_idx[k] == writes[ev[reads[k]].location].size()) rf_idx[k++] = 0;
      if (k == reads.size()) break;
    }
  }
  return out;
}

inline std::set<CandidateKey> keys_of(const std::vector<Execution>& xs) {
  std::set<CandidateKey> out;
  for (const auto& x : xs) out.insert({x.rf, x.co, x.values});
  return out;
}

/// Outcomes under `model` computed from the naive candidate set.
inline std::set<Outcome> naive_outcomes(const LitmusTest& t, ModelId model,
                                        const ModelOptions& opts = {}) {
  const EventGraph g = build_events(t);
  const auto obs = t.observables();
  std::set<Outcome> out;
  for (const auto& [rf, co, values] : naive_candidates(g)) {
    Execution e;
    e.graph = &g;
    e.rf = rf;
    e.co = co;
    e.values = values;
    if (model_consistent(e, model, opts)) out.insert(final_state(e, obs));
  }
  return out;
}

//--------------------------------------------------------------------------
// Random source tests

struct RandomShape {
  int min_threads = 2;
  int max_threads = 2;
  int max_locations = 2;
  int max_statements = 3;
  int max_value = 2;
};

inline std::vector<MemoryOrder> orders_for(SourceStmt::Kind k) {
  std::vector<MemoryOrder> out;
  for (auto o : kAllOrders) {
    const bool ok = k == SourceStmt::Kind::kLoad    ? valid_for_load(o)
                    : k == SourceStmt::Kind::kStore ? valid_for_store(o)
                    : k == SourceStmt::Kind::kFence ? valid_for_fence(o)
                                                    : true;
    if (ok) out.push_back(o);
  }
  return out;
}

/// A random straight-line source test. The final condition mentions every
/// register and every location so outcome sets are as informative as
/// possible.
inline LitmusTest random_source_test(std::mt19937_64& rng, const RandomShape& shape = {},
                                     const std::string& name = "random") {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  static const char* kNames[] = {"x", "y", "z", "w"};
  LitmusTest t;
  t.name = name;
  t.dialect = Dialect::kSource;
  const int nloc = pick(1, shape.max_locations);
  for (int l = 0; l < nloc; ++l) t.locations.push_back({kNames[l], 0});
  const int nthreads = pick(shape.min_threads, shape.max_threads);
  std::vector<FinalCondition> atoms;
  for (int tid = 0; tid < nthreads; ++tid) {
    Thread th;
    th.id = tid;
    std::vector<SourceStmt> body;
    int next_reg = 0;
    const int len = pick(1, shape.max_statements);
    for (int i = 0; i < len; ++i) {
      const auto kind = static_cast<SourceStmt::Kind>(pick(0, 3));
      const auto orders = orders_for(kind);
      const MemoryOrder o = orders[pick(0, static_cast<int>(orders.size()) - 1)];
      const std::string loc = kNames[pick(0, nloc - 1)];
      const int v = pick(1, shape.max_value);
      switch (kind) {
        case SourceStmt::Kind::kLoad:
          body.push_back(SourceStmt::load(loc, "r" + std::to_string(next_reg++), o));
          break;
        case SourceStmt::Kind::kStore:
          body.push_back(SourceStmt::store(loc, v, o));
          break;
        case SourceStmt::Kind::kExchange:
          if (pick(0, 1)) body.push_back(SourceStmt::exchange(loc, v, o, "r" + std::to_string(next_reg++)));
          else body.push_back(SourceStmt::exchange(loc, v, o));
          break;
        case SourceStmt::Kind::kFence:
          body.push_back(SourceStmt::fence(o));
          break;
      }
    }
    for (int r = 0; r < next_reg; ++r) {
      atoms.push_back(FinalCondition::atom(Observable::reg(tid, "r" + std::to_string(r)), 0));
    }
    th.body = std::move(body);
    t.threads.push_back(std::move(th));
  }
  for (const auto& l : t.locations) atoms.push_back(FinalCondition::atom(Observable::memory(l.name), 0));
  t.final = atoms.size() == 1 ? atoms[0] : FinalCondition::all_of(atoms);
  validate(t);
  return t;
}

inline std::size_t event_count(const LitmusTest& t) { return build_events(t).size(); }

/// Strictly stronger orders valid for the statement's kind.
inline std::vector<MemoryOrder> stronger_orders(const SourceStmt& s) {
  auto le = [](MemoryOrder a, MemoryOrder b) {
    if (a == b) return true;
    if (a == MemoryOrder::kRelaxed) return true;
    if (b == MemoryOrder::kSeqCst) return true;
    return b == MemoryOrder::kAcqRel && (a == MemoryOrder::kAcquire || a == MemoryOrder::kRelease);
  };
  std::vector<MemoryOrder> out;
  for (auto o : orders_for(s.kind)) {
    if (o != s.order && le(s.order, o)) out.push_back(o);
  }
  return out;
}

//--------------------------------------------------------------------------
// Property runners. Each returns how many generated tests were checked and
// a description of the first counterexample, if any.

struct PropertyResult {
  int tests = 0;
  int failures = 0;
  std::string first_failure;

  void fail(const LitmusTest& t, const std::string& why) {
    if (failures++ == 0) first_failure = why + "\n" + render_litmus(t);
  }
  bool ok() const { return failures == 0; }
};

inline std::vector<LitmusTest> random_corpus(std::uint64_t seed, int count,
                                             const RandomShape& shape = {}) {
  std::mt19937_64 rng(seed);
  std::vector<LitmusTest> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(random_source_test(rng, shape, "random-" + std::to_string(i)));
  }
  return out;
}

/// Compiled outcomes relabelled with source observables.
inline OutcomeSet lowered_outcomes(const LitmusTest& source, const LoweringOptions& lopts = {},
                                   const ModelOptions& mopts = {}) {
  DiffOptions d;
  d.model = mopts;
  d.parallel = false;
  const auto lowered = lower_test(source, lopts);
  return check_refinement(source, lowered.test, lowered.mapping, d).compiled_outcomes;
}

inline PropertyResult prop_sc_within_models(const std::vector<LitmusTest>& corpus) {
  PropertyResult r;
  for (const auto& t : corpus) {
    ++r.tests;
    const auto sc = sc_oracle_outcomes(t);
    if (!sc.subset_of(allowed_outcomes(t, ModelId::kC11))) r.fail(t, "SC outcome missing from C11");
    else if (!sc.subset_of(lowered_outcomes(t))) r.fail(t, "SC outcome missing from AArch64 lowering");
  }
  return r;
}

inline PropertyResult prop_strengthening(const std::vector<LitmusTest>& corpus) {
  PropertyResult r;
  for (const auto& t : corpus) {
    ++r.tests;
    const auto base_c11 = allowed_outcomes(t, ModelId::kC11);
    const auto base_arm = lowered_outcomes(t);
    for (std::size_t th = 0; th < t.threads.size(); ++th) {
      for (std::size_t i = 0; i < t.threads[th].source().size(); ++i) {
        for (auto o : stronger_orders(t.threads[th].source()[i])) {
          LitmusTest s = t;
          std::get<std::vector<SourceStmt>>(s.threads[th].body)[i].order = o;
          if (!allowed_outcomes(s, ModelId::kC11).subset_of(base_c11))
            r.fail(t, "strengthening thread " + std::to_string(th) + " stmt " +
                          std::to_string(i) + " enlarged the C11 set");
          else if (!lowered_outcomes(s).subset_of(base_arm))
            r.fail(t, "strengthening thread " + std::to_string(th) + " stmt " +
                          std::to_string(i) + " enlarged the AArch64 set");
        }
      }
    }
  }
  return r;
}

inline PropertyResult prop_zero_register_weakens(const std::vector<LitmusTest>& corpus) {
  PropertyResult r;
  for (const auto& t : corpus) {
    ++r.tests;
    const auto plain = lowered_outcomes(t);
    const auto rewritten = lowered_outcomes(t, {true, 15});
    if (!plain.subset_of(rewritten)) r.fail(t, "zero-register rewrite removed an outcome");
  }
  return r;
}

inline PropertyResult prop_enumeration_matches_naive(const std::vector<LitmusTest>& corpus,
                                                     std::size_t max_events = 8) {
  PropertyResult r;
  for (const auto& src : corpus) {
    for (const auto& t : {src, lower_test(src).test}) {
      const EventGraph g = build_events(t);
      if (g.size() > max_events) continue;
      ++r.tests;
      const auto fast = enumerate_candidates(g);
      const auto keys = keys_of(fast);
      if (keys.size() != fast.size()) r.fail(t, "enumeration produced a duplicate candidate");
      else if (keys != naive_candidates(g)) r.fail(t, "enumeration differs from naive oracle");
    }
  }
  return r;
}

}  // namespace wmct::testing

#endif  // WMCT_TESTS_SUPPORT_HPP_
