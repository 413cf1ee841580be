#ifndef WMCT_EXEC_HPP_
#define WMCT_EXEC_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "litmus.hpp"
#include "relation.hpp"

namespace wmct {

inline constexpr std::size_t kDefaultCandidateCap = 1'000'000;

enum class EventKind { kRead, kWrite, kFence };

/// Where a written value (or a final register value) comes from: a constant
/// or the value returned by an earlier read event of the same thread.
struct ValueSource {
  int constant = 0;
  int from_read = -1;

  static ValueSource of(int v) { return {v, -1}; }
  static ValueSource read(int event) { return {0, event}; }
  bool operator==(const ValueSource&) const = default;
};

struct Event {
  int id = 0;
  int thread = -1;  // -1 for init writes
  int po_index = 0;
  EventKind kind = EventKind::kFence;
  int location = -1;
  ValueSource written;  // writes only
  bool acquire = false;
  bool release = false;
  bool seq_cst = false;
  int rmw_partner = -1;  // the other half of an exchange
  bool zero_register = false;
  std::optional<BarrierDomain> barrier;    // fences lowered from DMB
  std::optional<MemoryOrder> fence_order;  // source fences

  bool is_init() const { return thread < 0; }
  bool is_read() const { return kind == EventKind::kRead; }
  bool is_write() const { return kind == EventKind::kWrite; }
  bool is_fence() const { return kind == EventKind::kFence; }
  bool is_rmw_read() const { return is_read() && rmw_partner >= 0; }
  bool is_rmw_write() const { return is_write() && rmw_partner >= 0; }
};

struct EventGraph {
  Dialect dialect = Dialect::kSource;
  std::vector<Event> events;  // init writes first, one per location, in location order
  std::vector<std::string> location_names;
  Relation po;  // program order plus init-before-everything
  /// Final value of every register written by the test.
  std::map<Observable, ValueSource> registers;

  std::size_t size() const { return events.size(); }

  std::vector<int> writes_to(int loc) const {
    std::vector<int> out;
    for (const auto& e : events) {
      if (e.is_write() && e.location == loc) out.push_back(e.id);
    }
    return out;
  }

  /// po between events of the same (non-init) thread.
  Relation thread_po() const {
    return po.filter([&](std::size_t a, std::size_t b) {
      return !events[a].is_init() && events[a].thread == events[b].thread;
    });
  }

  Relation rmw() const {
    Relation r(size());
    for (const auto& e : events) {
      if (e.is_rmw_read()) r.insert(e.id, e.rmw_partner);
    }
    return r;
  }
};

/// Translates a test into its event graph.
///
/// Loads become reads, stores writes, exchanges an adjacent read/write pair
/// and fences (DMB) fence events. MOV only updates register bookkeeping.
inline EventGraph build_events(const LitmusTest& test) {
  EventGraph g;
  g.dialect = test.dialect;
  for (std::size_t l = 0; l < test.locations.size(); ++l) {
    Event e;
    e.id = static_cast<int>(g.events.size());
    e.kind = EventKind::kWrite;
    e.location = static_cast<int>(l);
    e.written = ValueSource::of(test.locations[l].init);
    g.events.push_back(e);
    g.location_names.push_back(test.locations[l].name);
  }
  const auto num_init = g.events.size();

  auto loc_of = [&](const std::string& name) {
    return static_cast<int>(*test.location_index(name));
  };
  std::vector<std::vector<int>> per_thread(test.threads.size());
  auto add = [&](const Thread& th, Event e) {
    e.id = static_cast<int>(g.events.size());
    e.thread = th.id;
    e.po_index = static_cast<int>(per_thread[th.id].size());
    per_thread[th.id].push_back(e.id);
    g.events.push_back(e);
    return e.id;
  };

  for (const auto& th : test.threads) {
    if (th.is_source()) {
      std::map<std::string, ValueSource> regs;
      for (const auto& s : th.source()) {
        using K = SourceStmt::Kind;
        Event e;
        switch (s.kind) {
          case K::kLoad: {
            e.kind = EventKind::kRead;
            e.location = loc_of(s.location);
            e.acquire = has_acquire(s.order);
            e.seq_cst = s.order == MemoryOrder::kSeqCst;
            const int r = add(th, e);
            regs[*s.dest] = ValueSource::read(r);
            break;
          }
          case K::kStore: {
            e.kind = EventKind::kWrite;
            e.location = loc_of(s.location);
            e.written = ValueSource::of(s.value);
            e.release = has_release(s.order);
            e.seq_cst = s.order == MemoryOrder::kSeqCst;
            add(th, e);
            break;
          }
          case K::kExchange: {
            Event r = e;
            r.kind = EventKind::kRead;
            r.location = loc_of(s.location);
            r.acquire = has_acquire(s.order);
            r.seq_cst = s.order == MemoryOrder::kSeqCst;
            const int rid = add(th, r);
            Event w;
            w.kind = EventKind::kWrite;
            w.location = r.location;
            w.written = ValueSource::of(s.value);
            w.release = has_release(s.order);
            w.seq_cst = r.seq_cst;
            w.rmw_partner = rid;
            const int wid = add(th, w);
            g.events[rid].rmw_partner = wid;
            if (s.dest) regs[*s.dest] = ValueSource::read(rid);
            break;
          }
          case K::kFence: {
            e.kind = EventKind::kFence;
            e.fence_order = s.order;
            e.acquire = has_acquire(s.order);
            e.release = has_release(s.order);
            e.seq_cst = s.order == MemoryOrder::kSeqCst;
            add(th, e);
            break;
          }
        }
      }
      for (const auto& [name, src] : regs) g.registers[Observable::reg(th.id, name)] = src;
    } else {
      std::map<int, ValueSource> regs;
      auto value_of = [&](int reg) {
        if (reg == kZeroRegister) return ValueSource::of(0);
        return regs.at(reg);
      };
      for (const auto& in : th.instrs()) {
        Event e;
        switch (in.op) {
          case Mnemonic::kMov:
            regs[in.dst] = ValueSource::of(in.imm);
            break;
          case Mnemonic::kLdr:
          case Mnemonic::kLdar: {
            e.kind = EventKind::kRead;
            e.location = loc_of(in.location);
            e.acquire = in.op == Mnemonic::kLdar;
            const int r = add(th, e);
            if (in.dst != kZeroRegister) regs[in.dst] = ValueSource::read(r);
            break;
          }
          case Mnemonic::kStr:
          case Mnemonic::kStlr:
            e.kind = EventKind::kWrite;
            e.location = loc_of(in.location);
            e.written = value_of(in.src);
            e.release = in.op == Mnemonic::kStlr;
            add(th, e);
            break;
          case Mnemonic::kDmb:
            e.kind = EventKind::kFence;
            e.barrier = in.domain;
            add(th, e);
            break;
          default: {  // SWP family
            Event r;
            r.kind = EventKind::kRead;
            r.location = loc_of(in.location);
            // The instruction's acquire semantics are recorded as written;
            // the model decides whether a zero-register read still counts.
            r.acquire = in.op == Mnemonic::kSwpa || in.op == Mnemonic::kSwpal;
            r.zero_register = in.dst == kZeroRegister;
            const ValueSource stored = value_of(in.src);
            const int rid = add(th, r);
            Event w;
            w.kind = EventKind::kWrite;
            w.location = r.location;
            w.written = stored;
            w.release = in.op == Mnemonic::kSwpl || in.op == Mnemonic::kSwpal;
            w.rmw_partner = rid;
            const int wid = add(th, w);
            g.events[rid].rmw_partner = wid;
            if (in.dst != kZeroRegister) regs[in.dst] = ValueSource::read(rid);
            break;
          }
        }
      }
      for (const auto& [reg, src] : regs) {
        g.registers[Observable::reg(th.id, data_register_name(reg))] = src;
      }
    }
  }

  g.po = Relation(g.events.size());
  for (std::size_t i = 0; i < num_init; ++i) {
    for (std::size_t j = num_init; j < g.events.size(); ++j) g.po.insert(i, j);
  }
  for (const auto& ids : per_thread) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) g.po.insert(ids[a], ids[b]);
    }
  }
  return g;
}

/// A candidate execution: the reads-from choice, a coherence order per
/// location (init write first), and the resulting value of every event.
struct Execution {
  const EventGraph* graph = nullptr;
  std::vector<int> rf;               // read id -> write id; -1 for non-reads
  std::vector<std::vector<int>> co;  // per location, write ids in coherence order
  std::vector<int> values;           // value read or written; 0 for fences

  const EventGraph& g() const { return *graph; }

  Relation rf_relation() const {
    Relation r(g().size());
    for (std::size_t i = 0; i < rf.size(); ++i) {
      if (rf[i] >= 0) r.insert(static_cast<std::size_t>(rf[i]), i);
    }
    return r;
  }

  /// Strict (transitive) coherence order.
  Relation co_relation() const {
    Relation r(g().size());
    for (const auto& order : co) {
      for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) r.insert(order[a], order[b]);
      }
    }
    return r;
  }

  /// fr = rf^-1 ; co, minus identity.
  Relation fr_relation() const {
    return rf_relation().inverse().then(co_relation()) - Relation::identity(g().size());
  }

  int value_of(const ValueSource& s) const {
    return s.from_read >= 0 ? values[static_cast<std::size_t>(s.from_read)] : s.constant;
  }

  /// Identity of the candidate independent of the graph pointer.
  auto key() const { return std::tie(rf, co, values); }
  bool operator<(const Execution& o) const { return key() < o.key(); }
  bool operator==(const Execution& o) const { return key() == o.key(); }
};

inline void require_dialect(const Execution& e, Dialect d, const char* model) {
  if (e.g().dialect != d)
    throw DialectError(std::string("the ") + model + " model only accepts " +
                       (d == Dialect::kSource ? "source" : "AArch64") + " executions");
}

namespace detail {

/// Backtracking search over co permutations, rf choices for plain reads,
/// and value guesses for reads whose value depends on itself through a
/// dataflow cycle.
template <class Visit>
class CandidateSearch {
 public:
  CandidateSearch(const EventGraph& g, Visit& visit, std::size_t cap)
      : g_(g), visit_(visit), cap_(cap) {
    exec_.graph = &g;
    exec_.rf.assign(g.size(), -1);
    exec_.co.resize(g.location_names.size());
    exec_.values.assign(g.size(), 0);
    for (int l = 0; l < static_cast<int>(g.location_names.size()); ++l) {
      writes_.push_back(g.writes_to(l));
    }
    for (const auto& e : g.events) {
      if (e.is_read() && e.rmw_partner < 0) plain_reads_.push_back(e.id);
    }
  }

  std::size_t run() {
    choose_co(0);
    return count_;
  }

 private:
  void choose_co(std::size_t loc) {
    if (loc == writes_.size()) {
      choose_rf(0);
      return;
    }
    const auto& all = writes_[loc];
    // all[0] is the init write; it stays first.
    std::vector<int> rest(all.begin() + 1, all.end());
    std::sort(rest.begin(), rest.end());
    do {
      std::vector<int> order{all[0]};
      order.insert(order.end(), rest.begin(), rest.end());
      // RMW atomicity: the read half reads the immediate co-predecessor.
      for (std::size_t i = 1; i < order.size(); ++i) {
        const Event& w = g_.events[order[i]];
        if (w.is_rmw_write()) exec_.rf[w.rmw_partner] = order[i - 1];
      }
      exec_.co[loc] = std::move(order);
      choose_co(loc + 1);
    } while (std::next_permutation(rest.begin(), rest.end()));
  }

  void choose_rf(std::size_t idx) {
    if (idx == plain_reads_.size()) {
      std::vector<std::optional<int>> vals(g_.size());
      resolve(vals, {});
      return;
    }
    const int r = plain_reads_[idx];
    for (int w : writes_[g_.events[r].location]) {
      exec_.rf[r] = w;
      choose_rf(idx + 1);
    }
  }

  std::optional<int> source_value(const ValueSource& s,
                                  const std::vector<std::optional<int>>& vals) const {
    if (s.from_read < 0) return s.constant;
    return vals[s.from_read];
  }

  void resolve(std::vector<std::optional<int>> vals, std::vector<int> guessed) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& e : g_.events) {
        if (vals[e.id]) continue;
        std::optional<int> v;
        if (e.is_write()) v = source_value(e.written, vals);
        else if (e.is_read()) v = vals[exec_.rf[e.id]];
        else v = 0;
        if (v) {
          vals[e.id] = v;
          progress = true;
        }
      }
    }
    auto unresolved = std::find_if(vals.begin(), vals.end(), [](const auto& v) { return !v; });
    if (unresolved != vals.end()) {
      // Only a dependency cycle through reads-from can block resolution;
      // guess the value of the lowest unresolved read and check it later.
      int pick = -1;
      for (const auto& e : g_.events) {
        if (e.is_read() && !vals[e.id]) {
          pick = e.id;
          break;
        }
      }
      for (int v = 0; v <= kMaxValue; ++v) {
        auto next = vals;
        next[pick] = v;
        auto next_guessed = guessed;
        next_guessed.push_back(pick);
        resolve(std::move(next), std::move(next_guessed));
      }
      return;
    }
    for (int r : guessed) {
      if (vals[r] != vals[exec_.rf[r]]) return;
    }
    for (std::size_t i = 0; i < vals.size(); ++i) exec_.values[i] = *vals[i];
    if (++count_ > cap_)
      throw ResourceLimitError("candidate cap of " + std::to_string(cap_) +
                               " executions exceeded; the test is too large");
    visit_(static_cast<const Execution&>(exec_));
  }

  const EventGraph& g_;
  Visit& visit_;
  std::size_t cap_;
  std::size_t count_ = 0;
  Execution exec_;
  std::vector<std::vector<int>> writes_;
  std::vector<int> plain_reads_;
};

}  // namespace detail

/// Calls `visit(const Execution&)` once per candidate execution. The
/// reference is only valid during the call. Returns the candidate count.
/// Throws ResourceLimitError once more than `cap` candidates are produced.
template <class Visit>
std::size_t for_each_candidate(const EventGraph& g, Visit&& visit,
                               std::size_t cap = kDefaultCandidateCap) {
  detail::CandidateSearch<std::remove_reference_t<Visit>> search(g, visit, cap);
  return search.run();
}

inline std::vector<Execution> enumerate_candidates(const EventGraph& g,
                                                   std::size_t cap = kDefaultCandidateCap) {
  std::vector<Execution> out;
  for_each_candidate(g, [&](const Execution& e) { out.push_back(e); }, cap);
  return out;
}

/// Final values of the given observables in a candidate: the co-last write
/// for locations and the last definition for registers.
inline Outcome final_state(const Execution& e, const std::vector<Observable>& observables) {
  Outcome o;
  for (const auto& obs : observables) {
    if (obs.is_register()) {
      o[obs] = e.value_of(e.g().registers.at(obs));
    } else {
      const auto it = std::find(e.g().location_names.begin(), e.g().location_names.end(), obs.name);
      const auto loc = static_cast<std::size_t>(it - e.g().location_names.begin());
      o[obs] = e.values[e.co.at(loc).back()];
    }
  }
  return o;
}

inline Outcome final_state(const Execution& e, const FinalCondition& final) {
  return final_state(e, final.observables());
}

}  // namespace wmct

#endif  // WMCT_EXEC_HPP_
