#ifndef WMCT_OUTCOMES_HPP_
#define WMCT_OUTCOMES_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exec.hpp"
#include "litmus.hpp"
#include "model_aarch64.hpp"
#include "model_c11.hpp"

namespace wmct {

enum class ModelId { kC11, kAArch64 };

inline std::string_view model_name(ModelId m) {
  return m == ModelId::kC11 ? "c11" : "aarch64";
}

inline std::optional<ModelId> model_from_name(std::string_view s) {
  if (s == "c11") return ModelId::kC11;
  if (s == "aarch64") return ModelId::kAArch64;
  return std::nullopt;
}

inline ModelId default_model(Dialect d) {
  return d == Dialect::kSource ? ModelId::kC11 : ModelId::kAArch64;
}

struct ModelOptions {
  bool legacy_zero_register = false;
  std::size_t candidate_cap = kDefaultCandidateCap;
};

/// Final-state assignments a model allows for one test.
struct OutcomeSet {
  std::string test;
  std::string model;
  std::vector<Observable> observables;  // canonical order
  std::set<Outcome> outcomes;

  std::size_t size() const { return outcomes.size(); }
  bool contains(const Outcome& o) const { return outcomes.count(o) != 0; }

  bool subset_of(const OutcomeSet& other) const {
    for (const auto& o : outcomes) {
      if (!other.contains(o)) return false;
    }
    return true;
  }
};

inline bool model_consistent(const Execution& e, ModelId model, const ModelOptions& opts = {}) {
  if (model == ModelId::kC11) return c11_consistent(e);
  return aarch64_consistent(e, AArch64Options{opts.legacy_zero_register});
}

/// Outcomes of every candidate execution the model accepts, projected onto
/// `observables` (default: those of the test's final condition).
inline OutcomeSet allowed_outcomes(const LitmusTest& test, ModelId model,
                                   const ModelOptions& opts = {},
                                   std::optional<std::vector<Observable>> observables = {}) {
  const Dialect expected = model == ModelId::kC11 ? Dialect::kSource : Dialect::kAsm;
  if (test.dialect != expected)
    throw DialectError("model '" + std::string(model_name(model)) + "' cannot run a " +
                       (test.dialect == Dialect::kSource ? "source" : "AArch64") + " test");
  OutcomeSet out;
  out.test = test.name;
  out.model = std::string(model_name(model));
  out.observables = observables ? *observables : test.observables();
  const EventGraph g = build_events(test);
  for_each_candidate(
      g,
      [&](const Execution& e) {
        if (model_consistent(e, model, opts)) out.outcomes.insert(final_state(e, out.observables));
      },
      opts.candidate_cap);
  return out;
}

/// Sequentially consistent outcomes by exhaustive interleaving of whole
/// statements (or instructions) over a single shared memory. Independent of
/// the event-graph machinery; used as an oracle.
inline OutcomeSet sc_oracle_outcomes(const LitmusTest& test,
                                     std::size_t state_cap = kDefaultCandidateCap,
                                     std::optional<std::vector<Observable>> observables = {}) {
  OutcomeSet out;
  out.test = test.name;
  out.model = "sc";
  out.observables = observables ? *observables : test.observables();

  const std::size_t nthreads = test.threads.size();
  // Register slots: asm registers by number, source registers by first use.
  constexpr std::size_t kSlots = 32;
  std::vector<std::map<std::string, std::size_t>> slot_of(nthreads);
  for (const auto& th : test.threads) {
    if (!th.is_source()) continue;
    for (const auto& s : th.source()) {
      if (s.dest && !slot_of[th.id].count(*s.dest)) {
        const auto next = slot_of[th.id].size();
        slot_of[th.id][*s.dest] = next;
      }
    }
  }
  auto loc = [&](const std::string& name) { return *test.location_index(name); };

  // State layout: pcs, memory, then kSlots registers per thread.
  const std::size_t mem_base = nthreads;
  const std::size_t reg_base = mem_base + test.locations.size();
  std::vector<int> init(reg_base + nthreads * kSlots, 0);
  for (std::size_t l = 0; l < test.locations.size(); ++l) init[mem_base + l] = test.locations[l].init;
  auto reg = [&](std::vector<int>& st, std::size_t t, std::size_t slot) -> int& {
    return st[reg_base + t * kSlots + slot];
  };

  std::set<std::vector<int>> visited;
  std::vector<std::vector<int>> stack{init};
  while (!stack.empty()) {
    std::vector<int> st = std::move(stack.back());
    stack.pop_back();
    if (!visited.insert(st).second) continue;
    if (visited.size() > state_cap)
      throw ResourceLimitError("interleaving oracle exceeded " + std::to_string(state_cap) +
                               " states");
    bool terminal = true;
    for (std::size_t t = 0; t < nthreads; ++t) {
      const Thread& th = test.threads[t];
      const auto pc = static_cast<std::size_t>(st[t]);
      if (pc >= th.length()) continue;
      terminal = false;
      std::vector<int> nx = st;
      nx[t] += 1;
      if (th.is_source()) {
        const SourceStmt& s = th.source()[pc];
        using K = SourceStmt::Kind;
        switch (s.kind) {
          case K::kLoad:
            reg(nx, t, slot_of[t].at(*s.dest)) = nx[mem_base + loc(s.location)];
            break;
          case K::kStore:
            nx[mem_base + loc(s.location)] = s.value;
            break;
          case K::kExchange: {
            const int old = nx[mem_base + loc(s.location)];
            nx[mem_base + loc(s.location)] = s.value;
            if (s.dest) reg(nx, t, slot_of[t].at(*s.dest)) = old;
            break;
          }
          case K::kFence:
            break;
        }
      } else {
        const AsmInstr& in = th.instrs()[pc];
        auto read_reg = [&](int r) {
          return r == kZeroRegister ? 0 : reg(nx, t, static_cast<std::size_t>(r));
        };
        auto write_reg = [&](int r, int v) {
          if (r != kZeroRegister) reg(nx, t, static_cast<std::size_t>(r)) = v;
        };
        switch (in.op) {
          case Mnemonic::kMov:
            write_reg(in.dst, in.imm);
            break;
          case Mnemonic::kLdr:
          case Mnemonic::kLdar:
            write_reg(in.dst, nx[mem_base + loc(in.location)]);
            break;
          case Mnemonic::kStr:
          case Mnemonic::kStlr:
            nx[mem_base + loc(in.location)] = read_reg(in.src);
            break;
          case Mnemonic::kDmb:
            break;
          default: {
            const int old = nx[mem_base + loc(in.location)];
            nx[mem_base + loc(in.location)] = read_reg(in.src);
            write_reg(in.dst, old);
            break;
          }
        }
      }
      stack.push_back(std::move(nx));
    }
    if (!terminal) continue;
    Outcome o;
    for (const auto& obs : out.observables) {
      if (!obs.is_register()) {
        o[obs] = st[mem_base + loc(obs.name)];
      } else if (test.dialect == Dialect::kSource) {
        o[obs] = reg(st, obs.thread, slot_of[obs.thread].at(obs.name));
      } else {
        o[obs] = reg(st, obs.thread, static_cast<std::size_t>(std::stoi(obs.name.substr(1))));
      }
    }
    out.outcomes.insert(std::move(o));
  }
  return out;
}

}  // namespace wmct

#endif  // WMCT_OUTCOMES_HPP_
