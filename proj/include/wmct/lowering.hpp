#ifndef WMCT_LOWERING_HPP_
#define WMCT_LOWERING_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litmus.hpp"

namespace wmct {

class LoweringError : public Error {
 public:
  using Error::Error;
};

class MappingError : public Error {
 public:
  using Error::Error;
};

/// Correspondence between a source test and its compiled form.
struct Mapping {
  std::map<std::string, std::string> locations;   // source -> compiled
  std::map<Observable, Observable> observables;   // source -> compiled

  /// compiled -> source
  std::map<Observable, Observable> inverse() const {
    std::map<Observable, Observable> inv;
    for (const auto& [s, c] : observables) inv.emplace(c, s);
    return inv;
  }

  /// Checks injectivity and totality over `source_observables`.
  void check(const std::vector<Observable>& source_observables) const {
    if (inverse().size() != observables.size())
      throw MappingError("mapping is not injective on observables");
    for (const auto& o : source_observables) {
      if (!observables.count(o)) throw MappingError("mapping does not cover " + o.str());
    }
  }

  bool operator==(const Mapping&) const = default;
};

inline nlohmann::json mapping_to_json(const Mapping& m) {
  nlohmann::json j;
  j["observables"] = nlohmann::json::object();
  for (const auto& [s, c] : m.observables) j["observables"][s.str()] = c.str();
  j["locations"] = m.locations;
  return j;
}

inline Mapping mapping_from_json(const nlohmann::json& j) {
  Mapping m;
  try {
    for (const auto& [k, v] : j.at("observables").items()) {
      auto s = parse_observable(k);
      auto c = parse_observable(v.get<std::string>());
      if (!s || !c) throw MappingError("malformed observable in mapping: " + k);
      m.observables.emplace(*s, *c);
    }
    if (j.contains("locations")) {
      m.locations = j.at("locations").get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw MappingError(std::string("malformed mapping JSON: ") + e.what());
  }
  return m;
}

struct LoweringOptions {
  bool dead_register_pass = false;
  int scratch_register = 15;  // destination of discarded exchange results
};

struct LoweringResult {
  LitmusTest test;
  Mapping mapping;
};

namespace detail {

/// Registers handed out linearly from W1; the scratch register and the
/// frame/link registers are never allocated.
class RegisterAllocator {
 public:
  explicit RegisterAllocator(int scratch) : scratch_(scratch) {}

  int next() {
    while (next_ == scratch_) ++next_;
    if (next_ > kLastAllocatable)
      throw LoweringError("register budget exhausted while lowering");
    return next_++;
  }

 private:
  static constexpr int kLastAllocatable = 28;
  int scratch_;
  int next_ = 1;
};

}  // namespace detail

/// Rewrites the destination of every SWP-family instruction whose result is
/// dead to the zero register. A destination is live when a later
/// instruction of the same thread reads it or when the final condition
/// observes it. Only thread-local liveness is considered.
inline LitmusTest dead_register_pass(LitmusTest test) {
  if (test.dialect != Dialect::kAsm)
    throw DialectError("the dead-register pass runs on AArch64 tests only");
  std::set<Observable> observed;
  test.final.collect(observed);
  for (auto& th : test.threads) {
    auto& ins = th.instrs();
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (!is_swp(ins[i].op) || ins[i].dst == kZeroRegister) continue;
      const int reg = ins[i].dst;
      bool live = observed.count(Observable::reg(th.id, data_register_name(reg))) != 0;
      for (std::size_t j = i + 1; j < ins.size() && !live; ++j) {
        live = ins[j].src == reg;
      }
      if (!live) ins[i].dst = kZeroRegister;
    }
  }
  return test;
}

/// Compiles a source test with the standard C/C++ to AArch64 mapping:
///
///   load  rlx -> LDR        acq/sc -> LDAR
///   store rlx -> STR        rel/sc -> STLR
///   xchg  rlx -> SWP  acq -> SWPA  rel -> SWPL  acq_rel/sc -> SWPAL
///   fence acq -> DMB ISHLD  rel/acq_rel/sc -> DMB ISH
///
/// Stored constants are materialized with MOV. Each thread binds one
/// address register per location on first use.
inline LoweringResult lower_test(const LitmusTest& source, const LoweringOptions& opts = {}) {
  if (source.dialect != Dialect::kSource)
    throw DialectError("only source tests can be lowered");
  if (opts.scratch_register < 0 || opts.scratch_register > 28)
    throw LoweringError("scratch register must be W0..W28");

  LoweringResult res;
  LitmusTest& out = res.test;
  out.name = source.name + "-compiled";
  out.dialect = Dialect::kAsm;
  out.locations = source.locations;
  for (const auto& l : source.locations) res.mapping.locations[l.name] = l.name;

  for (const auto& th : source.threads) {
    Thread at;
    at.id = th.id;
    at.body = std::vector<AsmInstr>{};
    auto& code = at.instrs();
    detail::RegisterAllocator alloc(opts.scratch_register);
    std::map<std::string, int> addr;
    auto address = [&](const std::string& loc) {
      auto it = addr.find(loc);
      if (it != addr.end()) return it->second;
      const int r = alloc.next();
      addr[loc] = r;
      at.address_bindings[r] = loc;
      return r;
    };
    auto map_register = [&](const std::string& name, int reg) {
      res.mapping.observables[Observable::reg(th.id, name)] =
          Observable::reg(th.id, data_register_name(reg));
    };

    for (const auto& s : th.source()) {
      using K = SourceStmt::Kind;
      switch (s.kind) {
        case K::kLoad: {
          const int a = address(s.location);
          const int d = alloc.next();
          const auto op = s.order == MemoryOrder::kRelaxed ? Mnemonic::kLdr : Mnemonic::kLdar;
          code.push_back(AsmInstr::load(op, d, a, s.location));
          map_register(*s.dest, d);
          break;
        }
        case K::kStore: {
          const int a = address(s.location);
          const int v = alloc.next();
          code.push_back(AsmInstr::mov(v, s.value));
          const auto op = s.order == MemoryOrder::kRelaxed ? Mnemonic::kStr : Mnemonic::kStlr;
          code.push_back(AsmInstr::store(op, v, a, s.location));
          break;
        }
        case K::kExchange: {
          const int a = address(s.location);
          const int v = alloc.next();
          code.push_back(AsmInstr::mov(v, s.value));
          const int d = s.dest ? alloc.next() : opts.scratch_register;
          Mnemonic op = Mnemonic::kSwp;
          switch (s.order) {
            case MemoryOrder::kRelaxed: op = Mnemonic::kSwp; break;
            case MemoryOrder::kAcquire: op = Mnemonic::kSwpa; break;
            case MemoryOrder::kRelease: op = Mnemonic::kSwpl; break;
            case MemoryOrder::kAcqRel:
            case MemoryOrder::kSeqCst: op = Mnemonic::kSwpal; break;
          }
          code.push_back(AsmInstr::swp(op, v, d, a, s.location));
          if (s.dest) map_register(*s.dest, d);
          break;
        }
        case K::kFence:
          code.push_back(AsmInstr::dmb(s.order == MemoryOrder::kAcquire ? BarrierDomain::kLd
                                                                        : BarrierDomain::kSy));
          break;
      }
    }
    if (code.size() > static_cast<std::size_t>(kMaxAsmInstructions))
      throw LoweringError("lowered thread exceeds 16 instructions");
    out.threads.push_back(std::move(at));
  }

  for (const auto& l : source.locations) {
    res.mapping.observables[Observable::memory(l.name)] = Observable::memory(l.name);
  }
  out.final = source.final.map_atoms([&](const Observable& o) {
    auto it = res.mapping.observables.find(o);
    if (it == res.mapping.observables.end())
      throw LoweringError("final condition observes unmapped " + o.str());
    return it->second;
  });

  if (opts.dead_register_pass) out = dead_register_pass(std::move(out));
  return res;
}

}  // namespace wmct

#endif  // WMCT_LOWERING_HPP_
