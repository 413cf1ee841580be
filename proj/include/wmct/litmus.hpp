#ifndef WMCT_LITMUS_HPP_
#define WMCT_LITMUS_HPP_

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace wmct {

//--------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  kSyntax,
  kUndeclaredLocation,
  kUndefinedRegister,
  kUnsupported,
  kUnknownMnemonic,
  kUnboundAddress,
  kZeroRegisterWrite,
  kBounds,
  kInvalidOrder,
};

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& message, int line = 0,
             int column = 0)
      : Error(format(message, line, column)),
        kind_(kind),
        line_(line),
        column_(column) {}

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    if (line <= 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  ParseErrorKind kind_;
  int line_;
  int column_;
};

/// A model was asked to judge a test of the wrong dialect.
class DialectError : public Error {
 public:
  using Error::Error;
};

/// Enumeration exceeded the configured candidate or state cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

//--------------------------------------------------------------------------
// Bounds. Exhaustive enumeration stays tractable inside these.

inline constexpr int kMaxThreads = 4;
inline constexpr int kMaxLocations = 4;
inline constexpr int kMaxSourceStatements = 8;
inline constexpr int kMaxAsmInstructions = 16;
inline constexpr int kMaxValue = 7;

//--------------------------------------------------------------------------
// Memory orders

enum class MemoryOrder { kRelaxed, kAcquire, kRelease, kAcqRel, kSeqCst };

inline constexpr MemoryOrder kAllOrders[] = {
    MemoryOrder::kRelaxed, MemoryOrder::kAcquire, MemoryOrder::kRelease,
    MemoryOrder::kAcqRel, MemoryOrder::kSeqCst};

inline std::string_view c_spelling(MemoryOrder o) {
  switch (o) {
    case MemoryOrder::kRelaxed: return "memory_order_relaxed";
    case MemoryOrder::kAcquire: return "memory_order_acquire";
    case MemoryOrder::kRelease: return "memory_order_release";
    case MemoryOrder::kAcqRel: return "memory_order_acq_rel";
    case MemoryOrder::kSeqCst: return "memory_order_seq_cst";
  }
  return "";
}

/// Short tag used in generated file names and CLI flags.
inline std::string_view short_name(MemoryOrder o) {
  switch (o) {
    case MemoryOrder::kRelaxed: return "rlx";
    case MemoryOrder::kAcquire: return "acq";
    case MemoryOrder::kRelease: return "rel";
    case MemoryOrder::kAcqRel: return "acqrel";
    case MemoryOrder::kSeqCst: return "sc";
  }
  return "";
}

inline std::optional<MemoryOrder> order_from_short_name(std::string_view s) {
  for (auto o : kAllOrders) {
    if (short_name(o) == s) return o;
  }
  return std::nullopt;
}

inline bool has_acquire(MemoryOrder o) {
  return o == MemoryOrder::kAcquire || o == MemoryOrder::kAcqRel ||
         o == MemoryOrder::kSeqCst;
}

inline bool has_release(MemoryOrder o) {
  return o == MemoryOrder::kRelease || o == MemoryOrder::kAcqRel ||
         o == MemoryOrder::kSeqCst;
}

inline bool valid_for_load(MemoryOrder o) {
  return o != MemoryOrder::kRelease && o != MemoryOrder::kAcqRel;
}

inline bool valid_for_store(MemoryOrder o) {
  return o != MemoryOrder::kAcquire && o != MemoryOrder::kAcqRel;
}

inline bool valid_for_fence(MemoryOrder o) { return o != MemoryOrder::kRelaxed; }

//--------------------------------------------------------------------------
// Source dialect

struct SourceStmt {
  enum class Kind { kLoad, kStore, kExchange, kFence };

  Kind kind = Kind::kFence;
  std::string location;             // empty for fences
  int value = 0;                    // stored value for Store/Exchange
  std::optional<std::string> dest;  // absent on an Exchange = discarded read
  MemoryOrder order = MemoryOrder::kSeqCst;

  static SourceStmt load(std::string loc, std::string reg, MemoryOrder o) {
    return {Kind::kLoad, std::move(loc), 0, std::move(reg), o};
  }
  static SourceStmt store(std::string loc, int v, MemoryOrder o) {
    return {Kind::kStore, std::move(loc), v, std::nullopt, o};
  }
  static SourceStmt exchange(std::string loc, int v, MemoryOrder o,
                             std::optional<std::string> reg = std::nullopt) {
    return {Kind::kExchange, std::move(loc), v, std::move(reg), o};
  }
  static SourceStmt fence(MemoryOrder o) {
    return {Kind::kFence, {}, 0, std::nullopt, o};
  }

  bool operator==(const SourceStmt&) const = default;
};

//--------------------------------------------------------------------------
// Assembly dialect

enum class Mnemonic { kMov, kLdr, kLdar, kStr, kStlr, kSwp, kSwpa, kSwpl, kSwpal, kDmb };
enum class BarrierDomain { kLd, kSt, kSy };

/// Architectural register number; 31 is the zero register (WZR/XZR).
inline constexpr int kZeroRegister = 31;
inline constexpr int kMaxRegister = 30;

inline std::string data_register_name(int reg) {
  return reg == kZeroRegister ? "WZR" : "W" + std::to_string(reg);
}

inline std::string address_register_name(int reg) {
  return reg == kZeroRegister ? "XZR" : "X" + std::to_string(reg);
}

inline bool is_swp(Mnemonic m) {
  return m == Mnemonic::kSwp || m == Mnemonic::kSwpa || m == Mnemonic::kSwpl ||
         m == Mnemonic::kSwpal;
}
inline bool is_load(Mnemonic m) { return m == Mnemonic::kLdr || m == Mnemonic::kLdar; }
inline bool is_store(Mnemonic m) { return m == Mnemonic::kStr || m == Mnemonic::kStlr; }

inline std::string_view mnemonic_name(Mnemonic m) {
  switch (m) {
    case Mnemonic::kMov: return "MOV";
    case Mnemonic::kLdr: return "LDR";
    case Mnemonic::kLdar: return "LDAR";
    case Mnemonic::kStr: return "STR";
    case Mnemonic::kStlr: return "STLR";
    case Mnemonic::kSwp: return "SWP";
    case Mnemonic::kSwpa: return "SWPA";
    case Mnemonic::kSwpl: return "SWPL";
    case Mnemonic::kSwpal: return "SWPAL";
    case Mnemonic::kDmb: return "DMB";
  }
  return "";
}

inline std::string_view barrier_option(BarrierDomain d) {
  switch (d) {
    case BarrierDomain::kLd: return "ISHLD";
    case BarrierDomain::kSt: return "ISHST";
    case BarrierDomain::kSy: return "ISH";
  }
  return "";
}

/// One instruction. Unused operands hold -1.
///
///   MOV   dst, #imm
///   LDR   dst, [addr]      LDAR likewise
///   STR   src, [addr]      STLR likewise
///   SWP   src, dst, [addr] (dst may be the zero register)
///   DMB   domain
struct AsmInstr {
  Mnemonic op = Mnemonic::kDmb;
  int dst = -1;
  int src = -1;
  int addr = -1;
  int imm = 0;
  BarrierDomain domain = BarrierDomain::kSy;
  std::string location;  // resolved from `addr` through the thread's bindings

  static AsmInstr mov(int dst, int imm) { return {Mnemonic::kMov, dst, -1, -1, imm, BarrierDomain::kSy, {}}; }
  static AsmInstr load(Mnemonic op, int dst, int addr, std::string loc) {
    return {op, dst, -1, addr, 0, BarrierDomain::kSy, std::move(loc)};
  }
  static AsmInstr store(Mnemonic op, int src, int addr, std::string loc) {
    return {op, -1, src, addr, 0, BarrierDomain::kSy, std::move(loc)};
  }
  static AsmInstr swp(Mnemonic op, int src, int dst, int addr, std::string loc) {
    return {op, dst, src, addr, 0, BarrierDomain::kSy, std::move(loc)};
  }
  static AsmInstr dmb(BarrierDomain d) { return {Mnemonic::kDmb, -1, -1, -1, 0, d, {}}; }

  bool operator==(const AsmInstr&) const = default;
};

//--------------------------------------------------------------------------
// Tests

enum class Dialect { kSource, kAsm };

struct Thread {
  int id = 0;
  std::variant<std::vector<SourceStmt>, std::vector<AsmInstr>> body;
  /// Asm only: address register -> location name.
  std::map<int, std::string> address_bindings;

  bool is_source() const { return body.index() == 0; }
  const std::vector<SourceStmt>& source() const { return std::get<0>(body); }
  std::vector<SourceStmt>& source() { return std::get<0>(body); }
  const std::vector<AsmInstr>& instrs() const { return std::get<1>(body); }
  std::vector<AsmInstr>& instrs() { return std::get<1>(body); }

  std::size_t length() const {
    return is_source() ? source().size() : instrs().size();
  }

  /// Names of registers written in this thread ("r0" or "W4").
  std::set<std::string> registers() const {
    std::set<std::string> out;
    if (is_source()) {
      for (const auto& s : source()) {
        if (s.dest) out.insert(*s.dest);
      }
    } else {
      for (const auto& i : instrs()) {
        if (i.dst >= 0 && i.dst != kZeroRegister) out.insert(data_register_name(i.dst));
      }
    }
    return out;
  }

  bool operator==(const Thread&) const = default;
};

struct Location {
  std::string name;
  int init = 0;
  bool operator==(const Location&) const = default;
};

//--------------------------------------------------------------------------
// Observables, outcomes and final conditions

struct Observable {
  enum class Kind { kRegister, kMemory };

  Kind kind = Kind::kMemory;
  int thread = -1;
  std::string name;  // "r0" (source), "W4" (asm) or a location name

  static Observable memory(std::string loc) { return {Kind::kMemory, -1, std::move(loc)}; }
  static Observable reg(int thread, std::string r) {
    return {Kind::kRegister, thread, std::move(r)};
  }

  bool is_register() const { return kind == Kind::kRegister; }

  /// `P1:r0`, `1:W4` or `y`.
  std::string str() const {
    if (!is_register()) return name;
    if (!name.empty() && name[0] == 'r') return "P" + std::to_string(thread) + ":" + name;
    return std::to_string(thread) + ":" + name;
  }

  bool operator==(const Observable&) const = default;
  /// Canonical order is lexicographic on the printed form.
  bool operator<(const Observable& o) const { return str() < o.str(); }
};

/// Parses `P1:r0`, `1:r0`, `1:W4`, `1:X4` or a bare location name.
inline std::optional<Observable> parse_observable(std::string_view text) {
  auto is_ident = [](std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
      return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  };
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    if (!is_ident(text)) return std::nullopt;
    return Observable::memory(std::string(text));
  }
  std::string_view tid = text.substr(0, colon);
  std::string_view reg = text.substr(colon + 1);
  if (!tid.empty() && tid[0] == 'P') tid.remove_prefix(1);
  if (tid.empty() || tid.size() > 2 ||
      !std::all_of(tid.begin(), tid.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  if (!is_ident(reg)) return std::nullopt;
  std::string name(reg);
  if ((name[0] == 'W' || name[0] == 'X') && name.size() > 1) {
    const std::string_view digits = std::string_view(name).substr(1);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      name[0] = 'W';
  }
  return Observable::reg(std::stoi(std::string(tid)), std::move(name));
}

/// Assignment of final values to observables.
using Outcome = std::map<Observable, int>;

/// Renders `{P1:r0=0; y=2}`.
inline std::string outcome_str(const Outcome& o) {
  std::string s = "{";
  bool first = true;
  for (const auto& [obs, v] : o) {
    if (!first) s += "; ";
    first = false;
    s += obs.str() + "=" + std::to_string(v);
  }
  return s + "}";
}

/// Propositional formula over `observable = value` atoms; the body of an
/// `exists` clause.
struct FinalCondition {
  enum class Op { kAtom, kAnd, kOr, kNot };

  Op op = Op::kAtom;
  Observable observable;
  int value = 0;
  std::vector<FinalCondition> children;

  static FinalCondition atom(Observable o, int v) { return {Op::kAtom, std::move(o), v, {}}; }
  static FinalCondition all_of(std::vector<FinalCondition> c) {
    return {Op::kAnd, {}, 0, std::move(c)};
  }
  static FinalCondition any_of(std::vector<FinalCondition> c) {
    return {Op::kOr, {}, 0, std::move(c)};
  }
  static FinalCondition negate(FinalCondition c) {
    return {Op::kNot, {}, 0, {std::move(c)}};
  }

  bool eval(const Outcome& outcome) const {
    switch (op) {
      case Op::kAtom: {
        auto it = outcome.find(observable);
        return it != outcome.end() && it->second == value;
      }
      case Op::kAnd:
        return std::all_of(children.begin(), children.end(),
                           [&](const auto& c) { return c.eval(outcome); });
      case Op::kOr:
        return std::any_of(children.begin(), children.end(),
                           [&](const auto& c) { return c.eval(outcome); });
      case Op::kNot:
        return !children.front().eval(outcome);
    }
    return false;
  }

  void collect(std::set<Observable>& out) const {
    if (op == Op::kAtom) out.insert(observable);
    for (const auto& c : children) c.collect(out);
  }

  /// Observables mentioned, in canonical order.
  std::vector<Observable> observables() const {
    std::set<Observable> s;
    collect(s);
    return {s.begin(), s.end()};
  }

  template <class F>
  FinalCondition map_atoms(F&& f) const {
    FinalCondition out = *this;
    if (op == Op::kAtom) {
      out.observable = f(observable);
    } else {
      for (auto& c : out.children) c = c.map_atoms(f);
    }
    return out;
  }

  bool operator==(const FinalCondition&) const = default;
};

struct LitmusTest {
  std::string name;
  Dialect dialect = Dialect::kSource;
  std::vector<Location> locations;
  std::vector<Thread> threads;
  FinalCondition final;

  std::optional<std::size_t> location_index(std::string_view loc) const {
    for (std::size_t i = 0; i < locations.size(); ++i) {
      if (locations[i].name == loc) return i;
    }
    return std::nullopt;
  }

  std::vector<Observable> observables() const { return final.observables(); }

  bool operator==(const LitmusTest&) const = default;
};

/// Checks every structural invariant of a test. Throws ParseError (without a
/// source position) on the first violation. Parsers report positioned errors
/// themselves; this is for tests built programmatically.
inline void validate(const LitmusTest& t) {
  using K = ParseErrorKind;
  if (t.threads.empty() || t.threads.size() > static_cast<std::size_t>(kMaxThreads))
    throw ParseError(K::kBounds, "a test needs between 1 and 4 threads");
  if (t.locations.size() > static_cast<std::size_t>(kMaxLocations))
    throw ParseError(K::kBounds, "at most 4 locations are supported");
  std::set<std::string> names;
  for (const auto& l : t.locations) {
    if (!names.insert(l.name).second)
      throw ParseError(K::kSyntax, "location '" + l.name + "' declared twice");
    if (l.init < 0 || l.init > kMaxValue)
      throw ParseError(K::kBounds, "initial value of '" + l.name + "' out of range 0..7");
  }
  auto check_loc = [&](const std::string& loc) {
    if (!t.location_index(loc))
      throw ParseError(K::kUndeclaredLocation, "undeclared location '" + loc + "'");
  };
  auto check_value = [&](int v) {
    if (v < 0 || v > kMaxValue) throw ParseError(K::kBounds, "value out of range 0..7");
  };
  for (std::size_t i = 0; i < t.threads.size(); ++i) {
    const Thread& th = t.threads[i];
    if (th.id != static_cast<int>(i))
      throw ParseError(K::kSyntax, "thread ids must be consecutive from 0");
    if (th.is_source() != (t.dialect == Dialect::kSource))
      throw ParseError(K::kSyntax, "thread body does not match the test dialect");
    if (th.is_source()) {
      if (th.source().size() > static_cast<std::size_t>(kMaxSourceStatements))
        throw ParseError(K::kBounds, "at most 8 statements per thread");
      std::set<std::string> defined;
      for (const auto& s : th.source()) {
        using SK = SourceStmt::Kind;
        if (s.kind == SK::kFence) {
          if (!s.location.empty() || s.dest)
            throw ParseError(K::kSyntax, "fence takes no location or register");
          if (!valid_for_fence(s.order))
            throw ParseError(K::kInvalidOrder, "relaxed fence is not allowed");
          continue;
        }
        check_loc(s.location);
        if (s.kind == SK::kLoad && !s.dest)
          throw ParseError(K::kSyntax, "load needs a destination register");
        if (s.kind == SK::kStore && s.dest)
          throw ParseError(K::kSyntax, "store has no destination register");
        if (s.kind == SK::kLoad && !valid_for_load(s.order))
          throw ParseError(K::kInvalidOrder, "invalid memory order for a load");
        if (s.kind == SK::kStore && !valid_for_store(s.order))
          throw ParseError(K::kInvalidOrder, "invalid memory order for a store");
        if (s.kind != SK::kLoad) check_value(s.value);
        if (s.dest && !defined.insert(*s.dest).second)
          throw ParseError(K::kSyntax, "register '" + *s.dest + "' defined twice");
      }
    } else {
      if (th.instrs().size() > static_cast<std::size_t>(kMaxAsmInstructions))
        throw ParseError(K::kBounds, "at most 16 instructions per thread");
      for (const auto& [reg, loc] : th.address_bindings) check_loc(loc);
      std::set<int> defined;
      auto use = [&](int reg) {
        if (reg != kZeroRegister && !defined.count(reg))
          throw ParseError(K::kUndefinedRegister,
                           "register " + data_register_name(reg) + " read before definition");
      };
      auto def = [&](int reg) {
        if (th.address_bindings.count(reg))
          throw ParseError(K::kSyntax, "instruction overwrites address register " +
                                           address_register_name(reg));
        defined.insert(reg);
      };
      for (const auto& in : th.instrs()) {
        if (in.op == Mnemonic::kMov) {
          if (in.dst == kZeroRegister)
            throw ParseError(K::kZeroRegisterWrite, "MOV to the zero register");
          check_value(in.imm);
          def(in.dst);
          continue;
        }
        if (in.op == Mnemonic::kDmb) continue;
        auto it = th.address_bindings.find(in.addr);
        if (it == th.address_bindings.end())
          throw ParseError(K::kUnboundAddress,
                           address_register_name(in.addr) + " is not bound to a location");
        if (it->second != in.location)
          throw ParseError(K::kSyntax, "instruction location disagrees with its binding");
        if (in.src >= 0) use(in.src);
        if (in.dst >= 0 && in.dst != kZeroRegister) def(in.dst);
      }
    }
  }
  for (const auto& obs : t.observables()) {
    if (obs.is_register()) {
      if (obs.thread < 0 || obs.thread >= static_cast<int>(t.threads.size()) ||
          !t.threads[obs.thread].registers().count(obs.name))
        throw ParseError(K::kUndefinedRegister,
                         "observable " + obs.str() + " is not written by its thread");
    } else {
      check_loc(obs.name);
    }
  }
  auto check_atoms = [&](const auto& self, const FinalCondition& c) -> void {
    if (c.op == FinalCondition::Op::kAtom) check_value(c.value);
    for (const auto& ch : c.children) self(self, ch);
  };
  check_atoms(check_atoms, t.final);
}

}  // namespace wmct

#endif  // WMCT_LITMUS_HPP_
