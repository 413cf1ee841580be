#ifndef WMCT_RENDER_HPP_
#define WMCT_RENDER_HPP_

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "litmus.hpp"

namespace wmct {

/// Renders a condition body. Compound children are always parenthesized so
/// that re-parsing yields the same tree.
inline std::string render_condition(const FinalCondition& c) {
  using Op = FinalCondition::Op;
  auto child = [](const FinalCondition& ch) {
    const std::string s = render_condition(ch);
    return ch.op == Op::kAnd || ch.op == Op::kOr ? "(" + s + ")" : s;
  };
  switch (c.op) {
    case Op::kAtom:
      return c.observable.str() + "=" + std::to_string(c.value);
    case Op::kNot: {
      const auto& inner = c.children.front();
      return "~" + (inner.op == Op::kAtom || inner.op == Op::kNot ? render_condition(inner)
                                                                  : child(inner));
    }
    case Op::kAnd:
    case Op::kOr: {
      std::string s;
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        if (i) s += c.op == Op::kAnd ? " /\\ " : " \\/ ";
        s += child(c.children[i]);
      }
      return s;
    }
  }
  return {};
}

inline std::string render_exists(const FinalCondition& c) {
  return "exists (" + render_condition(c) + ")";
}

inline std::string render_source_stmt(const SourceStmt& s) {
  using K = SourceStmt::Kind;
  std::string prefix = s.dest ? "int " + *s.dest + " = " : "";
  switch (s.kind) {
    case K::kLoad:
      return prefix + "atomic_load_explicit(" + s.location + ", " +
             std::string(c_spelling(s.order)) + ");";
    case K::kStore:
      return "atomic_store_explicit(" + s.location + ", " + std::to_string(s.value) + ", " +
             std::string(c_spelling(s.order)) + ");";
    case K::kExchange:
      return prefix + "atomic_exchange_explicit(" + s.location + ", " + std::to_string(s.value) +
             ", " + std::string(c_spelling(s.order)) + ");";
    case K::kFence:
      return "atomic_thread_fence(" + std::string(c_spelling(s.order)) + ");";
  }
  return {};
}

inline std::string render_instr(const AsmInstr& in) {
  const std::string m(mnemonic_name(in.op));
  const std::string addr = "[" + address_register_name(in.addr) + "]";
  switch (in.op) {
    case Mnemonic::kMov:
      return m + " " + data_register_name(in.dst) + ", #" + std::to_string(in.imm);
    case Mnemonic::kLdr:
    case Mnemonic::kLdar:
      return m + " " + data_register_name(in.dst) + ", " + addr;
    case Mnemonic::kStr:
    case Mnemonic::kStlr:
      return m + " " + data_register_name(in.src) + ", " + addr;
    case Mnemonic::kDmb:
      return m + " " + std::string(barrier_option(in.domain));
    default:
      return m + " " + data_register_name(in.src) + ", " + data_register_name(in.dst) + ", " +
             addr;
  }
}

namespace detail {

inline std::string render_source(const LitmusTest& t) {
  std::ostringstream os;
  os << "C " << t.name << "\n\n{";
  for (const auto& l : t.locations) os << " " << l.name << " = " << l.init << ";";
  os << " }\n\n";
  std::string params;
  for (std::size_t i = 0; i < t.locations.size(); ++i) {
    if (i) params += ", ";
    params += "atomic_int* " + t.locations[i].name;
  }
  for (const auto& th : t.threads) {
    os << "P" << th.id << " (" << params << ") {\n";
    for (const auto& s : th.source()) os << "  " << render_source_stmt(s) << "\n";
    os << "}\n\n";
  }
  os << render_exists(t.final) << "\n";
  return os.str();
}

inline std::string render_asm(const LitmusTest& t) {
  std::ostringstream os;
  os << "AArch64 " << t.name << "\n{\n";
  if (!t.locations.empty()) {
    for (std::size_t i = 0; i < t.locations.size(); ++i) {
      os << (i ? " " : "") << t.locations[i].name << "=" << t.locations[i].init << ";";
    }
    os << "\n";
  }
  for (const auto& th : t.threads) {
    if (th.address_bindings.empty()) continue;
    bool first = true;
    for (const auto& [reg, loc] : th.address_bindings) {
      os << (first ? "" : " ") << th.id << ":" << address_register_name(reg) << "=" << loc << ";";
      first = false;
    }
    os << "\n";
  }
  os << "}\n";

  std::size_t rows = 0;
  for (const auto& th : t.threads) rows = std::max(rows, th.instrs().size());
  std::vector<std::vector<std::string>> cells(t.threads.size());
  std::vector<std::size_t> width(t.threads.size(), 0);
  for (std::size_t c = 0; c < t.threads.size(); ++c) {
    cells[c].push_back("P" + std::to_string(t.threads[c].id));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& ins = t.threads[c].instrs();
      cells[c].push_back(r < ins.size() ? render_instr(ins[r]) : "");
    }
    for (const auto& s : cells[c]) width[c] = std::max(width[c], s.size());
  }
  for (std::size_t r = 0; r <= rows; ++r) {
    std::string line;
    for (std::size_t c = 0; c < t.threads.size(); ++c) {
      if (c) line += " |";
      std::string cell = " " + cells[c][r];
      cell.resize(width[c] + 1, ' ');
      line += cell;
    }
    os << line << " ;\n";
  }
  os << render_exists(t.final) << "\n";
  return os.str();
}

}  // namespace detail

/// Canonical text of a test in its own dialect.
inline std::string render_litmus(const LitmusTest& t) {
  return t.dialect == Dialect::kSource ? detail::render_source(t) : detail::render_asm(t);
}

}  // namespace wmct

#endif  // WMCT_RENDER_HPP_
