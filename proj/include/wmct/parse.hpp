#ifndef WMCT_PARSE_HPP_
#define WMCT_PARSE_HPP_

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "litmus.hpp"

namespace wmct {
namespace detail {

struct Token {
  enum class Kind { kIdent, kInt, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  int line = 0;
  int column = 0;
};

/// Splits litmus text into identifiers, decimal integers and punctuation.
/// `/\` and `\/` are single tokens. `(* ... *)` and `//` comments are skipped.
inline std::vector<Token> tokenize(std::string_view text, int first_line = 1) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "(*") {
      const int l = line, cc = col;
      const auto end = text.find("*)", i + 2);
      if (end == std::string_view::npos)
        throw ParseError(ParseErrorKind::kSyntax, "unterminated comment", l, cc);
      advance(end + 2 - i);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.kind = Token::Kind::kIdent;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j - i > 6) throw ParseError(ParseErrorKind::kBounds, "integer too large", line, col);
      t.kind = Token::Kind::kInt;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (text.substr(i, 2) == "/\\" || text.substr(i, 2) == "\\/") {
      t.kind = Token::Kind::kPunct;
      t.text = std::string(text.substr(i, 2));
      advance(2);
    } else if (std::string_view("{}()[];,*=:|#~&").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::kPunct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(ParseErrorKind::kSyntax,
                       std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }

  bool is(std::string_view punct_or_ident) const { return peek().text == punct_or_ident; }

  bool accept(std::string_view text) {
    if (peek().kind != Token::Kind::kEnd && peek().text == text) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect(std::string_view text) {
    if (peek().kind == Token::Kind::kEnd || peek().text != text)
      fail("expected '" + std::string(text) + "'");
    return next();
  }

  const Token& expect_ident() {
    if (peek().kind != Token::Kind::kIdent) fail("expected an identifier");
    return next();
  }

  int expect_int() {
    if (peek().kind != Token::Kind::kInt) fail("expected an integer");
    return std::stoi(next().text);
  }

  [[noreturn]] void fail(const std::string& msg,
                         ParseErrorKind kind = ParseErrorKind::kSyntax) const {
    const Token& t = peek();
    const std::string found = t.kind == Token::Kind::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(kind, msg + ", found " + found, t.line, t.column);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

[[noreturn]] inline void fail_at(const Token& t, ParseErrorKind kind, const std::string& msg) {
  throw ParseError(kind, msg, t.line, t.column);
}

/// First line `<keyword> <name>`; returns the name and the remaining text.
inline std::pair<std::string, std::string_view> split_header(std::string_view text,
                                                             std::string_view keyword) {
  std::size_t start = 0;
  int line = 1;
  // Skip leading blank lines.
  while (true) {
    const auto nl = text.find('\n', start);
    std::string_view l = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    if (l.find_first_not_of(" \t\r") != std::string_view::npos) break;
    if (nl == std::string_view::npos)
      throw ParseError(ParseErrorKind::kSyntax, "empty litmus text", 1, 1);
    start = nl + 1;
    ++line;
  }
  const auto nl = text.find('\n', start);
  std::string_view header = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
  const auto b = header.find_first_not_of(" \t");
  header = header.substr(b);
  while (!header.empty() && (header.back() == '\r' || header.back() == ' ' || header.back() == '\t'))
    header.remove_suffix(1);
  if (header.substr(0, keyword.size()) != keyword ||
      (header.size() > keyword.size() && header[keyword.size()] != ' ' &&
       header[keyword.size()] != '\t'))
    throw ParseError(ParseErrorKind::kSyntax,
                     "expected header '" + std::string(keyword) + " <name>'", line,
                     static_cast<int>(b) + 1);
  std::string_view name = header.substr(keyword.size());
  const auto nb = name.find_first_not_of(" \t");
  if (nb == std::string_view::npos)
    throw ParseError(ParseErrorKind::kSyntax, "test name missing", line,
                     static_cast<int>(header.size()) + 1);
  name = name.substr(nb);
  if (name.find_first_of(" \t") != std::string_view::npos)
    throw ParseError(ParseErrorKind::kSyntax, "test name may not contain spaces", line, 1);
  std::string_view rest = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  return {std::string(name), rest};
}

inline int line_of_rest(std::string_view full, std::string_view rest) {
  if (rest.empty()) return 1;
  const auto offset = static_cast<std::size_t>(rest.data() - full.data());
  return 1 + static_cast<int>(std::count(full.begin(), full.begin() + static_cast<long>(offset), '\n'));
}

inline FinalCondition parse_condition(TokenStream& ts, Dialect dialect);

inline Observable parse_cond_observable(TokenStream& ts, Dialect dialect) {
  const Token& first = ts.peek();
  if (first.kind == Token::Kind::kInt ||
      (first.kind == Token::Kind::kIdent && first.text.size() > 1 && first.text[0] == 'P' &&
       std::all_of(first.text.begin() + 1, first.text.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
       ts.peek(1).text == ":")) {
    std::string tid = ts.next().text;
    ts.expect(":");
    const Token& reg = ts.expect_ident();
    auto obs = parse_observable(tid + ":" + reg.text);
    if (!obs) fail_at(reg, ParseErrorKind::kSyntax, "malformed observable");
    const bool source_reg = obs->name[0] == 'r';
    if (source_reg != (dialect == Dialect::kSource))
      fail_at(reg, ParseErrorKind::kSyntax,
              "register '" + reg.text + "' does not belong to this dialect");
    if (!source_reg && obs->name[0] != 'W')
      fail_at(reg, ParseErrorKind::kSyntax, "malformed register observable");
    return *obs;
  }
  const Token& loc = ts.expect_ident();
  return Observable::memory(loc.text);
}

inline FinalCondition parse_unary(TokenStream& ts, Dialect dialect) {
  if (ts.accept("~")) return FinalCondition::negate(parse_unary(ts, dialect));
  if (ts.accept("(")) {
    FinalCondition inner = parse_condition(ts, dialect);
    ts.expect(")");
    return inner;
  }
  Observable obs = parse_cond_observable(ts, dialect);
  ts.expect("=");
  const int v = ts.expect_int();
  return FinalCondition::atom(std::move(obs), v);
}

inline FinalCondition parse_conjunction(TokenStream& ts, Dialect dialect) {
  std::vector<FinalCondition> parts;
  parts.push_back(parse_unary(ts, dialect));
  while (ts.accept("/\\")) parts.push_back(parse_unary(ts, dialect));
  if (parts.size() == 1) return std::move(parts.front());
  return FinalCondition::all_of(std::move(parts));
}

inline FinalCondition parse_condition(TokenStream& ts, Dialect dialect) {
  std::vector<FinalCondition> parts;
  parts.push_back(parse_conjunction(ts, dialect));
  while (ts.accept("\\/")) parts.push_back(parse_conjunction(ts, dialect));
  if (parts.size() == 1) return std::move(parts.front());
  return FinalCondition::any_of(std::move(parts));
}

inline FinalCondition parse_exists(TokenStream& ts, Dialect dialect) {
  if (ts.peek().text == "forall" || ts.peek().text == "locations" || ts.peek().text == "filter")
    ts.fail("only an 'exists' final condition is supported", ParseErrorKind::kUnsupported);
  ts.expect("exists");
  FinalCondition c = parse_condition(ts, dialect);
  if (!ts.at_end()) ts.fail("trailing input after the final condition");
  return c;
}

/// Positions of each atom's observable, for semantic error reporting.
inline void check_condition(const LitmusTest& t, const Token& at) {
  try {
    for (const auto& obs : t.observables()) {
      if (obs.is_register()) {
        if (obs.thread < 0 || obs.thread >= static_cast<int>(t.threads.size()) ||
            !t.threads[obs.thread].registers().count(obs.name))
          throw ParseError(ParseErrorKind::kUndefinedRegister,
                           "observable " + obs.str() + " is not written by its thread");
      } else if (!t.location_index(obs.name)) {
        throw ParseError(ParseErrorKind::kUndeclaredLocation,
                         "undeclared location '" + obs.name + "' in final condition");
      }
    }
    auto check = [&](const auto& self, const FinalCondition& c) -> void {
      if (c.op == FinalCondition::Op::kAtom && (c.value < 0 || c.value > kMaxValue))
        throw ParseError(ParseErrorKind::kBounds, "value out of range 0..7");
      for (const auto& ch : c.children) self(self, ch);
    };
    check(check, t.final);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.what(), at.line, at.column);
  }
}

inline int parse_value(TokenStream& ts) {
  const Token& t = ts.peek();
  const int v = ts.expect_int();
  if (v > kMaxValue) fail_at(t, ParseErrorKind::kBounds, "value out of range 0..7");
  return v;
}

inline MemoryOrder parse_order(TokenStream& ts) {
  const Token& t = ts.expect_ident();
  for (auto o : kAllOrders) {
    if (t.text == c_spelling(o)) return o;
  }
  if (t.text == "memory_order_consume")
    fail_at(t, ParseErrorKind::kUnsupported, "memory_order_consume is not supported");
  fail_at(t, ParseErrorKind::kSyntax, "unknown memory order '" + t.text + "'");
}

inline bool is_source_register(std::string_view s) {
  return s.size() > 1 && s[0] == 'r' &&
         std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline int parse_thread_header(TokenStream& ts, std::size_t expected) {
  const Token& t = ts.expect_ident();
  const bool ok = t.text.size() > 1 && t.text[0] == 'P' &&
                  std::all_of(t.text.begin() + 1, t.text.end(),
                              [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (!ok) fail_at(t, ParseErrorKind::kSyntax, "expected a thread header 'P<n>'");
  const int id = std::stoi(t.text.substr(1));
  if (id != static_cast<int>(expected))
    fail_at(t, ParseErrorKind::kSyntax, "thread ids must be consecutive from 0");
  if (id >= kMaxThreads) fail_at(t, ParseErrorKind::kBounds, "at most 4 threads");
  return id;
}

inline const std::set<std::string>& unsupported_c_keywords() {
  static const std::set<std::string> kw = {"if", "else", "while", "for", "do", "goto",
                                           "switch", "return", "break", "continue"};
  return kw;
}

inline SourceStmt parse_source_statement(TokenStream& ts, const std::set<std::string>& params,
                                         std::set<std::string>& defined) {
  const Token& head = ts.peek();
  if (head.kind != Token::Kind::kIdent) ts.fail("expected a statement");
  if (unsupported_c_keywords().count(head.text))
    fail_at(head, ParseErrorKind::kUnsupported, "control flow ('" + head.text + "') is not supported");

  std::optional<Token> dest;
  if (ts.accept("int")) {
    dest = ts.expect_ident();
    if (!is_source_register(dest->text))
      fail_at(*dest, ParseErrorKind::kSyntax, "register names have the form r<k>");
    if (defined.count(dest->text))
      fail_at(*dest, ParseErrorKind::kSyntax, "register '" + dest->text + "' defined twice");
    ts.expect("=");
  }
  const Token& fn = ts.expect_ident();
  auto location = [&]() {
    const Token& l = ts.expect_ident();
    if (!params.count(l.text))
      fail_at(l, ParseErrorKind::kUndeclaredLocation, "undeclared location '" + l.text + "'");
    return l.text;
  };
  SourceStmt s;
  ts.expect("(");
  if (fn.text == "atomic_store_explicit") {
    if (dest) fail_at(fn, ParseErrorKind::kSyntax, "a store has no result");
    std::string loc = location();
    ts.expect(",");
    const int v = parse_value(ts);
    ts.expect(",");
    const Token& ot = ts.peek();
    const MemoryOrder o = parse_order(ts);
    if (!valid_for_store(o))
      fail_at(ot, ParseErrorKind::kInvalidOrder, "invalid memory order for a store");
    s = SourceStmt::store(std::move(loc), v, o);
  } else if (fn.text == "atomic_load_explicit") {
    if (!dest) fail_at(fn, ParseErrorKind::kSyntax, "a load needs a destination register");
    std::string loc = location();
    ts.expect(",");
    const Token& ot = ts.peek();
    const MemoryOrder o = parse_order(ts);
    if (!valid_for_load(o))
      fail_at(ot, ParseErrorKind::kInvalidOrder, "invalid memory order for a load");
    s = SourceStmt::load(std::move(loc), dest->text, o);
  } else if (fn.text == "atomic_exchange_explicit") {
    std::string loc = location();
    ts.expect(",");
    const int v = parse_value(ts);
    ts.expect(",");
    const MemoryOrder o = parse_order(ts);
    s = SourceStmt::exchange(std::move(loc), v, o,
                             dest ? std::optional<std::string>(dest->text) : std::nullopt);
  } else if (fn.text == "atomic_thread_fence") {
    if (dest) fail_at(fn, ParseErrorKind::kSyntax, "a fence has no result");
    const Token& ot = ts.peek();
    const MemoryOrder o = parse_order(ts);
    if (!valid_for_fence(o))
      fail_at(ot, ParseErrorKind::kInvalidOrder, "relaxed fence is not allowed");
    s = SourceStmt::fence(o);
  } else {
    fail_at(fn, ParseErrorKind::kUnsupported, "unsupported construct '" + fn.text + "'");
  }
  ts.expect(")");
  ts.expect(";");
  if (dest) defined.insert(dest->text);
  return s;
}

//--------------------------------------------------------------------------
// Assembly helpers

/// Parses W<n>/X<n>/WZR/XZR. Returns -1 if `text` is not a register name.
inline int register_number(std::string_view text) {
  if (text == "WZR" || text == "XZR") return kZeroRegister;
  if (text.size() < 2 || (text[0] != 'W' && text[0] != 'X')) return -1;
  const auto digits = text.substr(1);
  if (digits.size() > 2 ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return -1;
  const int n = std::stoi(std::string(digits));
  return n <= kMaxRegister ? n : -1;
}

inline int expect_register(TokenStream& ts) {
  const Token& t = ts.expect_ident();
  const int r = register_number(t.text);
  if (r < 0) fail_at(t, ParseErrorKind::kSyntax, "expected a register, found '" + t.text + "'");
  return r;
}

}  // namespace detail

/// Parses the C-like litmus dialect:
///
///     C <name>
///     { x = 0; y = 0; }
///     P0 (atomic_int* x, atomic_int* y) { ... }
///     exists (P1:r0=0 /\ y=2)
inline LitmusTest parse_source_litmus(std::string_view text) {
  using namespace detail;
  auto [name, rest] = split_header(text, "C");
  TokenStream ts(tokenize(rest, line_of_rest(text, rest)));

  LitmusTest t;
  t.name = std::move(name);
  t.dialect = Dialect::kSource;

  ts.expect("{");
  while (!ts.accept("}")) {
    const Token& loc = ts.expect_ident();
    if (t.location_index(loc.text))
      fail_at(loc, ParseErrorKind::kSyntax, "location '" + loc.text + "' declared twice");
    ts.expect("=");
    const int v = parse_value(ts);
    if (!ts.is("}")) ts.expect(";");
    else ts.accept(";");
    if (t.locations.size() == static_cast<std::size_t>(kMaxLocations))
      fail_at(loc, ParseErrorKind::kBounds, "at most 4 locations are supported");
    t.locations.push_back({loc.text, v});
  }

  while (ts.peek().kind == Token::Kind::kIdent && ts.peek().text != "exists" &&
         ts.peek().text != "forall" && ts.peek().text != "locations") {
    Thread th;
    th.id = parse_thread_header(ts, t.threads.size());
    th.body = std::vector<SourceStmt>{};
    std::set<std::string> params;
    ts.expect("(");
    if (!ts.is(")")) {
      do {
        const Token& ty = ts.expect_ident();
        if (ty.text != "atomic_int")
          fail_at(ty, ParseErrorKind::kUnsupported, "only atomic_int* parameters are supported");
        ts.expect("*");
        const Token& p = ts.expect_ident();
        if (!t.location_index(p.text))
          fail_at(p, ParseErrorKind::kUndeclaredLocation, "undeclared location '" + p.text + "'");
        params.insert(p.text);
      } while (ts.accept(","));
    }
    ts.expect(")");
    ts.expect("{");
    std::set<std::string> defined;
    while (!ts.accept("}")) {
      const Token& at = ts.peek();
      if (ts.at_end()) ts.fail("unterminated thread body");
      th.source().push_back(parse_source_statement(ts, params, defined));
      if (th.source().size() > static_cast<std::size_t>(kMaxSourceStatements))
        fail_at(at, ParseErrorKind::kBounds, "at most 8 statements per thread");
    }
    t.threads.push_back(std::move(th));
  }
  if (t.threads.empty()) ts.fail("expected at least one thread");

  const Token at = ts.peek();
  t.final = parse_exists(ts, Dialect::kSource);
  check_condition(t, at);
  return t;
}

/// Parses the herd-style AArch64 dialect: an init block binding address
/// registers (`0:X1=x;`) and locations (`x=0;`), then one column per thread
/// separated by `|`, each row terminated by `;`.
inline LitmusTest parse_asm_litmus(std::string_view text) {
  using namespace detail;
  auto [name, rest] = split_header(text, "AArch64");
  std::vector<Token> tokens = tokenize(rest, line_of_rest(text, rest));
  TokenStream ts(tokens);

  LitmusTest t;
  t.name = std::move(name);
  t.dialect = Dialect::kAsm;

  struct Binding {
    int thread;
    int reg;
    std::string loc;
    Token at;
  };
  std::vector<Binding> bindings;
  auto declare = [&](const Token& at, const std::string& loc, int v, bool explicit_init) {
    auto idx = t.location_index(loc);
    if (idx) {
      if (explicit_init) t.locations[*idx].init = v;
      return;
    }
    if (t.locations.size() == static_cast<std::size_t>(kMaxLocations))
      fail_at(at, ParseErrorKind::kBounds, "at most 4 locations are supported");
    t.locations.push_back({loc, v});
  };

  ts.expect("{");
  std::set<std::string> explicitly_initialized;
  while (!ts.accept("}")) {
    const Token first = ts.peek();
    if (first.kind == Token::Kind::kInt) {
      const int tid = ts.expect_int();
      ts.expect(":");
      const Token& rt = ts.expect_ident();
      const int reg = register_number(rt.text);
      if (reg < 0 || reg == kZeroRegister || rt.text[0] != 'X')
        fail_at(rt, ParseErrorKind::kUnsupported,
                "only address bindings 'n:Xm=loc' are supported in the init block");
      ts.expect("=");
      const Token& lt = ts.peek();
      if (lt.kind != Token::Kind::kIdent)
        fail_at(lt, ParseErrorKind::kUnsupported, "register initial values are not supported");
      ts.next();
      bindings.push_back({tid, reg, lt.text, first});
      declare(lt, lt.text, 0, false);
    } else {
      const Token& lt = ts.expect_ident();
      ts.expect("=");
      const int v = parse_value(ts);
      if (!explicitly_initialized.insert(lt.text).second)
        fail_at(lt, ParseErrorKind::kSyntax, "location '" + lt.text + "' initialized twice");
      declare(lt, lt.text, v, true);
    }
    if (!ts.is("}")) ts.expect(";");
    else ts.accept(";");
  }

  // Column header: P0 | P1 | ... ;
  const int header_line = ts.peek().line;
  do {
    Thread th;
    th.id = parse_thread_header(ts, t.threads.size());
    th.body = std::vector<AsmInstr>{};
    t.threads.push_back(std::move(th));
  } while (ts.accept("|"));
  ts.expect(";");
  if (ts.peek().line == header_line && !ts.at_end())
    ts.fail("expected end of line after the thread header");

  for (const auto& b : bindings) {
    if (b.thread < 0 || b.thread >= static_cast<int>(t.threads.size()))
      fail_at(b.at, ParseErrorKind::kSyntax, "binding for unknown thread " + std::to_string(b.thread));
    auto& map = t.threads[b.thread].address_bindings;
    if (map.count(b.reg))
      fail_at(b.at, ParseErrorKind::kSyntax, "register bound twice");
    map[b.reg] = b.loc;
  }

  std::vector<std::set<int>> defined(t.threads.size());
  auto parse_instr = [&](std::size_t tid) {
    Thread& th = t.threads[tid];
    const Token& mt = ts.expect_ident();
    static const std::pair<std::string_view, Mnemonic> kMnemonics[] = {
        {"MOV", Mnemonic::kMov},   {"LDR", Mnemonic::kLdr},   {"LDAR", Mnemonic::kLdar},
        {"STR", Mnemonic::kStr},   {"STLR", Mnemonic::kStlr}, {"SWP", Mnemonic::kSwp},
        {"SWPA", Mnemonic::kSwpa}, {"SWPL", Mnemonic::kSwpl}, {"SWPAL", Mnemonic::kSwpal},
        {"DMB", Mnemonic::kDmb}};
    std::optional<Mnemonic> op;
    for (const auto& [n, m] : kMnemonics) {
      if (mt.text == n) op = m;
    }
    if (!op) fail_at(mt, ParseErrorKind::kUnknownMnemonic, "unknown mnemonic '" + mt.text + "'");

    auto use = [&](const Token& at, int reg) {
      if (reg != kZeroRegister && !defined[tid].count(reg))
        fail_at(at, ParseErrorKind::kUndefinedRegister,
                "register " + data_register_name(reg) + " read before definition");
    };
    auto def = [&](const Token& at, int reg) {
      if (reg == kZeroRegister) return;
      if (th.address_bindings.count(reg))
        fail_at(at, ParseErrorKind::kSyntax,
                "instruction overwrites address register " + address_register_name(reg));
      defined[tid].insert(reg);
    };
    auto address = [&]() {
      ts.expect("[");
      const Token& at = ts.peek();
      const int reg = expect_register(ts);
      ts.expect("]");
      auto it = th.address_bindings.find(reg);
      if (it == th.address_bindings.end())
        fail_at(at, ParseErrorKind::kUnboundAddress,
                address_register_name(reg) + " is not bound to a location");
      return std::pair<int, std::string>(reg, it->second);
    };

    AsmInstr in;
    switch (*op) {
      case Mnemonic::kMov: {
        const Token& at = ts.peek();
        const int dst = expect_register(ts);
        if (dst == kZeroRegister)
          fail_at(at, ParseErrorKind::kZeroRegisterWrite, "MOV to the zero register");
        ts.expect(",");
        ts.expect("#");
        const int imm = parse_value(ts);
        def(at, dst);
        in = AsmInstr::mov(dst, imm);
        break;
      }
      case Mnemonic::kLdr:
      case Mnemonic::kLdar: {
        const Token& at = ts.peek();
        const int dst = expect_register(ts);
        ts.expect(",");
        auto [addr, loc] = address();
        def(at, dst);
        in = AsmInstr::load(*op, dst, addr, loc);
        break;
      }
      case Mnemonic::kStr:
      case Mnemonic::kStlr: {
        const Token& at = ts.peek();
        const int src = expect_register(ts);
        use(at, src);
        ts.expect(",");
        auto [addr, loc] = address();
        in = AsmInstr::store(*op, src, addr, loc);
        break;
      }
      case Mnemonic::kDmb: {
        const Token& dt = ts.expect_ident();
        if (dt.text == "ISH" || dt.text == "SY") in = AsmInstr::dmb(BarrierDomain::kSy);
        else if (dt.text == "ISHLD" || dt.text == "LD") in = AsmInstr::dmb(BarrierDomain::kLd);
        else if (dt.text == "ISHST" || dt.text == "ST") in = AsmInstr::dmb(BarrierDomain::kSt);
        else fail_at(dt, ParseErrorKind::kUnsupported, "unsupported barrier option '" + dt.text + "'");
        break;
      }
      default: {  // SWP family
        const Token& st = ts.peek();
        const int src = expect_register(ts);
        use(st, src);
        ts.expect(",");
        const Token& dt = ts.peek();
        const int dst = expect_register(ts);
        ts.expect(",");
        auto [addr, loc] = address();
        def(dt, dst);
        in = AsmInstr::swp(*op, src, dst, addr, loc);
        break;
      }
    }
    if (th.instrs().size() == static_cast<std::size_t>(kMaxAsmInstructions))
      fail_at(mt, ParseErrorKind::kBounds, "at most 16 instructions per thread");
    th.instrs().push_back(std::move(in));
  };

  // Rows until `exists`.
  while (!ts.at_end() && !ts.is("exists") && !ts.is("forall") && !ts.is("locations")) {
    const int row_line = ts.peek().line;
    for (std::size_t col = 0; col < t.threads.size(); ++col) {
      if (!ts.is("|") && !ts.is(";")) parse_instr(col);
      if (col + 1 < t.threads.size()) {
        if (!ts.accept("|")) ts.fail("expected '|' between thread columns");
      }
    }
    ts.expect(";");
    if (ts.peek().line == row_line && !ts.at_end())
      ts.fail("expected end of line after ';'");
  }

  const Token at = ts.peek();
  t.final = parse_exists(ts, Dialect::kAsm);
  check_condition(t, at);
  return t;
}

/// Dispatches on the header keyword.
inline LitmusTest parse_litmus(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b != std::string_view::npos && text.substr(b, 8) == "AArch64 ") return parse_asm_litmus(text);
  if (b != std::string_view::npos && text.substr(b, 2) == "C ") return parse_source_litmus(text);
  throw ParseError(ParseErrorKind::kSyntax, "unknown litmus dialect (expected 'C' or 'AArch64' header)",
                   1, 1);
}

}  // namespace wmct

#endif  // WMCT_PARSE_HPP_
