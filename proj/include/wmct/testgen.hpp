#ifndef WMCT_TESTGEN_HPP_
#define WMCT_TESTGEN_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "litmus.hpp"

namespace wmct {

/// Message-passing variants. P0 always writes data x then flag y; P1
/// touches the flag and then reads x.
///
///   kHistoric  rF = xchg(y); r0 = load(x)       exists (rF=1 /\ r0=0)
///   kDiscard   xchg(y) (result dropped); r0 = load(x)
///                                               exists (r0=0 /\ y=2)
///   kObserve   rF = xchg(y); r0 = load(x)       exists (r0=0 /\ y=2 /\ rF=1)
///
/// An optional fence sits between the flag access and the data load.
enum class Variant { kHistoric, kDiscard, kObserve };

/// How P1 accesses the flag. A plain load only makes sense for kHistoric.
enum class FlagAccess { kExchange, kLoad };

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kHistoric: return "historic";
    case Variant::kDiscard: return "discard";
    case Variant::kObserve: return "observe";
  }
  return "";
}

inline std::optional<Variant> variant_from_name(std::string_view s) {
  for (auto v : {Variant::kHistoric, Variant::kDiscard, Variant::kObserve}) {
    if (variant_name(v) == s) return v;
  }
  return std::nullopt;
}

inline constexpr int kFlagValue = 1;      // P0's flag store
inline constexpr int kExchangeValue = 2;  // P1's exchange

struct VariantTag {
  Variant variant = Variant::kDiscard;
  FlagAccess flag_access = FlagAccess::kExchange;
  MemoryOrder data_store = MemoryOrder::kRelaxed;
  MemoryOrder flag_store = MemoryOrder::kRelease;
  MemoryOrder flag_op = MemoryOrder::kRelease;
  std::optional<MemoryOrder> fence = MemoryOrder::kAcquire;
  MemoryOrder data_load = MemoryOrder::kRelaxed;

  /// e.g. `mp-discard-rlx-rel-xchgrel-fenceacq-rlx`
  std::string file_stem() const {
    std::string s = "mp-" + std::string(variant_name(variant));
    s += "-" + std::string(short_name(data_store));
    s += "-" + std::string(short_name(flag_store));
    s += (flag_access == FlagAccess::kExchange ? "-xchg" : "-ld") + std::string(short_name(flag_op));
    s += fence ? "-fence" + std::string(short_name(*fence)) : "-nofence";
    s += "-" + std::string(short_name(data_load));
    return s;
  }

  bool operator==(const VariantTag&) const = default;
};

struct GenParams {
  std::vector<Variant> variants{Variant::kHistoric, Variant::kDiscard, Variant::kObserve};
  FlagAccess flag_access = FlagAccess::kExchange;
  std::vector<MemoryOrder> data_store{MemoryOrder::kRelaxed, MemoryOrder::kRelease,
                                      MemoryOrder::kSeqCst};
  std::vector<MemoryOrder> flag_store{MemoryOrder::kRelaxed, MemoryOrder::kRelease,
                                      MemoryOrder::kSeqCst};
  std::vector<MemoryOrder> flag_op{MemoryOrder::kRelaxed, MemoryOrder::kAcquire,
                                   MemoryOrder::kRelease, MemoryOrder::kAcqRel,
                                   MemoryOrder::kSeqCst};
  std::vector<std::optional<MemoryOrder>> fence{std::nullopt, MemoryOrder::kAcquire,
                                                MemoryOrder::kRelease, MemoryOrder::kAcqRel,
                                                MemoryOrder::kSeqCst};
  std::vector<MemoryOrder> data_load{MemoryOrder::kRelaxed, MemoryOrder::kAcquire,
                                     MemoryOrder::kSeqCst};
  /// When set and smaller than the full product, a seeded sample of this
  /// many tests is returned (in canonical order).
  std::optional<std::size_t> limit;
  std::uint64_t seed = 0;
};

struct GeneratedTest {
  LitmusTest test;
  VariantTag tag;
};

/// The test a tag describes. `name` defaults to the tag's file stem.
inline LitmusTest build_mp_test(const VariantTag& tag, std::string name = {}) {
  LitmusTest t;
  t.name = name.empty() ? tag.file_stem() : std::move(name);
  t.dialect = Dialect::kSource;
  t.locations = {{"x", 0}, {"y", 0}};

  Thread p0;
  p0.id = 0;
  p0.body = std::vector<SourceStmt>{SourceStmt::store("x", 1, tag.data_store),
                                    SourceStmt::store("y", kFlagValue, tag.flag_store)};

  Thread p1;
  p1.id = 1;
  std::vector<SourceStmt> body;
  const bool keep_flag = tag.variant != Variant::kDiscard;
  if (tag.flag_access == FlagAccess::kLoad) {
    body.push_back(SourceStmt::load("y", "r1", tag.flag_op));
  } else {
    body.push_back(SourceStmt::exchange("y", kExchangeValue, tag.flag_op,
                                        keep_flag ? std::optional<std::string>("r1")
                                                  : std::nullopt));
  }
  if (tag.fence) body.push_back(SourceStmt::fence(*tag.fence));
  body.push_back(SourceStmt::load("x", "r0", tag.data_load));
  p1.body = std::move(body);
  t.threads = {std::move(p0), std::move(p1)};

  const auto r0 = FinalCondition::atom(Observable::reg(1, "r0"), 0);
  const auto r1 = FinalCondition::atom(Observable::reg(1, "r1"), kFlagValue);
  const auto y = FinalCondition::atom(Observable::memory("y"), kExchangeValue);
  switch (tag.variant) {
    case Variant::kHistoric: t.final = FinalCondition::all_of({r1, r0}); break;
    case Variant::kDiscard: t.final = FinalCondition::all_of({r0, y}); break;
    case Variant::kObserve: t.final = FinalCondition::all_of({r0, y, r1}); break;
  }
  return t;
}

namespace detail {

template <class T>
std::vector<T> dedupe(const std::vector<T>& in) {
  std::vector<T> out;
  for (const auto& x : in) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

}  // namespace detail

/// Every combination of the requested variants and orders, deterministic
/// and duplicate-free. Throws std::invalid_argument on malformed params.
inline std::vector<GeneratedTest> generate_mp_family(const GenParams& p) {
  const auto variants = detail::dedupe(p.variants);
  const auto data_store = detail::dedupe(p.data_store);
  const auto flag_store = detail::dedupe(p.flag_store);
  const auto flag_op = detail::dedupe(p.flag_op);
  const auto fence = detail::dedupe(p.fence);
  const auto data_load = detail::dedupe(p.data_load);

  if (variants.empty()) throw std::invalid_argument("empty variant set");
  if (data_store.empty() || flag_store.empty() || flag_op.empty() || fence.empty() ||
      data_load.empty())
    throw std::invalid_argument("every order choice set needs at least one entry");
  if (p.flag_access == FlagAccess::kLoad &&
      std::any_of(variants.begin(), variants.end(), [](Variant v) { return v != Variant::kHistoric; }))
    throw std::invalid_argument("discard and observe variants need an exchange on the flag");
  for (auto o : data_store) {
    if (!valid_for_store(o)) throw std::invalid_argument("invalid data store order");
  }
  for (auto o : flag_store) {
    if (!valid_for_store(o)) throw std::invalid_argument("invalid flag store order");
  }
  for (auto o : data_load) {
    if (!valid_for_load(o)) throw std::invalid_argument("invalid data load order");
  }
  if (p.flag_access == FlagAccess::kLoad) {
    for (auto o : flag_op) {
      if (!valid_for_load(o)) throw std::invalid_argument("invalid flag load order");
    }
  }
  for (const auto& f : fence) {
    if (f && !valid_for_fence(*f)) throw std::invalid_argument("relaxed fence is not allowed");
  }

  std::vector<GeneratedTest> out;
  for (auto v : variants) {
    for (auto ds : data_store) {
      for (auto fs : flag_store) {
        for (auto fo : flag_op) {
          for (const auto& fe : fence) {
            for (auto dl : data_load) {
              VariantTag tag{v, p.flag_access, ds, fs, fo, fe, dl};
              out.push_back({build_mp_test(tag), tag});
            }
          }
        }
      }
    }
  }

  if (p.limit && *p.limit < out.size()) {
    // Partial Fisher-Yates over indices. mt19937_64 output is fixed by the
    // standard; the reduction to a range is done here so the sample does not
    // depend on the standard library's distributions.
    std::mt19937_64 rng(p.seed);
    std::vector<std::size_t> idx(out.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < *p.limit; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(*p.limit);
    std::sort(idx.begin(), idx.end());
    std::vector<GeneratedTest> sample;
    for (auto i : idx) sample.push_back(std::move(out[i]));
    out = std::move(sample);
  }
  return out;
}

}  // namespace wmct

#endif  // WMCT_TESTGEN_HPP_
