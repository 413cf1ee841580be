#ifndef WMCT_RELATION_HPP_
#define WMCT_RELATION_HPP_

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace wmct {

/// Binary relation over events [0, n), stored as a dense bit matrix.
///
/// Event graphs in this toolkit are small (tens of events), so every
/// derived relation is materialized eagerly and closures use Warshall.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n)
      : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.insert(i, i);
    return r;
  }

  /// Identity restricted to elements satisfying `pred`, i.e. [S].
  template <class Pred>
  static Relation set(std::size_t n, Pred pred) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (pred(i)) r.insert(i, i);
    }
    return r;
  }

  std::size_t size() const { return n_; }

  void insert(std::size_t from, std::size_t to) {
    assert(from < n_ && to < n_);
    bits_[from * words_ + to / 64] |= std::uint64_t{1} << (to % 64);
  }

  bool contains(std::size_t from, std::size_t to) const {
    assert(from < n_ && to < n_);
    return (bits_[from * words_ + to / 64] >> (to % 64)) & 1U;
  }

  bool empty() const {
    for (auto w : bits_) {
      if (w != 0) return false;
    }
    return true;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  Relation& operator|=(const Relation& other) {
    assert(n_ == other.n_);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    return *this;
  }

  Relation& operator&=(const Relation& other) {
    assert(n_ == other.n_);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
    return *this;
  }

  /// Set difference.
  Relation& operator-=(const Relation& other) {
    assert(n_ == other.n_);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~other.bits_[i];
    return *this;
  }

  friend Relation operator|(Relation a, const Relation& b) { return a |= b; }
  friend Relation operator&(Relation a, const Relation& b) { return a &= b; }
  friend Relation operator-(Relation a, const Relation& b) { return a -= b; }

  /// Sequential composition: (a;b)(x,z) iff a(x,y) and b(y,z) for some y.
  Relation then(const Relation& b) const {
    assert(n_ == b.n_);
    Relation out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (contains(i, j)) out.or_row(i, b, j);
      }
    }
    return out;
  }

  Relation inverse() const {
    Relation out(n_);
    for_each([&](std::size_t i, std::size_t j) { out.insert(j, i); });
    return out;
  }

  /// r+
  Relation transitive_closure() const {
    Relation out = *this;
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (out.contains(i, k)) out.or_row(i, out, k);
      }
    }
    return out;
  }

  /// r*
  Relation reflexive_transitive_closure() const {
    return transitive_closure() | identity(n_);
  }

  /// r?
  Relation optional() const { return *this | identity(n_); }

  bool irreflexive() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (contains(i, i)) return false;
    }
    return true;
  }

  bool acyclic() const { return transitive_closure().irreflexive(); }

  template <class Pred>
  Relation filter(Pred pred) const {
    Relation out(n_);
    for_each([&](std::size_t i, std::size_t j) {
      if (pred(i, j)) out.insert(i, j);
    });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = bits_[i * words_ + w];
        while (bits != 0) {
          const auto b = static_cast<std::size_t>(std::countr_zero(bits));
          f(i, w * 64 + b);
          bits &= bits - 1;
        }
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for_each([&](std::size_t i, std::size_t j) { out.emplace_back(i, j); });
    return out;
  }

  bool operator==(const Relation&) const = default;

 private:
  void or_row(std::size_t dst, const Relation& src, std::size_t src_row) {
    const std::uint64_t* s = &src.bits_[src_row * words_];
    std::uint64_t* d = &bits_[dst * words_];
    for (std::size_t w = 0; w < words_; ++w) d[w] |= s[w];
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace wmct

#endif  // WMCT_RELATION_HPP_
