#ifndef WMCT_MODEL_AARCH64_HPP_
#define WMCT_MODEL_AARCH64_HPP_

#include "exec.hpp"
#include "model_c11.hpp"
#include "relation.hpp"

namespace wmct {

struct AArch64Options {
  /// Treat reads whose destination is the zero register like any other
  /// read for barrier and acquire ordering. Models the tool behavior from
  /// before the zero-register rule was implemented.
  bool legacy_zero_register = false;
};

/// R*, A and L as used by the barrier-ordered-before rules.
struct EffectiveSets {
  std::vector<bool> effective_read;  // R*: reads that count as reads for ordering
  std::vector<bool> acquire;         // A: acquire reads in R*
  std::vector<bool> release;         // L: release writes
};

inline EffectiveSets effective_sets(const EventGraph& g, const AArch64Options& opts = {}) {
  EffectiveSets s;
  for (const auto& e : g.events) {
    const bool counts = e.is_read() && (!e.zero_register || opts.legacy_zero_register);
    s.effective_read.push_back(counts);
    s.acquire.push_back(counts && e.acquire);
    s.release.push_back(e.is_write() && e.release);
  }
  return s;
}

struct ObRelations {
  Relation po;      // per-thread program order (init writes are not in po)
  Relation po_loc;
  Relation rf, co, fr;
  Relation rmw;
  Relation rfe, coe, fre;
  Relation obs;     // rfe | coe | fre
  Relation bob;     // barrier-ordered-before
  Relation aob;     // atomic-ordered-before
  Relation dob;     // data dependency from a read into a stored value
  Relation ob;      // (obs | dob | bob | aob)+
};

/// Ordered-before for the supported instruction fragment.
///
///   bob = [M]; po; [F.SY]; po; [M]
///       | [R*]; po; [F.LD]; po; [M]
///       | [W]; po; [F.ST]; po; [W]
///       | [A]; po; [M]
///       | [M]; po; [L]
///       | [L]; po; [A]
///   aob = rmw | [range(rmw)]; rfi; [A]
///   dob = [R]; data; [W]
///
/// Reads into the zero register stay in rf/fr/obs but are not members of
/// R* or A, so barriers and acquire semantics do not order them. The only
/// dependency the fragment can express is a loaded register being stored.
inline ObRelations derive_ob(const Execution& e, const AArch64Options& opts = {}) {
  require_dialect(e, Dialect::kAsm, "aarch64");
  const EventGraph& g = e.g();
  const std::size_t n = g.size();
  const auto& ev = g.events;
  const EffectiveSets sets = effective_sets(g, opts);

  ObRelations r;
  r.po = g.thread_po();
  r.po_loc = r.po.filter([&](std::size_t a, std::size_t b) {
    return ev[a].location >= 0 && ev[a].location == ev[b].location;
  });
  r.rf = e.rf_relation();
  r.co = e.co_relation();
  r.fr = e.fr_relation();
  r.rmw = g.rmw();

  // Init writes belong to no thread and are therefore external to all.
  auto external = [&](std::size_t a, std::size_t b) {
    return ev[a].is_init() || ev[b].is_init() || ev[a].thread != ev[b].thread;
  };
  r.rfe = r.rf.filter(external);
  r.coe = r.co.filter(external);
  r.fre = r.fr.filter(external);
  r.obs = r.rfe | r.coe | r.fre;

  auto set = [&](auto pred) { return Relation::set(n, pred); };
  const Relation mem = set([&](std::size_t i) { return ev[i].is_read() || ev[i].is_write(); });
  const Relation w = set([&](std::size_t i) { return ev[i].is_write(); });
  const Relation r_star = set([&](std::size_t i) { return sets.effective_read[i]; });
  const Relation acq = set([&](std::size_t i) { return sets.acquire[i]; });
  const Relation rel = set([&](std::size_t i) { return sets.release[i]; });
  auto barrier = [&](BarrierDomain d) {
    return set([&](std::size_t i) { return ev[i].is_fence() && ev[i].barrier == d; });
  };
  const Relation& po = r.po;

  r.bob = mem.then(po).then(barrier(BarrierDomain::kSy)).then(po).then(mem) |
          r_star.then(po).then(barrier(BarrierDomain::kLd)).then(po).then(mem) |
          w.then(po).then(barrier(BarrierDomain::kSt)).then(po).then(w) |
          acq.then(po).then(mem) |
          mem.then(po).then(rel) |
          rel.then(po).then(acq);

  const Relation rmw_range = set([&](std::size_t i) { return ev[i].is_rmw_write(); });
  const Relation rfi = r.rf - r.rfe;
  r.aob = r.rmw | rmw_range.then(rfi).then(acq);

  r.dob = Relation(n);
  for (const auto& w_ev : ev) {
    if (w_ev.is_write() && w_ev.written.from_read >= 0) r.dob.insert(w_ev.written.from_read, w_ev.id);
  }

  r.ob = (r.obs | r.dob | r.bob | r.aob).transitive_closure();
  return r;
}

struct AArch64Check {
  bool internal = true;   // po-loc | rf | co | fr acyclic
  bool atomicity = true;  // rmw & (fre; coe) empty
  bool external = true;   // ob irreflexive

  bool ok() const { return internal && atomicity && external; }
};

inline AArch64Check aarch64_check(const Execution& e, const AArch64Options& opts = {}) {
  const ObRelations r = derive_ob(e, opts);
  AArch64Check c;
  c.internal = (r.po_loc | r.rf | r.co | r.fr).acyclic();
  c.atomicity = (r.rmw & r.fre.then(r.coe)).empty();
  c.external = r.ob.irreflexive();
  return c;
}

inline bool aarch64_consistent(const Execution& e, const AArch64Options& opts = {}) {
  return aarch64_check(e, opts).ok();
}

}  // namespace wmct

#endif  // WMCT_MODEL_AARCH64_HPP_
