#ifndef WMCT_MODEL_C11_HPP_
#define WMCT_MODEL_C11_HPP_

#include "exec.hpp"
#include "relation.hpp"

namespace wmct {

/// Derived relations of the C/C++ model for one execution.
struct C11Relations {
  Relation sb;   // sequenced-before, with init writes before everything
  Relation rf;
  Relation mo;   // modification (coherence) order
  Relation fr;
  Relation rmw;
  Relation rs;   // release sequence: [W]; (rf; rmw)*
  Relation sw;   // synchronizes-with
  Relation hb;   // (sb | sw)+
  Relation eco;  // (rf | mo | fr)+
};

/// Builds sb/rf/mo/fr, the release sequences, synchronizes-with and
/// happens-before. sw covers release/acquire accesses and the fence forms:
///
///   sw = [REL]; ([F]; sb)?; rs; rf; [R]; (sb; [F])?; [ACQ]
inline C11Relations derive_hb(const Execution& e) {
  require_dialect(e, Dialect::kSource, "c11");
  const EventGraph& g = e.g();
  const std::size_t n = g.size();
  const auto& ev = g.events;

  C11Relations r;
  r.sb = g.po;
  r.rf = e.rf_relation();
  r.mo = e.co_relation();
  r.fr = e.fr_relation();
  r.rmw = g.rmw();

  const Relation writes = Relation::set(n, [&](std::size_t i) { return ev[i].is_write(); });
  const Relation reads = Relation::set(n, [&](std::size_t i) { return ev[i].is_read(); });
  const Relation fences = Relation::set(n, [&](std::size_t i) { return ev[i].is_fence(); });
  const Relation rel = Relation::set(n, [&](std::size_t i) { return ev[i].release; });
  const Relation acq = Relation::set(n, [&](std::size_t i) { return ev[i].acquire; });
  const Relation id = Relation::identity(n);

  r.rs = writes.then(r.rf.then(r.rmw).reflexive_transitive_closure());

  const Relation head = rel.then(fences.then(r.sb) | id).then(writes);
  const Relation tail = reads.then(r.sb.then(fences) | id).then(acq);
  r.sw = head.then(r.rs).then(r.rf).then(tail);

  r.hb = (r.sb | r.sw).transitive_closure();
  r.eco = (r.rf | r.mo | r.fr).transitive_closure();
  return r;
}

/// Per-axiom results, for diagnostics and tests.
struct C11Check {
  bool coherence = true;    // hb; eco? irreflexive
  bool atomicity = true;    // rmw & (fr; mo) empty
  // sb | rf acyclic. Stronger than what relaxed LDR/STR/SWP guarantee, so a
  // load-buffering shape over relaxed accesses can show up as a refinement
  // failure of an otherwise correct lowering.
  bool no_thin_air = true;
  bool sc = true;           // psc acyclic over seq_cst events

  bool ok() const { return coherence && atomicity && no_thin_air && sc; }
};

inline C11Check c11_check(const Execution& e) {
  const C11Relations r = derive_hb(e);
  const auto& ev = e.g().events;
  const std::size_t n = e.g().size();
  C11Check c;
  c.coherence = r.hb.irreflexive() && r.hb.then(r.eco).irreflexive();
  c.atomicity = (r.rmw & r.fr.then(r.mo)).empty();
  c.no_thin_air = (r.sb | r.rf).acyclic();

  // Total order over seq_cst events consistent with hb, mo and fr among
  // them; seq_cst fences are additionally ordered by hb; eco; hb.
  const Relation sc = Relation::set(n, [&](std::size_t i) { return ev[i].seq_cst; });
  const Relation sc_fence =
      Relation::set(n, [&](std::size_t i) { return ev[i].seq_cst && ev[i].is_fence(); });
  const Relation psc = sc.then(r.hb | r.mo | r.fr).then(sc) |
                       sc_fence.then(r.hb.then(r.eco).then(r.hb)).then(sc_fence);
  c.sc = psc.acyclic();
  return c;
}

inline bool c11_consistent(const Execution& e) { return c11_check(e).ok(); }

}  // namespace wmct

#endif  // WMCT_MODEL_C11_HPP_
