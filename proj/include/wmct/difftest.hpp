#ifndef WMCT_DIFFTEST_HPP_
#define WMCT_DIFFTEST_HPP_

#include <algorithm>
#include <future>
#include <string>
#include <vector>

#include "lowering.hpp"
#include "outcomes.hpp"

namespace wmct {

enum class VerdictStatus { kPass, kBug, kError };

inline std::string_view status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kPass: return "pass";
    case VerdictStatus::kBug: return "bug";
    case VerdictStatus::kError: return "error";
  }
  return "";
}

/// Result of comparing a compiled test against its source. Witnesses are
/// outcomes (over source observables) the compiled test allows and the
/// source forbids.
struct Verdict {
  VerdictStatus status = VerdictStatus::kError;
  std::vector<Outcome> witnesses;
  OutcomeSet source_outcomes;
  OutcomeSet compiled_outcomes;  // translated to source observables
  std::string diagnostic;        // set on kError

  /// Process exit code for the diff command.
  int exit_code() const {
    switch (status) {
      case VerdictStatus::kPass: return 0;
      case VerdictStatus::kBug: return 1;
      case VerdictStatus::kError: return 2;
    }
    return 2;
  }
};

/// Relabels a compiled-side outcome with source observables.
inline Outcome translate_outcome(const Outcome& compiled, const Mapping& m) {
  const auto inv = m.inverse();
  Outcome out;
  for (const auto& [obs, v] : compiled) {
    auto it = inv.find(obs);
    if (it == inv.end()) throw MappingError("unmapped observable " + obs.str());
    out[it->second] = v;
  }
  return out;
}

struct DiffOptions {
  ModelOptions model;
  bool parallel = true;  // run the two enumerations concurrently
};

/// Decides whether `compiled` refines `source`: every compiled outcome
/// allowed under AArch64, translated through `m`, must be allowed by the
/// source under C11. Compiled outcomes are taken over the image of the
/// source test's observables, so a weak compiled final condition cannot hide
/// behavior.
inline Verdict check_refinement(const LitmusTest& source, const LitmusTest& compiled,
                                const Mapping& m, const DiffOptions& opts = {}) {
  Verdict v;
  try {
    if (source.dialect != Dialect::kSource)
      throw DialectError("refinement source must be a source-dialect test");
    if (compiled.dialect != Dialect::kAsm)
      throw DialectError("refinement target must be an AArch64 test");
    const std::vector<Observable> src_obs = source.observables();
    m.check(src_obs);
    std::vector<Observable> tgt_obs;
    for (const auto& o : src_obs) tgt_obs.push_back(m.observables.at(o));
    std::sort(tgt_obs.begin(), tgt_obs.end());

    auto run_source = [&] { return allowed_outcomes(source, ModelId::kC11, opts.model); };
    auto run_compiled = [&] {
      return allowed_outcomes(compiled, ModelId::kAArch64, opts.model, tgt_obs);
    };
    OutcomeSet compiled_raw;
    if (opts.parallel) {
      auto fut = std::async(std::launch::async, run_compiled);
      v.source_outcomes = run_source();
      compiled_raw = fut.get();
    } else {
      v.source_outcomes = run_source();
      compiled_raw = run_compiled();
    }

    v.compiled_outcomes.test = compiled_raw.test;
    v.compiled_outcomes.model = compiled_raw.model;
    v.compiled_outcomes.observables = src_obs;
    for (const auto& o : compiled_raw.outcomes) {
      v.compiled_outcomes.outcomes.insert(translate_outcome(o, m));
    }
    for (const auto& o : v.compiled_outcomes.outcomes) {
      if (!v.source_outcomes.contains(o)) v.witnesses.push_back(o);
    }
    v.status = v.witnesses.empty() ? VerdictStatus::kPass : VerdictStatus::kBug;
  } catch (const Error& e) {
    v.status = VerdictStatus::kError;
    v.witnesses.clear();
    v.diagnostic = e.what();
  }
  return v;
}

/// Lowers `source` (optionally running the dead-register pass) and checks
/// the result against it.
inline Verdict check_compilation(const LitmusTest& source, const LoweringOptions& lowering,
                                 const DiffOptions& opts = {}) {
  try {
    const LoweringResult lowered = lower_test(source, lowering);
    return check_refinement(source, lowered.test, lowered.mapping, opts);
  } catch (const Error& e) {
    Verdict v;
    v.status = VerdictStatus::kError;
    v.diagnostic = e.what();
    return v;
  }
}

}  // namespace wmct

#endif  // WMCT_DIFFTEST_HPP_
