// wmct: simulate, compile, diff and generate litmus tests.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wmct/cli.hpp"

namespace {

using wmct::MemoryOrder;

const std::map<std::string, MemoryOrder> kOrderNames{
    {"rlx", MemoryOrder::kRelaxed}, {"acq", MemoryOrder::kAcquire},
    {"rel", MemoryOrder::kRelease}, {"acqrel", MemoryOrder::kAcqRel},
    {"sc", MemoryOrder::kSeqCst}};

std::vector<MemoryOrder> to_orders(const std::vector<std::string>& names) {
  std::vector<MemoryOrder> out;
  for (const auto& n : names) out.push_back(kOrderNames.at(n));
  return out;
}

std::optional<std::size_t> cap_from_env() {
  const char* v = std::getenv("WMCT_CANDIDATE_CAP");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) return std::nullopt;
  return static_cast<std::size_t>(n);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = wmct::cli;
  CLI::App app{"Model-based testing of atomic lowerings"};
  app.require_subcommand(1);

  cli::GlobalFlags global;
  if (auto c = cap_from_env()) global.candidate_cap = *c;
  app.add_option("--cap", global.candidate_cap,
                 "Candidate executions explored per test before giving up "
                 "(default from WMCT_CANDIDATE_CAP or 1000000)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--legacy-zero-register", global.legacy_zero_register,
               "Treat zero-register destinations as reads (older model behavior)");

  const std::map<std::string, cli::Format> formats{{"table", cli::Format::kTable},
                                                    {"json", cli::Format::kJson}};
  const std::map<std::string, wmct::ModelId> models{{"c11", wmct::ModelId::kC11},
                                                     {"aarch64", wmct::ModelId::kAArch64}};

  cli::Simulate sim;
  wmct::ModelId sim_model{};
  auto* simulate = app.add_subcommand("simulate", "List the outcomes a model allows");
  simulate->add_option("file", sim.file, "Litmus file")->required();
  auto* model_opt = simulate->add_option("--model", sim_model, "c11 or aarch64 (default by dialect)")
                        ->transform(CLI::CheckedTransformer(models, CLI::ignore_case));
  simulate->add_option("--format", sim.format, "table or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  cli::Compile comp;
  std::string comp_out, comp_map;
  auto* compile = app.add_subcommand("compile", "Lower a C litmus test to AArch64");
  compile->add_option("file", comp.file, "C litmus file")->required();
  compile->add_flag("--dead-register", comp.dead_register,
                    "Rewrite unused exchange destinations to WZR");
  compile->add_option("--scratch", comp.scratch_register,
                      "Register for discarded exchange results")
      ->check(CLI::Range(0, 28));
  auto* out_opt = compile->add_option("-o,--out", comp_out, "Output litmus file (default stdout)");
  auto* map_opt = compile->add_option("--mapping-out", comp_map,
                                      "Mapping sidecar (default <out>.map.json)");

  cli::Diff diff;
  std::string diff_compiled, diff_map;
  auto* diffcmd = app.add_subcommand("diff", "Check that a compiled test refines its source");
  diffcmd->add_option("source", diff.source_file, "C litmus file")->required();
  auto* compiled_opt = diffcmd->add_option("compiled", diff_compiled, "AArch64 litmus file");
  diffcmd->add_flag("--auto-compile", diff.auto_compile, "Lower the source internally");
  diffcmd->add_flag("--dead-register", diff.dead_register,
                    "With --auto-compile, run the dead-register pass");
  diffcmd->add_option("--scratch", diff.scratch_register,
                      "With --auto-compile, register for discarded exchange results")
      ->check(CLI::Range(0, 28));
  auto* mapping_opt = diffcmd->add_option("--mapping", diff_map, "Mapping JSON from compile");
  diffcmd->add_option("--format", diff.format, "table or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  cli::Generate gen;
  std::vector<std::string> variants, data_store, flag_store, flag_op, fences, data_load;
  std::string flag_access = "xchg";
  std::size_t limit = 0;
  auto* generate = app.add_subcommand("generate", "Write the message-passing test family");
  generate->add_option("-o,--out-dir", gen.out_dir, "Output directory")->required();
  const auto order_check = CLI::IsMember({"rlx", "acq", "rel", "acqrel", "sc"});
  generate->add_option("--variants", variants, "historic, discard, observe")
      ->check(CLI::IsMember({"historic", "discard", "observe"}))
      ->delimiter(',');
  generate->add_option("--flag-access", flag_access, "xchg or load")
      ->check(CLI::IsMember({"xchg", "load"}));
  generate->add_option("--data-store", data_store, "Orders for P0's data store")
      ->check(order_check)->delimiter(',');
  generate->add_option("--flag-store", flag_store, "Orders for P0's flag store")
      ->check(order_check)->delimiter(',');
  generate->add_option("--flag-op", flag_op, "Orders for P1's flag access")
      ->check(order_check)->delimiter(',');
  generate->add_option("--fence", fences, "Fence orders for P1, 'none' for no fence")
      ->check(CLI::IsMember({"none", "acq", "rel", "acqrel", "sc"}))
      ->delimiter(',');
  generate->add_option("--data-load", data_load, "Orders for P1's data load")
      ->check(order_check)->delimiter(',');
  auto* limit_opt = generate->add_option("--limit", limit, "Sample this many tests");
  generate->add_option("--seed", gen.params.seed, "Sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  cli::Command cmd;
  cmd.global = global;
  if (*simulate) {
    if (*model_opt) sim.model = sim_model;
    cmd.action = sim;
  } else if (*compile) {
    if (*out_opt) comp.out = comp_out;
    if (*map_opt) comp.mapping_out = comp_map;
    cmd.action = comp;
  } else if (*diffcmd) {
    if (*compiled_opt) diff.compiled_file = diff_compiled;
    if (*mapping_opt) diff.mapping_file = diff_map;
    cmd.action = diff;
  } else {
    auto& p = gen.params;
    if (!variants.empty()) {
      p.variants.clear();
      for (const auto& v : variants) p.variants.push_back(*wmct::variant_from_name(v));
    }
    if (flag_access == "load") {
      // Only the historic shape reads the flag with a plain load.
      p.flag_access = wmct::FlagAccess::kLoad;
      if (variants.empty()) p.variants = {wmct::Variant::kHistoric};
      if (flag_op.empty()) p.flag_op = {MemoryOrder::kRelaxed, MemoryOrder::kAcquire, MemoryOrder::kSeqCst};
    }
    if (!data_store.empty()) p.data_store = to_orders(data_store);
    if (!flag_store.empty()) p.flag_store = to_orders(flag_store);
    if (!flag_op.empty()) p.flag_op = to_orders(flag_op);
    if (!data_load.empty()) p.data_load = to_orders(data_load);
    if (!fences.empty()) {
      p.fence.clear();
      for (const auto& f : fences) {
        p.fence.push_back(f == "none" ? std::nullopt
                                      : std::optional<MemoryOrder>(kOrderNames.at(f)));
      }
    }
    if (*limit_opt) p.limit = limit;
    cmd.action = gen;
  }
  return cli::run(cmd, std::cout, std::cerr);
}
