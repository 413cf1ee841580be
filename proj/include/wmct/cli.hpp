#ifndef WMCT_CLI_HPP_
#define WMCT_CLI_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "difftest.hpp"
#include "lowering.hpp"
#include "outcomes.hpp"
#include "parse.hpp"
#include "render.hpp"
#include "report.hpp"
#include "testgen.hpp"

namespace wmct::cli {

enum class Format { kTable, kJson };

struct GlobalFlags {
  std::size_t candidate_cap = kDefaultCandidateCap;
  bool legacy_zero_register = false;
};

struct Simulate {
  std::string file;
  std::optional<ModelId> model;  // defaults by dialect
  Format format = Format::kTable;
};

struct Compile {
  std::string file;
  bool dead_register = false;
  int scratch_register = 15;
  std::optional<std::string> out;          // stdout when absent
  std::optional<std::string> mapping_out;  // defaults next to `out`
};

struct Diff {
  std::string source_file;
  std::optional<std::string> compiled_file;
  bool auto_compile = false;
  bool dead_register = false;
  int scratch_register = 15;
  std::optional<std::string> mapping_file;
  Format format = Format::kTable;
};

struct Generate {
  GenParams params;
  std::string out_dir;
};

struct Command {
  GlobalFlags global;
  std::variant<Simulate, Compile, Diff, Generate> action;
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::filesystem::path default_mapping_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_extension(".map.json");
  return p;
}

/// Mapping used when `diff` gets an explicit compiled file but no mapping:
/// the one our own lowering would produce, provided every mapped register
/// exists in the compiled test.
inline Mapping conventional_mapping(const LitmusTest& source, const LitmusTest& compiled) {
  Mapping m;
  try {
    m = lower_test(source).mapping;
  } catch (const Error& e) {
    throw MappingError(std::string("cannot derive a mapping (") + e.what() +
                       "); pass --mapping");
  }
  for (const auto& obs : source.observables()) {
    const Observable& target = m.observables.at(obs);
    if (target.is_register()) {
      const bool ok = target.thread < static_cast<int>(compiled.threads.size()) &&
                      compiled.threads[target.thread].registers().count(target.name);
      if (!ok)
        throw MappingError("compiled test does not write " + target.str() +
                           " (conventional image of " + obs.str() + "); pass --mapping");
    } else if (!compiled.location_index(target.name)) {
      throw MappingError("compiled test lacks location " + target.name + "; pass --mapping");
    }
  }
  return m;
}

namespace detail {

inline ModelOptions model_options(const GlobalFlags& g) {
  return ModelOptions{g.legacy_zero_register, g.candidate_cap};
}

inline int run_simulate(const GlobalFlags& g, const Simulate& c, std::ostream& out) {
  const LitmusTest t = parse_litmus(read_file(c.file));
  const ModelId model = c.model ? *c.model : default_model(t.dialect);
  const OutcomeSet s = allowed_outcomes(t, model, model_options(g));
  if (c.format == Format::kJson) out << outcome_set_to_json(s).dump(2) << "\n";
  else out << format_outcome_table(s, t.final);
  return 0;
}

inline int run_compile(const GlobalFlags&, const Compile& c, std::ostream& out) {
  const LitmusTest t = parse_source_litmus(read_file(c.file));
  const LoweringResult r = lower_test(t, {c.dead_register, c.scratch_register});
  const std::string text = render_litmus(r.test);
  const std::string map = mapping_to_json(r.mapping).dump(2) + "\n";
  if (c.out) {
    write_file(*c.out, text);
    write_file(c.mapping_out ? std::filesystem::path(*c.mapping_out) : default_mapping_path(*c.out),
               map);
  } else {
    out << text;
    if (c.mapping_out) write_file(*c.mapping_out, map);
  }
  return 0;
}

inline int run_diff(const GlobalFlags& g, const Diff& c, std::ostream& out) {
  if (c.auto_compile && c.mapping_file)
    throw Error("--auto-compile produces its own mapping; --mapping is not allowed");
  if (c.auto_compile && c.compiled_file)
    throw Error("--auto-compile and an explicit compiled file are mutually exclusive");
  if (!c.auto_compile && !c.compiled_file)
    throw Error("diff needs a compiled file or --auto-compile");
  if (!c.auto_compile && c.dead_register)
    throw Error("--dead-register only applies together with --auto-compile");

  const LitmusTest source = parse_source_litmus(read_file(c.source_file));
  DiffOptions opts;
  opts.model = model_options(g);
  Verdict v;
  if (c.auto_compile) {
    v = check_compilation(source, {c.dead_register, c.scratch_register}, opts);
  } else {
    const LitmusTest compiled = parse_asm_litmus(read_file(*c.compiled_file));
    const Mapping m = c.mapping_file
                          ? mapping_from_json(nlohmann::json::parse(read_file(*c.mapping_file)))
                          : conventional_mapping(source, compiled);
    v = check_refinement(source, compiled, m, opts);
  }
  if (c.format == Format::kJson) out << verdict_to_json(v).dump(2) << "\n";
  else out << format_verdict(v, source.final);
  return v.exit_code();
}

inline int run_generate(const GlobalFlags&, const Generate& c, std::ostream& out) {
  const auto tests = generate_mp_family(c.params);
  const std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  nlohmann::json manifest;
  manifest["count"] = tests.size();
  manifest["tests"] = nlohmann::json::array();
  for (const auto& gt : tests) {
    const std::string file = gt.tag.file_stem() + ".litmus";
    write_file(dir / file, render_litmus(gt.test));
    nlohmann::json entry = tag_to_json(gt.tag);
    entry["file"] = file;
    entry["name"] = gt.test.name;
    manifest["tests"].push_back(std::move(entry));
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << tests.size() << " tests to " << dir.string() << "\n";
  return 0;
}

}  // namespace detail

/// Executes one command. Returns the process exit code: 0 on success (or a
/// passing diff), 1 when diff finds a bug, 2 on any error. Errors are
/// reported on `err`.
inline int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    return std::visit(
        [&](const auto& c) -> int {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Simulate>) return detail::run_simulate(cmd.global, c, out);
          else if constexpr (std::is_same_v<T, Compile>) return detail::run_compile(cmd.global, c, out);
          else if constexpr (std::is_same_v<T, Diff>) return detail::run_diff(cmd.global, c, out);
          else return detail::run_generate(cmd.global, c, out);
        },
        cmd.action);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wmct::cli

#endif  // WMCT_CLI_HPP_
