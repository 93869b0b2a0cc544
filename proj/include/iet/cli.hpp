#pragma once

// Command-line driver behind tools/ietcli. Kept in the library so tests can
// drive it in-process with string streams.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iet/construction.hpp"
#include "iet/generic_point.hpp"
#include "iet/projective.hpp"
#include "iet/serialization.hpp"
#include "iet/verify.hpp"

namespace iet::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, diagnostic_failure = 3 };

struct RunConfig {
  std::size_t rounds = 6;
  std::string schedule = "4^k";
  std::string out_dir;
  std::uint64_t seed = 20240607;
  std::uint64_t naive_cap = 100'000;
  std::string trace_file;
  bool csv_only = false;
};

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open " + p.string() + " for writing");
  f << text;
  if (!f) throw InvalidArgument("write failed: " + p.string());
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline std::filesystem::path out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline ConstructionTrace load_or_build(const RunConfig& cfg) {
  if (!cfg.trace_file.empty()) return io::parse_trace(read_file(cfg.trace_file));
  return build_trace(cfg.rounds, io::parse_schedule(cfg.schedule));
}

inline io::json record_json(const verify::CheckRecord& r) {
  return io::json{{"name", r.name}, {"status", verify::to_string(r.status)}, {"margin", r.margin}, {"detail", r.detail}};
}

}  // namespace detail

inline int cmd_construct(const RunConfig& cfg, std::ostream& out) {
  const auto trace = build_trace(cfg.rounds, io::parse_schedule(cfg.schedule));
  if (cfg.out_dir.empty()) {
    out << io::serialize_trace(trace) << "\n";
    return ok;
  }
  const auto dir = detail::out_dir(cfg);
  const auto lengths = concrete_lengths(trace);
  detail::write_file(dir / "trace.json", io::serialize_trace(trace) + "\n");
  detail::write_file(dir / "columns.json", io::columns_export(trace).dump(1) + "\n");
  detail::write_file(dir / "lengths.json", io::lengths_json(lengths).dump(1) + "\n");
  std::vector<std::string> written{"trace.json", "columns.json", "lengths.json"};
  if (trace.depth() >= 4) {
    const auto est = estimate_limits(trace);
    detail::write_file(dir / "diagnostics.json",
                       io::diagnostics_json(prop_vectors_series(trace), est, cone_profiles(trace, est)).dump(1) + "\n");
    const auto chain = nested_chain(trace, lengths, trace.depth());
    const auto rep = genericity_report(trace, chain, est);
    detail::write_file(dir / "generic.json", io::generic_json(chain, rep).dump(1) + "\n");
    detail::write_file(dir / "generic.csv", io::generic_csv(rep));
    written.insert(written.end(), {"diagnostics.json", "generic.json", "generic.csv"});
  }
  for (const auto& w : written) out << (dir / w).string() << "\n";
  return ok;
}

inline int cmd_columns(const RunConfig& cfg, std::ostream& out) {
  const auto trace = detail::load_or_build(cfg);
  const std::string text = io::columns_export(trace).dump(1) + "\n";
  if (cfg.out_dir.empty()) {
    out << text;
  } else {
    const auto p = detail::out_dir(cfg) / "columns.json";
    detail::write_file(p, text);
    out << p.string() << "\n";
  }
  return ok;
}

inline int cmd_generic(const RunConfig& cfg, std::ostream& out) {
  const auto trace = detail::load_or_build(cfg);
  if (trace.depth() < 4) throw InvalidArgument("generic needs at least four rounds");
  const auto lengths = concrete_lengths(trace);
  const auto est = estimate_limits(trace);
  const auto chain = nested_chain(trace, lengths, trace.depth());
  const auto rep = genericity_report(trace, chain, est);
  if (cfg.out_dir.empty()) {
    out << io::generic_csv(rep);
    return ok;
  }
  const auto dir = detail::out_dir(cfg);
  detail::write_file(dir / "generic.csv", io::generic_csv(rep));
  detail::write_file(dir / "generic.json", io::generic_json(chain, rep).dump(1) + "\n");
  out << (dir / "generic.csv").string() << "\n" << (dir / "generic.json").string() << "\n";
  return ok;
}

/// One JSON object per line, one line per check, then a summary line.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const verify::Context ctx(detail::load_or_build(cfg));
  std::vector<verify::CheckRecord> recs = verify::module_invariants(ctx, cfg.seed);
  for (const auto& r : recs) out << detail::record_json(r).dump() << "\n";
  verify::AcceptanceOptions opt;
  opt.naive_cap = cfg.naive_cap;
  verify::acceptance(ctx, opt, [&](const verify::CheckRecord& r) {
    out << detail::record_json(r).dump() << "\n" << std::flush;
    recs.push_back(r);
  });
  std::map<std::string, int> tally;
  for (const auto& r : recs) ++tally[verify::to_string(r.status)];
  io::json summary{{"rounds", ctx.trace.depth()}, {"schedule", ctx.trace.schedule.label()}};
  for (const auto& [k, v] : tally) summary[k] = v;
  out << io::json{{"summary", summary}}.dump() << "\n";
  if (!cfg.out_dir.empty()) {
    io::json all = io::json::array();
    for (const auto& r : recs) all.push_back(detail::record_json(r));
    detail::write_file(detail::out_dir(cfg) / "verify.json", io::json{{"records", all}, {"summary", summary}}.dump(1) + "\n");
  }
  return verify::all_pass(recs) ? ok : verification_failed;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact construction of a non-uniquely ergodic 6-IET with a generic non-ergodic measure"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--rounds,-K", cfg.rounds, "number of loop rounds K")->check(CLI::PositiveNumber);
    sub->add_option("--schedule", cfg.schedule, "a_k schedule: b^k or a comma list a_1,a_2,...");
    sub->add_option("--out", cfg.out_dir, "output directory");
  };
  auto* construct = app.add_subcommand("construct", "run the construction and export the trace");
  common(construct);
  auto* verify = app.add_subcommand("verify", "run the invariant suites and acceptance checks");
  common(verify);
  verify->add_option("--seed", cfg.seed, "seed for randomized property checks");
  verify->add_option("--naive-cap", cfg.naive_cap, "direct-iteration cap for Birkhoff agreement")
      ->check(CLI::PositiveNumber);
  verify->add_option("--trace", cfg.trace_file, "verify a serialized trace instead of building one");
  auto* generic = app.add_subcommand("generic", "emit checkpoint Birkhoff frequencies as CSV");
  common(generic);
  generic->add_option("--trace", cfg.trace_file, "use a serialized trace");
  auto* columns = app.add_subcommand("columns", "emit the checkpoint columns C_sigma(n_k)");
  common(columns);
  columns->add_option("--trace", cfg.trace_file, "use a serialized trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (construct->parsed()) return cmd_construct(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (generic->parsed()) return cmd_generic(cfg, out);
    if (columns->parsed()) return cmd_columns(cfg, out);
  } catch (const DiagnosticError& e) {
    err << "diagnostic: " << e.what() << "\n";
    return diagnostic_failure;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return usage_error;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }
  return usage_error;
}

}  // namespace iet::cli
