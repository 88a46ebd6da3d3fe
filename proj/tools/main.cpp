// chcadt: decides satisfiability of constrained Horn clauses whose
// predicates range over algebraic data types, by transforming the goals
// into clauses over integers and booleans only and delegating those to
// an external Horn solver command.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "chcadt/algorithm.hpp"
#include "chcadt/parser.hpp"
#include "chcadt/printer.hpp"
#include "chcadt/smtlib.hpp"
#include "chcadt/solver.hpp"

namespace {

using namespace chcadt;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string format_step(const Step& s, const Context& ctx) {
  std::ostringstream os;
  os << to_string(s.kind);
  if (s.clause_in >= 0) os << " in=" << s.clause_in;
  if (!s.clauses_out.empty()) {
    os << " out=[";
    for (size_t i = 0; i < s.clauses_out.size(); ++i)
      os << (i ? "," : "") << s.clauses_out[i];
    os << "]";
  }
  if (s.def_pred >= 0) os << " pred=" << ctx.sig.pred(s.def_pred).name;
  if (s.def_clause >= 0) os << " def=" << s.def_clause;
  if (s.atom_index >= 0) os << " atom=" << s.atom_index;
  if (s.u_discharge) os << " discharge";
  return os.str();
}

struct FileReport {
  std::string verdict = "unknown";  // "sat", "unsat", or "unknown: <reason>"
  long long wall_ms = 0;
  int iterations = 0;
  int defs = 0;
  int marked = 0;
  bool error = false;
  std::string error_msg;
  int exit_code = 1;
};

FileReport run_one(const std::string& path, const AlgoConfig& acfg,
                   const SolverConfig& scfg, const std::string& emit_path,
                   const std::string& trace_path) {
  FileReport rep;
  auto start = std::chrono::steady_clock::now();
  try {
    Program prog = parse_program(read_file(path));
    LevelStore levels;
    Ledger ledger;
    RuleContext rc{prog.ctx, prog.store, levels, ledger};
    RunResult run = run_transformation(rc, prog.definite, prog.goals, acfg);
    if (!trace_path.empty()) {
      std::ostringstream os;
      for (const Step& s : ledger.steps())
        os << format_step(s, prog.ctx) << "\n";
      write_file(trace_path, os.str());
    }
    if (!emit_path.empty())
      write_file(emit_path,
                 emit_smtlib(prog.ctx, prog.store,
                             emission_closure(prog.store, run.transformed,
                                              prog.definite)));
    Decision d = decide_transformed(prog.ctx, prog.store, run, prog.definite, scfg);
    rep.iterations = run.iterations;
    rep.defs = static_cast<int>(run.defs.size());
    for (int32_t id : run.transformed)
      if (prog.store.contains(id) && prog.store.get(id).mark) ++rep.marked;
    switch (d.kind) {
      case Decision::Kind::Sat:
        rep.verdict = "sat";
        rep.exit_code = 0;
        break;
      case Decision::Kind::Unsat:
        rep.verdict = "unsat";
        rep.exit_code = 0;
        break;
      case Decision::Kind::Unknown:
        rep.verdict = "unknown: " + d.reason;
        rep.exit_code = 2;
        break;
    }
  } catch (const Error& e) {
    rep.error = true;
    rep.error_msg = e.what();
    rep.verdict = std::string("error: ") + e.what();
    rep.exit_code = 1;
  }
  auto end = std::chrono::steady_clock::now();
  rep.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(end - start)
          .count();
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decides Horn clause systems with algebraic data types by removing "
      "the ADT arguments and delegating the result to a Horn solver."};
  std::string input, batch_dir, solver_cmd, emit_path, trace_path;
  int timeout_secs = 300;
  int max_iterations = 100;
  int jobs = 0;
  bool no_diff = false;

  auto* input_opt =
      app.add_option("-i,--input", input, "Problem file to decide");
  auto* batch_opt = app.add_option(
      "--batch", batch_dir,
      "Run on every .chc file in a directory and print a TSV report");
  input_opt->excludes(batch_opt);
  batch_opt->excludes(input_opt);
  app.add_option("--solver", solver_cmd,
                 "Horn solver command; {file} expands to the SMT-LIB path");
  app.add_option("--timeout", timeout_secs, "Solver timeout in seconds")
      ->capture_default_str();
  app.add_option("--max-iterations", max_iterations,
                 "Transformation iteration limit")
      ->capture_default_str();
  app.add_flag("--no-diff", no_diff,
               "Disable difference predicates (projection definitions only)");
  app.add_option("--emit-smtlib", emit_path,
                 "Write the transformed system as SMT-LIB to this file");
  app.add_option("--trace", trace_path,
                 "Write the transformation step log to this file");
  app.add_option("-j,--jobs", jobs, "Worker threads in batch mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (input.empty() && batch_dir.empty()) {
    std::cerr << "error: one of --input or --batch is required\n";
    return 1;
  }

  AlgoConfig acfg;
  acfg.max_iterations = max_iterations;
  acfg.use_diff = !no_diff;
  SolverConfig scfg;
  scfg.command = solver_cmd;
  scfg.timeout_secs = timeout_secs;

  if (!input.empty()) {
    FileReport rep = run_one(input, acfg, scfg, emit_path, trace_path);
    if (rep.error) {
      std::cerr << "error: " << rep.error_msg << "\n";
      return 1;
    }
    std::cout << rep.verdict << "\n";
    return rep.exit_code;
  }

  namespace fs = std::filesystem;
  std::vector<std::string> files;
  try {
    for (const auto& entry : fs::directory_iterator(batch_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".chc")
        files.push_back(entry.path().string());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::sort(files.begin(), files.end());
  std::vector<FileReport> reports(files.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      reports[i] = run_one(files[i], acfg, scfg, "", "");
    }
  };
  unsigned n = jobs > 0 ? static_cast<unsigned>(jobs)
                        : std::min(4u, std::thread::hardware_concurrency());
  if (n == 0) n = 1;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::cout << "problem\tverdict\twall_ms\titerations\tdefinitions\tmarked\n";
  bool any_error = false;
  for (size_t i = 0; i < files.size(); ++i) {
    const FileReport& r = reports[i];
    any_error = any_error || r.error;
    std::cout << fs::path(files[i]).filename().string() << "\t" << r.verdict
              << "\t" << r.wall_ms << "\t" << r.iterations << "\t" << r.defs
              << "\t" << r.marked << "\n";
  }
  return any_error ? 1 : 0;
}
