#define _GNU_SOURCE 1
#include "chcadt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "chcadt/smtlib.hpp"

namespace chcadt {

namespace {

std::string first_line(const std::string& text, size_t& rest) {
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    std::string line =
        nl == std::string::npos ? text.substr(start) : text.substr(start, nl - start);
    size_t a = line.find_first_not_of(" \t\r");
    size_t b = line.find_last_not_of(" \t\r");
    rest = nl == std::string::npos ? text.size() : nl + 1;
    if (a != std::string::npos) return line.substr(a, b - a + 1);
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  rest = text.size();
  return "";
}

SolverResult parse_output(const std::string& out, bool timed_out) {
  SolverResult res;
  res.timed_out = timed_out;
  size_t rest = 0;
  std::string verdict = first_line(out, rest);
  if (verdict == "sat")
    res.verdict = SolverVerdict::Sat;
  else if (verdict == "unsat")
    res.verdict = SolverVerdict::Unsat;
  else
    res.verdict = SolverVerdict::Unknown;
  if (res.verdict == SolverVerdict::Unsat) {
    static const std::regex id_re("\\bcl(\\d+)\\b");
    std::string tail = out.substr(rest);
    auto begin = std::sregex_iterator(tail.begin(), tail.end(), id_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it)
      res.cex_clauses.push_back(static_cast<int32_t>(std::stol((*it)[1])));
  }
  return res;
}

}  // namespace

SolverResult run_horn_solver(const std::string& smtlib,
                             const SolverConfig& cfg) {
  char path[] = "/tmp/chcadt_XXXXXX.smt2";
  int script_fd = mkstemps(path, 5);
  if (script_fd < 0) throw Error("cannot create temporary solver input");
  size_t off = 0;
  while (off < smtlib.size()) {
    ssize_t n = write(script_fd, smtlib.data() + off, smtlib.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      close(script_fd);
      unlink(path);
      throw Error("cannot write solver input");
    }
    off += static_cast<size_t>(n);
  }
  close(script_fd);

  std::string cmd = cfg.command;
  bool replaced = false;
  for (size_t pos; (pos = cmd.find("{file}")) != std::string::npos;) {
    cmd.replace(pos, 6, path);
    replaced = true;
  }
  if (!replaced) cmd += std::string(" ") + path;

  int pipefd[2];
  if (pipe(pipefd) != 0) {
    unlink(path);
    throw Error("cannot create pipe for solver");
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    unlink(path);
    throw Error("cannot fork solver process");
  }
  if (pid == 0) {
    setpgid(0, 0);  // own process group, so a timeout kills the whole tree
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      dup2(devnull, STDERR_FILENO);
      close(devnull);
    }
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(pipefd[1]);
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

  using clock = std::chrono::steady_clock;
  auto deadline = clock::now() + std::chrono::seconds(cfg.timeout_secs);
  std::string out;
  char buf[4096];
  bool timed_out = false;
  for (;;) {
    auto now = clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count();
    struct pollfd pfd = {pipefd[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(left < 200 ? left : 200));
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) continue;
    ssize_t n = read(pipefd[0], buf, sizeof buf);
    if (n > 0) {
      out.append(buf, static_cast<size_t>(n));
      continue;
    }
    if (n == 0) break;  // writers closed: solver finished
    if (errno == EAGAIN || errno == EINTR) continue;
    break;
  }
  if (timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
  }
  close(pipefd[0]);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  unlink(path);
  return parse_output(out, timed_out);
}

bool check_output_functional(const Context& ctx, const ClauseSet& store,
                             const std::vector<int32_t>& transformed,
                             int32_t pred, const SolverConfig& cfg) {
  // Defining clauses of `pred`, transitively through head predicates.
  std::set<int32_t> preds = {pred};
  for (bool changed = true; changed;) {
    changed = false;
    for (int32_t id : transformed) {
      const Clause& c = store.get(id);
      if (!c.head || !preds.count(c.head->pred)) continue;
      for (const Atom& a : c.body)
        if (preds.insert(a.pred).second) changed = true;
    }
  }
  std::vector<int32_t> subset;
  for (int32_t id : transformed) {
    const Clause& c = store.get(id);
    if (c.head && preds.count(c.head->pred)) subset.push_back(id);
  }
  std::string script = emit_smtlib(ctx, store, subset, FunDiffGoal{pred});
  SolverResult r = run_horn_solver(script, cfg);
  return r.verdict == SolverVerdict::Sat;
}

std::vector<int32_t> emission_closure(const ClauseSet& store,
                                      const std::vector<int32_t>& transformed,
                                      const std::vector<int32_t>& program) {
  std::map<int32_t, std::vector<int32_t>> by_pred;
  for (int32_t id : program) {
    const Clause& c = store.get(id);
    if (c.head) by_pred[c.head->pred].push_back(id);
  }
  std::vector<int32_t> out = transformed;
  std::set<int32_t> in_set(out.begin(), out.end());
  std::set<int32_t> defined;
  for (int32_t id : out)
    if (const Clause& c = store.get(id); c.head) defined.insert(c.head->pred);
  for (size_t next = 0; next < out.size(); ++next) {
    for (const Atom& a : store.get(out[next]).body) {
      if (!defined.insert(a.pred).second) continue;
      auto it = by_pred.find(a.pred);
      if (it == by_pred.end()) continue;
      for (int32_t id : it->second)
        if (in_set.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

Decision decide_transformed(const Context& ctx, const ClauseSet& store,
                            const RunResult& run,
                            const std::vector<int32_t>& program,
                            const SolverConfig& cfg) {
  if (run.status == RunStatus::IterationLimit)
    return {Decision::Kind::Unknown, "transformation did not terminate"};
  if (run.status == RunStatus::LevelUnsat)
    return {Decision::Kind::Unknown,
            "no consistent level assignment for the definitions"};
  if (cfg.command.empty())
    return {Decision::Kind::Unknown, "no solver configured"};

  std::vector<int32_t> system =
      emission_closure(store, run.transformed, program);
  std::string script = emit_smtlib(ctx, store, system);
  SolverResult r = run_horn_solver(script, cfg);
  if (r.verdict == SolverVerdict::Sat) return {Decision::Kind::Sat, ""};
  if (r.verdict == SolverVerdict::Unknown)
    return {Decision::Kind::Unknown,
            r.timed_out ? "solver timed out" : "solver returned unknown"};

  // Unsat carries over only when the refutation cannot rest on clauses
  // whose folding weakened the system, and when every difference
  // predicate it may use is output-functional.
  std::vector<int32_t> cex = r.cex_clauses.empty() ? system : r.cex_clauses;
  for (int32_t id : cex) {
    if (!store.contains(id)) continue;
    if (store.get(id).mark)
      return {Decision::Kind::Unknown,
              "refutation may depend on clauses weakened during folding"};
  }
  std::set<int32_t> cex_preds;
  for (int32_t id : cex) {
    if (!store.contains(id)) continue;
    const Clause& c = store.get(id);
    if (c.head) cex_preds.insert(c.head->pred);
    for (const Atom& a : c.body) cex_preds.insert(a.pred);
  }
  for (int32_t did : run.diff_defs) {
    const Clause& def = store.get(did);
    if (!def.head) continue;
    int32_t dp = def.head->pred;
    if (!cex_preds.count(dp)) continue;
    if (!check_output_functional(ctx, store, system, dp, cfg))
      return {Decision::Kind::Unknown,
              "could not establish output-functionality of " +
                  ctx.sig.pred(dp).name};
  }
  return {Decision::Kind::Unsat, ""};
}

DecideOutcome decide_program(Program& prog, const AlgoConfig& acfg,
                             const SolverConfig& scfg, Ledger* ledger) {
  LevelStore levels;
  Ledger local;
  RuleContext rc{prog.ctx, prog.store, levels, ledger ? *ledger : local};
  DecideOutcome out;
  out.run = run_transformation(rc, prog.definite, prog.goals, acfg);
  out.decision =
      decide_transformed(prog.ctx, prog.store, out.run, prog.definite, scfg);
  return out;
}

}  // namespace chcadt
