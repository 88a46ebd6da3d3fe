#include "chcadt/algorithm.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "chcadt/conjunction.hpp"
#include "chcadt/unify.hpp"

namespace chcadt {

namespace {

bool match_atom_into(Subst& s, const Atom& pattern, const Atom& target) {
  if (pattern.pred != target.pred || pattern.args.size() != target.args.size())
    return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_into(s, pattern.args[i], target.args[i])) return false;
  return true;
}

struct InstanceMatch {
  Subst theta;
  std::vector<size_t> positions;  // clause body position per pattern atom
};

void enum_instances(const std::vector<Atom>& pattern, size_t k, const Clause& c,
                    const std::vector<size_t>& block, std::vector<bool>& used,
                    Subst& theta, std::vector<size_t>& positions,
                    std::vector<InstanceMatch>& out, size_t cap) {
  if (out.size() >= cap) return;
  if (k == pattern.size()) {
    out.push_back({theta, positions});
    return;
  }
  for (size_t bi = 0; bi < block.size(); ++bi) {
    if (used[bi]) continue;
    Subst saved = theta;
    if (match_atom_into(theta, pattern[k], c.body[block[bi]])) {
      used[bi] = true;
      positions.push_back(block[bi]);
      enum_instances(pattern, k + 1, c, block, used, theta, positions, out,
                     cap);
      positions.pop_back();
      used[bi] = false;
    }
    theta = std::move(saved);
  }
}

struct PartialMatch {
  Subst theta;
  std::vector<size_t> m_def, m_block;  // matched def atoms / body positions
  std::vector<size_t> r_def;           // deferred def atoms
};

void enum_partials(const std::vector<Atom>& pattern, size_t k, const Clause& c,
                   const std::vector<size_t>& block, std::vector<bool>& used,
                   PartialMatch& cur, std::vector<PartialMatch>& out,
                   size_t cap) {
  if (out.size() >= cap) return;
  if (k == pattern.size()) {
    if (!cur.m_def.empty() && !cur.r_def.empty()) out.push_back(cur);
    return;
  }
  for (size_t bi = 0; bi < block.size(); ++bi) {
    if (used[bi]) continue;
    Subst saved = cur.theta;
    if (match_atom_into(cur.theta, pattern[k], c.body[block[bi]])) {
      used[bi] = true;
      cur.m_def.push_back(k);
      cur.m_block.push_back(block[bi]);
      enum_partials(pattern, k + 1, c, block, used, cur, out, cap);
      cur.m_block.pop_back();
      cur.m_def.pop_back();
      used[bi] = false;
    }
    cur.theta = std::move(saved);
  }
  cur.r_def.push_back(k);
  enum_partials(pattern, k + 1, c, block, used, cur, out, cap);
  cur.r_def.pop_back();
}

std::vector<int32_t> term_vars(const Term& t) {
  std::vector<int32_t> vs;
  t.collect_vars(vs);
  return vs;
}

struct DefRecord {
  int32_t clause;
  int32_t pred;
};

class Runner {
 public:
  Runner(RuleContext& rc, const std::vector<int32_t>& program,
         const AlgoConfig& config)
      : rc_(rc), config_(config) {
    for (int32_t id : program) {
      const Clause& c = rc.store.get(id);
      if (c.head) pred_clauses_[c.head->pred].push_back(id);
    }
  }

  RunResult run(const std::vector<int32_t>& goals);

  std::vector<DefRecord> defs, diff_defs;

 private:
  bool process(int32_t id, std::deque<int32_t>& work);
  bool try_generalize(int32_t id, const Clause& c,
                      const std::vector<size_t>& block, int32_t def_clause,
                      const InstanceMatch& m, std::deque<int32_t>& work);
  bool try_diff_introduce(int32_t id, const Clause& c,
                          const std::vector<size_t>& block,
                          std::deque<int32_t>& work);
  bool define_and_fold(int32_t id, const Clause& c,
                       const std::vector<size_t>& block,
                       std::optional<Constraint> dcon, const char* base,
                       std::deque<int32_t>& work);
  bool unfold_definitions(const std::vector<DefRecord>& batch,
                          std::vector<int32_t>& rcls);
  std::vector<int32_t> replace_phase(const std::vector<int32_t>& in);

  std::vector<const Clause*> clause_ptrs(int32_t pred) {
    std::vector<const Clause*> out;
    for (int32_t id : pred_clauses_[pred]) out.push_back(&rc_.store.get(id));
    return out;
  }

  RuleContext& rc_;
  AlgoConfig config_;
  std::map<int32_t, std::vector<int32_t>> pred_clauses_;
  std::vector<DefRecord> new_defs_;
  std::vector<int32_t> fld_;
  std::map<int32_t, int> rewrite_chain_;
};

bool Runner::process(int32_t id, std::deque<int32_t>& work) {
  if (rule_delete_unsat(rc_, id)) return true;
  const Clause c = rc_.store.get(id);
  if (c.has_basic_types(rc_.ctx)) {
    fld_.push_back(id);
    return true;
  }

  std::vector<size_t> block;
  for (const auto& b : sharing_blocks(c.body, rc_.ctx)) {
    for (size_t i : b)
      if (atom_has_adt_arg(c.body[i], rc_.ctx)) {
        block = b;
        break;
      }
    if (!block.empty()) break;
  }

  // Fold with an existing definition when the block is an instance of
  // its body; remember the first instance whose constraint entailment
  // failed as the generalization candidate.
  std::optional<std::pair<int32_t, InstanceMatch>> gen;
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
    const Clause& def = rc_.store.get(it->clause);
    if (def.body.size() != block.size()) continue;
    std::vector<InstanceMatch> matches;
    std::vector<bool> used(block.size(), false);
    Subst theta;
    std::vector<size_t> positions;
    enum_instances(def.body, 0, c, block, used, theta, positions, matches, 16);
    for (InstanceMatch& m : matches) {
      auto fid = rule_fold(rc_, id, m.positions, it->clause, m.theta);
      if (fid) {
        work.push_front(*fid);
        return true;
      }
      if (!gen) gen = {it->clause, m};
    }
  }

  if (gen && try_generalize(id, c, block, gen->first, gen->second, work))
    return true;

  if (config_.use_diff && rewrite_chain_[id] < 4 &&
      try_diff_introduce(id, c, block, work))
    return true;

  return define_and_fold(id, c, block, std::nullopt, "new", work);
}

bool Runner::try_generalize(int32_t id, const Clause& c,
                            const std::vector<size_t>& block,
                            int32_t def_clause, const InstanceMatch& m,
                            std::deque<int32_t>& work) {
  const Clause& def = rc_.store.get(def_clause);
  std::map<int32_t, int32_t> ren;
  for (int32_t v : def.constraint.vars()) {
    Term image = m.theta.apply_flat(Term::var(v, rc_.ctx.vars.type(v)));
    if (!image.is_var()) return false;
    ren[v] = image.var_id();
  }
  Constraint alpha = widen(def.constraint.renamed(ren), c.constraint);
  return define_and_fold(id, c, block, std::move(alpha), "gen", work);
}

bool Runner::try_diff_introduce(int32_t id, const Clause& c,
                                const std::vector<size_t>& block,
                                std::deque<int32_t>& work) {
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
    const Clause def = rc_.store.get(it->clause);
    if (def.body.size() < 2) continue;
    std::vector<PartialMatch> cands;
    {
      std::vector<bool> used(block.size(), false);
      PartialMatch cur;
      enum_partials(def.body, 0, c, block, used, cur, cands, 256);
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const PartialMatch& a, const PartialMatch& b) {
                       if (a.m_def.size() != b.m_def.size())
                         return a.m_def.size() > b.m_def.size();
                       return a.m_block < b.m_block;
                     });

    for (PartialMatch& cand : cands) {
      // Deferred definition atoms become the replacement conjunction:
      // their inputs must be determined by the matched part, and their
      // outputs replaced by fresh variables.
      bool viable = true;
      for (size_t k : cand.r_def) {
        const Atom& a = def.body[k];
        const PredDecl& decl = rc_.ctx.sig.pred(a.pred);
        std::set<int32_t> invars, outvars;
        for (size_t ai = 0; ai < a.args.size(); ++ai) {
          for (int32_t v : term_vars(a.args[ai])) {
            if (decl.modes[ai] == Mode::In)
              invars.insert(v);
            else
              outvars.insert(v);
          }
        }
        for (int32_t v : invars)
          if (!cand.theta.lookup(v) || outvars.count(v)) {
            viable = false;
            break;
          }
        if (!viable) break;
        for (int32_t v : outvars)
          if (cand.theta.lookup(v)) {
            viable = false;
            break;
          }
        if (!viable) break;
      }
      if (!viable) continue;

      std::vector<size_t> f_positions;
      std::set<size_t> matched(cand.m_block.begin(), cand.m_block.end());
      for (size_t i : block)
        if (!matched.count(i)) f_positions.push_back(i);
      if (f_positions.empty()) continue;

      std::vector<Atom> f_atoms;
      for (size_t i : f_positions) f_atoms.push_back(c.body[i]);
      auto fio = compose_io(f_atoms, rc_.ctx);
      if (!fio) continue;

      Subst theta2 = cand.theta;
      std::vector<Atom> r_insts;
      bool bound_ok = true;
      for (size_t k : cand.r_def) {
        const Atom& a = def.body[k];
        const PredDecl& decl = rc_.ctx.sig.pred(a.pred);
        for (size_t ai = 0; ai < a.args.size(); ++ai) {
          if (decl.modes[ai] != Mode::Out) continue;
          for (int32_t v : term_vars(a.args[ai]))
            if (!theta2.lookup(v))
              theta2.bind(v, Term::var(rc_.ctx.vars.fresh(
                                           rc_.ctx.vars.name(v),
                                           rc_.ctx.vars.type(v)),
                                       rc_.ctx.vars.type(v)));
        }
        Atom inst = apply_flat(theta2, a);
        if (!atom_is_normalized(inst, rc_.ctx)) bound_ok = false;
        r_insts.push_back(std::move(inst));
      }
      if (!bound_ok) continue;
      auto rio = compose_io(r_insts, rc_.ctx);
      if (!rio) continue;

      LevelStore snapshot = rc_.levels;
      bool level_ok = true;
      if (c.head)
        for (const Atom& a : f_atoms)
          if (!rc_.levels.add_gt(c.head->pred, a.pred)) {
            level_ok = false;
            break;
          }
      if (!level_ok) {
        rc_.levels = snapshot;
        continue;
      }

      auto basic_of = [&](const std::vector<int32_t>& vs,
                          std::vector<int32_t>& acc, std::set<int32_t>& seen) {
        for (int32_t v : vs)
          if (rc_.ctx.vars.type(v).is_basic() && seen.insert(v).second)
            acc.push_back(v);
      };
      // Head layout: basic inputs of both conjunctions, then the fresh
      // outputs of the replacement, then the replaced outputs.
      std::vector<int32_t> head_vars;
      std::vector<int32_t> t_b, w_b, y_b;
      {
        std::set<int32_t> seen;
        basic_of(fio->inputs, t_b, seen);
        basic_of(rio->inputs, t_b, seen);
        basic_of(rio->outputs, w_b, seen);
        basic_of(fio->outputs, y_b, seen);
      }
      head_vars = t_b;
      head_vars.insert(head_vars.end(), w_b.begin(), w_b.end());
      head_vars.insert(head_vars.end(), y_b.begin(), y_b.end());
      size_t n_in = t_b.size() + w_b.size();

      Constraint dhat = project(c.constraint, t_b);

      Clause shape;
      shape.body = f_atoms;
      shape.body.insert(shape.body.end(), r_insts.begin(), r_insts.end());
      shape.constraint = dhat;
      std::vector<Term> head_args;
      for (int32_t v : head_vars)
        head_args.push_back(Term::var(v, rc_.ctx.vars.type(v)));

      int32_t diff_pred = -1, diff_clause = -1;
      for (const DefRecord& existing : diff_defs) {
        if (rc_.ctx.sig.pred(existing.pred).arity() != head_args.size())
          continue;
        Clause probe = shape;
        probe.head = Atom{existing.pred, head_args};
        if (clause_variant_equal(probe, rc_.store.get(existing.clause),
                                 rc_.ctx)) {
          diff_pred = existing.pred;
          diff_clause = existing.clause;
          break;
        }
      }

      bool created = false;
      if (diff_pred < 0) {
        PredDecl decl;
        decl.name = rc_.ctx.sig.fresh_pred_name("diff");
        for (size_t i = 0; i < head_vars.size(); ++i) {
          decl.arg_types.push_back(rc_.ctx.vars.type(head_vars[i]));
          decl.modes.push_back(i < n_in ? Mode::In : Mode::Out);
        }
        diff_pred = rc_.ctx.sig.add_pred(decl);
        Clause defc = shape;
        defc.head = Atom{diff_pred, head_args};
        Clause stored = rename_apart(defc, rc_.ctx);
        auto did = rule_define(rc_, stored);
        if (!did) {
          rc_.levels = snapshot;
          continue;
        }
        diff_clause = *did;
        defs.push_back({diff_clause, diff_pred});
        diff_defs.push_back({diff_clause, diff_pred});
        new_defs_.push_back({diff_clause, diff_pred});
        created = true;
      }

      DiffReplaceSpec spec;
      spec.replaced = f_positions;
      spec.with_atoms = r_insts;
      spec.with_atoms.push_back(Atom{diff_pred, head_args});
      spec.diff_pred = diff_pred;
      spec.entailed = dhat;
      spec.f_outputs = fio->outputs;
      spec.r_inputs = rio->inputs;
      auto rid = rule_diff_replace(rc_, id, spec);
      if (!rid) {
        rc_.levels = snapshot;
        if (created) {
          defs.pop_back();
          diff_defs.pop_back();
          new_defs_.pop_back();
        }
        continue;
      }
      rewrite_chain_[*rid] = rewrite_chain_[id] + 1;
      work.push_front(*rid);
      return true;
    }
  }
  return false;
}

bool Runner::define_and_fold(int32_t id, const Clause& c,
                             const std::vector<size_t>& block,
                             std::optional<Constraint> dcon, const char* base,
                             std::deque<int32_t>& work) {
  std::vector<Atom> atoms;
  for (size_t i : block) atoms.push_back(c.body[i]);
  VarPartition part = partition_vars(atoms, rc_.ctx);

  std::set<int32_t> inputs, outputs;
  for (const Atom& a : atoms) {
    AtomIo io = atom_io(a, rc_.ctx);
    inputs.insert(io.inputs.begin(), io.inputs.end());
    outputs.insert(io.outputs.begin(), io.outputs.end());
  }
  std::vector<int32_t> z;
  for (int32_t v : part.basic)
    if (inputs.count(v) && !outputs.count(v)) z.push_back(v);

  Constraint d = dcon ? std::move(*dcon) : project(c.constraint, z);

  PredDecl decl;
  decl.name = rc_.ctx.sig.fresh_pred_name(base);
  std::set<int32_t> zset(z.begin(), z.end());
  for (int32_t v : part.basic) {
    decl.arg_types.push_back(rc_.ctx.vars.type(v));
    decl.modes.push_back(zset.count(v) ? Mode::In : Mode::Out);
  }
  int32_t pred = rc_.ctx.sig.add_pred(decl);

  Clause defc;
  std::vector<Term> head_args;
  for (int32_t v : part.basic)
    head_args.push_back(Term::var(v, rc_.ctx.vars.type(v)));
  defc.head = Atom{pred, head_args};
  defc.body = atoms;
  defc.constraint = std::move(d);

  std::map<int32_t, int32_t> ren;
  Clause stored = rename_apart(defc, rc_.ctx, &ren);
  auto did = rule_define(rc_, stored);
  if (!did) return false;
  defs.push_back({*did, pred});
  new_defs_.push_back({*did, pred});

  Subst theta;
  for (auto [cv, dv] : ren)
    theta.bind(dv, Term::var(cv, rc_.ctx.vars.type(cv)));
  auto fid = rule_fold(rc_, id, block, *did, theta);
  if (!fid) return false;
  work.push_front(*fid);
  return true;
}

bool Runner::unfold_definitions(const std::vector<DefRecord>& batch,
                                std::vector<int32_t>& rcls) {
  for (const DefRecord& def : batch) {
    const Clause dclause = rc_.store.get(def.clause);

    int a_idx = -1;
    for (size_t i = 0; i < dclause.body.size(); ++i) {
      if (!pred_clauses_.count(dclause.body[i].pred)) continue;
      if (rc_.levels.add_eq(def.pred, dclause.body[i].pred)) {
        a_idx = static_cast<int>(i);
        break;
      }
    }
    if (a_idx < 0) return false;

    // Cover the consumed ADT variables with additional unfolding points
    // so each derived clause exposes constructors for all of them.
    std::vector<size_t> s_rest;
    {
      std::vector<int32_t> sources = source_adt_vars(dclause.body, rc_.ctx);
      std::set<int32_t> remaining(sources.begin(), sources.end());
      auto covered_by = [&](size_t i) {
        std::set<int32_t> cov;
        AtomIo io = atom_io(dclause.body[i], rc_.ctx);
        for (int32_t v : io.inputs)
          if (remaining.count(v) && rc_.ctx.vars.type(v).is_adt())
            cov.insert(v);
        return cov;
      };
      for (int32_t v : covered_by(static_cast<size_t>(a_idx)))
        remaining.erase(v);
      while (!remaining.empty()) {
        size_t best = dclause.body.size();
        size_t best_n = 0;
        for (size_t i = 0; i < dclause.body.size(); ++i) {
          if (static_cast<int>(i) == a_idx) continue;
          if (std::find(s_rest.begin(), s_rest.end(), i) != s_rest.end())
            continue;
          if (!pred_clauses_.count(dclause.body[i].pred)) continue;
          size_t n = covered_by(i).size();
          if (n > best_n) {
            best_n = n;
            best = i;
          }
        }
        if (best == dclause.body.size()) break;
        for (int32_t v : covered_by(best)) remaining.erase(v);
        s_rest.push_back(best);
      }
    }

    struct Pending {
      int32_t id;
      std::vector<int32_t> todo;  // body positions of uncovered unfold points
    };
    std::deque<Pending> phase1;
    std::vector<int32_t> expanded;
    {
      UnfoldOut u0 =
          rule_unfold(rc_, def.clause, static_cast<size_t>(a_idx),
                      pred_clauses_[dclause.body[a_idx].pred], true);
      for (size_t d = 0; d < u0.clauses.size(); ++d) {
        Pending p{u0.clauses[d], {}};
        for (size_t s : s_rest)
          for (size_t j = 0; j < u0.origin[d].size(); ++j)
            if (u0.origin[d][j] == static_cast<int32_t>(s))
              p.todo.push_back(static_cast<int32_t>(j));
        phase1.push_back(std::move(p));
      }
    }
    while (!phase1.empty()) {
      Pending p = std::move(phase1.front());
      phase1.pop_front();
      if (p.todo.empty()) {
        expanded.push_back(p.id);
        continue;
      }
      int32_t pos = p.todo.front();
      const Atom& at = rc_.store.get(p.id).body[pos];
      UnfoldOut u = rule_unfold(rc_, p.id, static_cast<size_t>(pos),
                                pred_clauses_[at.pred], false);
      for (size_t d = 0; d < u.clauses.size(); ++d) {
        Pending next{u.clauses[d], {}};
        for (size_t ti = 1; ti < p.todo.size(); ++ti)
          for (size_t j = 0; j < u.origin[d].size(); ++j)
            if (u.origin[d][j] == p.todo[ti])
              next.todo.push_back(static_cast<int32_t>(j));
        phase1.push_back(std::move(next));
      }
    }

    // Keep unfolding marked or structurally shrinking atoms that every
    // matching head accepts as a plain renaming of their inputs.
    struct Item {
      int32_t id;
      std::vector<bool> marked, desc;
    };
    std::deque<Item> phase2;
    for (int32_t cid : expanded) {
      size_t n = rc_.store.get(cid).body.size();
      phase2.push_back({cid, std::vector<bool>(n, true),
                        std::vector<bool>(n, false)});
    }
    size_t budget = 20000;
    while (!phase2.empty()) {
      Item item = std::move(phase2.front());
      phase2.pop_front();
      const Clause& cur = rc_.store.get(item.id);
      int pick = -1;
      for (size_t i = 0; i < cur.body.size(); ++i) {
        if (!item.marked[i] && !item.desc[i]) continue;
        if (!pred_clauses_.count(cur.body[i].pred)) continue;
        if (head_instance(cur.body[i], clause_ptrs(cur.body[i].pred),
                          rc_.ctx)) {
          pick = static_cast<int>(i);
          break;
        }
      }
      if (pick < 0) {
        rcls.push_back(item.id);
        continue;
      }
      if (budget-- == 0) throw Error("unfolding budget exceeded");
      UnfoldOut u = rule_unfold(rc_, item.id, static_cast<size_t>(pick),
                                pred_clauses_[cur.body[pick].pred], false);
      for (size_t d = 0; d < u.clauses.size(); ++d) {
        Item next{u.clauses[d], {}, {}};
        for (size_t j = 0; j < u.origin[d].size(); ++j) {
          int32_t from = u.origin[d][j];
          next.marked.push_back(from >= 0 ? item.marked[from] : false);
          next.desc.push_back(from >= 0 ? item.desc[from]
                                        : u.descending[d][j]);
        }
        phase2.push_back(std::move(next));
      }
    }
  }
  return true;
}

std::vector<int32_t> Runner::replace_phase(const std::vector<int32_t>& in) {
  std::vector<int32_t> out;
  for (int32_t id : in) {
    bool alive = true;
    for (;;) {
      if (rule_delete_unsat(rc_, id)) {
        alive = false;
        break;
      }
      RewriteOut f = rule_functionality(rc_, id);
      if (f.kind == RewriteOut::Kind::Deleted) {
        alive = false;
        break;
      }
      if (f.kind == RewriteOut::Kind::Rewritten) {
        id = f.clause;
        continue;
      }
      RewriteOut t = rule_totality(rc_, id);
      if (t.kind == RewriteOut::Kind::Rewritten) {
        id = t.clause;
        continue;
      }
      break;
    }
    if (alive) out.push_back(id);
  }
  return out;
}

RunResult Runner::run(const std::vector<int32_t>& goals) {
  RunResult res;
  std::vector<int32_t> incls = goals;
  for (;;) {
    if (incls.empty()) break;
    if (res.iterations == config_.max_iterations) {
      res.status = RunStatus::IterationLimit;
      break;
    }
    ++res.iterations;
    new_defs_.clear();
    std::deque<int32_t> work(incls.begin(), incls.end());
    while (!work.empty()) {
      int32_t id = work.front();
      work.pop_front();
      if (!process(id, work)) {
        res.status = RunStatus::LevelUnsat;
        res.transformed = fld_;
        for (const DefRecord& d : defs) res.defs.push_back(d.clause);
        for (const DefRecord& d : diff_defs) res.diff_defs.push_back(d.clause);
        return res;
      }
    }
    std::vector<int32_t> rcls;
    if (!unfold_definitions(new_defs_, rcls)) {
      res.status = RunStatus::LevelUnsat;
      break;
    }
    incls = replace_phase(rcls);
  }
  res.transformed = fld_;
  for (const DefRecord& d : defs) res.defs.push_back(d.clause);
  for (const DefRecord& d : diff_defs) res.diff_defs.push_back(d.clause);
  return res;
}

}  // namespace

RunResult run_transformation(RuleContext& rc,
                             const std::vector<int32_t>& program,
                             const std::vector<int32_t>& goals,
                             const AlgoConfig& config) {
  Runner runner(rc, program, config);
  return runner.run(goals);
}

}  // namespace chcadt
