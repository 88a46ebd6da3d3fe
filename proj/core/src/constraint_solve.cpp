#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <set>

#include "chcadt/constraint.hpp"

// Decision procedures for constraint conjunctions. Equalities are
// removed by exact pivoting, inequalities by Fourier-Motzkin over the
// rationals, and != atoms by case splits into the two strict sides.
// Feasible systems yield a rational sample point that is then rounded
// and checked to produce an integer witness.

namespace chcadt {

namespace {

using Rational = boost::multiprecision::cpp_rational;

enum class Feas { Feasible, Infeasible, Overflow };

struct Ineq {
  std::map<int32_t, Coeff> coeffs;
  Coeff constant = 0;  // sum <= constant
};

struct Equation {
  std::map<int32_t, Coeff> coeffs;
  Coeff constant = 0;  // sum == constant
};

constexpr size_t kFeasibilityAtomCap = 8192;

// One elimination record, for reconstructing a sample point backwards.
struct Elimination {
  bool by_pivot = false;
  int32_t var = -1;
  // Pivot case: var = (constant - sum coeffs*others) / divisor.
  std::map<int32_t, Coeff> pivot_coeffs;
  Coeff pivot_constant = 0;
  Coeff divisor = 1;
  // Fourier-Motzkin case: the inequalities that mentioned var.
  std::vector<Ineq> bounds;
};

bool ineq_ground_false(const Ineq& q) {
  return q.coeffs.empty() && q.constant < 0;
}

void drop_zero(std::map<int32_t, Coeff>& m) {
  for (auto it = m.begin(); it != m.end();) {
    if (it->second == 0)
      it = m.erase(it);
    else
      ++it;
  }
}

// Replaces x throughout using the equation eq (which must mention x).
// For an inequality q with coefficient b on x, the result is
// |a| * q - sign(a) * b * eq, which cancels x and preserves <=.
class Pivot {
public:
  Pivot(const Equation& eq, int32_t x) : x_(x) {
    Coeff a = eq.coeffs.at(x);
    sign_ = a > 0 ? 1 : -1;
    mag_ = a > 0 ? a : Coeff(-a);
    eq_ = eq;
  }

  void substitute(std::map<int32_t, Coeff>& coeffs, Coeff& constant) const {
    auto it = coeffs.find(x_);
    if (it == coeffs.end()) return;
    Coeff b = it->second;
    coeffs.erase(it);
    for (auto& [v, c] : coeffs) c *= mag_;
    constant *= mag_;
    Coeff scale = Coeff(sign_) * b;
    for (const auto& [v, c] : eq_.coeffs) {
      if (v == x_) continue;
      coeffs[v] -= scale * c;
    }
    constant -= scale * eq_.constant;
    drop_zero(coeffs);
  }

  Elimination record() const {
    Elimination e;
    e.by_pivot = true;
    e.var = x_;
    e.divisor = eq_.coeffs.at(x_);
    e.pivot_constant = eq_.constant;
    for (const auto& [v, c] : eq_.coeffs)
      if (v != x_) e.pivot_coeffs[v] = c;
    return e;
  }

private:
  int32_t x_;
  int sign_;
  Coeff mag_;
  Equation eq_;
};

std::set<int32_t> system_vars(const std::vector<Ineq>& les,
                              const std::vector<Equation>& eqs) {
  std::set<int32_t> vs;
  for (const Ineq& q : les)
    for (const auto& [v, c] : q.coeffs) vs.insert(v);
  for (const Equation& e : eqs)
    for (const auto& [v, c] : e.coeffs) vs.insert(v);
  return vs;
}

// Eliminates every variable, recording enough to rebuild a sample
// point. Returns Infeasible only on an exact rational refutation.
Feas eliminate_all(std::vector<Ineq> les, std::vector<Equation> eqs,
                   std::vector<Elimination>* trail) {
  // Equalities first: exact pivoting.
  while (!eqs.empty()) {
    Equation eq = std::move(eqs.back());
    eqs.pop_back();
    drop_zero(eq.coeffs);
    if (eq.coeffs.empty()) {
      if (eq.constant != 0) return Feas::Infeasible;
      continue;
    }
    // Prefer a unit coefficient to keep numbers small.
    int32_t x = eq.coeffs.begin()->first;
    for (const auto& [v, c] : eq.coeffs) {
      if (c == 1 || c == -1) {
        x = v;
        break;
      }
    }
    Pivot pivot(eq, x);
    for (Equation& e : eqs) {
      pivot.substitute(e.coeffs, e.constant);
    }
    for (auto it = les.begin(); it != les.end();) {
      pivot.substitute(it->coeffs, it->constant);
      if (it->coeffs.empty()) {
        if (it->constant < 0) return Feas::Infeasible;
        it = les.erase(it);
      } else {
        ++it;
      }
    }
    if (trail) trail->push_back(pivot.record());
  }

  // Fourier-Motzkin on the remaining inequalities.
  std::set<int32_t> vars = system_vars(les, {});
  while (!vars.empty()) {
    // Cheapest variable first: fewest upper*lower combinations.
    int32_t best = -1;
    size_t best_cost = SIZE_MAX;
    for (int32_t v : vars) {
      size_t ups = 0, los = 0;
      for (const Ineq& q : les) {
        auto it = q.coeffs.find(v);
        if (it == q.coeffs.end()) continue;
        (it->second > 0 ? ups : los) += 1;
      }
      size_t cost = ups * los;
      if (cost < best_cost) {
        best_cost = cost;
        best = v;
      }
    }
    int32_t x = best;
    vars.erase(x);

    std::vector<Ineq> ups, los, rest;
    for (Ineq& q : les) {
      auto it = q.coeffs.find(x);
      if (it == q.coeffs.end())
        rest.push_back(std::move(q));
      else if (it->second > 0)
        ups.push_back(std::move(q));
      else
        los.push_back(std::move(q));
    }
    if (rest.size() + ups.size() * los.size() > kFeasibilityAtomCap)
      return Feas::Overflow;
    if (trail) {
      Elimination e;
      e.var = x;
      e.bounds = ups;
      e.bounds.insert(e.bounds.end(), los.begin(), los.end());
      trail->push_back(std::move(e));
    }
    les = std::move(rest);
    for (const Ineq& u : ups) {
      Coeff a = u.coeffs.at(x);
      for (const Ineq& l : los) {
        Coeff b = -l.coeffs.at(x);
        Ineq combined;
        combined.constant = b * u.constant + a * l.constant;
        for (const auto& [v, c] : u.coeffs)
          if (v != x) combined.coeffs[v] += b * c;
        for (const auto& [v, c] : l.coeffs)
          if (v != x) combined.coeffs[v] += a * c;
        drop_zero(combined.coeffs);
        if (combined.coeffs.empty()) {
          if (combined.constant < 0) return Feas::Infeasible;
        } else {
          les.push_back(std::move(combined));
        }
      }
    }
  }
  for (const Ineq& q : les)
    if (ineq_ground_false(q)) return Feas::Infeasible;
  return Feas::Feasible;
}

Rational eval_linear(const std::map<int32_t, Coeff>& coeffs,
                     const std::map<int32_t, Rational>& point) {
  Rational sum = 0;
  for (const auto& [v, c] : coeffs) {
    auto it = point.find(v);
    if (it != point.end()) sum += Rational(c) * it->second;
  }
  return sum;
}

Rational floor_r(const Rational& r) {
  Coeff n = numerator(r), d = denominator(r);
  Coeff q = n / d;
  if (n % d != 0 && (n < 0) != (d < 0)) q -= 1;
  return Rational(q);
}

// Walks the elimination trail backwards, assigning each variable a
// value inside its feasible interval, integral when possible.
std::map<int32_t, Rational> sample_point(
    const std::vector<Elimination>& trail) {
  std::map<int32_t, Rational> point;
  for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
    const Elimination& e = *it;
    if (e.by_pivot) {
      Rational sum = eval_linear(e.pivot_coeffs, point);
      point[e.var] = (Rational(e.pivot_constant) - sum) / Rational(e.divisor);
      continue;
    }
    bool has_lo = false, has_hi = false;
    Rational lo = 0, hi = 0;
    for (const Ineq& q : e.bounds) {
      Coeff a = q.coeffs.at(e.var);
      std::map<int32_t, Coeff> others = q.coeffs;
      others.erase(e.var);
      Rational bound =
          (Rational(q.constant) - eval_linear(others, point)) / Rational(a);
      if (a > 0) {
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      } else {
        if (!has_lo || bound > lo) lo = bound;
        has_lo = true;
      }
    }
    Rational value = 0;
    if (has_lo && has_hi) {
      Rational lo_int = -floor_r(-lo);  // ceiling
      value = lo_int <= hi ? lo_int : (lo + hi) / 2;
    } else if (has_lo) {
      value = -floor_r(-lo);
    } else if (has_hi) {
      value = floor_r(hi);
    }
    point[e.var] = value;
  }
  return point;
}

struct Branch {
  std::vector<Ineq> les;
  std::vector<Equation> eqs;
};

Ineq to_ineq(const LinearAtom& a) {
  Ineq q;
  q.coeffs = a.coeffs;
  q.constant = a.constant;
  return q;
}

Equation to_eq(const LinearAtom& a) {
  Equation e;
  e.coeffs = a.coeffs;
  e.constant = a.constant;
  return e;
}

Ineq ne_side(const LinearAtom& a, bool upper) {
  // upper: sum <= k-1, lower: -sum <= -k-1 (both strict over Z).
  Ineq q;
  if (upper) {
    q.coeffs = a.coeffs;
    q.constant = a.constant - 1;
  } else {
    for (const auto& [v, c] : a.coeffs) q.coeffs[v] = -c;
    q.constant = -a.constant - 1;
  }
  return q;
}

// Enumerates the != case splits of c (plus extra atoms) and calls fn
// with each branch. fn returns false to stop early. Returns false if
// the split count exceeds the limit (fn is then never called).
template <typename Fn>
bool for_each_branch(const Constraint& c, const std::vector<LinearAtom>& extra,
                     const SolveLimits& limits, Fn&& fn) {
  std::vector<const LinearAtom*> nes;
  Branch base;
  auto sort_atom = [&](const LinearAtom& a) {
    switch (a.rel) {
      case LinearAtom::Rel::Le:
        base.les.push_back(to_ineq(a));
        break;
      case LinearAtom::Rel::Eq:
        base.eqs.push_back(to_eq(a));
        break;
      case LinearAtom::Rel::Ne:
        nes.push_back(&a);
        break;
    }
  };
  for (const LinearAtom& a : c.atoms()) sort_atom(a);
  for (const LinearAtom& a : extra) sort_atom(a);
  if (nes.size() >= 63 || (size_t(1) << nes.size()) > limits.branch_limit)
    return false;
  size_t n = size_t(1) << nes.size();
  for (size_t mask = 0; mask < n; ++mask) {
    Branch b = base;
    for (size_t i = 0; i < nes.size(); ++i)
      b.les.push_back(ne_side(*nes[i], (mask >> i) & 1));
    if (!fn(b)) return true;
  }
  return true;
}

std::map<int32_t, bool> bool_model_of(const Constraint& c) {
  std::map<int32_t, bool> m;
  for (const BoolLit& l : c.bools()) m[l.var] = l.positive;
  return m;
}

// Tries rounding combinations of a rational sample point until one
// satisfies c as a whole.
std::optional<std::map<int32_t, Coeff>> round_to_witness(
    const Constraint& c, const std::map<int32_t, Rational>& point,
    const SolveLimits& limits) {
  std::vector<int32_t> fractional;
  std::map<int32_t, Coeff> base;
  for (const auto& [v, r] : point) {
    if (denominator(r) == 1) {
      base[v] = numerator(r);
    } else {
      fractional.push_back(v);
    }
  }
  size_t combos = fractional.size() >= 63
                      ? limits.rounding_limit + 1
                      : size_t(1) << fractional.size();
  std::map<int32_t, bool> bools = bool_model_of(c);
  if (combos > limits.rounding_limit) combos = limits.rounding_limit;
  for (size_t mask = 0; mask < std::max<size_t>(combos, 1); ++mask) {
    std::map<int32_t, Coeff> model = base;
    for (size_t i = 0; i < fractional.size(); ++i) {
      Rational r = point.at(fractional[i]);
      Rational f = floor_r(r);
      model[fractional[i]] =
          numerator((mask >> i) & 1 ? f + 1 : f);
    }
    if (evaluate(c, model, bools)) return model;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::map<int32_t, Coeff>> integer_witness(
    const Constraint& c, const SolveLimits& limits) {
  if (c.is_bottom()) return std::nullopt;
  std::optional<std::map<int32_t, Coeff>> found;
  for_each_branch(c, {}, limits, [&](const Branch& b) {
    std::vector<Elimination> trail;
    if (eliminate_all(b.les, b.eqs, &trail) != Feas::Feasible) return true;
    auto witness = round_to_witness(c, sample_point(trail), limits);
    if (witness) {
      found = std::move(witness);
      return false;
    }
    return true;
  });
  return found;
}

Sat3 is_satisfiable(const Constraint& c, const SolveLimits& limits) {
  if (c.is_bottom()) return Sat3::Unsat;
  if (c.is_top()) return Sat3::Sat;
  bool all_refuted = true;
  bool stopped_early = false;
  bool enumerated = for_each_branch(c, {}, limits, [&](const Branch& b) {
    std::vector<Elimination> trail;
    Feas feas = eliminate_all(b.les, b.eqs, &trail);
    if (feas == Feas::Infeasible) return true;
    all_refuted = false;
    if (feas == Feas::Overflow) return true;
    if (round_to_witness(c, sample_point(trail), limits)) {
      stopped_early = true;
      return false;
    }
    return true;
  });
  if (!enumerated) {
    // Too many splits; try for a witness of the split-free relaxation.
    Constraint relaxed;
    for (const LinearAtom& a : c.atoms())
      if (a.rel != LinearAtom::Rel::Ne) relaxed.add(a);
    for (const BoolLit& l : c.bools()) relaxed.add(l);
    auto witness = integer_witness(relaxed, limits);
    if (witness && evaluate(c, *witness, bool_model_of(c))) return Sat3::Sat;
    return Sat3::Unknown;
  }
  if (stopped_early) return Sat3::Sat;
  return all_refuted ? Sat3::Unsat : Sat3::Unknown;
}

namespace {

// True only if c plus the extra atoms is rationally unsatisfiable,
// established exactly on every != branch.
bool refuted(const Constraint& c, const std::vector<LinearAtom>& extra,
             const SolveLimits& limits) {
  if (c.is_bottom()) return true;
  for (const LinearAtom& a : extra) {
    LinearAtom n = a;
    n.normalize();
    if (n.coeffs.empty() && !n.ground_value()) return true;
  }
  bool all = true;
  bool enumerated = for_each_branch(c, extra, limits, [&](const Branch& b) {
    if (eliminate_all(b.les, b.eqs, nullptr) != Feas::Infeasible) {
      all = false;
      return false;
    }
    return true;
  });
  return enumerated && all;
}

LinearAtom negated_le(const LinearAtom& a) {
  // not(sum <= k) is sum >= k+1 over the integers.
  LinearAtom n;
  n.rel = LinearAtom::Rel::Le;
  for (const auto& [v, c] : a.coeffs) n.coeffs[v] = -c;
  n.constant = -a.constant - 1;
  return n;
}

bool entails_atom(const Constraint& c, const LinearAtom& a,
                  const SolveLimits& limits) {
  switch (a.rel) {
    case LinearAtom::Rel::Le:
      return refuted(c, {negated_le(a)}, limits);
    case LinearAtom::Rel::Eq: {
      LinearAtom le;
      le.rel = LinearAtom::Rel::Le;
      le.coeffs = a.coeffs;
      le.constant = a.constant;
      LinearAtom below;  // sum <= k-1, the violation of sum >= k
      below.rel = LinearAtom::Rel::Le;
      below.coeffs = a.coeffs;
      below.constant = a.constant - 1;
      return refuted(c, {negated_le(le)}, limits) &&
             refuted(c, {below}, limits);
    }
    case LinearAtom::Rel::Ne: {
      LinearAtom eq = a;
      eq.rel = LinearAtom::Rel::Eq;
      return refuted(c, {eq}, limits);
    }
  }
  return false;
}

}  // namespace

bool entails(const Constraint& c, const Constraint& d,
             const SolveLimits& limits) {
  if (c.is_bottom()) return true;
  if (d.is_bottom()) return refuted(c, {}, limits);
  for (const BoolLit& l : d.bools()) {
    bool have = false;
    for (const BoolLit& own : c.bools())
      if (own == l) have = true;
    if (!have) return false;
  }
  for (const LinearAtom& a : d.atoms())
    if (!entails_atom(c, a, limits)) return false;
  return true;
}

Constraint project(const Constraint& c, const std::vector<int32_t>& keep,
                   const SolveLimits& limits) {
  if (c.is_bottom()) return Constraint::bottom();
  std::set<int32_t> kept(keep.begin(), keep.end());

  std::vector<Ineq> les;
  std::vector<Equation> eqs;
  std::vector<LinearAtom> nes;
  for (const LinearAtom& a : c.atoms()) {
    switch (a.rel) {
      case LinearAtom::Rel::Le:
        les.push_back(to_ineq(a));
        break;
      case LinearAtom::Rel::Eq:
        eqs.push_back(to_eq(a));
        break;
      case LinearAtom::Rel::Ne:
        nes.push_back(a);
        break;
    }
  }

  std::set<int32_t> elim;
  for (int32_t v : system_vars(les, eqs))
    if (!kept.count(v)) elim.insert(v);
  for (const LinearAtom& a : nes)
    for (const auto& [v, coeff] : a.coeffs)
      if (!kept.count(v)) elim.insert(v);

  bool contradictory = false;
  while (!elim.empty() && !contradictory) {
    // Equality pivots are exact; use them first.
    int32_t x = -1;
    const Equation* via = nullptr;
    for (const Equation& e : eqs) {
      for (const auto& [v, coeff] : e.coeffs) {
        if (elim.count(v)) {
          x = v;
          via = &e;
          break;
        }
      }
      if (via) break;
    }
    if (via) {
      Equation eq = *via;
      eqs.erase(eqs.begin() + (via - eqs.data()));
      Pivot pivot(eq, x);
      for (Equation& e : eqs) pivot.substitute(e.coeffs, e.constant);
      for (auto it = les.begin(); it != les.end();) {
        pivot.substitute(it->coeffs, it->constant);
        if (it->coeffs.empty()) {
          if (it->constant < 0) contradictory = true;
          it = les.erase(it);
        } else {
          ++it;
        }
      }
      for (auto it = nes.begin(); it != nes.end();) {
        pivot.substitute(it->coeffs, it->constant);
        if (it->coeffs.empty()) {
          if (!it->ground_value()) contradictory = true;
          it = nes.erase(it);
        } else {
          ++it;
        }
      }
      elim.erase(x);
      continue;
    }

    x = *elim.begin();
    elim.erase(elim.begin());
    // != atoms cannot be combined; dropping them only weakens.
    for (auto it = nes.begin(); it != nes.end();)
      it = it->mentions(x) ? nes.erase(it) : std::next(it);

    std::vector<Ineq> ups, los, rest;
    for (Ineq& q : les) {
      auto it = q.coeffs.find(x);
      if (it == q.coeffs.end())
        rest.push_back(std::move(q));
      else if (it->second > 0)
        ups.push_back(std::move(q));
      else
        los.push_back(std::move(q));
    }
    les = std::move(rest);
    if (ups.size() * los.size() > limits.projection_ceiling) continue;
    for (const Ineq& u : ups) {
      Coeff a = u.coeffs.at(x);
      for (const Ineq& l : los) {
        Coeff b = -l.coeffs.at(x);
        Ineq combined;
        combined.constant = b * u.constant + a * l.constant;
        for (const auto& [v, coeff] : u.coeffs)
          if (v != x) combined.coeffs[v] += b * coeff;
        for (const auto& [v, coeff] : l.coeffs)
          if (v != x) combined.coeffs[v] += a * coeff;
        drop_zero(combined.coeffs);
        if (combined.coeffs.empty()) {
          if (combined.constant < 0) contradictory = true;
        } else {
          les.push_back(std::move(combined));
        }
      }
    }
  }

  if (contradictory) return Constraint::bottom();
  Constraint out;
  for (const Equation& e : eqs) {
    LinearAtom a;
    a.rel = LinearAtom::Rel::Eq;
    a.coeffs = e.coeffs;
    a.constant = e.constant;
    out.add(std::move(a));
  }
  for (const Ineq& q : les) {
    LinearAtom a;
    a.rel = LinearAtom::Rel::Le;
    a.coeffs = q.coeffs;
    a.constant = q.constant;
    out.add(std::move(a));
  }
  for (LinearAtom& a : nes) out.add(std::move(a));
  for (const BoolLit& l : c.bools())
    if (kept.count(l.var)) out.add(l);
  return out;
}

Constraint widen(const Constraint& c1, const Constraint& c2,
                 const SolveLimits& limits) {
  if (c1.is_bottom()) return c2;
  Constraint out;
  for (const LinearAtom& a : c1.atoms()) {
    if (a.rel == LinearAtom::Rel::Eq) {
      LinearAtom le;
      le.rel = LinearAtom::Rel::Le;
      le.coeffs = a.coeffs;
      le.constant = a.constant;
      LinearAtom ge;
      ge.rel = LinearAtom::Rel::Le;
      for (const auto& [v, c] : a.coeffs) ge.coeffs[v] = -c;
      ge.constant = -a.constant;
      if (entails_atom(c2, le, limits)) out.add(le);
      if (entails_atom(c2, ge, limits)) out.add(ge);
    } else if (entails_atom(c2, a, limits)) {
      out.add(a);
    }
  }
  for (const BoolLit& l : c1.bools()) {
    if (c2.is_bottom()) {
      out.add(l);
      continue;
    }
    for (const BoolLit& have : c2.bools())
      if (have == l) out.add(l);
  }
  return out;
}

}  // namespace chcadt
