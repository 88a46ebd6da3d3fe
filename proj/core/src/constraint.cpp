#include "chcadt/constraint.hpp"

#include <algorithm>

namespace chcadt {

namespace {

Coeff gcd(Coeff a, Coeff b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Coeff t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

void LinearAtom::normalize() {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->second == 0)
      it = coeffs.erase(it);
    else
      ++it;
  }
  if (coeffs.empty()) return;
  Coeff g = constant;
  for (const auto& [v, c] : coeffs) g = gcd(g, c);
  if (g > 1) {
    for (auto& [v, c] : coeffs) c /= g;
    constant /= g;
  }
  if (rel != Rel::Le && coeffs.begin()->second < 0) {
    for (auto& [v, c] : coeffs) c = -c;
    constant = -constant;
  }
}

bool LinearAtom::ground_value() const {
  switch (rel) {
    case Rel::Le:
      return constant >= 0;
    case Rel::Eq:
      return constant == 0;
    case Rel::Ne:
      return constant != 0;
  }
  return false;
}

std::strong_ordering operator<=>(const LinearAtom& a, const LinearAtom& b) {
  if (a.rel != b.rel) return a.rel <=> b.rel;
  if (a.constant != b.constant)
    return a.constant < b.constant ? std::strong_ordering::less
                                   : std::strong_ordering::greater;
  auto ai = a.coeffs.begin(), bi = b.coeffs.begin();
  for (; ai != a.coeffs.end() && bi != b.coeffs.end(); ++ai, ++bi) {
    if (ai->first != bi->first) return ai->first <=> bi->first;
    if (ai->second != bi->second)
      return ai->second < bi->second ? std::strong_ordering::less
                                     : std::strong_ordering::greater;
  }
  if (ai != a.coeffs.end()) return std::strong_ordering::greater;
  if (bi != b.coeffs.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

LinearExpr LinearExpr::variable(int32_t v) {
  LinearExpr e;
  e.coeffs[v] = 1;
  return e;
}

LinearExpr LinearExpr::literal(Coeff k) {
  LinearExpr e;
  e.constant = std::move(k);
  return e;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& o) {
  for (const auto& [v, c] : o.coeffs) coeffs[v] += c;
  constant += o.constant;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& o) {
  for (const auto& [v, c] : o.coeffs) coeffs[v] -= c;
  constant -= o.constant;
  return *this;
}

LinearExpr& LinearExpr::operator*=(const Coeff& k) {
  for (auto& [v, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

LinearAtom make_atom(CmpOp op, const LinearExpr& lhs, const LinearExpr& rhs) {
  LinearExpr diff = lhs;
  diff -= rhs;
  LinearAtom a;
  bool flip = op == CmpOp::Ge || op == CmpOp::Gt;
  a.coeffs = diff.coeffs;
  if (flip)
    for (auto& [v, c] : a.coeffs) c = -c;
  a.constant = flip ? diff.constant : -diff.constant;
  switch (op) {
    case CmpOp::Eq:
      a.rel = LinearAtom::Rel::Eq;
      break;
    case CmpOp::Ne:
      a.rel = LinearAtom::Rel::Ne;
      break;
    case CmpOp::Le:
    case CmpOp::Ge:
      a.rel = LinearAtom::Rel::Le;
      break;
    case CmpOp::Lt:
    case CmpOp::Gt:
      a.rel = LinearAtom::Rel::Le;
      a.constant -= 1;
      break;
  }
  a.normalize();
  return a;
}

void Constraint::add(LinearAtom a) {
  if (bottom_) return;
  a.normalize();
  if (a.coeffs.empty()) {
    if (!a.ground_value()) *this = bottom();
    return;
  }
  if (std::find(atoms_.begin(), atoms_.end(), a) != atoms_.end()) return;
  atoms_.push_back(std::move(a));
}

void Constraint::add(BoolLit l) {
  if (bottom_) return;
  for (const BoolLit& have : bools_) {
    if (have.var == l.var) {
      if (have.positive != l.positive) *this = bottom();
      return;
    }
  }
  bools_.push_back(l);
}

void Constraint::conjoin(const Constraint& o) {
  if (bottom_) return;
  if (o.bottom_) {
    *this = bottom();
    return;
  }
  for (const LinearAtom& a : o.atoms_) add(a);
  for (const BoolLit& l : o.bools_) add(l);
}

std::vector<int32_t> Constraint::vars() const {
  std::vector<int32_t> out;
  for (const LinearAtom& a : atoms_)
    for (const auto& [v, c] : a.coeffs) out.push_back(v);
  for (const BoolLit& l : bools_) out.push_back(l.var);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Constraint::mentions(int32_t v) const {
  for (const LinearAtom& a : atoms_)
    if (a.mentions(v)) return true;
  for (const BoolLit& l : bools_)
    if (l.var == v) return true;
  return false;
}

Constraint Constraint::renamed(const std::map<int32_t, int32_t>& ren) const {
  if (bottom_) return bottom();
  Constraint out;
  for (const LinearAtom& a : atoms_) {
    LinearAtom r;
    r.rel = a.rel;
    r.constant = a.constant;
    for (const auto& [v, c] : a.coeffs) {
      auto it = ren.find(v);
      r.coeffs[it == ren.end() ? v : it->second] += c;
    }
    out.add(std::move(r));
  }
  for (const BoolLit& l : bools_) {
    auto it = ren.find(l.var);
    out.add(BoolLit{it == ren.end() ? l.var : it->second, l.positive});
  }
  return out;
}

bool Constraint::same_atoms(const Constraint& o) const {
  if (bottom_ != o.bottom_) return false;
  if (bottom_) return true;
  auto a = atoms_;
  auto b = o.atoms_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return false;
  auto x = bools_;
  auto y = o.bools_;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

bool evaluate(const Constraint& c, const std::map<int32_t, Coeff>& model,
              const std::map<int32_t, bool>& bool_model) {
  if (c.is_bottom()) return false;
  for (const LinearAtom& a : c.atoms()) {
    Coeff sum = 0;
    for (const auto& [v, coeff] : a.coeffs) {
      auto it = model.find(v);
      if (it != model.end()) sum += coeff * it->second;
    }
    switch (a.rel) {
      case LinearAtom::Rel::Le:
        if (!(sum <= a.constant)) return false;
        break;
      case LinearAtom::Rel::Eq:
        if (!(sum == a.constant)) return false;
        break;
      case LinearAtom::Rel::Ne:
        if (!(sum != a.constant)) return false;
        break;
    }
  }
  for (const BoolLit& l : c.bools()) {
    auto it = bool_model.find(l.var);
    bool val = it != bool_model.end() && it->second;
    if (val != l.positive) return false;
  }
  return true;
}

}  // namespace chcadt
