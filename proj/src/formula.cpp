#include "acyclify/formula.hpp"

#include <cassert>
#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace acyclify {

bool Var::isGenerated() const {
  if (name_.size() < 3 || name_.compare(0, 2, "_g") != 0) return false;
  for (std::size_t i = 2; i < name_.size(); ++i)
    if (name_[i] < '0' || name_[i] > '9') return false;
  return true;
}

const char* opName(Op op) {
  switch (op) {
    case Op::Mem: return "mem";
    case Op::Eq: return "eq";
    case Op::EqConst: return "eqconst";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "implies";
    case Op::Exists: return "exists";
    case Op::Forall: return "forall";
  }
  return "?";
}

Formula Formula::make(Op op, Var a, Var b, const Formula* l, const Formula* r) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->first = std::move(a);
  node->second = std::move(b);
  if (l) node->left = l->node_;
  if (r) node->right = r->node_;
  return Formula(std::move(node));
}

Formula Formula::mem(Var lhs, Var rhs) { return make(Op::Mem, std::move(lhs), std::move(rhs), nullptr, nullptr); }
Formula Formula::eq(Var lhs, Var rhs) { return make(Op::Eq, std::move(lhs), std::move(rhs), nullptr, nullptr); }
Formula Formula::eqConst(Var lhs) { return make(Op::EqConst, std::move(lhs), Var("0"), nullptr, nullptr); }
Formula Formula::negate(Formula body) { return make(Op::Not, {}, {}, &body, nullptr); }
Formula Formula::conj(Formula lhs, Formula rhs) { return make(Op::And, {}, {}, &lhs, &rhs); }
Formula Formula::disj(Formula lhs, Formula rhs) { return make(Op::Or, {}, {}, &lhs, &rhs); }
Formula Formula::implies(Formula lhs, Formula rhs) { return make(Op::Implies, {}, {}, &lhs, &rhs); }
Formula Formula::exists(Var var, Formula body) { return make(Op::Exists, std::move(var), {}, &body, nullptr); }
Formula Formula::forall(Var var, Formula body) { return make(Op::Forall, std::move(var), {}, &body, nullptr); }

Formula Formula::conjAll(std::span<const Formula> parts) {
  if (parts.empty()) throw std::invalid_argument("conjAll of no formulas");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Formula Formula::disjAll(std::span<const Formula> parts) {
  if (parts.empty()) throw std::invalid_argument("disjAll of no formulas");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

Formula Formula::existsAll(std::span<const Var> vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, body);
  return body;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Mem:
    case Op::Eq:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Op::EqConst:
      return a.lhs() == b.lhs();
    case Op::Not:
      return a.body() == b.body();
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return a.left() == b.left() && a.right() == b.right();
    case Op::Exists:
    case Op::Forall:
      return a.var() == b.var() && a.body() == b.body();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Fresh names

Var FreshNames::next() { return Var("_g" + std::to_string(next_++)); }

FreshNames FreshNames::after(const Formula& f) {
  unsigned highest = 0;
  for (const Var& v : allVars(f)) {
    if (!v.isGenerated()) continue;
    unsigned n = 0;
    const std::string& s = v.name();
    std::from_chars(s.data() + 2, s.data() + s.size(), n);
    highest = std::max(highest, n);
  }
  return FreshNames(highest + 1);
}

// ---------------------------------------------------------------------------
// Rendering
//
// Levels: quantifier 0, implication 1, disjunction 2, conjunction 3,
// negation 4, atom 5. A quantifier extends as far right as possible, so it
// can only be written bare when nothing follows it inside the current group.

namespace {

int level(Op op) {
  switch (op) {
    case Op::Exists:
    case Op::Forall: return 0;
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    default: return 5;
  }
}

void emit(const Formula& f, int ctx, bool tail, std::string& out) {
  const bool paren = f.isQuantifier() ? !tail : level(f.op()) < ctx;
  if (paren) {
    out += '(';
    ctx = 0;
    tail = true;
  }
  switch (f.op()) {
    case Op::Mem:
      out += f.lhs().name() + " in " + f.rhs().name();
      break;
    case Op::Eq:
      out += f.lhs().name() + " = " + f.rhs().name();
      break;
    case Op::EqConst:
      out += f.lhs().name() + " = 0";
      break;
    case Op::Not: {
      out += '~';
      const Formula b = f.body();
      if (b.op() == Op::Not) {
        emit(b, 4, tail, out);
      } else {
        out += '(';
        emit(b, 0, true, out);
        out += ')';
      }
      break;
    }
    case Op::And:
      emit(f.left(), 3, false, out);
      out += " & ";
      emit(f.right(), 4, tail, out);
      break;
    case Op::Or:
      emit(f.left(), 2, false, out);
      out += " | ";
      emit(f.right(), 3, tail, out);
      break;
    case Op::Implies:
      emit(f.left(), 2, false, out);
      out += " -> ";
      emit(f.right(), 0, tail, out);
      break;
    case Op::Exists:
    case Op::Forall:
      out += f.op() == Op::Exists ? "E " : "A ";
      out += f.var().name();
      out += ". ";
      emit(f.body(), 0, tail, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  emit(f, 0, true, out);
  return out;
}

// ---------------------------------------------------------------------------
// Variable queries

namespace {

template <typename Visit>
void walkVars(const Formula& f, std::vector<Var>& bound, Visit&& visit) {
  switch (f.op()) {
    case Op::Mem:
    case Op::Eq:
      visit(f.lhs(), bound, false);
      visit(f.rhs(), bound, false);
      return;
    case Op::EqConst:
      visit(f.lhs(), bound, false);
      return;
    case Op::Not:
      walkVars(f.body(), bound, visit);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      walkVars(f.left(), bound, visit);
      walkVars(f.right(), bound, visit);
      return;
    case Op::Exists:
    case Op::Forall:
      visit(f.var(), bound, true);
      bound.push_back(f.var());
      walkVars(f.body(), bound, visit);
      bound.pop_back();
      return;
  }
}

bool isBound(const std::vector<Var>& bound, const Var& v) {
  for (auto it = bound.rbegin(); it != bound.rend(); ++it)
    if (*it == v) return true;
  return false;
}

}  // namespace

std::vector<Var> freeVars(const Formula& f) {
  std::vector<Var> out;
  std::unordered_set<Var> seen;
  std::vector<Var> bound;
  walkVars(f, bound, [&](const Var& v, const std::vector<Var>& b, bool binder) {
    if (binder || isBound(b, v)) return;
    if (seen.insert(v).second) out.push_back(v);
  });
  return out;
}

std::vector<Var> allVars(const Formula& f) {
  std::vector<Var> out;
  std::unordered_set<Var> seen;
  std::vector<Var> bound;
  walkVars(f, bound, [&](const Var& v, const std::vector<Var>&, bool) {
    if (seen.insert(v).second) out.push_back(v);
  });
  return out;
}

std::size_t atomCount(const Formula& f) {
  switch (f.op()) {
    case Op::Mem:
    case Op::Eq:
    case Op::EqConst: return 1;
    case Op::Not:
    case Op::Exists:
    case Op::Forall: return atomCount(f.body());
    default: return atomCount(f.left()) + atomCount(f.right());
  }
}

std::size_t quantifierCount(const Formula& f) {
  switch (f.op()) {
    case Op::Mem:
    case Op::Eq:
    case Op::EqConst: return 0;
    case Op::Not: return quantifierCount(f.body());
    case Op::Exists:
    case Op::Forall: return 1 + quantifierCount(f.body());
    default: return quantifierCount(f.left()) + quantifierCount(f.right());
  }
}

bool hasQuantifier(const Formula& f) { return quantifierCount(f) > 0; }

bool usesConstant(const Formula& f) {
  switch (f.op()) {
    case Op::EqConst: return true;
    case Op::Mem:
    case Op::Eq: return false;
    case Op::Not:
    case Op::Exists:
    case Op::Forall: return usesConstant(f.body());
    default: return usesConstant(f.left()) || usesConstant(f.right());
  }
}

bool isRectified(const Formula& f) {
  std::unordered_set<Var> binders;
  bool ok = true;
  std::vector<Var> bound;
  walkVars(f, bound, [&](const Var& v, const std::vector<Var>&, bool binder) {
    if (binder && !binders.insert(v).second) ok = false;
  });
  if (!ok) return false;
  for (const Var& v : freeVars(f))
    if (binders.count(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rectification

namespace {

class Rectifier {
 public:
  Rectifier(const Formula& f, FreshNames& fresh) : fresh_(fresh) {
    for (const Var& v : freeVars(f)) used_.insert(v);
  }

  Formula run(const Formula& f) {
    switch (f.op()) {
      case Op::Mem: return Formula::mem(lookup(f.lhs()), lookup(f.rhs()));
      case Op::Eq: return Formula::eq(lookup(f.lhs()), lookup(f.rhs()));
      case Op::EqConst: return Formula::eqConst(lookup(f.lhs()));
      case Op::Not: return Formula::negate(run(f.body()));
      case Op::And: return Formula::conj(run(f.left()), run(f.right()));
      case Op::Or: return Formula::disj(run(f.left()), run(f.right()));
      case Op::Implies: {
        Formula l = run(f.left());
        return Formula::implies(std::move(l), run(f.right()));
      }
      case Op::Exists:
      case Op::Forall: {
        Var name = f.var();
        if (!used_.insert(name).second) {
          do {
            name = fresh_.next();
          } while (!used_.insert(name).second);
        }
        scope_.emplace_back(f.var(), name);
        Formula body = run(f.body());
        scope_.pop_back();
        return f.op() == Op::Exists ? Formula::exists(name, body) : Formula::forall(name, body);
      }
    }
    return f;
  }

 private:
  Var lookup(const Var& v) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == v) return it->second;
    return v;
  }

  FreshNames& fresh_;
  std::unordered_set<Var> used_;
  std::vector<std::pair<Var, Var>> scope_;
};

}  // namespace

Formula rectify(const Formula& f, FreshNames& fresh) {
  if (isRectified(f)) return f;
  Rectifier r(f, fresh);
  return r.run(f);
}

Formula rectify(const Formula& f) {
  FreshNames fresh = FreshNames::after(f);
  return rectify(f, fresh);
}

}  // namespace acyclify
