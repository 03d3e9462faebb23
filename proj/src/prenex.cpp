#include "acyclify/analysis.hpp"

namespace acyclify {

namespace {

using Prefix = std::vector<std::pair<Quantifier, Var>>;

Quantifier dual(Quantifier q) { return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists; }

void appendFlipped(Prefix& out, const Prefix& in) {
  for (const auto& [q, v] : in) out.emplace_back(dual(q), v);
}

PrenexForm pull(const Formula& f) {
  switch (f.op()) {
    case Op::Mem:
    case Op::Eq:
    case Op::EqConst:
      return {{}, f};
    case Op::Not: {
      PrenexForm inner = pull(f.body());
      Prefix prefix;
      appendFlipped(prefix, inner.prefix);
      return {std::move(prefix), Formula::negate(inner.matrix)};
    }
    case Op::And:
    case Op::Or: {
      PrenexForm l = pull(f.left());
      PrenexForm r = pull(f.right());
      Prefix prefix = std::move(l.prefix);
      prefix.insert(prefix.end(), r.prefix.begin(), r.prefix.end());
      Formula m = f.op() == Op::And ? Formula::conj(l.matrix, r.matrix) : Formula::disj(l.matrix, r.matrix);
      return {std::move(prefix), m};
    }
    case Op::Implies: {
      // The antecedent sits under an implicit negation.
      PrenexForm l = pull(f.left());
      PrenexForm r = pull(f.right());
      Prefix prefix;
      appendFlipped(prefix, l.prefix);
      prefix.insert(prefix.end(), r.prefix.begin(), r.prefix.end());
      return {std::move(prefix), Formula::implies(l.matrix, r.matrix)};
    }
    case Op::Exists:
    case Op::Forall: {
      PrenexForm inner = pull(f.body());
      Prefix prefix{{f.op() == Op::Exists ? Quantifier::Exists : Quantifier::Forall, f.var()}};
      prefix.insert(prefix.end(), inner.prefix.begin(), inner.prefix.end());
      return {std::move(prefix), inner.matrix};
    }
  }
  return {{}, f};
}

}  // namespace

PrenexForm prenex(const Formula& f) { return pull(f); }

Formula PrenexForm::toFormula() const {
  Formula out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->first == Quantifier::Exists ? Formula::exists(it->second, out) : Formula::forall(it->second, out);
  return out;
}

}  // namespace acyclify
