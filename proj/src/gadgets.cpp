#include <algorithm>

#include "acyclify/encoder.hpp"

namespace acyclify {

Gadget::Gadget(std::string kind, Formula formula, std::vector<Var> interfaceVars)
    : kind_(std::move(kind)), formula_(std::move(formula)), interface_(std::move(interfaceVars)) {
  const AcyclicityReport acyclic = checkAcyclic(formula_);
  if (!acyclic.acyclic())
    throw std::logic_error(kind_ + " gadget is cyclic: " + describeCycle(acyclic.graph, *acyclic.cycle));
  std::vector<Var> free = freeVars(formula_);
  std::vector<Var> expected = interface_;
  std::sort(free.begin(), free.end());
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
  if (free != expected) throw std::logic_error(kind_ + " gadget free variables differ from its interface");
}

namespace {

using F = Formula;

F conj(std::initializer_list<F> parts) { return F::conjAll(std::vector<F>(parts)); }

F isEmpty(const Var& x, EmptiesReading reading, FreshNames& fresh) {
  if (reading == EmptiesReading::Constant) return F::eqConst(x);
  const Var g = fresh.next();
  return F::forall(g, F::negate(F::mem(g, x)));
}

F singleton(const Var& y, const Var& x, FreshNames& fresh) {
  const Var w = fresh.next();
  const Var z = fresh.next();
  return F::conj(F::exists(w, F::mem(w, y)), F::forall(z, F::implies(F::mem(z, y), F::eq(z, x))));
}

F iterSingleton(const Var& y, const Var& x, unsigned n, FreshNames& fresh) {
  if (n == 0) throw std::invalid_argument("iterated singleton depth must be positive");
  if (n == 1) return singleton(y, x, fresh);
  std::vector<Var> chain;  // u_{n-1} .. u_1
  for (unsigned k = 1; k < n; ++k) chain.push_back(fresh.next());
  std::vector<F> links;
  Var outer = y;
  for (const Var& u : chain) {
    links.push_back(singleton(outer, u, fresh));
    outer = u;
  }
  links.push_back(singleton(outer, x, fresh));
  return F::existsAll(chain, F::conjAll(links));
}

F iterEmpty(const Var& y, unsigned n, EmptiesReading reading, FreshNames& fresh) {
  if (n == 0) return isEmpty(y, reading, fresh);
  const Var e = fresh.next();
  return F::exists(e, F::conj(isEmpty(e, reading, fresh), iterSingleton(y, e, n, fresh)));
}

F iterElement(const Var& e, const Var& k, unsigned d, FreshNames& fresh) {
  if (d == 0) throw std::invalid_argument("iterated element depth must be positive");
  if (d == 1) return F::mem(e, k);
  std::vector<Var> chain;  // u_1 .. u_{d-1}
  for (unsigned i = 1; i < d; ++i) chain.push_back(fresh.next());
  std::vector<F> links;
  Var inner = e;
  for (const Var& u : chain) {
    links.push_back(F::mem(inner, u));
    inner = u;
  }
  links.push_back(F::mem(inner, k));
  return F::existsAll(chain, F::conjAll(links));
}

// "Exactly one element of `u` satisfies kind(v)", as three conjuncts after
// the covering clause: some element does, and all that do are equal.
using Pred = F (*)(const Var&, EmptiesReading, FreshNames&);

F someMember(const Var& set, Pred kind, EmptiesReading reading, FreshNames& fresh) {
  const Var v = fresh.next();
  return F::exists(v, F::conj(F::mem(v, set), kind(v, reading, fresh)));
}

F uniqueMember(const Var& set, Pred kind, EmptiesReading reading, FreshNames& fresh) {
  const Var c = fresh.next();
  const Var v = fresh.next();
  return F::exists(c, F::forall(v, F::implies(F::conj(F::mem(v, set), kind(v, reading, fresh)), F::eq(v, c))));
}

F isSingletonOfSomething(const Var& v, EmptiesReading, FreshNames& fresh) {
  const Var b = fresh.next();
  return F::exists(b, singleton(v, b, fresh));
}

F isEmptyObject(const Var& v, EmptiesReading reading, FreshNames& fresh) { return isEmpty(v, reading, fresh); }

// {{a}}
F isDoubleSingleton(const Var& u, EmptiesReading, FreshNames& fresh) {
  const Var a = fresh.next();
  return F::exists(a, iterSingleton(u, a, 2, fresh));
}

F exactlyTwoKinds(const Var& set, Pred first, Pred second, EmptiesReading reading, FreshNames& fresh) {
  const Var v = fresh.next();
  F cover = F::forall(
      v, F::implies(F::mem(v, set), F::disj(first(v, reading, fresh), second(v, reading, fresh))));
  return conj({cover, someMember(set, first, reading, fresh), someMember(set, second, reading, fresh),
               uniqueMember(set, first, reading, fresh), uniqueMember(set, second, reading, fresh)});
}

// {{b}, e}
F isTail(const Var& u, EmptiesReading reading, FreshNames& fresh) {
  return exactlyTwoKinds(u, isEmptyObject, isSingletonOfSomething, reading, fresh);
}

F isPair(const Var& p, EmptiesReading reading, FreshNames& fresh) {
  return exactlyTwoKinds(p, isDoubleSingleton, isTail, reading, fresh);
}

F proj1(const Var& x, const Var& p, EmptiesReading reading, FreshNames& fresh) {
  F pair = isPair(p, reading, fresh);
  const Var u = fresh.next();
  return F::conj(pair, F::exists(u, F::conj(F::mem(u, p), iterSingleton(u, x, 2, fresh))));
}

F proj2(const Var& x, const Var& p, EmptiesReading reading, FreshNames& fresh) {
  F pair = isPair(p, reading, fresh);
  const Var u = fresh.next();
  const Var e = fresh.next();
  F hasEmpty = F::exists(e, F::conj(F::mem(e, u), isEmpty(e, reading, fresh)));
  const Var v = fresh.next();
  F hasValue = F::exists(v, F::conj(F::mem(v, u), singleton(v, x, fresh)));
  return F::conj(pair, F::exists(u, conj({F::mem(u, p), hasEmpty, hasValue})));
}

// pi1(p) = iota^i(empty)
F firstIs(const Var& p, unsigned i, EmptiesReading reading, FreshNames& fresh) {
  const Var t = fresh.next();
  return F::exists(t, F::conj(proj1(t, p, reading, fresh), iterEmpty(t, i, reading, fresh)));
}

// pi2(p) = iota^d(x)
F secondIs(const Var& p, const Var& x, unsigned d, EmptiesReading reading, FreshNames& fresh) {
  const Var t = fresh.next();
  return F::exists(t, F::conj(proj2(t, p, reading, fresh), iterSingleton(t, x, d, fresh)));
}

F firstIsEither(const Var& p, unsigned i, unsigned j, EmptiesReading reading, FreshNames& fresh) {
  F a = firstIs(p, i, reading, fresh);
  if (i == j) return a;
  return F::disj(a, firstIs(p, j, reading, fresh));
}

}  // namespace

Gadget emptyGadget(const Var& x, FreshNames& fresh) {
  return Gadget("empty", isEmpty(x, EmptiesReading::Predicate, fresh), {x});
}

Gadget singletonGadget(const Var& y, const Var& x, FreshNames& fresh) {
  if (y == x) throw std::invalid_argument("singleton gadget needs two distinct variables");
  return Gadget("singleton", singleton(y, x, fresh), {y, x});
}

Gadget iterSingletonGadget(const Var& y, const Var& x, unsigned n, FreshNames& fresh) {
  if (y == x) throw std::invalid_argument("iterated singleton gadget needs two distinct variables");
  return Gadget("iter-singleton", iterSingleton(y, x, n, fresh), {y, x});
}

Gadget iterEmptyGadget(const Var& y, unsigned n, EmptiesReading reading, FreshNames& fresh) {
  return Gadget("iter-empty", iterEmpty(y, n, reading, fresh), {y});
}

Gadget wienerPairGadget(const Var& p, FreshNames& fresh, EmptiesReading reading) {
  return Gadget("pair", isPair(p, reading, fresh), {p});
}

Gadget proj1Gadget(const Var& x, const Var& p, FreshNames& fresh, EmptiesReading reading) {
  if (x == p) throw std::invalid_argument("projection gadget needs two distinct variables");
  return Gadget("proj1", proj1(x, p, reading, fresh), {x, p});
}

Gadget proj2Gadget(const Var& x, const Var& p, FreshNames& fresh, EmptiesReading reading) {
  if (x == p) throw std::invalid_argument("projection gadget needs two distinct variables");
  return Gadget("proj2", proj2(x, p, reading, fresh), {x, p});
}

Gadget iterElementGadget(const Var& e, const Var& k, unsigned d, FreshNames& fresh) {
  if (e == k) throw std::invalid_argument("iterated element gadget needs two distinct variables");
  return Gadget("iter-element", iterElement(e, k, d, fresh), {e, k});
}

Gadget applyEqGadget(const Var& f, unsigned i, const Var& x, unsigned d, EmptiesReading reading,
                     FreshNames& fresh) {
  if (f == x) throw std::invalid_argument("application gadget needs two distinct variables");
  const Var p = fresh.next();
  F body = conj({F::mem(p, f), firstIs(p, i, reading, fresh), secondIs(p, x, d, reading, fresh)});
  return Gadget("ident", F::exists(p, body), {f, x});
}

Gadget applyConstGadget(const Var& f, unsigned i, unsigned d, EmptiesReading reading, FreshNames& fresh) {
  const Var p = fresh.next();
  const Var t = fresh.next();
  const Var u = fresh.next();
  F value = F::exists(t, F::conj(proj2(t, p, reading, fresh),
                                 F::exists(u, F::conj(F::eqConst(u), iterSingleton(t, u, d, fresh)))));
  F body = conj({F::mem(p, f), firstIs(p, i, reading, fresh), value});
  return Gadget("const", F::exists(p, body), {f});
}

Gadget eqTranslation(const Var& f, unsigned i, unsigned j, EmptiesReading reading, FreshNames& fresh) {
  const Var y = fresh.next();
  const Var p = fresh.next();
  F guard = F::conj(F::mem(p, f), firstIsEither(p, i, j, reading, fresh));
  F body = F::forall(p, F::implies(guard, proj2(y, p, reading, fresh)));
  return Gadget("eq", F::exists(y, body), {f});
}

Gadget memTranslation(const Var& f, unsigned i, unsigned j, unsigned d, EmptiesReading reading,
                      FreshNames& fresh) {
  const Var z = fresh.next();
  const Var p = fresh.next();
  const Var w = fresh.next();
  F guard = conj({F::mem(p, f), secondIs(p, w, d, reading, fresh), F(firstIsEither(p, i, j, reading, fresh))});
  F body = F::forall(p, F::forall(w, F::implies(guard, F::mem(z, w))));
  return Gadget("mem", F::exists(z, body), {f});
}

Gadget unifiedTranslation(const Var& f, unsigned i, unsigned j, unsigned d, EmptiesReading reading,
                          FreshNames& fresh) {
  const Var e = fresh.next();
  const Var p = fresh.next();
  const Var k = fresh.next();
  F guard = conj({F::mem(p, f), firstIsEither(p, i, j, reading, fresh), proj2(k, p, reading, fresh)});
  F body = F::forall(p, F::forall(k, F::implies(guard, iterElement(e, k, d, fresh))));
  return Gadget("unified", F::exists(e, body), {f});
}

Gadget fnGuard(const Var& f, unsigned n, EmptiesReading reading, FreshNames& fresh) {
  if (n == 0) throw std::invalid_argument("guard size must be positive");
  std::vector<unsigned> indices;
  for (unsigned i = 1; i <= n; ++i) indices.push_back(i);
  return fnGuard(f, indices, reading, fresh);
}

Gadget fnGuard(const Var& f, std::span<const unsigned> indices, EmptiesReading reading, FreshNames& fresh) {
  if (indices.empty()) throw std::invalid_argument("guard needs at least one index");
  std::vector<F> parts;
  {
    const Var p = fresh.next();
    F pair = isPair(p, reading, fresh);
    std::vector<F> firsts;
    for (unsigned i : indices) firsts.push_back(firstIs(p, i, reading, fresh));
    parts.push_back(F::forall(p, F::implies(F::mem(p, f), F::conj(pair, F::disjAll(firsts)))));
  }
  for (unsigned i : indices) {
    const Var p = fresh.next();
    parts.push_back(F::exists(p, F::conj(F::mem(p, f), firstIs(p, i, reading, fresh))));
  }
  for (unsigned i : indices) {
    const Var y = fresh.next();
    const Var q = fresh.next();
    F guard = F::conj(F::mem(q, f), firstIs(q, i, reading, fresh));
    parts.push_back(F::exists(y, F::forall(q, F::implies(guard, proj2(y, q, reading, fresh)))));
  }
  return Gadget("fn-guard", F::conjAll(parts), {f});
}

Gadget sizeGuard(const Var& f, unsigned n, FreshNames& fresh) {
  if (n == 0) throw std::invalid_argument("guard size must be positive");
  std::vector<Var> ms;
  for (unsigned i = 0; i < n; ++i) ms.push_back(fresh.next());
  const Var p = fresh.next();
  std::vector<F> options;
  for (const Var& m : ms) options.push_back(F::eq(p, m));
  F body = F::forall(p, F::implies(F::mem(p, f), F::disjAll(options)));
  return Gadget("size-guard", F::existsAll(ms, body), {f});
}

Gadget subsetGadget(const Var& sub, const Var& super, FreshNames& fresh) {
  const Var q = fresh.next();
  return Gadget("subset", F::forall(q, F::implies(F::mem(q, sub), F::mem(q, super))), {sub, super});
}

Gadget agreementGadget(const Var& a, const Var& b, EmptiesReading reading, FreshNames& fresh) {
  const Var x = fresh.next();
  const Var y = fresh.next();
  const Var p = fresh.next();
  F guard = F::conj(F::disj(F::mem(p, a), F::mem(p, b)), proj1(x, p, reading, fresh));
  F body = F::forall(p, F::implies(guard, proj2(y, p, reading, fresh)));
  return Gadget("agreement", F::forall(x, F::exists(y, body)), {a, b});
}

Gadget domainGadget(const Var& f, unsigned i, EmptiesReading reading, FreshNames& fresh) {
  const Var p = fresh.next();
  return Gadget("domain", F::exists(p, F::conj(F::mem(p, f), firstIs(p, i, reading, fresh))), {f});
}

}  // namespace acyclify
