#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "acyclify/analysis.hpp"

namespace acyclify {

namespace {

void collectAtoms(const Formula& f, std::vector<Formula>& out) {
  if (f.isAtom()) {
    out.push_back(f);
    return;
  }
  if (f.op() == Op::Not || f.isQuantifier()) {
    collectAtoms(f.body(), out);
    return;
  }
  collectAtoms(f.left(), out);
  collectAtoms(f.right(), out);
}

}  // namespace

std::vector<Formula> atomOccurrences(const Formula& f) {
  std::vector<Formula> out;
  collectAtoms(f, out);
  return out;
}

bool Stratification::contains(const Var& v) const {
  return std::any_of(types.begin(), types.end(), [&](const auto& p) { return p.first == v; });
}

int Stratification::typeOf(const Var& v) const {
  for (const auto& [var, t] : types)
    if (var == v) return t;
  throw std::out_of_range("no type for variable '" + v.name() + "'");
}

int StratFailure::replay() const {
  if (witness.empty()) throw std::logic_error("empty stratification witness");
  int total = 0;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    const auto& step = witness[i];
    const auto& next = witness[(i + 1) % witness.size()];
    if (step.to != next.from) throw std::logic_error("stratification witness is not a closed walk");
    total += step.offset;
  }
  return total;
}

namespace {

struct Arc {
  std::size_t target;
  int offset;
  std::size_t atom;
};

}  // namespace

StratResult stratify(const Formula& f) {
  const std::vector<Var> vars = allVars(f);
  std::unordered_map<Var, std::size_t> id;
  for (std::size_t i = 0; i < vars.size(); ++i) id.emplace(vars[i], i);

  const std::vector<Formula> atoms = atomOccurrences(f);
  std::vector<std::vector<Arc>> adj(vars.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const Formula& atom = atoms[a];
    if (atom.op() == Op::EqConst) continue;
    const std::size_t x = id.at(atom.lhs());
    const std::size_t y = id.at(atom.rhs());
    const int offset = atom.op() == Op::Mem ? 1 : 0;
    adj[x].push_back({y, offset, a});
    adj[y].push_back({x, -offset, a});
  }

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<long> potential(vars.size(), 0);
  std::vector<std::size_t> component(vars.size(), none);
  std::vector<std::size_t> parent(vars.size(), none);
  std::vector<Arc> parentArc(vars.size());  // arc from parent to this vertex
  std::vector<std::size_t> depth(vars.size(), 0);

  auto stepOf = [&](std::size_t from, const Arc& arc) {
    return ConstraintStep{arc.atom, render(atoms[arc.atom]), vars[from], vars[arc.target], arc.offset};
  };

  std::size_t components = 0;
  for (std::size_t root = 0; root < vars.size(); ++root) {
    if (component[root] != none) continue;
    const std::size_t comp = components++;
    component[root] = comp;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const Arc& arc : adj[u]) {
        const std::size_t v = arc.target;
        if (component[v] == none) {
          component[v] = comp;
          potential[v] = potential[u] + arc.offset;
          parent[v] = u;
          parentArc[v] = arc;
          depth[v] = depth[u] + 1;
          queue.push_back(v);
          continue;
        }
        if (potential[v] == potential[u] + arc.offset) continue;

        // Close the walk u -arc-> v -> ... -> lca -> ... -> u.
        StratFailure failure;
        failure.witness.push_back(stepOf(u, arc));
        std::vector<ConstraintStep> up;    // v towards lca
        std::vector<ConstraintStep> down;  // lca towards u, collected reversed
        std::size_t a = v, b = u;
        while (a != b) {
          if (depth[a] >= depth[b]) {
            const Arc& pa = parentArc[a];
            up.push_back({pa.atom, render(atoms[pa.atom]), vars[a], vars[parent[a]], -pa.offset});
            a = parent[a];
          } else {
            const Arc& pb = parentArc[b];
            down.push_back({pb.atom, render(atoms[pb.atom]), vars[parent[b]], vars[b], pb.offset});
            b = parent[b];
          }
        }
        failure.witness.insert(failure.witness.end(), up.begin(), up.end());
        failure.witness.insert(failure.witness.end(), down.rbegin(), down.rend());
        return failure;
      }
    }
  }

  std::vector<long> maxType(components, std::numeric_limits<long>::min());
  for (std::size_t i = 0; i < vars.size(); ++i)
    maxType[component[i]] = std::max(maxType[component[i]], potential[i]);

  Stratification s;
  s.componentShift.resize(components);
  for (std::size_t c = 0; c < components; ++c) s.componentShift[c] = static_cast<int>(-1 - maxType[c]);
  for (std::size_t i = 0; i < vars.size(); ++i)
    s.types.emplace_back(vars[i], static_cast<int>(potential[i] + s.componentShift[component[i]]));
  return s;
}

// ---------------------------------------------------------------------------

std::size_t IdentityIndex::indexOf(const Var& v) const {
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == v) return i + 1;
  throw std::out_of_range("no identity index for variable '" + v.name() + "'");
}

IdentityIndex identityIndices(const Formula& f) { return IdentityIndex{allVars(f)}; }

}  // namespace acyclify
