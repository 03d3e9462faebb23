#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "acyclify/analysis.hpp"

namespace acyclify {

std::optional<std::size_t> VariableGraph::vertexOf(const Var& v) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (!vertices[i].constant && vertices[i].label == v.name()) return i;
  return std::nullopt;
}

std::size_t VariableGraph::variableCount() const {
  return static_cast<std::size_t>(
      std::count_if(vertices.begin(), vertices.end(), [](const GraphVertex& v) { return !v.constant; }));
}

VariableGraph variableGraph(const Formula& f) {
  VariableGraph g;
  std::unordered_map<Var, std::size_t> id;
  for (const Var& v : allVars(f)) {
    id.emplace(v, g.vertices.size());
    g.vertices.push_back({v.name(), false});
  }
  const std::vector<Formula> atoms = atomOccurrences(f);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const Formula& atom = atoms[a];
    const std::size_t from = id.at(atom.lhs());
    std::size_t to;
    if (atom.op() == Op::EqConst) {
      to = g.vertices.size();
      g.vertices.push_back({"0", true});
    } else {
      to = id.at(atom.rhs());
    }
    g.edges.push_back({from, to, a, render(atom)});
  }
  return g;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Path from `from` to `to` through forest edges, as walk steps.
std::vector<WalkStep> forestPath(const VariableGraph& g, const std::vector<std::vector<std::size_t>>& forest,
                                 std::size_t from, std::size_t to) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via(g.vertices.size(), none);
  std::vector<bool> seen(g.vertices.size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    if (u == to) break;
    for (std::size_t e : forest[u]) {
      const GraphEdge& edge = g.edges[e];
      const std::size_t v = edge.from == u ? edge.to : edge.from;
      if (seen[v]) continue;
      seen[v] = true;
      via[v] = e;
      stack.push_back(v);
    }
  }
  std::vector<WalkStep> path;
  for (std::size_t v = to; v != from;) {
    const GraphEdge& edge = g.edges[via[v]];
    const std::size_t u = edge.from == v ? edge.to : edge.from;
    path.push_back({via[v], u, v});
    v = u;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

CycleWitness canonical(std::vector<WalkStep> steps) {
  auto lowest = std::min_element(steps.begin(), steps.end(),
                                 [](const WalkStep& a, const WalkStep& b) { return a.edge < b.edge; });
  std::rotate(steps.begin(), lowest, steps.end());
  if (steps.size() > 2 && steps.back().edge < steps[1].edge) {
    std::vector<WalkStep> reversed{{steps[0].edge, steps[0].to, steps[0].from}};
    for (std::size_t i = steps.size() - 1; i >= 1; --i) reversed.push_back({steps[i].edge, steps[i].to, steps[i].from});
    steps = std::move(reversed);
  }
  return CycleWitness{std::move(steps)};
}

}  // namespace

std::optional<CycleWitness> findCycle(const VariableGraph& g) {
  DisjointSets sets(g.vertices.size());
  std::vector<std::vector<std::size_t>> forest(g.vertices.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const GraphEdge& edge = g.edges[e];
    if (edge.from == edge.to) return CycleWitness{{{e, edge.from, edge.to}}};
    if (sets.unite(edge.from, edge.to)) {
      forest[edge.from].push_back(e);
      forest[edge.to].push_back(e);
      continue;
    }
    std::vector<WalkStep> steps{{e, edge.from, edge.to}};
    for (const WalkStep& s : forestPath(g, forest, edge.to, edge.from)) steps.push_back(s);
    return canonical(std::move(steps));
  }
  return std::nullopt;
}

AcyclicityReport checkAcyclic(const Formula& f) {
  AcyclicityReport r{variableGraph(f), std::nullopt};
  r.cycle = findCycle(r.graph);
  return r;
}

std::string describeCycle(const VariableGraph& g, const CycleWitness& w) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const WalkStep& s = w.steps[i];
    if (i) out << ", ";
    out << g.vertices[s.from].label << " - " << g.vertices[s.to].label << " [" << g.edges[s.edge].label << "]";
  }
  return out.str();
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string toDot(const VariableGraph& g) {
  std::ostringstream out;
  out << "graph variables {\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const GraphVertex& v = g.vertices[i];
    if (v.constant)
      out << "  " << quoted("0#" + std::to_string(i)) << " [label=\"0\", shape=box];\n";
    else
      out << "  " << quoted(v.label) << ";\n";
  }
  auto name = [&](std::size_t i) {
    return g.vertices[i].constant ? quoted("0#" + std::to_string(i)) : quoted(g.vertices[i].label);
  };
  for (const GraphEdge& e : g.edges) out << "  " << name(e.from) << " -- " << name(e.to) << " [label=" << quoted(e.label) << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace acyclify
