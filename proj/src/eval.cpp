#include <algorithm>
#include <array>
#include <iterator>
#include <cctype>
#include <limits>
#include <unordered_set>

#include "acyclify/semantics.hpp"

namespace acyclify {

Assignment::Assignment(std::initializer_list<std::pair<Var, HFSet>> values) {
  for (const auto& [v, x] : values) set(v, x);
}

void Assignment::set(const Var& v, HFSet value) {
  for (auto& entry : values_) {
    if (entry.first == v) {
      entry.second = value;
      return;
    }
  }
  values_.emplace_back(v, value);
}

std::optional<HFSet> Assignment::get(const Var& v) const {
  for (const auto& [var, x] : values_)
    if (var == v) return x;
  return std::nullopt;
}

std::string Assignment::str() const {
  std::string out;
  for (const auto& [var, x] : values_) {
    if (!out.empty()) out += ' ';
    out += var.name() + "=" + x.str();
  }
  return out;
}

Assignment parseAssignment(std::string_view text) {
  Assignment a;
  std::size_t i = 0;
  auto skipSpace = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skipSpace();
  while (i < text.size()) {
    const std::size_t eq = text.find('=', i);
    if (eq == std::string_view::npos) throw std::invalid_argument("expected 'var=term' in assignment");
    std::string name(text.substr(i, eq - i));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    if (name.empty()) throw std::invalid_argument("missing variable name in assignment");
    i = eq + 1;
    skipSpace();
    // A term runs until braces balance and whitespace follows.
    const std::size_t start = i;
    int depth = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (c == '{') ++depth;
      if (c == '}') --depth;
      if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)))) break;
      ++i;
    }
    a.set(Var(name), parseHFSet(text.substr(start, i - start)));
    skipSpace();
  }
  return a;
}

std::vector<Assignment> enumerateAssignments(std::span<const Var> vars, std::span<const HFSet> domain,
                                             std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (domain.empty()) return {};
    if (total > cap / domain.size()) throw CapExceeded("more than " + std::to_string(cap) + " assignments");
    total *= domain.size();
  }
  std::vector<Assignment> out;
  out.reserve(total);
  std::vector<std::size_t> digit(vars.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Assignment a;
    for (std::size_t k = 0; k < vars.size(); ++k) a.set(vars[k], domain[digit[k]]);
    out.push_back(std::move(a));
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (++digit[k] < domain.size()) break;
      digit[k] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

enum class Kind : std::uint8_t { Mem, Eq, EqConst, Not, And, Or, Implies, Exists, Forall };

enum class Mode : std::uint8_t { Equal, Elem, Trans };

/// The quantified variable is `mode`-related to the value of `slot`
/// (slot -1 stands for the canonical empty set).
struct Target {
  int slot;
  Mode mode;
};

using Anchors = std::optional<std::vector<Target>>;

// AnchoredOrAny: anchored values plus one arbitrary value, for bodies that
// may also hold vacuously. Holders: range elements that hereditarily contain
// the value of one of the target slots (explicit ranges only).
enum class PlanKind : std::uint8_t { Full, Unused, Anchored, AnchoredOrAny, EqOnly, Holders };

struct Plan {
  PlanKind kind = PlanKind::Full;
  std::vector<Target> targets;  // Anchored, and EqOnly comparands as Equal/Elem/Trans sets
};

struct Node {
  Kind kind;
  int a = -1, b = -1;  // atom slots, or binder slot in a
  std::vector<int> kids;
  std::vector<int> free;  // sorted slots free in this node
  int range = 0;          // quantifiers: index into ranges
  Plan plan;
  bool memo = false;
  double cost = 1;
};

struct Range {
  std::vector<HFSet> owned;
  std::span<const HFSet> elems;
  const Universe* universe = nullptr;
  std::unordered_set<HFSet> set;
  /// Hereditary member -> ascending positions of the range elements
  /// containing it, built on demand.
  std::unordered_map<HFSet, std::vector<std::uint32_t>> holders;
  bool indexed = false;

  void index() {
    if (indexed) return;
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (HFSet e : transitiveMembers(elems[i])) holders[e].push_back(static_cast<std::uint32_t>(i));
    indexed = true;
  }

  bool contains(HFSet x) const { return universe ? universe->contains(x) : set.count(x) != 0; }
};

constexpr std::size_t kMaxMemoSlots = 7;
constexpr std::size_t kMemoLimit = 6'000'000;

/// Open-addressing cache from the ids of a node's free values to its truth
/// value. One table per memoized node.
class MemoTable {
 public:
  explicit MemoTable(std::size_t width = 0) : width_(width) {}

  std::size_t size() const { return count_; }

  void clear() {
    keys_.clear();
    vals_.clear();
    count_ = 0;
  }

  /// 0 when absent, else 1 + value.
  int find(const std::uint32_t* key) const {
    if (vals_.empty()) return 0;
    for (std::size_t i = slot(key);; i = (i + 1) & (vals_.size() - 1)) {
      if (vals_[i] == 0) return 0;
      if (std::equal(key, key + width_, &keys_[i * width_])) return vals_[i];
    }
  }

  void insert(const std::uint32_t* key, bool value) {
    if ((count_ + 1) * 2 > vals_.size()) grow();
    std::size_t i = slot(key);
    while (vals_[i] != 0) i = (i + 1) & (vals_.size() - 1);
    std::copy(key, key + width_, &keys_[i * width_]);
    vals_[i] = value ? 2 : 1;
    ++count_;
  }

 private:
  std::size_t slot(const std::uint32_t* key) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t k = 0; k < width_; ++k) {
      h ^= key[k];
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h) & (vals_.size() - 1);
  }

  void grow() {
    std::vector<std::uint32_t> keys = std::move(keys_);
    std::vector<std::uint8_t> vals = std::move(vals_);
    const std::size_t capacity = vals.empty() ? 64 : vals.size() * 2;
    keys_.assign(capacity * width_, 0);
    vals_.assign(capacity, 0);
    count_ = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] != 0) insert(&keys[i * width_], vals[i] == 2);
  }

  std::size_t width_;
  std::vector<std::uint32_t> keys_;
  std::vector<std::uint8_t> vals_;
  std::size_t count_ = 0;
};

Mode compose(Mode outer, Mode inner) {
  if (outer == Mode::Equal) return inner;
  if (inner == Mode::Equal) return outer;
  return Mode::Trans;
}

int score(const std::vector<Target>& ts) {
  int worst = 0;
  for (const Target& t : ts) worst = std::max(worst, static_cast<int>(t.mode));
  return worst * 100 + static_cast<int>(ts.size());
}

}  // namespace

struct Evaluator::Impl {
  std::vector<Node> nodes;
  std::vector<Range> ranges;
  std::vector<std::pair<Var, int>> freeSlots;
  int root = -1;
  int slotCount = 0;
  std::vector<HFSet> env;
  std::vector<MemoTable> memo;  // by node
  std::size_t memoEntries = 0;
  std::unordered_map<HFSet, std::vector<HFSet>> closureCache;

  // --- compilation --------------------------------------------------------

  int compile(const Formula& f, std::vector<std::pair<Var, int>>& scope, const Universe& universe,
              const Ranges& overrides, std::unordered_map<Var, int>& rangeOf) {
    auto slotOf = [&](const Var& v) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == v) return it->second;
      throw std::logic_error("unscoped variable " + v.name());
    };
    Node n{};
    switch (f.op()) {
      case Op::Mem:
        n.kind = Kind::Mem;
        n.a = slotOf(f.lhs());
        n.b = slotOf(f.rhs());
        break;
      case Op::Eq:
        n.kind = Kind::Eq;
        n.a = slotOf(f.lhs());
        n.b = slotOf(f.rhs());
        break;
      case Op::EqConst:
        n.kind = Kind::EqConst;
        n.a = slotOf(f.lhs());
        break;
      case Op::Not:
        n.kind = Kind::Not;
        n.kids.push_back(compile(f.body(), scope, universe, overrides, rangeOf));
        break;
      case Op::And:
      case Op::Or: {
        n.kind = f.op() == Op::And ? Kind::And : Kind::Or;
        // Flatten chains of the same connective.
        std::vector<Formula> stack{f};
        std::vector<Formula> parts;
        while (!stack.empty()) {
          Formula g = stack.back();
          stack.pop_back();
          if (g.op() == f.op()) {
            stack.push_back(g.right());
            stack.push_back(g.left());
          } else {
            parts.push_back(g);
          }
        }
        for (const Formula& p : parts) n.kids.push_back(compile(p, scope, universe, overrides, rangeOf));
        break;
      }
      case Op::Implies:
        n.kind = Kind::Implies;
        n.kids.push_back(compile(f.left(), scope, universe, overrides, rangeOf));
        n.kids.push_back(compile(f.right(), scope, universe, overrides, rangeOf));
        break;
      case Op::Exists:
      case Op::Forall: {
        n.kind = f.op() == Op::Exists ? Kind::Exists : Kind::Forall;
        n.a = slotCount++;
        auto it = overrides.find(f.var());
        if (it == overrides.end()) {
          n.range = 0;
        } else {
          auto r = rangeOf.find(f.var());
          if (r == rangeOf.end()) {
            Range range;
            range.owned = it->second;
            range.elems = range.owned;
            range.set.insert(range.owned.begin(), range.owned.end());
            ranges.push_back(std::move(range));
            ranges.back().elems = ranges.back().owned;
            r = rangeOf.emplace(f.var(), static_cast<int>(ranges.size() - 1)).first;
          }
          n.range = r->second;
        }
        scope.emplace_back(f.var(), n.a);
        n.kids.push_back(compile(f.body(), scope, universe, overrides, rangeOf));
        scope.pop_back();
        break;
      }
    }
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size() - 1);
  }

  void computeFree(int idx) {
    Node& n = nodes[idx];
    std::vector<int> fr;
    switch (n.kind) {
      case Kind::Mem:
      case Kind::Eq:
        fr = {n.a, n.b};
        break;
      case Kind::EqConst:
        fr = {n.a};
        break;
      default:
        for (int k : n.kids) {
          computeFree(k);
          fr.insert(fr.end(), nodes[k].free.begin(), nodes[k].free.end());
        }
        if (n.kind == Kind::Exists || n.kind == Kind::Forall) std::erase(fr, n.a);
    }
    std::sort(fr.begin(), fr.end());
    fr.erase(std::unique(fr.begin(), fr.end()), fr.end());
    nodes[idx].free = std::move(fr);
  }

  bool freeIn(int idx, int slot) const {
    return std::binary_search(nodes[idx].free.begin(), nodes[idx].free.end(), slot);
  }

  // --- range analysis -----------------------------------------------------

  struct Scope {
    int limit;
    std::vector<int> extra;
    bool allowed(int t) const {
      return t < limit || std::find(extra.begin(), extra.end(), t) != extra.end();
    }
  };

  static void unite(std::vector<Target>& acc, const std::vector<Target>& more) {
    acc.insert(acc.end(), more.begin(), more.end());
  }

  static void pickBest(Anchors& best, Anchors candidate) {
    if (!candidate) return;
    if (!best || score(*candidate) < score(*best)) best = std::move(candidate);
  }

  /// Targets for slot `s` entailed by node `idx` having truth value `pos`.
  Anchors anchors(int idx, int s, bool pos, Scope& scope) const {
    const Node& n = nodes[idx];
    if (!freeIn(idx, s)) return std::nullopt;
    switch (n.kind) {
      case Kind::Mem:
        if (pos && n.a == s && n.b != s && scope.allowed(n.b)) return std::vector<Target>{{n.b, Mode::Elem}};
        return std::nullopt;
      case Kind::Eq:
        if (!pos) return std::nullopt;
        if (n.a == s && n.b != s && scope.allowed(n.b)) return std::vector<Target>{{n.b, Mode::Equal}};
        if (n.b == s && n.a != s && scope.allowed(n.a)) return std::vector<Target>{{n.a, Mode::Equal}};
        return std::nullopt;
      case Kind::EqConst:
        if (pos) return std::vector<Target>{{-1, Mode::Equal}};
        return std::nullopt;
      case Kind::Not:
        return anchors(n.kids[0], s, !pos, scope);
      case Kind::And:
      case Kind::Or: {
        const bool all = (n.kind == Kind::And) == pos;
        if (all) {
          Anchors best;
          for (int k : n.kids) pickBest(best, anchors(k, s, pos, scope));
          if (n.kind == Kind::And) pickBest(best, singletonRule(n, s, scope));
          return best;
        }
        std::vector<Target> acc;
        for (int k : n.kids) {
          if (!freeIn(k, s)) return std::nullopt;
          Anchors a = anchors(k, s, pos, scope);
          if (!a) return std::nullopt;
          unite(acc, *a);
        }
        return acc;
      }
      case Kind::Implies: {
        if (pos) {
          Anchors l = anchors(n.kids[0], s, false, scope);
          if (!l) return std::nullopt;
          Anchors r = anchors(n.kids[1], s, true, scope);
          if (!r) return std::nullopt;
          unite(*l, *r);
          return l;
        }
        Anchors best;
        pickBest(best, anchors(n.kids[0], s, true, scope));
        pickBest(best, anchors(n.kids[1], s, false, scope));
        return best;
      }
      case Kind::Exists:
      case Kind::Forall: {
        const int u = n.a;
        if ((n.kind == Kind::Exists) != pos) {
          // Every u gives B the value; with a non-empty range, one does.
          if (ranges[n.range].elems.empty()) return std::nullopt;
          return anchors(n.kids[0], s, pos, scope);
        }
        // Some u gives B the value.
        scope.extra.push_back(u);
        Anchors inner = anchors(n.kids[0], s, pos, scope);
        scope.extra.pop_back();
        if (!inner) return std::nullopt;
        std::vector<Target> out;
        Anchors viaU;
        bool resolved = false;
        for (const Target& t : *inner) {
          if (t.slot != u) {
            out.push_back(t);
            continue;
          }
          if (!resolved) {
            viaU = anchors(n.kids[0], u, pos, scope);
            resolved = true;
          }
          if (!viaU) return std::nullopt;
          for (const Target& w : *viaU) {
            if (w.slot == s) return std::nullopt;
            out.push_back({w.slot, compose(t.mode, w.mode)});
          }
        }
        return out;
      }
    }
    return std::nullopt;
  }

  /// (E w. w in y) & (A z. z in y -> z = s) gives s in y.
  Anchors singletonRule(const Node& conj, int s, const Scope& scope) const {
    for (int k : conj.kids) {
      const Node& c = nodes[k];
      if (c.kind != Kind::Forall) continue;
      const Node& body = nodes[c.kids[0]];
      if (body.kind != Kind::Implies) continue;
      const Node& ante = nodes[body.kids[0]];
      const Node& cons = nodes[body.kids[1]];
      if (ante.kind != Kind::Mem || ante.a != c.a) continue;
      if (cons.kind != Kind::Eq) continue;
      const bool matches = (cons.a == c.a && cons.b == s) || (cons.b == c.a && cons.a == s);
      if (!matches) continue;
      const int y = ante.b;
      if (y == s || !scope.allowed(y)) continue;
      for (int j : conj.kids) {
        const Node& d = nodes[j];
        if (d.kind != Kind::Exists) continue;
        auto isWitness = [&](int m) {
          const Node& atom = nodes[m];
          return atom.kind == Kind::Mem && atom.a == d.a && atom.b == y;
        };
        const Node& db = nodes[d.kids[0]];
        bool ok = isWitness(d.kids[0]);
        if (!ok && db.kind == Kind::And) ok = std::any_of(db.kids.begin(), db.kids.end(), isWitness);
        if (ok) return std::vector<Target>{{y, Mode::Elem}};
      }
    }
    return std::nullopt;
  }

  static void mergeSlots(std::vector<int>& acc, const std::vector<int>& more) {
    for (int t : more)
      if (std::find(acc.begin(), acc.end(), t) == acc.end()) acc.push_back(t);
  }

  static std::vector<int> commonSlots(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    for (int t : a)
      if (std::find(b.begin(), b.end(), t) != b.end()) out.push_back(t);
    return out;
  }

  /// Slots whose values are hereditary members of `s` whenever node `idx`
  /// has value `pos`. Each one alone is a necessary condition.
  std::vector<int> holders(int idx, int s, bool pos, Scope& scope) const {
    const Node& n = nodes[idx];
    if (!freeIn(idx, s)) return {};
    switch (n.kind) {
      case Kind::Mem:
        if (pos && n.b == s && n.a != s && scope.allowed(n.a)) return {n.a};
        return {};
      case Kind::Eq:
      case Kind::EqConst:
        return {};
      case Kind::Not:
        return holders(n.kids[0], s, !pos, scope);
      case Kind::And:
      case Kind::Or: {
        std::vector<int> out;
        if ((n.kind == Kind::And) == pos) {
          for (int k : n.kids) mergeSlots(out, holders(k, s, pos, scope));
          if (n.kind == Kind::And) mergeSlots(out, singletonHolders(n, s, scope));
          return out;
        }
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          std::vector<int> h = holders(n.kids[i], s, pos, scope);
          out = i == 0 ? std::move(h) : commonSlots(out, h);
          if (out.empty()) break;
        }
        return out;
      }
      case Kind::Implies: {
        std::vector<int> l = holders(n.kids[0], s, !pos, scope);
        std::vector<int> r = holders(n.kids[1], s, pos, scope);
        if (pos) return commonSlots(l, r);
        mergeSlots(l, r);
        return l;
      }
      case Kind::Exists:
      case Kind::Forall: {
        const int u = n.a;
        if ((n.kind == Kind::Exists) != pos) {
          if (ranges[n.range].elems.empty()) return {};
          std::vector<int> out = holders(n.kids[0], s, pos, scope);
          std::erase(out, u);
          return out;
        }
        // Some u gives the body the value; u in s carries u's members along.
        scope.extra.push_back(u);
        std::vector<int> out = holders(n.kids[0], s, pos, scope);
        if (std::erase(out, u) > 0) {
          std::vector<int> viaU = holders(n.kids[0], u, pos, scope);
          std::erase(viaU, s);
          mergeSlots(out, viaU);
        }
        scope.extra.pop_back();
        return out;
      }
    }
    return {};
  }

  /// (E w. w in s) & (A z. z in s -> z = t) gives t in s.
  std::vector<int> singletonHolders(const Node& conj, int s, const Scope& scope) const {
    std::vector<int> out;
    for (int k : conj.kids) {
      const Node& c = nodes[k];
      if (c.kind != Kind::Forall) continue;
      const Node& body = nodes[c.kids[0]];
      if (body.kind != Kind::Implies) continue;
      const Node& ante = nodes[body.kids[0]];
      const Node& cons = nodes[body.kids[1]];
      if (ante.kind != Kind::Mem || ante.a != c.a || ante.b != s || cons.kind != Kind::Eq) continue;
      int t = -1;
      if (cons.a == c.a && cons.b != c.a) t = cons.b;
      if (cons.b == c.a && cons.a != c.a) t = cons.a;
      if (t < 0 || t == s || !scope.allowed(t)) continue;
      for (int j : conj.kids) {
        const Node& d = nodes[j];
        if (d.kind != Kind::Exists) continue;
        auto isWitness = [&](int m) {
          const Node& atom = nodes[m];
          return atom.kind == Kind::Mem && atom.a == d.a && atom.b == s;
        };
        const Node& db = nodes[d.kids[0]];
        bool ok = isWitness(d.kids[0]);
        if (!ok && db.kind == Kind::And) ok = std::any_of(db.kids.begin(), db.kids.end(), isWitness);
        if (ok) {
          mergeSlots(out, {t});
          break;
        }
      }
    }
    return out;
  }

  /// E v. A u1..uk. A -> C with v not in A: either some u satisfies A and
  /// then C anchors v, or the body holds for every v.
  bool vacuous(int body, int v, std::vector<Target>& out) const {
    std::vector<int> us;
    int n = body;
    while (nodes[n].kind == Kind::Forall) {
      us.push_back(nodes[n].a);
      n = nodes[n].kids[0];
    }
    if (us.empty() || nodes[n].kind != Kind::Implies) return false;
    const int ante = nodes[n].kids[0];
    const int cons = nodes[n].kids[1];
    if (freeIn(ante, v)) return false;
    Scope scope{v, us};
    Anchors a = anchors(cons, v, true, scope);
    if (!a) return false;
    if (!resolveThrough(*a, ante, us, v)) return false;
    out = std::move(*a);
    return true;
  }

  bool resolveThrough(std::vector<Target>& ts, int ante, const std::vector<int>& pending, int v) const {
    std::vector<Target> out;
    for (const Target& t : ts) {
      if (std::find(pending.begin(), pending.end(), t.slot) == pending.end()) {
        out.push_back(t);
        continue;
      }
      std::vector<int> rest = pending;
      std::erase(rest, t.slot);
      Scope scope{v, rest};
      Anchors r = anchors(ante, t.slot, true, scope);
      if (!r || !resolveThrough(*r, ante, rest, v)) return false;
      for (const Target& w : *r) {
        if (w.slot == v) return false;
        out.push_back({w.slot, compose(t.mode, w.mode)});
      }
    }
    ts = std::move(out);
    return true;
  }

  /// Collects slots compared with `v` by `=`; false if `v` occurs otherwise.
  bool equalityOnly(int idx, int v, std::vector<int>& comparands) const {
    const Node& n = nodes[idx];
    if (!freeIn(idx, v)) return true;
    switch (n.kind) {
      case Kind::Mem:
        return false;
      case Kind::Eq:
        if (n.a == v && n.b == v) return true;
        comparands.push_back(n.a == v ? n.b : n.a);
        return true;
      case Kind::EqConst:
        comparands.push_back(-1);
        return true;
      default:
        for (int k : n.kids)
          if (!equalityOnly(k, v, comparands)) return false;
        return true;
    }
  }

  int binderNode(int slot) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      if ((n.kind == Kind::Exists || n.kind == Kind::Forall) && n.a == slot) return static_cast<int>(i);
    }
    return -1;
  }

  void plan(int idx) {
    Node& n = nodes[idx];
    for (int k : n.kids) plan(k);
    if (n.kind != Kind::Exists && n.kind != Kind::Forall) return;
    const int body = n.kids[0];
    const int v = n.a;
    const bool pos = n.kind == Kind::Exists;
    if (!freeIn(body, v)) {
      n.plan.kind = PlanKind::Unused;
      return;
    }
    Scope scope{v, {}};
    if (Anchors a = anchors(body, v, pos, scope)) {
      n.plan.kind = PlanKind::Anchored;
      n.plan.targets = std::move(*a);
      return;
    }
    if (pos) {
      std::vector<Target> vac;
      if (vacuous(body, v, vac)) {
        n.plan.kind = PlanKind::AnchoredOrAny;
        n.plan.targets = std::move(vac);
        return;
      }
    }
    if (n.range != 0) {
      Scope hs{v, {}};
      std::vector<int> slots = holders(body, v, pos, hs);
      if (!slots.empty()) {
        n.plan.kind = PlanKind::Holders;
        for (int t : slots) n.plan.targets.push_back({t, Mode::Trans});
        return;
      }
    }
    std::vector<int> comparands;
    if (!equalityOnly(body, v, comparands)) return;
    std::sort(comparands.begin(), comparands.end());
    comparands.erase(std::unique(comparands.begin(), comparands.end()), comparands.end());
    std::vector<Target> targets;
    for (int w : comparands) {
      if (w < v) {
        targets.push_back({w, Mode::Equal});
        continue;
      }
      const int binder = binderNode(w);
      if (binder < 0) return;
      const Node& b = nodes[binder];
      Scope outer{v, {}};
      Anchors a = anchors(b.kids[0], w, b.kind == Kind::Exists, outer);
      if (!a) return;
      unite(targets, *a);
    }
    n.plan.kind = PlanKind::EqOnly;
    n.plan.targets = std::move(targets);
  }

  double estimate(int idx) {
    Node& n = nodes[idx];
    double c = 0;
    switch (n.kind) {
      case Kind::Mem:
      case Kind::Eq:
      case Kind::EqConst:
        c = 1;
        break;
      case Kind::Exists:
      case Kind::Forall: {
        double width = 0;
        switch (n.plan.kind) {
          case PlanKind::Unused: width = 1; break;
          case PlanKind::Full: width = static_cast<double>(ranges[n.range].elems.size()); break;
          case PlanKind::Holders: width = static_cast<double>(ranges[n.range].elems.size()) / 16; break;
          case PlanKind::Anchored:
          case PlanKind::AnchoredOrAny:
          case PlanKind::EqOnly:
            for (const Target& t : n.plan.targets) width += t.mode == Mode::Equal ? 1 : t.mode == Mode::Elem ? 4 : 16;
            if (n.plan.kind != PlanKind::Anchored) width += 1;
            break;
        }
        c = std::max(1.0, width) * estimate(n.kids[0]) + 1;
        break;
      }
      default:
        for (int k : n.kids) c += estimate(k);
    }
    c = std::min(c, 1e300);
    n.cost = c;
    if (n.kind == Kind::And || n.kind == Kind::Or) {
      std::stable_sort(n.kids.begin(), n.kids.end(), [&](int x, int y) { return nodes[x].cost < nodes[y].cost; });
    }
    if ((n.kind == Kind::Exists || n.kind == Kind::Forall) && n.free.size() <= kMaxMemoSlots &&
        nodes[n.kids[0]].cost > 4)
      n.memo = true;
    return c;
  }

  // --- evaluation ---------------------------------------------------------

  const std::vector<HFSet>& closureOf(HFSet x) {
    auto it = closureCache.find(x);
    if (it == closureCache.end()) it = closureCache.emplace(x, transitiveMembers(x)).first;
    return it->second;
  }

  void candidates(const Node& n, std::vector<HFSet>& out) {
    const Range& range = ranges[n.range];
    const HFSet empty = HFSet::empty();
    for (const Target& t : n.plan.targets) {
      const HFSet value = t.slot < 0 ? empty : env[t.slot];
      switch (t.mode) {
        case Mode::Equal:
          out.push_back(value);
          break;
        case Mode::Elem:
          for (HFSet e : value.elements()) out.push_back(e);
          break;
        case Mode::Trans:
          for (HFSet e : closureOf(value)) out.push_back(e);
          break;
      }
    }
    if (n.plan.targets.size() > 1 || (!n.plan.targets.empty() && n.plan.targets[0].mode == Mode::Equal)) {
      std::sort(out.begin(), out.end(), [](HFSet a, HFSet b) { return a.id() < b.id(); });
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    std::erase_if(out, [&](HFSet x) { return !range.contains(x); });
    if (n.plan.kind != PlanKind::Anchored) {
      for (HFSet x : range.elems) {
        if (std::find(out.begin(), out.end(), x) == out.end()) {
          out.push_back(x);
          break;
        }
      }
    }
  }

  bool run(int idx) {
    const Node& n = nodes[idx];
    switch (n.kind) {
      case Kind::Mem:
        return env[n.b].contains(env[n.a]);
      case Kind::Eq:
        return env[n.a] == env[n.b];
      case Kind::EqConst:
        return env[n.a].isEmptySet();
      case Kind::Not:
        return !run(n.kids[0]);
      case Kind::And:
        for (int k : n.kids)
          if (!run(k)) return false;
        return true;
      case Kind::Or:
        for (int k : n.kids)
          if (run(k)) return true;
        return false;
      case Kind::Implies:
        return !run(n.kids[0]) || run(n.kids[1]);
      case Kind::Exists:
      case Kind::Forall:
        break;
    }

    std::array<std::uint32_t, kMaxMemoSlots> key{};
    if (n.memo) {
      for (std::size_t i = 0; i < n.free.size(); ++i) key[i] = static_cast<std::uint32_t>(env[n.free[i]].id());
      if (const int hit = memo[idx].find(key.data())) return hit == 2;
    }

    const bool exists = n.kind == Kind::Exists;
    bool result = !exists;
    auto visit = [&](HFSet x) {
      env[n.a] = x;
      if (run(n.kids[0]) == exists) {
        result = exists;
        return true;
      }
      return false;
    };
    switch (n.plan.kind) {
      case PlanKind::Full:
        for (HFSet x : ranges[n.range].elems)
          if (visit(x)) break;
        break;
      case PlanKind::Unused:
        if (!ranges[n.range].elems.empty()) visit(ranges[n.range].elems.front());
        break;
      case PlanKind::Holders: {
        // Only elements holding every target value can give the body its value.
        Range& range = ranges[n.range];
        range.index();
        std::vector<const std::vector<std::uint32_t>*> lists;
        bool none = false;
        for (const Target& t : n.plan.targets) {
          auto it = range.holders.find(env[t.slot]);
          if (it == range.holders.end()) {
            none = true;
            break;
          }
          lists.push_back(&it->second);
        }
        if (none) break;
        std::sort(lists.begin(), lists.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
        std::vector<std::uint32_t> hits = *lists.front();
        for (std::size_t k = 1; k < lists.size() && !hits.empty(); ++k) {
          std::vector<std::uint32_t> next;
          std::set_intersection(hits.begin(), hits.end(), lists[k]->begin(), lists[k]->end(),
                                std::back_inserter(next));
          hits = std::move(next);
        }
        for (std::uint32_t i : hits)
          if (visit(range.elems[i])) break;
        break;
      }
      case PlanKind::Anchored:
      case PlanKind::AnchoredOrAny:
      case PlanKind::EqOnly: {
        std::vector<HFSet> xs;
        candidates(n, xs);
        for (HFSet x : xs)
          if (visit(x)) break;
        break;
      }
    }

    if (n.memo) {
      if (memoEntries >= kMemoLimit) {
        for (MemoTable& t : memo) t.clear();
        memoEntries = 0;
      }
      memo[idx].insert(key.data(), result);
      ++memoEntries;
    }
    return result;
  }
};

Evaluator::Evaluator(const Formula& f, const Universe& universe, const Ranges& ranges)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  Range base;
  base.universe = &universe;
  base.elems = universe.elements();
  m.ranges.push_back(std::move(base));

  std::vector<std::pair<Var, int>> scope;
  for (const Var& v : freeVars(f)) {
    scope.emplace_back(v, m.slotCount);
    m.freeSlots.emplace_back(v, m.slotCount);
    ++m.slotCount;
  }
  std::unordered_map<Var, int> rangeOf;
  m.root = m.compile(f, scope, universe, ranges, rangeOf);
  m.computeFree(m.root);
  m.plan(m.root);
  m.estimate(m.root);
  for (const Node& n : m.nodes) m.memo.emplace_back(n.memo ? n.free.size() : 0);
  m.env.assign(static_cast<std::size_t>(m.slotCount), HFSet::empty());
}

Evaluator::~Evaluator() = default;

bool Evaluator::operator()(const Assignment& a) {
  Impl& m = *impl_;
  for (const auto& [v, slot] : m.freeSlots) {
    auto value = a.get(v);
    if (!value) throw EvalError("no value for free variable '" + v.name() + "'");
    m.env[slot] = *value;
  }
  return m.run(m.root);
}

std::size_t Evaluator::cacheSize() const { return impl_->memoEntries; }

bool eval(const Formula& f, const Universe& u, const Assignment& a) {
  Evaluator e(f, u);
  return e(a);
}

}  // namespace acyclify
