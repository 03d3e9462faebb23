#include "acyclify/hfset.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace acyclify {

namespace detail {

struct HfNode {
  std::uint64_t id;
  bool atom;
  unsigned atomId;
  unsigned rank;
  std::vector<HFSet> elements;              // canonical order
  std::vector<const HfNode*> byAddress;     // for membership tests
};

}  // namespace detail

using detail::HfNode;

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<const HfNode*>& key) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const HfNode* n : key) h ^= std::hash<const void*>{}(n) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

class HfStore {
 public:
  static int compareNodes(const HfNode* a, const HfNode* b) {
    if (a == b) return 0;
    if (a->rank != b->rank) return a->rank < b->rank ? -1 : 1;
    if (a->atom != b->atom) return a->atom ? -1 : 1;
    if (a->atom) return a->atomId < b->atomId ? -1 : 1;
    const std::size_t n = std::min(a->elements.size(), b->elements.size());
    for (std::size_t i = 0; i < n; ++i) {
      const int c = compareNodes(a->elements[i].node_, b->elements[i].node_);
      if (c) return c;
    }
    if (a->elements.size() == b->elements.size()) return 0;
    return a->elements.size() < b->elements.size() ? -1 : 1;
  }


  static HfStore& instance() {
    static HfStore store;
    return store;
  }

  const HfNode* atom(unsigned id) {
    std::lock_guard lock(mutex_);
    auto it = atoms_.find(id);
    if (it != atoms_.end()) return it->second;
    HfNode& n = nodes_.emplace_back();
    n.id = nodes_.size() - 1;
    n.atom = true;
    n.atomId = id;
    n.rank = 0;
    atoms_.emplace(id, &n);
    return &n;
  }

  const HfNode* set(std::vector<HFSet> elements) {
    std::sort(elements.begin(), elements.end(), [](HFSet a, HFSet b) { return compareNodes(a.node_, b.node_) < 0; });
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    std::vector<const HfNode*> key;
    key.reserve(elements.size());
    for (HFSet e : elements) key.push_back(e.node_);

    std::lock_guard lock(mutex_);
    auto it = sets_.find(key);
    if (it != sets_.end()) return it->second;
    HfNode& n = nodes_.emplace_back();
    n.id = nodes_.size() - 1;
    n.atom = false;
    n.atomId = 0;
    n.rank = 0;
    for (HFSet e : elements) n.rank = std::max(n.rank, e.node_->rank + 1);
    n.byAddress = key;
    std::sort(n.byAddress.begin(), n.byAddress.end());
    n.elements = std::move(elements);
    sets_.emplace(std::move(key), &n);
    return &n;
  }

  static const HfNode* node(HFSet s) { return s.node_; }
  static HFSet wrap(const HfNode* n) { return HFSet(n); }

 private:
  std::mutex mutex_;
  std::deque<HfNode> nodes_;
  std::unordered_map<unsigned, const HfNode*> atoms_;
  std::unordered_map<std::vector<const HfNode*>, const HfNode*, KeyHash> sets_;
};

HFSet::HFSet() : node_(HfStore::instance().set({})) {}

HFSet HFSet::empty() {
  static const HFSet e;
  return e;
}

HFSet HFSet::atom(unsigned id) { return HFSet(HfStore::instance().atom(id)); }
HFSet HFSet::of(std::vector<HFSet> elements) { return HFSet(HfStore::instance().set(std::move(elements))); }
HFSet HFSet::singleton(HFSet x) { return of({x}); }

HFSet HFSet::iterSingleton(HFSet x, unsigned n) {
  for (unsigned i = 0; i < n; ++i) x = singleton(x);
  return x;
}

HFSet HFSet::pair(HFSet a, HFSet b) {
  return of({iterSingleton(a, 2), of({singleton(b), empty()})});
}

bool HFSet::isAtom() const { return node_->atom; }
bool HFSet::isEmptySet() const { return !node_->atom && node_->elements.empty(); }

unsigned HFSet::atomId() const {
  if (!node_->atom) throw std::logic_error("not an atom");
  return node_->atomId;
}

std::span<const HFSet> HFSet::elements() const { return node_->elements; }

bool HFSet::contains(HFSet x) const {
  return std::binary_search(node_->byAddress.begin(), node_->byAddress.end(), x.node_);
}

unsigned HFSet::rank() const { return node_->rank; }
std::uint64_t HFSet::id() const { return node_->id; }

std::strong_ordering operator<=>(HFSet a, HFSet b) {
  const int c = HfStore::compareNodes(a.node_, b.node_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string HFSet::str() const {
  if (node_->atom) return "a" + std::to_string(node_->atomId);
  std::string out = "{";
  for (std::size_t i = 0; i < node_->elements.size(); ++i) {
    if (i) out += ',';
    out += node_->elements[i].str();
  }
  return out + '}';
}

namespace {

class TermReader {
 public:
  explicit TermReader(std::string_view text) : text_(text) {}

  HFSet read() {
    HFSet s = term();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad set term at offset " + std::to_string(pos_) + ": " + what);
  }

  HFSet term() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] == 'a') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("atom needs a number");
      return HFSet::atom(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    if (text_[pos_] != '{') fail("expected '{' or atom");
    ++pos_;
    std::vector<HFSet> elems;
    skip();
    if (pos_ < text_.size() && text_[pos_] == '}') {
      ++pos_;
      return HFSet::of({});
    }
    for (;;) {
      elems.push_back(term());
      skip();
      if (pos_ >= text_.size()) fail("unterminated set");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == '}') {
        ++pos_;
        return HFSet::of(std::move(elems));
      }
      fail("expected ',' or '}'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

HFSet parseHFSet(std::string_view text) { return TermReader(text).read(); }

std::vector<HFSet> transitiveMembers(HFSet x) {
  std::unordered_set<HFSet> seen;
  std::vector<HFSet> stack(x.elements().begin(), x.elements().end());
  std::vector<HFSet> out;
  while (!stack.empty()) {
    HFSet s = stack.back();
    stack.pop_back();
    if (!seen.insert(s).second) continue;
    out.push_back(s);
    for (HFSet e : s.elements()) stack.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Universe::Universe(std::vector<HFSet> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  elements_ = std::move(elements);
  members_.insert(elements_.begin(), elements_.end());
  for (HFSet e : elements_)
    if (e.isAtom()) ++atomCount_;
}

bool Universe::transitivelyClosed() const {
  for (HFSet e : elements_)
    for (HFSet m : e.elements())
      if (!contains(m)) return false;
  return true;
}

std::optional<std::size_t> hfUniverseSize(unsigned maxRank, unsigned atomCount, std::size_t cap) {
  std::size_t count = 0;  // |V_0|
  for (unsigned k = 0; k < maxRank; ++k) {
    if (count >= 63) return std::nullopt;
    const std::size_t next = atomCount + (std::size_t{1} << count);
    if (next > cap) return std::nullopt;
    count = next;
  }
  return count;
}

Universe hfUniverse(unsigned maxRank, unsigned atomCount, std::size_t cap) {
  if (!hfUniverseSize(maxRank, atomCount, cap))
    throw CapExceeded("universe of rank < " + std::to_string(maxRank) + " over " + std::to_string(atomCount) +
                      " atoms exceeds cap " + std::to_string(cap));
  std::vector<HFSet> level;
  for (unsigned k = 0; k < maxRank; ++k) {
    std::vector<HFSet> next;
    for (unsigned a = 0; a < atomCount; ++a) next.push_back(HFSet::atom(a));
    const std::size_t n = level.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<HFSet> elems;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) elems.push_back(level[i]);
      next.push_back(HFSet::of(std::move(elems)));
    }
    level = std::move(next);
  }
  return Universe(std::move(level));
}

Universe closureUniverse(std::span<const HFSet> seeds) {
  std::unordered_set<HFSet> seen;
  std::vector<HFSet> stack(seeds.begin(), seeds.end());
  std::vector<HFSet> out;
  while (!stack.empty()) {
    HFSet s = stack.back();
    stack.pop_back();
    if (!seen.insert(s).second) continue;
    out.push_back(s);
    for (HFSet e : s.elements()) stack.push_back(e);
  }
  return Universe(std::move(out));
}

}  // namespace acyclify
