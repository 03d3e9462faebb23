#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace acyclify {

namespace detail {
struct HfNode;
}
class HfStore;

/// A hereditarily finite set over a pool of atoms.
///
/// Atoms are element-less objects distinct from each other and from the
/// canonical empty set. Values are hash-consed in a process-wide table, so
/// structural equality is pointer equality and copies are free.
class HFSet {
 public:
  /// The canonical empty set.
  HFSet();

  static HFSet empty();
  static HFSet atom(unsigned id);
  static HFSet of(std::vector<HFSet> elements);
  static HFSet singleton(HFSet x);
  /// `n`-fold singleton of x; n = 0 gives x.
  static HFSet iterSingleton(HFSet x, unsigned n);
  /// Wiener pair (a,b) = {{{a}}, {{b}, {}}}.
  static HFSet pair(HFSet a, HFSet b);

  bool isAtom() const;
  bool isEmptySet() const;
  /// Atom or empty set.
  bool hasNoElements() const { return elements().empty(); }
  unsigned atomId() const;

  /// Elements in canonical order.
  std::span<const HFSet> elements() const;
  bool contains(HFSet x) const;
  /// rank(atom) = rank({}) = 0, rank(set) = 1 + max rank of elements.
  unsigned rank() const;
  std::uint64_t id() const;

  std::string str() const;

  friend bool operator==(HFSet a, HFSet b) { return a.node_ == b.node_; }
  /// Canonical order: rank, then atoms before sets, atoms by id, sets
  /// lexicographically on their canonical element sequences.
  friend std::strong_ordering operator<=>(HFSet a, HFSet b);

 private:
  explicit HFSet(const detail::HfNode* node) : node_(node) {}
  friend struct detail::HfNode;
  friend class HfStore;

  const detail::HfNode* node_;
};

/// Reads `{}`, `a3`, `{a0,{{}}}`.
HFSet parseHFSet(std::string_view text);

/// All hereditary members of x (excluding x itself), canonical order.
std::vector<HFSet> transitiveMembers(HFSet x);

}  // namespace acyclify

template <>
struct std::hash<acyclify::HFSet> {
  std::size_t operator()(acyclify::HFSet s) const noexcept { return std::hash<std::uint64_t>{}(s.id()); }
};

namespace acyclify {

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite transitively closed carrier for quantifiers.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<HFSet> elements);

  std::span<const HFSet> elements() const& { return elements_; }
  /// The span would dangle.
  std::span<const HFSet> elements() const&& = delete;
  std::size_t size() const { return elements_.size(); }
  bool contains(HFSet x) const { return members_.count(x) != 0; }
  /// True when no atom is present, so the only empty object is {}.
  bool extensional() const { return atomCount_ == 0; }
  unsigned atomCount() const { return atomCount_; }
  bool transitivelyClosed() const;

 private:
  std::vector<HFSet> elements_;
  std::unordered_set<HFSet> members_;
  unsigned atomCount_ = 0;
};

inline constexpr std::size_t kDefaultUniverseCap = 100000;

/// Every object of rank below `maxRank` over atoms a0..a(atomCount-1):
/// maxRank 1 gives {{}} (plus atoms), maxRank 3 gives the four sets of rank
/// at most 2. Throws CapExceeded when the count would pass `cap`.
Universe hfUniverse(unsigned maxRank, unsigned atomCount, std::size_t cap = kDefaultUniverseCap);

/// Number of objects hfUniverse would produce, or nullopt past `cap`.
std::optional<std::size_t> hfUniverseSize(unsigned maxRank, unsigned atomCount, std::size_t cap);

Universe closureUniverse(std::span<const HFSet> seeds);

}  // namespace acyclify
