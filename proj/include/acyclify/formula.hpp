#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acyclify {

/// A variable symbol. Names are compared by exact token equality.
class Var {
 public:
  Var() = default;
  explicit Var(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  bool empty() const { return name_.empty(); }

  /// True for names produced by FreshNames (`_g` followed by digits).
  bool isGenerated() const;

  auto operator<=>(const Var&) const = default;

 private:
  std::string name_;
};

enum class Op : std::uint8_t { Mem, Eq, EqConst, Not, And, Or, Implies, Exists, Forall };

const char* opName(Op op);

/// Immutable first-order formula over `in` and `=`.
///
/// Nodes are reference counted and may be shared between formulas; nothing
/// about the sharing is observable because nodes never change after
/// construction.
class Formula {
 public:
  static Formula mem(Var lhs, Var rhs);
  static Formula eq(Var lhs, Var rhs);
  /// `lhs = 0`, the distinguished empty-set constant.
  static Formula eqConst(Var lhs);
  static Formula negate(Formula body);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula exists(Var var, Formula body);
  static Formula forall(Var var, Formula body);

  /// Left fold with `conj`; `parts` must be non-empty.
  static Formula conjAll(std::span<const Formula> parts);
  /// Left fold with `disj`; `parts` must be non-empty.
  static Formula disjAll(std::span<const Formula> parts);
  /// Wraps `body` in `Exists` for each variable, outermost first.
  static Formula existsAll(std::span<const Var> vars, Formula body);

  Op op() const { return node_->op; }
  bool isAtom() const { return op() <= Op::EqConst; }
  bool isQuantifier() const { return op() == Op::Exists || op() == Op::Forall; }
  bool isBinary() const { return op() == Op::And || op() == Op::Or || op() == Op::Implies; }

  /// Atom operands. `rhs` is meaningless for EqConst.
  const Var& lhs() const { return node_->first; }
  const Var& rhs() const { return node_->second; }
  /// Bound variable of a quantifier.
  const Var& var() const { return node_->first; }

  /// Operand of Not or quantifier body.
  Formula body() const { return Formula(node_->left); }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }

  /// Stable identity of the underlying node, for caches keyed on subformulas.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    Var first;
    Var second;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, Var a, Var b, const Formula* l, const Formula* r);

  std::shared_ptr<const Node> node_;
};

/// Supply of `_gN` names. The counter only increases.
class FreshNames {
 public:
  explicit FreshNames(unsigned next = 1) : next_(next), start_(next) {}

  /// A supply whose first name is larger than every `_gN` occurring in `f`.
  static FreshNames after(const Formula& f);

  Var next();
  unsigned consumed() const { return next_ - start_; }
  unsigned peek() const { return next_; }

 private:
  unsigned next_;
  unsigned start_;
};

struct ParseOptions {
  /// Accept the constant `0` on the right of `=`.
  bool allowConstant = false;
  /// Accept `_g` names, e.g. when re-reading translator output.
  bool allowGenerated = false;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Formula parse(std::string_view text, const ParseOptions& options = {});
std::string render(const Formula& f);

/// Free variables in order of first occurrence.
std::vector<Var> freeVars(const Formula& f);
/// Every variable (free, bound, binder-only) in rendered text order.
std::vector<Var> allVars(const Formula& f);
std::size_t atomCount(const Formula& f);
std::size_t quantifierCount(const Formula& f);
bool hasQuantifier(const Formula& f);
bool usesConstant(const Formula& f);

/// No variable bound twice and no bound variable also free.
bool isRectified(const Formula& f);
/// Alpha-renames bound variables until the result is rectified.
Formula rectify(const Formula& f);
Formula rectify(const Formula& f, FreshNames& fresh);

}  // namespace acyclify

template <>
struct std::hash<acyclify::Var> {
  std::size_t operator()(const acyclify::Var& v) const noexcept {
    return std::hash<std::string>{}(v.name());
  }
};
