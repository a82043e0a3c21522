#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dagp/units.hpp"

namespace dagp {

enum class ExprKind : unsigned char { Add, Sub, Mul, Div, Var, Const };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class SignatureMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExprParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable arithmetic expression tree over variables and integer constants.
// Signature and node count are computed at construction and never change, so
// trees are freely shared between search workers; substitution builds a new
// tree that shares untouched subtrees with the original.
class Expr {
public:
    ExprKind kind;
    int payload = 0;  // variable index for Var, integer value for Const
    ExprPtr left;
    ExprPtr right;
    UnitSignature signature;
    int size = 1;

    static ExprPtr var(int index, const UnitSignature& sig);
    static ExprPtr constant(int value);
    // add/sub throw IncommensurableError when the operand signatures differ.
    static ExprPtr add(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr sub(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr mul(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr div(ExprPtr lhs, ExprPtr rhs);

    bool is_leaf() const { return kind == ExprKind::Var || kind == ExprKind::Const; }

    // Only the factories above keep signature/size caches consistent; build
    // trees through them.
    Expr() = default;
};

// Point evaluation.  Returns nullopt when the result is not finite (division
// by zero, overflow); batch-mode callers map that to the worst fitness.
std::optional<double> evaluate(const Expr& e, std::span<const double> point);

// Serialization that identifies trees up to commutative operand order: the
// two operands of Add and Mul are emitted in lexicographic order of their own
// keys, Sub and Div keep operand order.  Associativity is not normalized.
std::string canonical_key(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Pre-order position lookup; position 0 is the root.
const Expr* subtree_at(const Expr& root, int position);

// Replaces the subtree at a pre-order position.  The replacement must carry
// the same signature as the replaced subtree and the resulting tree must not
// exceed size_cap nodes (pass 0 to disable the cap).
ExprPtr substitute_subtree(const ExprPtr& root, int position, ExprPtr replacement,
                           int size_cap);

// Parenthesized infix form for humans, e.g. "((q2*Ef)+3)".
std::string to_infix(const Expr& e, std::span<const std::string> var_names);

// Round-trippable prefix form, e.g. "(* q2 Ef)".
std::string to_prefix(const Expr& e, std::span<const std::string> var_names);
ExprPtr parse_prefix(std::string_view text, std::span<const std::string> var_names,
                     std::span<const UnitSignature> var_signatures);

}  // namespace dagp
