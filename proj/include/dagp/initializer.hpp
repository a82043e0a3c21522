#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "dagp/dataset.hpp"
#include "dagp/expr.hpp"

namespace dagp {

// Inclusive integer exponent interval scanned by the initializer.
struct ExponentRange {
    int lo = -3;
    int hi = 3;

    bool valid() const { return lo <= hi; }
    int cardinality() const { return hi - lo + 1; }
    ExponentRange widened(int by = 1) const { return {lo - by, hi + by}; }
    friend bool operator==(const ExponentRange&, const ExponentRange&) = default;
};

class NoValidInitializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All exponent vectors in the range whose monomial signature matches target,
// scanned in lexicographic order with the first variable most significant.
std::vector<std::vector<int>> enumerate_exponents(const EquationSpec& spec,
                                                  ExponentRange range,
                                                  const UnitSignature& target);

// Fixed monomial shape for an exponent vector: positive-exponent variables
// multiply left-associatively in variable order with |e| repetitions, a
// single root Div carries the product of negative-exponent variables, and
// the all-zero vector becomes Const(1).  With no positive exponent the
// numerator is Const(1).
ExprPtr monomial_expr(const EquationSpec& spec, std::span<const int> exponents);

std::vector<ExprPtr> enumerate_monomials(const EquationSpec& spec,
                                         ExponentRange range,
                                         const UnitSignature& target);

// The initial solution set: every monomial in range matching the equation's
// target signature, in exponent scan order.  An empty result is legal.
std::vector<ExprPtr> enumerate_initial(const EquationSpec& spec,
                                       ExponentRange range);

// Widens the range by one on both ends whenever enumeration comes back
// empty, up to max_widenings times.
std::vector<ExprPtr> enumerate_with_restart(const EquationSpec& spec,
                                            ExponentRange base_range,
                                            int max_widenings);

}  // namespace dagp
