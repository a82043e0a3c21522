#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dagp/dataset.hpp"
#include "dagp/expr.hpp"
#include "dagp/initializer.hpp"

namespace dagp {

enum class NeighbourOp : unsigned char { Replace, MulInt, DivInt, AddComm, SubComm };

const char* to_string(NeighbourOp op);
NeighbourOp parse_neighbour_op(const std::string& name);

inline const std::vector<NeighbourOp> kDefaultOperatorOrder = {
    NeighbourOp::Replace, NeighbourOp::AddComm, NeighbourOp::SubComm,
    NeighbourOp::MulInt, NeighbourOp::DivInt};

struct NeighbourhoodConfig {
    // 0 stays out by default: division by it is undefined and multiplication
    // collapses the subtree.
    std::vector<int> constant_set = {-3, -2, -1, 1, 2, 3};
    ExponentRange exponent_range{-3, 3};
    int size_cap = 42;
    // Ordered, duplicate-free subset of the five operators; the full set in
    // this order is the default.
    std::vector<NeighbourOp> operator_order = kDefaultOperatorOrder;

    void validate() const;  // throws std::invalid_argument
};

// Memoizes signature -> monomial list for one (equation, exponent range), so
// the replacement and add/sub operators enumerate each signature once per
// search.
class MonomialCache {
public:
    MonomialCache(const EquationSpec& spec, ExponentRange range)
        : spec_(&spec), range_(range) {}

    const std::vector<ExprPtr>& for_signature(const UnitSignature& sig);
    ExponentRange range() const { return range_; }
    const EquationSpec& spec() const { return *spec_; }

private:
    const EquationSpec* spec_;
    ExponentRange range_;
    std::unordered_map<UnitSignature, std::vector<ExprPtr>, SignatureHash> cache_;
};

// Candidates from one operator at one pre-order position, appended to out in
// deterministic order (constants and monomials ascend in scan order).
// Candidates that would exceed the size cap are dropped.  The replacement
// operator excludes regenerating the incumbent subtree.
void apply_operator(NeighbourOp op, const ExprPtr& e, int position,
                    const NeighbourhoodConfig& cfg, MonomialCache& monomials,
                    std::vector<ExprPtr>& out);

// The complete dimension-preserving neighbourhood: operators in cfg order,
// positions in pre-order within each operator.  Replacement is applied at
// proper subtrees only (positions >= 1) — swapping the whole tree for
// another initial monomial is re-initialization, not a move; the wrapping
// operators do apply at the root.  Every candidate keeps the overall
// signature of e.
std::vector<ExprPtr> neighbours(const ExprPtr& e, const EquationSpec& spec,
                                const NeighbourhoodConfig& cfg,
                                MonomialCache& monomials);

}  // namespace dagp
