#include "dagp/neighbourhood.hpp"

#include <algorithm>
#include <stdexcept>

namespace dagp {

const char* to_string(NeighbourOp op) {
    switch (op) {
        case NeighbourOp::Replace: return "replace";
        case NeighbourOp::MulInt: return "mul-int";
        case NeighbourOp::DivInt: return "div-int";
        case NeighbourOp::AddComm: return "add-comm";
        case NeighbourOp::SubComm: return "sub-comm";
    }
    return "?";
}

NeighbourOp parse_neighbour_op(const std::string& name) {
    if (name == "replace") return NeighbourOp::Replace;
    if (name == "mul-int") return NeighbourOp::MulInt;
    if (name == "div-int") return NeighbourOp::DivInt;
    if (name == "add-comm") return NeighbourOp::AddComm;
    if (name == "sub-comm") return NeighbourOp::SubComm;
    throw std::invalid_argument("unknown neighbourhood operator: " + name);
}

void NeighbourhoodConfig::validate() const {
    for (int k : constant_set) {
        if (k == 0) throw std::invalid_argument("constant set must exclude 0");
    }
    if (size_cap < 1) throw std::invalid_argument("size cap must be >= 1");
    if (!exponent_range.valid()) throw std::invalid_argument("empty exponent range");
    if (operator_order.empty()) {
        throw std::invalid_argument("operator order must name at least one operator");
    }
    std::vector<NeighbourOp> sorted = operator_order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("operator order contains duplicates");
    }
}

const std::vector<ExprPtr>& MonomialCache::for_signature(const UnitSignature& sig) {
    auto it = cache_.find(sig);
    if (it == cache_.end()) {
        it = cache_.emplace(sig, enumerate_monomials(*spec_, range_, sig)).first;
    }
    return it->second;
}

namespace {

void try_emit(const ExprPtr& root, int position, ExprPtr replacement, int size_cap,
              std::vector<ExprPtr>& out) {
    const Expr* old = subtree_at(*root, position);
    if (root->size - old->size + replacement->size > size_cap) return;
    out.push_back(substitute_subtree(root, position, std::move(replacement), size_cap));
}

}  // namespace

void apply_operator(NeighbourOp op, const ExprPtr& e, int position,
                    const NeighbourhoodConfig& cfg, MonomialCache& monomials,
                    std::vector<ExprPtr>& out) {
    const Expr* t = subtree_at(*e, position);
    ExprPtr subtree = (position == 0)
                          ? e
                          : ExprPtr(e, t);  // aliasing: shares ownership with e

    switch (op) {
        case NeighbourOp::Replace:
            for (const ExprPtr& candidate : monomials.for_signature(t->signature)) {
                if (structurally_equal(*candidate, *t)) continue;
                try_emit(e, position, candidate, cfg.size_cap, out);
            }
            return;
        case NeighbourOp::MulInt:
            for (int k : cfg.constant_set) {
                try_emit(e, position, Expr::mul(subtree, Expr::constant(k)),
                         cfg.size_cap, out);
            }
            return;
        case NeighbourOp::DivInt:
            for (int k : cfg.constant_set) {
                try_emit(e, position, Expr::div(subtree, Expr::constant(k)),
                         cfg.size_cap, out);
            }
            return;
        case NeighbourOp::AddComm:
            for (const ExprPtr& q : monomials.for_signature(t->signature)) {
                try_emit(e, position, Expr::add(subtree, q), cfg.size_cap, out);
            }
            return;
        case NeighbourOp::SubComm:
            for (const ExprPtr& q : monomials.for_signature(t->signature)) {
                try_emit(e, position, Expr::sub(subtree, q), cfg.size_cap, out);
            }
            return;
    }
}

std::vector<ExprPtr> neighbours(const ExprPtr& e, const EquationSpec& spec,
                                const NeighbourhoodConfig& cfg,
                                MonomialCache& monomials) {
    if (&monomials.spec() != &spec || monomials.range() != cfg.exponent_range) {
        throw std::invalid_argument(
            "monomial cache does not match the equation/exponent range");
    }
    std::vector<ExprPtr> out;
    for (NeighbourOp op : cfg.operator_order) {
        const int first_position = (op == NeighbourOp::Replace) ? 1 : 0;
        for (int position = first_position; position < e->size; ++position) {
            apply_operator(op, e, position, cfg, monomials, out);
        }
    }
    return out;
}

}  // namespace dagp
