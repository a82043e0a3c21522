#include "dagp/initializer.hpp"

#include <cstdlib>

namespace dagp {

std::vector<std::vector<int>> enumerate_exponents(const EquationSpec& spec,
                                                  ExponentRange range,
                                                  const UnitSignature& target) {
    if (!range.valid()) {
        throw std::invalid_argument("empty exponent range");
    }
    const std::size_t p = spec.variables.size();
    std::vector<std::vector<int>> matches;
    std::vector<int> exps(p, range.lo);

    for (;;) {
        UnitSignature sig = kDimensionless;
        for (std::size_t i = 0; i < p; ++i) {
            sig = sig_mul(sig, sig_pow(spec.var_signatures[i], exps[i]));
        }
        if (sig == target) matches.push_back(exps);

        // odometer: last variable fastest, so vectors come out in
        // lexicographic order
        std::size_t i = p;
        while (i > 0) {
            --i;
            if (exps[i] < range.hi) {
                ++exps[i];
                break;
            }
            exps[i] = range.lo;
            if (i == 0) return matches;
        }
    }
}

ExprPtr monomial_expr(const EquationSpec& spec, std::span<const int> exponents) {
    ExprPtr numerator;
    ExprPtr denominator;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        const int e = exponents[i];
        if (e == 0) continue;
        ExprPtr& side = (e > 0) ? numerator : denominator;
        for (int rep = 0; rep < std::abs(e); ++rep) {
            ExprPtr leaf = Expr::var(static_cast<int>(i), spec.var_signatures[i]);
            side = side ? Expr::mul(std::move(side), std::move(leaf)) : std::move(leaf);
        }
    }
    if (!numerator && !denominator) return Expr::constant(1);
    if (!denominator) return numerator;
    if (!numerator) numerator = Expr::constant(1);
    return Expr::div(std::move(numerator), std::move(denominator));
}

std::vector<ExprPtr> enumerate_monomials(const EquationSpec& spec,
                                         ExponentRange range,
                                         const UnitSignature& target) {
    std::vector<ExprPtr> out;
    for (const auto& exps : enumerate_exponents(spec, range, target)) {
        out.push_back(monomial_expr(spec, exps));
    }
    return out;
}

std::vector<ExprPtr> enumerate_initial(const EquationSpec& spec,
                                       ExponentRange range) {
    return enumerate_monomials(spec, range, spec.target_signature);
}

std::vector<ExprPtr> enumerate_with_restart(const EquationSpec& spec,
                                            ExponentRange base_range,
                                            int max_widenings) {
    ExponentRange range = base_range;
    for (int attempt = 0; attempt <= max_widenings; ++attempt) {
        std::vector<ExprPtr> initial = enumerate_initial(spec, range);
        if (!initial.empty()) return initial;
        range = range.widened();
    }
    throw NoValidInitializationError(
        "no initial expression matches the target signature of " + spec.id +
        " within " + std::to_string(max_widenings) + " widenings of [" +
        std::to_string(base_range.lo) + "," + std::to_string(base_range.hi) + "]");
}

}  // namespace dagp
