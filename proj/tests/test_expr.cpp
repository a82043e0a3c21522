#include <array>
#include <string>
#include <vector>

#include "doctest.h"

#include "dagp/expr.hpp"
#include "dagp/rng.hpp"

using namespace dagp;

namespace {

const UnitSignature kLen{{1, 0, 0, 0, 0}};
const UnitSignature kTim{{0, 1, 0, 0, 0}};
const UnitSignature kSpeed{{1, -1, 0, 0, 0}};

const std::vector<std::string> kNames{"d", "t"};
const std::vector<UnitSignature> kSigs{kLen, kTim};

ExprPtr d_var() { return Expr::var(0, kLen); }
ExprPtr t_var() { return Expr::var(1, kTim); }

// Random signature-consistent tree over {d, t}; used for cache/round-trip
// properties.
ExprPtr random_tree(Rng& rng, int depth) {
    if (depth == 0 || rng.next_below(3) == 0) {
        switch (rng.next_below(3)) {
            case 0: return d_var();
            case 1: return t_var();
            default: return Expr::constant(rng.next_int(-5, 5));
        }
    }
    ExprPtr lhs = random_tree(rng, depth - 1);
    ExprPtr rhs = random_tree(rng, depth - 1);
    switch (rng.next_below(4)) {
        case 0:
            if (lhs->signature == rhs->signature) return Expr::add(lhs, rhs);
            return Expr::mul(lhs, rhs);
        case 1:
            if (lhs->signature == rhs->signature) return Expr::sub(lhs, rhs);
            return Expr::div(lhs, rhs);
        case 2: return Expr::mul(lhs, rhs);
        default: return Expr::div(lhs, rhs);
    }
}

UnitSignature recompute_signature(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Var: return e.signature;  // leaves carry their binding
        case ExprKind::Const: return kDimensionless;
        case ExprKind::Add:
        case ExprKind::Sub:
            return sig_addsub_check(recompute_signature(*e.left),
                                    recompute_signature(*e.right));
        case ExprKind::Mul:
            return sig_mul(recompute_signature(*e.left), recompute_signature(*e.right));
        default:
            return sig_div(recompute_signature(*e.left), recompute_signature(*e.right));
    }
}

int recompute_size(const Expr& e) {
    if (e.is_leaf()) return 1;
    return 1 + recompute_size(*e.left) + recompute_size(*e.right);
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("evaluate basic arithmetic") {
    ExprPtr e = Expr::mul(Expr::var(0, kLen), Expr::var(1, kLen));
    const std::array<double, 2> point{3.0, 4.0};
    CHECK(evaluate(*e, point) == 12.0);
}

TEST_CASE("evaluate reports division by zero as non-finite") {
    ExprPtr e = Expr::div(Expr::constant(2), Expr::var(0, kLen));
    const std::array<double, 1> zero{0.0};
    CHECK_FALSE(evaluate(*e, zero).has_value());
    const std::array<double, 1> two{2.0};
    CHECK(evaluate(*e, two) == 1.0);
}

TEST_CASE("size counts all nodes") {
    CHECK(d_var()->size == 1);
    CHECK(Expr::mul(d_var(), t_var())->size == 3);
    ExprPtr e = Expr::add(Expr::mul(d_var(), d_var()), Expr::mul(d_var(), d_var()));
    CHECK(e->size == 7);
}

TEST_CASE("signature fold and incommensurable addition") {
    ExprPtr speed = Expr::mul(Expr::div(Expr::constant(1), t_var()), d_var());
    CHECK(speed->signature == kSpeed);
    CHECK(Expr::constant(3)->signature == kDimensionless);
    CHECK_THROWS_AS(Expr::add(d_var(), t_var()), IncommensurableError);
}

TEST_CASE("canonical key orders commutative operands only") {
    ExprPtr a = d_var();
    ExprPtr b = t_var();
    CHECK(canonical_key(*Expr::mul(a, b)) == canonical_key(*Expr::mul(b, a)));
    CHECK(canonical_key(*Expr::add(a, a)) == canonical_key(*Expr::add(a, a)));
    CHECK(canonical_key(*Expr::div(a, b)) != canonical_key(*Expr::div(b, a)));
    CHECK(canonical_key(*Expr::sub(a, a)) == canonical_key(*Expr::sub(a, a)));

    // associativity is structural, not normalized
    ExprPtr x = d_var();
    ExprPtr y = Expr::mul(d_var(), Expr::constant(2));
    ExprPtr z = Expr::mul(d_var(), Expr::constant(3));
    ExprPtr left = Expr::add(Expr::add(x, y), z);
    ExprPtr right = Expr::add(x, Expr::add(y, z));
    CHECK(canonical_key(*left) != canonical_key(*right));
}

TEST_CASE("canonical key is stable across rebuilds") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        ExprPtr e = random_tree(rng, 4);
        const std::string prefix = to_prefix(*e, kNames);
        ExprPtr reparsed = parse_prefix(prefix, kNames, kSigs);
        CHECK(canonical_key(*e) == canonical_key(*reparsed));
        CHECK(structurally_equal(*e, *reparsed));
    }
}

TEST_CASE("substitute_subtree keeps signatures and rejects mismatches") {
    ExprPtr root = d_var();
    ExprPtr doubled = Expr::mul(d_var(), Expr::constant(2));
    ExprPtr out = substitute_subtree(root, 0, doubled, 42);
    CHECK(out->size == 3);
    CHECK(out->signature == kLen);

    CHECK_THROWS_AS(substitute_subtree(root, 0, t_var(), 42), SignatureMismatchError);

    // pre-order positions: 0 = root Mul, 1 = d, 2 = Const
    ExprPtr tree = Expr::mul(d_var(), Expr::constant(2));
    CHECK(subtree_at(*tree, 1)->kind == ExprKind::Var);
    CHECK(subtree_at(*tree, 2)->kind == ExprKind::Const);
    ExprPtr swapped = substitute_subtree(tree, 2, Expr::constant(5), 42);
    CHECK(evaluate(*swapped, std::array<double, 2>{3.0, 0.0}) == 15.0);
    CHECK_THROWS_AS(subtree_at(*tree, 3), std::out_of_range);
}

TEST_CASE("substitute_subtree enforces the size cap") {
    ExprPtr root = d_var();
    ExprPtr repl = d_var();
    for (int i = 0; i < 21; ++i) repl = Expr::mul(repl, Expr::constant(1));
    CHECK(repl->size == 43);
    CHECK_THROWS_AS(substitute_subtree(root, 0, repl, 42), SizeLimitError);
    CHECK_NOTHROW(substitute_subtree(root, 0, repl, 0));  // 0 disables the cap
}

TEST_CASE("cached signature and size match a recomputation") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        ExprPtr e = random_tree(rng, 5);
        CHECK(recompute_signature(*e) == e->signature);
        CHECK(recompute_size(*e) == e->size);
    }
}

TEST_CASE("prefix text round-trips and infix prints") {
    ExprPtr e = Expr::div(Expr::mul(d_var(), d_var()), Expr::sub(t_var(), t_var()));
    CHECK(to_prefix(*e, kNames) == "(/ (* d d) (- t t))");
    CHECK(to_infix(*e, kNames) == "((d*d)/(t-t))");
    ExprPtr back = parse_prefix("(/ (* d d) (- t t))", kNames, kSigs);
    CHECK(structurally_equal(*e, *back));
    CHECK(parse_prefix("-7", kNames, kSigs)->payload == -7);
    CHECK_THROWS_AS(parse_prefix("(* d", kNames, kSigs), ExprParseError);
    CHECK_THROWS_AS(parse_prefix("(? d t)", kNames, kSigs), ExprParseError);
    CHECK_THROWS_AS(parse_prefix("(* d q)", kNames, kSigs), ExprParseError);
}

TEST_CASE("evaluate is deterministic") {
    Rng rng(13);
    ExprPtr e = random_tree(rng, 5);
    const std::array<double, 2> point{1.5, 2.5};
    const auto first = evaluate(*e, point);
    for (int i = 0; i < 10; ++i) CHECK(evaluate(*e, point) == first);
}

}  // TEST_SUITE
