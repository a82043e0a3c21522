#include <algorithm>
#include <set>

#include "doctest.h"

#include "dagp/neighbourhood.hpp"
#include "dagp/rng.hpp"

using namespace dagp;

namespace {

std::multiset<std::string> key_multiset(const std::vector<ExprPtr>& list) {
    std::multiset<std::string> keys;
    for (const ExprPtr& e : list) keys.insert(canonical_key(*e));
    return keys;
}

}  // namespace

TEST_SUITE("neighbourhood") {

TEST_CASE("config validation") {
    NeighbourhoodConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.constant_set = {1, 0, 2};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = NeighbourhoodConfig{};
    cfg.size_cap = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = NeighbourhoodConfig{};
    cfg.operator_order = {NeighbourOp::Replace, NeighbourOp::Replace};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.operator_order = {NeighbourOp::Replace, NeighbourOp::AddComm};
    CHECK_NOTHROW(cfg.validate());  // ordered subsets are allowed
    CHECK(parse_neighbour_op("mul-int") == NeighbourOp::MulInt);
    CHECK_THROWS_AS(parse_neighbour_op("bogus"), std::invalid_argument);
}

TEST_CASE("every neighbour keeps the signature and the size cap") {
    Rng rng(31);
    for (const char* id : {"I.12.5", "I.24.6", "I.27.6"}) {
        const EquationSpec& spec = *find_equation(id);
        NeighbourhoodConfig cfg;
        MonomialCache cache(spec, cfg.exponent_range);
        ExprPtr e = enumerate_initial(spec, cfg.exponent_range)[0];
        for (int step = 0; step < 4; ++step) {
            const auto list = neighbours(e, spec, cfg, cache);
            for (const ExprPtr& n : list) {
                CHECK(n->signature == spec.target_signature);
                CHECK(n->size <= cfg.size_cap);
            }
            if (list.empty()) break;
            e = list[rng.next_below(list.size())];
        }
    }
}

TEST_CASE("integer wrap operators enumerate constants at every position") {
    const EquationSpec& spec = *find_equation("I.12.5");
    NeighbourhoodConfig cfg;
    cfg.operator_order = {NeighbourOp::MulInt};
    MonomialCache cache(spec, cfg.exponent_range);
    ExprPtr e = enumerate_initial(spec, cfg.exponent_range)[0];  // (* q2 Ef)
    const auto list = neighbours(e, spec, cfg, cache);

    // oracle: every pre-order position times every constant
    std::vector<ExprPtr> expected;
    for (int pos = 0; pos < e->size; ++pos) {
        for (int k : cfg.constant_set) {
            const Expr* t = subtree_at(*e, pos);
            ExprPtr wrapped = Expr::mul(ExprPtr(e, t), Expr::constant(k));
            expected.push_back(substitute_subtree(e, pos, wrapped, cfg.size_cap));
        }
    }
    REQUIRE(list.size() == expected.size());
    CHECK(list.size() == 6u * 3u);
    for (std::size_t i = 0; i < list.size(); ++i) {
        CHECK(canonical_key(*list[i]) == canonical_key(*expected[i]));
    }

    cfg.operator_order = {NeighbourOp::DivInt};
    const auto divs = neighbours(e, spec, cfg, cache);
    CHECK(divs.size() == 6u * 3u);
    for (const ExprPtr& n : divs) CHECK(n->signature == e->signature);
}

TEST_CASE("replacement offers commensurate monomials, never the incumbent") {
    const EquationSpec& spec = *find_equation("I.12.1");  // mu (none), Nn (force)
    NeighbourhoodConfig cfg;
    cfg.operator_order = {NeighbourOp::Replace};
    MonomialCache cache(spec, cfg.exponent_range);

    // start "Nn" is the monomial mu^0 Nn^1; replacement applies to proper
    // subtrees only, and a single node has none
    const auto initial = enumerate_initial(spec, cfg.exponent_range);
    ExprPtr bare = initial[3];  // exponents (0, 1)
    REQUIRE(bare->size == 1);
    CHECK(neighbours(bare, spec, cfg, cache).empty());

    // inside a larger tree the force-signature subtree gets all seven
    // monomials minus itself
    ExprPtr wrapped = Expr::mul(bare, Expr::constant(2));
    std::vector<ExprPtr> at_force_leaf;
    apply_operator(NeighbourOp::Replace, wrapped, 1, cfg, cache, at_force_leaf);
    CHECK(at_force_leaf.size() == 6);  // 7 force monomials minus the incumbent
    for (const ExprPtr& n : at_force_leaf) {
        CHECK(n->signature == spec.target_signature);
        CHECK_FALSE(canonical_key(*n) == canonical_key(*wrapped));
    }
    const auto list = neighbours(wrapped, spec, cfg, cache);
    // positions 1 (force leaf, 6 candidates) and 2 (const leaf, 7 candidates)
    CHECK(list.size() == 13);
}

TEST_CASE("replacement on a constant leaf offers dimensionless monomials") {
    const EquationSpec& spec = *find_equation("I.12.1");
    NeighbourhoodConfig cfg;
    cfg.operator_order = {NeighbourOp::Replace};
    MonomialCache cache(spec, cfg.exponent_range);
    ExprPtr e = Expr::mul(enumerate_initial(spec, cfg.exponent_range)[3],
                          Expr::constant(2));
    // position 2 is the Const leaf; its replacements are the dimensionless
    // monomials mu^k (k in [-3,3], k != "2"-shaped, i.e. all of them)
    std::vector<ExprPtr> out;
    apply_operator(NeighbourOp::Replace, e, 2, cfg, cache, out);
    CHECK(out.size() == 7);  // mu^-3 .. mu^3 including the bare 1
    for (const ExprPtr& n : out) {
        CHECK(is_dimensionless(subtree_at(*n, 2)->signature));
    }
}

TEST_CASE("add and sub wrap with commensurate monomials at every position") {
    const EquationSpec& spec = *find_equation("I.12.5");
    NeighbourhoodConfig cfg;
    cfg.operator_order = {NeighbourOp::AddComm};
    MonomialCache cache(spec, cfg.exponent_range);
    ExprPtr e = enumerate_initial(spec, cfg.exponent_range)[0];
    const auto adds = neighbours(e, spec, cfg, cache);
    // root: force monomials (1); q2 leaf: charge monomials (1); Ef leaf: (1)
    CHECK(adds.size() == 3);
    for (const ExprPtr& n : adds) {
        CHECK(n->signature == spec.target_signature);
    }
    // the root wrap exists: (+ (* q2 Ef) (* q2 Ef))
    bool found_root_wrap = false;
    for (const ExprPtr& n : adds) {
        if (n->kind == ExprKind::Add && n->size == 7) found_root_wrap = true;
    }
    CHECK(found_root_wrap);
}

TEST_CASE("whole-tree replacement is not a neighbourhood move") {
    // neighbours() must equal the union of apply_operator over positions,
    // with replacement restricted to proper subtrees
    const EquationSpec& spec = *find_equation("I.24.6");
    NeighbourhoodConfig cfg;
    MonomialCache cache(spec, cfg.exponent_range);
    const auto initial = enumerate_initial(spec, cfg.exponent_range);
    REQUIRE(initial.size() == 5);
    ExprPtr e = initial[2];

    std::vector<ExprPtr> expected;
    for (NeighbourOp op : cfg.operator_order) {
        const int first = (op == NeighbourOp::Replace) ? 1 : 0;
        for (int pos = first; pos < e->size; ++pos) {
            apply_operator(op, e, pos, cfg, cache, expected);
        }
    }
    const auto list = neighbours(e, spec, cfg, cache);
    REQUIRE(list.size() == expected.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        CHECK(canonical_key(*list[i]) == canonical_key(*expected[i]));
    }

    // a single-node tree has no proper subtree, so replacement alone yields
    // nothing even though the root position would have four candidates
    const EquationSpec& one = *find_equation("I.12.1");
    MonomialCache one_cache(one, cfg.exponent_range);
    NeighbourhoodConfig replace_only;
    replace_only.operator_order = {NeighbourOp::Replace};
    ExprPtr bare = enumerate_initial(one, cfg.exponent_range)[3];
    REQUIRE(bare->size == 1);
    std::vector<ExprPtr> at_root;
    apply_operator(NeighbourOp::Replace, bare, 0, replace_only, one_cache, at_root);
    CHECK(at_root.size() == 6);
    CHECK(neighbours(bare, one, replace_only, one_cache).empty());
}

TEST_CASE("candidates over the size cap are dropped silently") {
    const EquationSpec& spec = *find_equation("I.12.5");
    NeighbourhoodConfig cfg;
    cfg.size_cap = 3;
    MonomialCache cache(spec, cfg.exponent_range);
    ExprPtr e = enumerate_initial(spec, cfg.exponent_range)[0];  // size 3
    // every wrap would reach size 5; replacement of leaves with single-var
    // monomials is all that survives
    const auto list = neighbours(e, spec, cfg, cache);
    for (const ExprPtr& n : list) CHECK(n->size <= 3);
}

TEST_CASE("minimal tree with no moves yields an empty neighbourhood") {
    const EquationSpec& spec = *find_equation("I.12.1");
    NeighbourhoodConfig cfg;
    cfg.constant_set.clear();  // no integer wraps
    cfg.operator_order = {NeighbourOp::Replace, NeighbourOp::MulInt,
                          NeighbourOp::DivInt};
    MonomialCache cache(spec, cfg.exponent_range);
    ExprPtr bare = enumerate_initial(spec, cfg.exponent_range)[3];
    REQUIRE(bare->size == 1);
    CHECK(neighbours(bare, spec, cfg, cache).empty());
}

TEST_CASE("operator order permutes blocks but keeps the candidate multiset") {
    const EquationSpec& spec = *find_equation("I.24.6");
    NeighbourhoodConfig forward;
    NeighbourhoodConfig backward;
    backward.operator_order = {NeighbourOp::DivInt, NeighbourOp::MulInt,
                               NeighbourOp::SubComm, NeighbourOp::AddComm,
                               NeighbourOp::Replace};
    MonomialCache cache(spec, forward.exponent_range);
    ExprPtr e = enumerate_initial(spec, forward.exponent_range)[1];
    const auto a = neighbours(e, spec, forward, cache);
    const auto b = neighbours(e, spec, backward, cache);
    REQUIRE(a.size() == b.size());
    CHECK(key_multiset(a) == key_multiset(b));
    // deterministic repetition
    const auto a2 = neighbours(e, spec, forward, cache);
    REQUIRE(a.size() == a2.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(canonical_key(*a[i]) == canonical_key(*a2[i]));
    }
}

}  // TEST_SUITE
