#include <set>

#include "doctest.h"

#include "dagp/gp.hpp"

using namespace dagp;
using namespace dagp::gp;

namespace {

// Fixed tree pair used across the operator tests:
//   a = (+ (* x0 x1) (sin x0))     b = (/ x1 (cos (* x0 x0)))
GpTree tree_a() {
    return {{GpOp::Add, 0}, {GpOp::Mul, 0}, {GpOp::Var, 0},
            {GpOp::Var, 1}, {GpOp::Sin, 0}, {GpOp::Var, 0}};
}
GpTree tree_b() {
    return {{GpOp::Div, 0}, {GpOp::Var, 1}, {GpOp::Cos, 0},
            {GpOp::Mul, 0}, {GpOp::Var, 0}, {GpOp::Var, 0}};
}

std::multiset<int> op_multiset(const GpTree& t) {
    std::multiset<int> ops;
    for (const GpNode& n : t) ops.insert(static_cast<int>(n.op));
    return ops;
}

bool is_subsequence_subtree(const GpTree& whole, const GpTree& part) {
    for (std::size_t i = 0; i < whole.size(); ++i) {
        if (subtree_end(whole, i) - i != part.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < part.size(); ++k) {
            if (whole[i + k].op != part[k].op || whole[i + k].var != part[k].var) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("gp") {

TEST_CASE("tree plumbing") {
    const GpTree a = tree_a();
    CHECK(well_formed(a, 2));
    CHECK(subtree_end(a, 0) == 6);
    CHECK(subtree_end(a, 1) == 4);  // (* x0 x1)
    CHECK(subtree_end(a, 4) == 6);  // (sin x0)
    CHECK(tree_depth(a) == 2);
    CHECK(to_string(a, std::vector<std::string>{"x0", "x1"}) ==
          "(+ (* x0 x1) (sin x0))");
    CHECK_FALSE(well_formed(GpTree{{GpOp::Add, 0}, {GpOp::Var, 0}}, 2));
    CHECK_FALSE(well_formed(GpTree{{GpOp::Var, 5}}, 2));
}

TEST_CASE("random trees respect the depth bound") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const bool full = (i % 2) == 0;
        const int depth = 2 + (i % 5);
        const GpTree t = random_tree(rng, 3, depth, full);
        CHECK(well_formed(t, 3));
        CHECK(tree_depth(t) <= depth);
        if (full && !t.empty()) CHECK(tree_depth(t) == depth);
    }
}

TEST_CASE("crossovers produce well-formed offspring from parent material") {
    const GpTree a = tree_a();
    const GpTree b = tree_b();
    for (auto kind : {CrossoverKind::Subtree, CrossoverKind::OnePoint,
                      CrossoverKind::SizeFair, CrossoverKind::Uniform,
                      CrossoverKind::ContextPreserving}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            const GpTree child = crossover(kind, a, b, rng);
            INFO("kind ", static_cast<int>(kind), " seed ", seed);
            CHECK(well_formed(child, 2));
            // determinism: the same seed reproduces the same offspring
            Rng rng2(seed);
            const GpTree again = crossover(kind, a, b, rng2);
            CHECK(child.size() == again.size());
            for (std::size_t i = 0; i < child.size(); ++i) {
                CHECK(child[i].op == again[i].op);
                CHECK(child[i].var == again[i].var);
            }
        }
    }
}

TEST_CASE("one-point crossover swaps at an aligned point") {
    // the offspring always keeps a prefix of parent a and embeds a whole
    // subtree of parent b
    const GpTree a = tree_a();
    const GpTree b = tree_b();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const GpTree child = crossover(CrossoverKind::OnePoint, a, b, rng);
        CHECK(well_formed(child, 2));
        bool from_b = false;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (is_subsequence_subtree(child, GpTree(b.begin() + i,
                                                     b.begin() + subtree_end(b, i)))) {
                from_b = true;
            }
        }
        CHECK(from_b);
    }
}

TEST_CASE("size-fair crossover bounds the incoming subtree") {
    const GpTree a = tree_a();
    const GpTree b = tree_b();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const GpTree child = crossover(CrossoverKind::SizeFair, a, b, rng);
        CHECK(well_formed(child, 2));
        // removed |t| >= 1, so the child never grows past |a| + 2|t|+1 - |t|
        CHECK(child.size() <= a.size() + b.size());
    }
}

TEST_CASE("mutations keep trees well-formed and obey their contracts") {
    const GpTree a = tree_a();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const GpTree hoisted = mutate(MutationKind::Hoist, a, 2, 6, rng);
        CHECK(well_formed(hoisted, 2));
        CHECK(is_subsequence_subtree(a, hoisted));  // a subtree of the parent

        Rng rng2(seed);
        const GpTree shrunk = mutate(MutationKind::Shrink, a, 2, 6, rng2);
        CHECK(well_formed(shrunk, 2));
        CHECK(shrunk.size() < a.size());

        Rng rng3(seed);
        const GpTree permuted = mutate(MutationKind::Permutation, a, 2, 6, rng3);
        CHECK(well_formed(permuted, 2));
        CHECK(op_multiset(permuted) == op_multiset(a));  // same nodes, new order
        CHECK(permuted.size() == a.size());

        Rng rng4(seed);
        const GpTree replaced = mutate(MutationKind::NodeReplace, a, 2, 6, rng4);
        CHECK(well_formed(replaced, 2));
        CHECK(replaced.size() == a.size());
        int differing = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (replaced[i].op != a[i].op || replaced[i].var != a[i].var) ++differing;
        }
        CHECK(differing <= 1);

        Rng rng5(seed);
        const GpTree regrown = mutate(MutationKind::Subtree, a, 2, 6, rng5);
        CHECK(well_formed(regrown, 2));
        CHECK(tree_depth(regrown) <= 6);
    }
    // single-terminal parents survive operators that need function nodes
    const GpTree leaf{{GpOp::Var, 0}};
    Rng rng(9);
    CHECK(mutate(MutationKind::Permutation, leaf, 2, 6, rng) == leaf);
    CHECK(mutate(MutationKind::Shrink, leaf, 2, 6, rng) == leaf);
}

TEST_CASE("gp evaluation maps non-finite rows to the sentinel") {
    const EquationSpec& spec = *find_equation("I.12.5");
    std::vector<std::vector<double>> cols{{1.0, 0.0}, {2.0, 2.0}};
    Dataset d(spec, cols, {2.0, 0.0});
    EvalWorkspace ws;
    const GpTree divider{{GpOp::Div, 0}, {GpOp::Var, 1}, {GpOp::Var, 0}};
    CHECK(gp_eval(divider, d, ws) == nullptr);
    const GpTree product{{GpOp::Mul, 0}, {GpOp::Var, 0}, {GpOp::Var, 1}};
    const double* out = gp_eval(product, d, ws);
    REQUIRE(out != nullptr);
    CHECK(out[0] == 2.0);
    CHECK(out[1] == 0.0);
}

TEST_CASE("budget 0 stops after initialization") {
    const EquationSpec& spec = *find_equation("I.13.4");
    Dataset d = generate_synthetic(spec, 50, 11);
    GpConfig cfg;
    cfg.budget = 0;
    const GpRunOutcome outcome = run_gp(spec, d, cfg, 5);
    CHECK_FALSE(outcome.success);
    CHECK(outcome.evaluations == cfg.population_size);
    CHECK(outcome.best_mse > 0.0);
    CHECK_FALSE(outcome.best_expression.empty());
}

TEST_CASE("identical seeds give identical outcomes") {
    const EquationSpec& spec = *find_equation("I.12.5");
    Dataset d = generate_synthetic(spec, 50, 12);
    GpConfig cfg;
    cfg.budget = 3000;
    cfg.scaling = ScalingMode::Linear;
    const GpRunOutcome a = run_gp(spec, d, cfg, 77);
    const GpRunOutcome b = run_gp(spec, d, cfg, 77);
    CHECK(a.success == b.success);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.best_mse == b.best_mse);
    CHECK(a.best_expression == b.best_expression);
    const GpRunOutcome c = run_gp(spec, d, cfg, 78);
    CHECK((c.evaluations != a.evaluations || c.best_expression != a.best_expression));
}

TEST_CASE("simple targets are found within a modest budget") {
    const EquationSpec& spec = *find_equation("I.12.5");
    Dataset d = generate_synthetic(spec, 100, 13);
    GpConfig cfg;
    cfg.scaling = ScalingMode::Linear;
    cfg.budget = 100000;
    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        if (run_gp(spec, d, cfg, seed).success) ++successes;
    }
    CHECK(successes >= 2);
}

TEST_CASE("estimate_evaluations follows the totals-over-successes rule") {
    std::vector<GpRunOutcome> outcomes(50);
    for (auto& o : outcomes) {
        o.success = true;
        o.evaluations = 580;
    }
    CHECK(estimate_evaluations(outcomes) == 580.0);

    std::vector<GpRunOutcome> mixed(50);
    for (int i = 0; i < 49; ++i) {
        mixed[i].success = false;
        mixed[i].evaluations = 100000;
    }
    mixed[49].success = true;
    mixed[49].evaluations = 1000;
    CHECK(estimate_evaluations(mixed) == 4901000.0);

    std::vector<GpRunOutcome> none(3);
    CHECK_FALSE(estimate_evaluations(none).has_value());
}

}  // TEST_SUITE
