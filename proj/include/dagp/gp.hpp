#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagp/dataset.hpp"
#include "dagp/fitness.hpp"
#include "dagp/rng.hpp"

// Dimension-blind steady-state GP used as the comparison baseline.  Trees
// are flat pre-order vectors over {+, -, *, /, sin, cos} with variables as
// the only terminals; linear scaling supplies affine constants.

namespace dagp::gp {

struct GpConfig {
    int population_size = 500;
    double mutation_rate = 0.5;
    int max_depth = 6;  // edges from root to deepest leaf
    long long budget = 100000;
    int tournament = 3;
    ScalingMode scaling = ScalingMode::None;
};

struct GpRunOutcome {
    bool success = false;
    long long evaluations = 0;  // at first hit, or total when unsuccessful
    double best_mse = 0.0;
    std::string best_expression;
};

GpRunOutcome run_gp(const EquationSpec& spec, const Dataset& d, const GpConfig& cfg,
                    std::uint64_t seed);

// Total evaluations across all runs divided by the number of successful
// runs; absent when nothing succeeded.
std::optional<double> estimate_evaluations(std::span<const GpRunOutcome> outcomes);

// --- tree representation and variation operators, exposed for tests ---

enum class GpOp : unsigned char { Add, Sub, Mul, Div, Sin, Cos, Var };

struct GpNode {
    GpOp op = GpOp::Var;
    std::int16_t var = 0;

    friend bool operator==(const GpNode&, const GpNode&) = default;
};

using GpTree = std::vector<GpNode>;

int arity(GpOp op);
// One-past-the-end index of the subtree rooted at position i.
std::size_t subtree_end(const GpTree& tree, std::size_t i);
int tree_depth(const GpTree& tree);
bool well_formed(const GpTree& tree, int var_count);
std::string to_string(const GpTree& tree, std::span<const std::string> var_names);

// grow: operators and terminals mixed until the depth budget runs out;
// full: operators down to exactly the budget, then terminals.
GpTree random_tree(Rng& rng, int var_count, int max_depth, bool full);

// Crossovers (offspring from two parents):
//   Subtree           — a random subtree of the first parent is replaced by a
//                       random subtree of the second.
//   OnePoint          — both parents are walked together through the region
//                       where their shapes agree (equal arities); subtrees are
//                       swapped at one random aligned point.
//   SizeFair          — like Subtree, but the incoming subtree is drawn only
//                       from second-parent subtrees of size at most 2|t|+1
//                       where |t| is the size of the removed subtree.
//   Uniform           — the offspring copies each aligned node from a randomly
//                       chosen parent; where the shapes diverge the whole
//                       subtree comes from the chosen parent.
//   ContextPreserving — the crossover point is one random coordinate path
//                       that is valid in both parents; subtrees are swapped
//                       at that same position.
enum class CrossoverKind { Subtree, OnePoint, SizeFair, Uniform, ContextPreserving };

// Mutations (offspring from one parent):
//   Subtree     — a random subtree is regrown within the remaining depth.
//   Hoist       — the offspring is one random subtree of the parent.
//   NodeReplace — one random node is swapped for another of the same arity.
//   Permutation — the children of one random binary node are swapped.
//   Shrink      — one random function node is replaced by one of its children.
enum class MutationKind { Subtree, Hoist, NodeReplace, Permutation, Shrink };

GpTree crossover(CrossoverKind kind, const GpTree& a, const GpTree& b, Rng& rng);
GpTree mutate(MutationKind kind, const GpTree& tree, int var_count, int max_depth,
              Rng& rng);

// Batch evaluation over the dataset; nullptr when any output is non-finite.
const double* gp_eval(const GpTree& tree, const Dataset& d, EvalWorkspace& ws);

}  // namespace dagp::gp
