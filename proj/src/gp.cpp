#include "dagp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dagp/kernels.hpp"

namespace dagp::gp {

int arity(GpOp op) {
    switch (op) {
        case GpOp::Add:
        case GpOp::Sub:
        case GpOp::Mul:
        case GpOp::Div: return 2;
        case GpOp::Sin:
        case GpOp::Cos: return 1;
        case GpOp::Var: return 0;
    }
    return 0;
}

std::size_t subtree_end(const GpTree& tree, std::size_t i) {
    std::size_t remaining = 1;
    while (remaining > 0) {
        remaining += static_cast<std::size_t>(arity(tree[i].op));
        --remaining;
        ++i;
    }
    return i;
}

namespace {

std::vector<int> node_depths(const GpTree& tree) {
    std::vector<int> depths(tree.size(), 0);
    std::vector<std::pair<std::size_t, int>> stack;  // (remaining children, depth)
    for (std::size_t i = 0; i < tree.size(); ++i) {
        depths[i] = stack.empty() ? 0 : stack.back().second + 1;
        const int a = arity(tree[i].op);
        if (a > 0) {
            stack.emplace_back(static_cast<std::size_t>(a), depths[i]);
        } else {
            while (!stack.empty() && --stack.back().first == 0) stack.pop_back();
        }
    }
    return depths;
}

GpTree copy_subtree(const GpTree& tree, std::size_t i) {
    return GpTree(tree.begin() + static_cast<std::ptrdiff_t>(i),
                  tree.begin() + static_cast<std::ptrdiff_t>(subtree_end(tree, i)));
}

GpTree replace_span(const GpTree& tree, std::size_t i, std::size_t end,
                    const GpTree& replacement) {
    GpTree out;
    out.reserve(tree.size() - (end - i) + replacement.size());
    out.insert(out.end(), tree.begin(), tree.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), replacement.begin(), replacement.end());
    out.insert(out.end(), tree.begin() + static_cast<std::ptrdiff_t>(end), tree.end());
    return out;
}

constexpr GpOp kFunctions[] = {GpOp::Add, GpOp::Sub, GpOp::Mul,
                               GpOp::Div, GpOp::Sin, GpOp::Cos};
constexpr GpOp kBinary[] = {GpOp::Add, GpOp::Sub, GpOp::Mul, GpOp::Div};

void grow_rec(Rng& rng, int var_count, int budget, bool full, GpTree& out) {
    const bool make_function =
        budget > 0 && (full || rng.next_below(3) < 2);  // grow branches 2/3 of the time
    if (!make_function) {
        out.push_back({GpOp::Var, static_cast<std::int16_t>(rng.next_below(
                                      static_cast<std::uint64_t>(var_count)))});
        return;
    }
    const GpOp op = kFunctions[rng.next_below(6)];
    out.push_back({op, 0});
    for (int c = 0; c < arity(op); ++c) {
        grow_rec(rng, var_count, budget - 1, full, out);
    }
}

}  // namespace

int tree_depth(const GpTree& tree) {
    const std::vector<int> depths = node_depths(tree);
    return *std::max_element(depths.begin(), depths.end());
}

bool well_formed(const GpTree& tree, int var_count) {
    if (tree.empty()) return false;
    std::size_t needed = 1;
    for (const GpNode& node : tree) {
        if (needed == 0) return false;  // trailing nodes
        if (node.op == GpOp::Var && (node.var < 0 || node.var >= var_count)) {
            return false;
        }
        needed += static_cast<std::size_t>(arity(node.op));
        --needed;
    }
    return needed == 0;
}

std::string to_string(const GpTree& tree, std::span<const std::string> var_names) {
    std::string out;
    std::size_t idx = 0;
    auto rec = [&](auto&& self) -> void {
        const GpNode node = tree[idx++];
        switch (node.op) {
            case GpOp::Var:
                out += var_names[static_cast<std::size_t>(node.var)];
                return;
            case GpOp::Sin:
            case GpOp::Cos:
                out += (node.op == GpOp::Sin) ? "(sin " : "(cos ";
                self(self);
                out += ')';
                return;
            default: {
                static constexpr char symbol[] = {'+', '-', '*', '/'};
                out += '(';
                out += symbol[static_cast<int>(node.op)];
                out += ' ';
                self(self);
                out += ' ';
                self(self);
                out += ')';
                return;
            }
        }
    };
    rec(rec);
    return out;
}

GpTree random_tree(Rng& rng, int var_count, int max_depth, bool full) {
    GpTree out;
    grow_rec(rng, var_count, max_depth, full, out);
    return out;
}

namespace {

// Aligned positions where both trees have equal arities (the crossover
// "common region"), or merely a shared coordinate path when match_arity is
// false.
void common_points(const GpTree& a, std::size_t ia, const GpTree& b, std::size_t ib,
                   bool match_arity,
                   std::vector<std::pair<std::size_t, std::size_t>>& out) {
    out.emplace_back(ia, ib);
    const int aa = arity(a[ia].op);
    const int ab = arity(b[ib].op);
    const int descend = match_arity ? (aa == ab ? aa : 0) : std::min(aa, ab);
    std::size_t ca = ia + 1;
    std::size_t cb = ib + 1;
    for (int c = 0; c < descend; ++c) {
        common_points(a, ca, b, cb, match_arity, out);
        ca = subtree_end(a, ca);
        cb = subtree_end(b, cb);
    }
}

GpTree cx_subtree(const GpTree& a, const GpTree& b, Rng& rng) {
    const std::size_t pa = rng.next_below(a.size());
    const std::size_t pb = rng.next_below(b.size());
    return replace_span(a, pa, subtree_end(a, pa), copy_subtree(b, pb));
}

GpTree cx_one_point(const GpTree& a, const GpTree& b, Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> points;
    common_points(a, 0, b, 0, /*match_arity=*/true, points);
    const auto [pa, pb] = points[rng.next_below(points.size())];
    return replace_span(a, pa, subtree_end(a, pa), copy_subtree(b, pb));
}

GpTree cx_size_fair(const GpTree& a, const GpTree& b, Rng& rng) {
    const std::size_t pa = rng.next_below(a.size());
    const std::size_t removed = subtree_end(a, pa) - pa;
    std::vector<std::size_t> candidates;
    for (std::size_t pb = 0; pb < b.size(); ++pb) {
        if (subtree_end(b, pb) - pb <= 2 * removed + 1) candidates.push_back(pb);
    }
    const std::size_t pb = candidates[rng.next_below(candidates.size())];
    return replace_span(a, pa, subtree_end(a, pa), copy_subtree(b, pb));
}

void uniform_rec(const GpTree& a, std::size_t ia, const GpTree& b, std::size_t ib,
                 Rng& rng, GpTree& out) {
    const bool from_a = rng.next_bool();
    if (arity(a[ia].op) != arity(b[ib].op)) {
        const GpTree sub = from_a ? copy_subtree(a, ia) : copy_subtree(b, ib);
        out.insert(out.end(), sub.begin(), sub.end());
        return;
    }
    out.push_back(from_a ? a[ia] : b[ib]);
    std::size_t ca = ia + 1;
    std::size_t cb = ib + 1;
    for (int c = 0; c < arity(a[ia].op); ++c) {
        uniform_rec(a, ca, b, cb, rng, out);
        ca = subtree_end(a, ca);
        cb = subtree_end(b, cb);
    }
}

GpTree cx_uniform(const GpTree& a, const GpTree& b, Rng& rng) {
    GpTree out;
    uniform_rec(a, 0, b, 0, rng, out);
    return out;
}

GpTree cx_context_preserving(const GpTree& a, const GpTree& b, Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> points;
    common_points(a, 0, b, 0, /*match_arity=*/false, points);
    const auto [pa, pb] = points[rng.next_below(points.size())];
    return replace_span(a, pa, subtree_end(a, pa), copy_subtree(b, pb));
}

}  // namespace

GpTree crossover(CrossoverKind kind, const GpTree& a, const GpTree& b, Rng& rng) {
    switch (kind) {
        case CrossoverKind::Subtree: return cx_subtree(a, b, rng);
        case CrossoverKind::OnePoint: return cx_one_point(a, b, rng);
        case CrossoverKind::SizeFair: return cx_size_fair(a, b, rng);
        case CrossoverKind::Uniform: return cx_uniform(a, b, rng);
        case CrossoverKind::ContextPreserving: return cx_context_preserving(a, b, rng);
    }
    throw std::logic_error("unreachable crossover kind");
}

GpTree mutate(MutationKind kind, const GpTree& tree, int var_count, int max_depth,
              Rng& rng) {
    switch (kind) {
        case MutationKind::Subtree: {
            const std::size_t p = rng.next_below(tree.size());
            const int budget = max_depth - node_depths(tree)[p];
            const GpTree sub =
                random_tree(rng, var_count, std::max(0, budget), /*full=*/false);
            return replace_span(tree, p, subtree_end(tree, p), sub);
        }
        case MutationKind::Hoist: {
            const std::size_t p = rng.next_below(tree.size());
            return copy_subtree(tree, p);
        }
        case MutationKind::NodeReplace: {
            GpTree out = tree;
            const std::size_t p = rng.next_below(tree.size());
            const int a = arity(tree[p].op);
            if (a == 2) {
                out[p].op = kBinary[rng.next_below(4)];
            } else if (a == 1) {
                out[p].op = (rng.next_bool()) ? GpOp::Sin : GpOp::Cos;
            } else {
                out[p].var = static_cast<std::int16_t>(
                    rng.next_below(static_cast<std::uint64_t>(var_count)));
            }
            return out;
        }
        case MutationKind::Permutation: {
            std::vector<std::size_t> binary;
            for (std::size_t i = 0; i < tree.size(); ++i) {
                if (arity(tree[i].op) == 2) binary.push_back(i);
            }
            if (binary.empty()) return tree;
            const std::size_t p = binary[rng.next_below(binary.size())];
            const std::size_t left = p + 1;
            const std::size_t mid = subtree_end(tree, left);
            const std::size_t right_end = subtree_end(tree, mid);
            GpTree out(tree.begin(), tree.begin() + static_cast<std::ptrdiff_t>(left));
            out.insert(out.end(), tree.begin() + static_cast<std::ptrdiff_t>(mid),
                       tree.begin() + static_cast<std::ptrdiff_t>(right_end));
            out.insert(out.end(), tree.begin() + static_cast<std::ptrdiff_t>(left),
                       tree.begin() + static_cast<std::ptrdiff_t>(mid));
            out.insert(out.end(), tree.begin() + static_cast<std::ptrdiff_t>(right_end),
                       tree.end());
            return out;
        }
        case MutationKind::Shrink: {
            std::vector<std::size_t> functions;
            for (std::size_t i = 0; i < tree.size(); ++i) {
                if (arity(tree[i].op) > 0) functions.push_back(i);
            }
            if (functions.empty()) return tree;
            const std::size_t p = functions[rng.next_below(functions.size())];
            const int child = static_cast<int>(rng.next_below(
                static_cast<std::uint64_t>(arity(tree[p].op))));
            std::size_t c = p + 1;
            for (int k = 0; k < child; ++k) c = subtree_end(tree, c);
            return replace_span(tree, p, subtree_end(tree, p), copy_subtree(tree, c));
        }
    }
    throw std::logic_error("unreachable mutation kind");
}

namespace {

struct Slot {
    const double* data;
    double* owned;
};

Slot gp_eval_node(const GpTree& tree, std::size_t& idx, const Dataset& d,
                  EvalWorkspace& ws) {
    const auto& ops = kernels::active_ops();
    const std::size_t n = ws.rows();
    const GpNode node = tree[idx++];
    switch (node.op) {
        case GpOp::Var:
            return {d.column(node.var).data(), nullptr};
        case GpOp::Sin:
        case GpOp::Cos: {
            Slot child = gp_eval_node(tree, idx, d, ws);
            double* dst = child.owned ? child.owned : ws.acquire();
            if (node.op == GpOp::Sin) {
                for (std::size_t i = 0; i < n; ++i) dst[i] = std::sin(child.data[i]);
            } else {
                for (std::size_t i = 0; i < n; ++i) dst[i] = std::cos(child.data[i]);
            }
            return {dst, dst};
        }
        default: {
            Slot lhs = gp_eval_node(tree, idx, d, ws);
            Slot rhs = gp_eval_node(tree, idx, d, ws);
            double* dst = lhs.owned ? lhs.owned : (rhs.owned ? rhs.owned : ws.acquire());
            switch (node.op) {
                case GpOp::Add: ops.add(lhs.data, rhs.data, dst, n); break;
                case GpOp::Sub: ops.sub(lhs.data, rhs.data, dst, n); break;
                case GpOp::Mul: ops.mul(lhs.data, rhs.data, dst, n); break;
                default: ops.div(lhs.data, rhs.data, dst, n); break;
            }
            if (lhs.owned && lhs.owned != dst) ws.release(lhs.owned);
            if (rhs.owned && rhs.owned != dst) ws.release(rhs.owned);
            return {dst, dst};
        }
    }
}

}  // namespace

const double* gp_eval(const GpTree& tree, const Dataset& d, EvalWorkspace& ws) {
    if (ws.rows() != d.rows()) ws.reset(d.rows());
    ws.reclaim_all();
    std::size_t idx = 0;
    const Slot result = gp_eval_node(tree, idx, d, ws);
    if (!kernels::all_finite(result.data, ws.rows())) return nullptr;
    return result.data;
}

namespace {

struct Individual {
    GpTree tree;
    FitnessValue fitness;
};

}  // namespace

GpRunOutcome run_gp(const EquationSpec& spec, const Dataset& d, const GpConfig& cfg,
                    std::uint64_t seed) {
    if (cfg.population_size < cfg.tournament) {
        throw std::invalid_argument("population smaller than the tournament");
    }
    Rng rng(seed);
    EvalWorkspace ws;

    GpRunOutcome outcome;
    double best_mse = std::numeric_limits<double>::infinity();
    GpTree best_tree;
    long long evaluations = 0;

    auto evaluate = [&](const GpTree& tree) {
        const double* outputs = gp_eval(tree, d, ws);
        FitnessValue f;
        f.scaled = (cfg.scaling == ScalingMode::Linear);
        if (outputs) {
            f = fitness_from_outputs({outputs, d.rows()}, d.targets(), cfg.scaling);
        }
        ++evaluations;
        if (f.mse < best_mse) {
            best_mse = f.mse;
            best_tree = tree;
        }
        return f;
    };
    auto finish = [&](bool success) {
        outcome.success = success;
        outcome.evaluations = evaluations;
        outcome.best_mse = best_mse;
        outcome.best_expression =
            best_tree.empty() ? std::string() : to_string(best_tree, spec.variables);
        return outcome;
    };

    // Ramped half and half over depths 2..6.
    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) {
        const int depth = 2 + (i % 5);
        const bool full = ((i / 5) % 2) == 0;
        Individual ind;
        ind.tree = random_tree(rng, spec.arity(), std::min(depth, cfg.max_depth), full);
        ind.fitness = evaluate(ind.tree);
        if (is_hit(ind.fitness)) return finish(true);
        population.push_back(std::move(ind));
    }

    const std::size_t pop = population.size();
    while (evaluations < cfg.budget) {
        // three distinct contestants, the worst is replaced
        std::size_t picks[3];
        picks[0] = rng.next_below(pop);
        do {
            picks[1] = rng.next_below(pop);
        } while (picks[1] == picks[0]);
        do {
            picks[2] = rng.next_below(pop);
        } while (picks[2] == picks[0] || picks[2] == picks[1]);

        std::size_t worst = picks[0];
        for (std::size_t k = 1; k < 3; ++k) {
            if (population[picks[k]].fitness.mse > population[worst].fitness.mse) {
                worst = picks[k];
            }
        }
        std::size_t parents[2];
        std::size_t next = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            if (picks[k] != worst) parents[next++] = picks[k];
        }
        const GpTree& p1 = population[parents[0]].tree;
        const GpTree& p2 = population[parents[1]].tree;

        const auto kind = static_cast<CrossoverKind>(rng.next_below(5));
        GpTree offspring = crossover(kind, p1, p2, rng);
        if (tree_depth(offspring) > cfg.max_depth) {
            offspring = crossover(kind, p1, p2, rng);
            if (tree_depth(offspring) > cfg.max_depth) offspring = p1;
        }
        if (rng.next_double() < cfg.mutation_rate) {
            const auto mutation = static_cast<MutationKind>(rng.next_below(5));
            GpTree mutated = mutate(mutation, offspring, spec.arity(), cfg.max_depth, rng);
            if (tree_depth(mutated) > cfg.max_depth) {
                mutated = mutate(mutation, offspring, spec.arity(), cfg.max_depth, rng);
            }
            if (tree_depth(mutated) <= cfg.max_depth) offspring = std::move(mutated);
        }

        Individual child;
        child.tree = std::move(offspring);
        child.fitness = evaluate(child.tree);
        if (is_hit(child.fitness)) return finish(true);
        population[worst] = std::move(child);
    }
    return finish(false);
}

std::optional<double> estimate_evaluations(std::span<const GpRunOutcome> outcomes) {
    long long total = 0;
    long long successes = 0;
    for (const GpRunOutcome& o : outcomes) {
        total += o.evaluations;
        if (o.success) ++successes;
    }
    if (successes == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(successes);
}

}  // namespace dagp::gp
