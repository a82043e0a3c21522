#include "dagp/localsearch.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace dagp {

SearchResult greedy_search(const ExprPtr& start, const Dataset& d,
                           const EquationSpec& spec, const SearchConfig& cfg,
                           MonomialCache& monomials, EvalWorkspace& ws) {
    if (start->signature != spec.target_signature) {
        throw std::invalid_argument("start expression does not carry the target signature");
    }
    if (start->size > cfg.neighbourhood.size_cap) {
        throw std::invalid_argument("start expression exceeds the size cap");
    }

    SearchResult result;
    auto fit = [&](const Expr& e) {
        const FitnessValue f = evaluate_fitness(e, d, ws, cfg.scaling);
        ++result.evaluations;
        if (!result.hit_evaluation && is_hit(f)) {
            result.hit_evaluation = result.evaluations;
        }
        return f;
    };

    ExprPtr current = start;
    FitnessValue current_fitness = fit(*current);
    result.trajectory.push_back({current, current_fitness});

    for (;;) {
        const std::vector<ExprPtr> candidates =
            neighbours(current, spec, cfg.neighbourhood, monomials);
        ExprPtr best;
        FitnessValue best_fitness = current_fitness;
        for (const ExprPtr& candidate : candidates) {
            const FitnessValue f = fit(*candidate);
            // strict improvement over the running best keeps the first
            // neighbour that attains the minimum
            if (better(f, best_fitness)) {
                best_fitness = f;
                best = candidate;
            }
        }
        if (!best) break;
        current = std::move(best);
        current_fitness = best_fitness;
        result.trajectory.push_back({current, current_fitness});
    }

    result.hit = result.hit_evaluation.has_value();
    return result;
}

MultiStartResult search_all(const EquationSpec& spec, const Dataset& d,
                            const SearchConfig& cfg) {
    cfg.neighbourhood.validate();
    const std::vector<ExprPtr> initial =
        enumerate_with_restart(spec, cfg.init_range, cfg.max_widenings);

    MultiStartResult result;
    result.starts.resize(initial.size());

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || initial.size() <= 1) {
        MonomialCache monomials(spec, cfg.neighbourhood.exponent_range);
        EvalWorkspace ws;
        for (std::size_t i = 0; i < initial.size(); ++i) {
            result.starts[i] = greedy_search(initial[i], d, spec, cfg, monomials, ws);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            MonomialCache monomials(spec, cfg.neighbourhood.exponent_range);
            EvalWorkspace ws;
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= initial.size()) return;
                result.starts[i] = greedy_search(initial[i], d, spec, cfg, monomials, ws);
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min<int>(jobs, static_cast<int>(initial.size()));
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Reconstruct the sequential counter from the per-start counts.
    for (const SearchResult& r : result.starts) {
        if (!result.first_hit_evaluation && r.hit_evaluation) {
            result.first_hit_evaluation = result.total_evaluations + *r.hit_evaluation;
        }
        result.total_evaluations += r.evaluations;
    }
    result.solved = result.first_hit_evaluation.has_value();
    return result;
}

}  // namespace dagp
