#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dagp/fitness.hpp"
#include "dagp/neighbourhood.hpp"

namespace dagp {

struct SearchConfig {
    NeighbourhoodConfig neighbourhood{};
    ExponentRange init_range{-3, 3};
    int max_widenings = 3;
    ScalingMode scaling = ScalingMode::None;
    // Starts are independent; results do not depend on the worker count.
    int jobs = 1;
};

struct TrajectoryStep {
    ExprPtr expr;
    FitnessValue fitness;
};

// Outcome of one greedy descent.  The optimum is the final trajectory entry;
// evaluations counts every fitness computation including the start's own.
// hit_evaluation is the counter value when a below-threshold fitness was
// first computed anywhere in the descent, accepted or not.
struct SearchResult {
    std::vector<TrajectoryStep> trajectory;
    long long evaluations = 0;
    bool hit = false;
    std::optional<long long> hit_evaluation;

    const ExprPtr& optimum() const { return trajectory.back().expr; }
    const FitnessValue& optimum_fitness() const { return trajectory.back().fitness; }
};

// Deterministic best-improvement descent: every neighbour is evaluated in the
// canonical order and the first one attaining the strictly best MSE becomes
// the next incumbent; the search stops when no neighbour improves strictly.
SearchResult greedy_search(const ExprPtr& start, const Dataset& d,
                           const EquationSpec& spec, const SearchConfig& cfg,
                           MonomialCache& monomials, EvalWorkspace& ws);

// One descent per initial solution, in enumeration order.  The global
// evaluation counter concatenates per-start counts in that order;
// first_hit_evaluation is its value at the first hit.
struct MultiStartResult {
    std::vector<SearchResult> starts;
    long long total_evaluations = 0;
    std::optional<long long> first_hit_evaluation;
    bool solved = false;
};

MultiStartResult search_all(const EquationSpec& spec, const Dataset& d,
                            const SearchConfig& cfg);

}  // namespace dagp
