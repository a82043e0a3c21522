#pragma once

#include <limits>
#include <span>
#include <vector>

#include "dagp/dataset.hpp"
#include "dagp/expr.hpp"

namespace dagp {

enum class ScalingMode { None, Linear };

inline constexpr double kHitThreshold = 1e-9;

// Reported fitness.  mse is +inf when any dataset row evaluates non-finite;
// that sentinel compares worse than every finite value.  When scaled, mse is
// the residual of the least-squares fit scale_a + scale_b * T.
struct FitnessValue {
    double mse = std::numeric_limits<double>::infinity();
    double scale_a = 0.0;
    double scale_b = 1.0;
    bool scaled = false;
};

inline bool is_hit(const FitnessValue& f) { return f.mse < kHitThreshold; }
inline bool better(const FitnessValue& a, const FitnessValue& b) {
    return a.mse < b.mse;
}

// Reusable per-thread buffers for batch evaluation.  Holds one n-wide buffer
// per concurrently live tree level; the buffer returned by eval_batch stays
// valid until the next eval_batch/reset on the same workspace.
class EvalWorkspace {
public:
    void reset(std::size_t n);
    std::size_t rows() const { return rows_; }

    double* acquire();
    void release(double* buffer);
    void reclaim_all();

private:
    std::size_t rows_ = 0;
    std::vector<std::vector<double>> pool_;
    std::vector<double*> free_;
};

// Evaluates e on every dataset row.  Returns a pointer to rows() outputs, or
// nullptr when any output is non-finite.
const double* eval_batch(const Expr& e, const Dataset& d, EvalWorkspace& ws);

FitnessValue mse(const Expr& e, const Dataset& d, EvalWorkspace& ws);
FitnessValue linear_scale(const Expr& e, const Dataset& d, EvalWorkspace& ws);
FitnessValue evaluate_fitness(const Expr& e, const Dataset& d, EvalWorkspace& ws,
                              ScalingMode mode);

// Shared by the expression and GP paths: raw MSE of the outputs, or the
// least-squares residual when mode is Linear.  With var(T) = 0 the slope
// degenerates to b = 0, a = mean(y).
FitnessValue fitness_from_outputs(std::span<const double> outputs,
                                  std::span<const double> targets,
                                  ScalingMode mode);

}  // namespace dagp
