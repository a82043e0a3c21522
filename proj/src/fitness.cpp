#include "dagp/fitness.hpp"

#include <cmath>

#include "dagp/kernels.hpp"

namespace dagp {

void EvalWorkspace::reset(std::size_t n) {
    rows_ = n;
    pool_.clear();
    free_.clear();
}

double* EvalWorkspace::acquire() {
    if (!free_.empty()) {
        double* buffer = free_.back();
        free_.pop_back();
        return buffer;
    }
    pool_.emplace_back(rows_);
    return pool_.back().data();
}

void EvalWorkspace::release(double* buffer) { free_.push_back(buffer); }

void EvalWorkspace::reclaim_all() {
    free_.clear();
    for (auto& buffer : pool_) free_.push_back(buffer.data());
}

namespace {

// Evaluation result: either a borrowed dataset column or an owned workspace
// buffer.
struct Slot {
    const double* data;
    double* owned;  // null when borrowing
};

Slot eval_node(const Expr& e, const Dataset& d, EvalWorkspace& ws) {
    const auto& ops = kernels::active_ops();
    const std::size_t n = ws.rows();
    switch (e.kind) {
        case ExprKind::Var:
            return {d.column(e.payload).data(), nullptr};
        case ExprKind::Const: {
            double* buffer = ws.acquire();
            ops.fill(buffer, static_cast<double>(e.payload), n);
            return {buffer, buffer};
        }
        default: {
            Slot lhs = eval_node(*e.left, d, ws);
            Slot rhs = eval_node(*e.right, d, ws);
            double* dst = lhs.owned ? lhs.owned : (rhs.owned ? rhs.owned : ws.acquire());
            switch (e.kind) {
                case ExprKind::Add: ops.add(lhs.data, rhs.data, dst, n); break;
                case ExprKind::Sub: ops.sub(lhs.data, rhs.data, dst, n); break;
                case ExprKind::Mul: ops.mul(lhs.data, rhs.data, dst, n); break;
                default: ops.div(lhs.data, rhs.data, dst, n); break;
            }
            if (lhs.owned && lhs.owned != dst) ws.release(lhs.owned);
            if (rhs.owned && rhs.owned != dst) ws.release(rhs.owned);
            return {dst, dst};
        }
    }
}

}  // namespace

const double* eval_batch(const Expr& e, const Dataset& d, EvalWorkspace& ws) {
    if (ws.rows() != d.rows()) ws.reset(d.rows());
    ws.reclaim_all();
    Slot result = eval_node(e, d, ws);
    const double* out = result.data;
    if (!kernels::all_finite(out, ws.rows())) return nullptr;
    return out;
}

FitnessValue fitness_from_outputs(std::span<const double> outputs,
                                  std::span<const double> targets,
                                  ScalingMode mode) {
    const auto& ops = kernels::active_ops();
    const std::size_t n = targets.size();
    const double dn = static_cast<double>(n);
    FitnessValue f;
    f.scaled = (mode == ScalingMode::Linear);
    if (outputs.empty()) return f;

    if (mode == ScalingMode::None) {
        const double sse = ops.sq_err(outputs.data(), targets.data(), n);
        f.mse = std::isnan(sse) ? std::numeric_limits<double>::infinity() : sse / dn;
        return f;
    }

    const double mean_t = ops.sum(outputs.data(), n) / dn;
    const double mean_y = ops.sum(targets.data(), n) / dn;
    double stt = 0.0, sty = 0.0;
    ops.centered_moments(outputs.data(), targets.data(), mean_t, mean_y, &stt,
                         &sty, n);
    double b = 0.0, a = mean_y;
    if (stt > 0.0 && std::isfinite(stt) && std::isfinite(sty)) {
        b = sty / stt;
        a = mean_y - b * mean_t;
        if (!std::isfinite(b) || !std::isfinite(a)) {
            b = 0.0;
            a = mean_y;
        }
    }
    const double sse = ops.sq_err_affine(outputs.data(), targets.data(), a, b, n);
    f.mse = std::isnan(sse) ? std::numeric_limits<double>::infinity() : sse / dn;
    f.scale_a = a;
    f.scale_b = b;
    return f;
}

FitnessValue mse(const Expr& e, const Dataset& d, EvalWorkspace& ws) {
    return evaluate_fitness(e, d, ws, ScalingMode::None);
}

FitnessValue linear_scale(const Expr& e, const Dataset& d, EvalWorkspace& ws) {
    return evaluate_fitness(e, d, ws, ScalingMode::Linear);
}

FitnessValue evaluate_fitness(const Expr& e, const Dataset& d, EvalWorkspace& ws,
                              ScalingMode mode) {
    const double* outputs = eval_batch(e, d, ws);
    if (!outputs) {
        FitnessValue worst;
        worst.scaled = (mode == ScalingMode::Linear);
        return worst;
    }
    return fitness_from_outputs({outputs, d.rows()}, d.targets(), mode);
}

}  // namespace dagp
