#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tjlc/dense_tensor.hpp"
#include "tjlc/lc_norm.hpp"
#include "tjlc/tensor_ops.hpp"

namespace tjlc {

struct SolverConfig {
    std::vector<double> alpha;  // one positive entry per mode pair
    double tau = 10000.0;
    double eta = 1.1;
    LCParams lc;
    double epsilon = 1e-4;
    int max_iters = 500;
    double rank_tol = -1.0;  // < 0: default tolerance
    int threads = 1;
};

/// Per-pair ADMM state. z and q are stored folded to the full tensor
/// extents; vectors are aligned with mode_pairs(N).
struct SolverState {
    DenseTensor x;
    std::vector<ModePair> pairs;
    std::vector<DenseTensor> z;
    std::vector<DenseTensor> q;
    std::vector<double> mu;
    std::vector<double> beta;
    int iter = 0;
    std::vector<double> re_history;
};

struct CompletionResult {
    DenseTensor x;
    int iterations = 0;
    bool converged = false;
    std::vector<double> re_history;
    std::vector<std::size_t> joint_rank_final;
};

/// beta_{l1l2} = alpha_{l1l2} / sum(alpha), in lexicographic pair order.
std::vector<double> derive_betas(const std::vector<double>& alpha);

/// x0 = P_Omega(t), z0 = x0, q0 = 0, mu0 = beta / tau.
SolverState init_state(const DenseTensor& t, const IndexSet& omega,
                       const SolverConfig& cfg);

/// Per-pair proximal step on x + q/mu, with rho = mu/beta. Pairs are
/// independent; cfg.threads > 1 runs them concurrently with a fixed
/// assembly order.
void update_z(SolverState& state, const SolverConfig& cfg);

/// Weighted average of (z - q/mu) on the unobserved set; observed entries
/// copied from t exactly.
void update_x(SolverState& state, const DenseTensor& t, const IndexSet& omega);

/// q += mu * (x - z) per pair.
void update_q(SolverState& state);

/// ||x_new - x_old||_F^2 / ||x_old||_F^2; +infinity when x_old is zero,
/// so the loop simply continues.
double relative_change(const DenseTensor& x_new, const DenseTensor& x_old);

using IterationObserver = std::function<void(const SolverState&)>;

/// Full ADMM loop: z, x, q updates then geometric mu growth each
/// iteration, stopping when the relative change drops to epsilon or the
/// iteration cap is reached. The observer (if set) runs after every
/// iteration. Deterministic for fixed inputs and config.
CompletionResult run(const DenseTensor& t, const IndexSet& omega,
                     const SolverConfig& cfg,
                     const IterationObserver& observer = {});

}  // namespace tjlc
