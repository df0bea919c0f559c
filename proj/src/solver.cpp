#include "tjlc/solver.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "tjlc/t_algebra.hpp"

namespace tjlc {

std::vector<double> derive_betas(const std::vector<double>& alpha) {
    if (alpha.empty()) {
        throw std::invalid_argument("alpha must be nonempty");
    }
    double sum = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("alpha entries must be positive");
        }
        sum += a;
    }
    std::vector<double> beta(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) beta[i] = alpha[i] / sum;
    return beta;
}

SolverState init_state(const DenseTensor& t, const IndexSet& omega,
                       const SolverConfig& cfg) {
    if (t.dims() != omega.dims()) {
        throw std::invalid_argument("tensor and observation set extents differ");
    }
    if (!(cfg.eta > 1.0) || !(cfg.tau > 0.0) || !(cfg.epsilon > 0.0) ||
        cfg.max_iters < 1) {
        throw std::invalid_argument(
            "solver config requires eta > 1, tau > 0, epsilon > 0, max_iters >= 1");
    }
    const auto pairs = mode_pairs(t.order());
    if (cfg.alpha.size() != pairs.size()) {
        throw std::invalid_argument("alpha length must be N(N+1)/2 for the tensor order");
    }

    SolverState st;
    st.pairs = pairs;
    st.beta = derive_betas(cfg.alpha);
    st.x = project(t, omega);
    st.z.assign(pairs.size(), st.x);
    st.q.assign(pairs.size(), DenseTensor::zeros(t.dims()));
    st.mu.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) st.mu[i] = st.beta[i] / cfg.tau;
    st.iter = 0;
    return st;
}

namespace {

DenseTensor z_step_for_pair(const SolverState& st, const SolverConfig& cfg,
                            std::size_t i) {
    const ModePair pair = st.pairs[i];
    DenseTensor w = st.x;
    const DenseTensor& q = st.q[i];
    const double inv_mu = 1.0 / st.mu[i];
    for (std::size_t p = 0; p < w.size(); ++p) w[p] += q[p] * inv_mu;

    const DenseTensor wu = unfold_pair(w, pair.l1, pair.l2);
    const double rho = st.mu[i] / st.beta[i];
    const DenseTensor zu = tensor_prox(wu, rho, cfg.lc);
    return fold_pair(zu, st.x.dims(), pair.l1, pair.l2);
}

}  // namespace

void update_z(SolverState& state, const SolverConfig& cfg) {
    const std::size_t n = state.pairs.size();
    if (cfg.threads > 1 && n > 1) {
        std::vector<std::future<DenseTensor>> jobs;
        jobs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            jobs.push_back(std::async(std::launch::async, z_step_for_pair,
                                      std::cref(state), std::cref(cfg), i));
        }
        for (std::size_t i = 0; i < n; ++i) state.z[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            state.z[i] = z_step_for_pair(state, cfg, i);
        }
    }
}

void update_x(SolverState& state, const DenseTensor& t, const IndexSet& omega) {
    const std::size_t total = state.x.size();
    std::vector<double> num(total, 0.0);
    double mu_sum = 0.0;
    for (std::size_t i = 0; i < state.pairs.size(); ++i) {
        const double mu = state.mu[i];
        const DenseTensor& z = state.z[i];
        const DenseTensor& q = state.q[i];
        for (std::size_t p = 0; p < total; ++p) num[p] += mu * z[p] - q[p];
        mu_sum += mu;
    }
    const auto& mask = omega.mask();
    for (std::size_t p = 0; p < total; ++p) {
        state.x[p] = mask[p] ? t[p] : num[p] / mu_sum;
    }
}

void update_q(SolverState& state) {
    for (std::size_t i = 0; i < state.pairs.size(); ++i) {
        const double mu = state.mu[i];
        DenseTensor& q = state.q[i];
        const DenseTensor& z = state.z[i];
        for (std::size_t p = 0; p < q.size(); ++p) {
            q[p] += mu * (state.x[p] - z[p]);
        }
    }
}

double relative_change(const DenseTensor& x_new, const DenseTensor& x_old) {
    if (!x_new.same_dims(x_old)) {
        throw std::invalid_argument("relative_change extents differ");
    }
    double diff = 0.0;
    for (std::size_t p = 0; p < x_new.size(); ++p) {
        const double d = x_new[p] - x_old[p];
        diff += d * d;
    }
    const double denom = squared_norm(x_old);
    if (denom == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return diff / denom;
}

CompletionResult run(const DenseTensor& t, const IndexSet& omega,
                     const SolverConfig& cfg, const IterationObserver& observer) {
    SolverState st = init_state(t, omega, cfg);

    bool converged = false;
    while (st.iter < cfg.max_iters) {
        const DenseTensor x_old = st.x;
        update_z(st, cfg);
        update_x(st, t, omega);
        update_q(st);
        const double re = relative_change(st.x, x_old);
        st.re_history.push_back(re);
        for (double& mu : st.mu) mu *= cfg.eta;
        ++st.iter;
        if (observer) observer(st);
        if (re <= cfg.epsilon) {
            converged = true;
            break;
        }
    }

    CompletionResult out;
    out.x = std::move(st.x);
    out.iterations = st.iter;
    out.converged = converged;
    out.re_history = std::move(st.re_history);
    out.joint_rank_final = joint_rank(out.x, cfg.rank_tol);
    return out;
}

}  // namespace tjlc
