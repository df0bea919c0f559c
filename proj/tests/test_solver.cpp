#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "tjlc/lc_norm.hpp"
#include "tjlc/solver.hpp"
#include "tjlc/t_algebra.hpp"

using namespace tjlc;
using namespace tjlc::testing;

namespace {

DenseTensor to3(const DenseTensor& x) {
    return x.order() == 2 ? x.reshaped({x.dim(0), x.dim(1), 1}) : x;
}

SolverConfig small_config(std::size_t order) {
    SolverConfig cfg;
    cfg.alpha.assign(order * (order + 1) / 2, 1.0);
    cfg.tau = 1.0;
    cfg.eta = 1.1;
    cfg.lc.nu = 1.0;
    cfg.lc.vartheta = 2.0;
    cfg.max_iters = 50;
    return cfg;
}

}  // namespace

TEST_CASE("derive_betas") {
    const auto b6 = derive_betas({1, 1, 1, 1, 1, 1});
    REQUIRE(b6.size() == 6);
    for (double b : b6) CHECK(b == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    const auto b1 = derive_betas({2});
    REQUIRE(b1.size() == 1);
    CHECK(b1[0] == 1.0);

    const auto b10 = derive_betas({0.1, 1, 1, 1, 0.1, 1, 1, 1, 1, 0.1});
    REQUIRE(b10.size() == 10);
    double sum = 0.0;
    for (double b : b10) sum += b;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(derive_betas({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_betas({}), std::invalid_argument);
}

TEST_CASE("init_state") {
    const DenseTensor t = random_tensor({3, 4, 2}, 50);
    SolverConfig cfg = small_config(3);

    IndexSet full(t.dims(), std::vector<std::uint8_t>(t.size(), 1));
    const SolverState s1 = init_state(t, full, cfg);
    CHECK(bit_equal(s1.x, t));
    for (const auto& z : s1.z) CHECK(bit_equal(z, t));
    for (const auto& q : s1.q) CHECK(frobenius_norm(q) == 0.0);

    IndexSet empty(t.dims());
    const SolverState s2 = init_state(t, empty, cfg);
    CHECK(frobenius_norm(s2.x) == 0.0);

    // per-pair mu starts at beta / tau
    SolverConfig mri = cfg;
    mri.tau = 10000.0;
    const SolverState s3 = init_state(t, full, mri);
    for (double mu : s3.mu) {
        CHECK(mu == doctest::Approx((1.0 / 6.0) / 10000.0).epsilon(1e-14));
    }

    SolverConfig bad = cfg;
    bad.alpha.pop_back();
    CHECK_THROWS_AS(init_state(t, full, bad), std::invalid_argument);
}

TEST_CASE("update_z") {
    SolverConfig cfg = small_config(3);
    const DenseTensor zero({3, 3, 2});
    IndexSet full(zero.dims(), std::vector<std::uint8_t>(zero.size(), 1));

    SolverState st = init_state(zero, full, cfg);
    update_z(st, cfg);
    for (const auto& z : st.z) CHECK(frobenius_norm(z) == 0.0);

    // huge mu/beta makes the prox an identity
    const DenseTensor t = random_tensor({3, 3, 2}, 51);
    SolverState st2 = init_state(t, full, cfg);
    for (double& mu : st2.mu) mu = 1e12 * st2.beta[0];
    update_z(st2, cfg);
    for (const auto& z : st2.z) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            num += (z[i] - t[i]) * (z[i] - t[i]);
            den += t[i] * t[i];
        }
        CHECK(std::sqrt(num / den) < 1e-6);
    }

    // each pair's update does not increase its own subproblem objective
    const DenseTensor t3 = random_tensor({4, 3, 3}, 52, 2.0);
    const IndexSet omega = random_mask(t3.dims(), 53, 0.5);
    SolverState st3 = init_state(t3, omega, cfg);
    update_z(st3, cfg);
    update_x(st3, t3, omega);
    update_q(st3);
    const std::vector<DenseTensor> z_prev = st3.z;
    SolverState probe = st3;
    update_z(probe, cfg);
    for (std::size_t i = 0; i < probe.pairs.size(); ++i) {
        const ModePair pair = probe.pairs[i];
        DenseTensor w = st3.x;
        for (std::size_t p = 0; p < w.size(); ++p) {
            w[p] += st3.q[i][p] / st3.mu[i];
        }
        const WeightMatrix wm =
            weights(dft_mode3(to3(unfold_pair(w, pair.l1, pair.l2))), cfg.lc);
        auto objective = [&](const DenseTensor& z) {
            double quad = 0.0;
            for (std::size_t p = 0; p < z.size(); ++p) {
                const double d = w[p] - z[p];
                quad += d * d;
            }
            return st3.beta[i] *
                       lc_norm(unfold_pair(z, pair.l1, pair.l2), cfg.lc, wm) +
                   0.5 * st3.mu[i] * quad;
        };
        CHECK(objective(probe.z[i]) <= objective(z_prev[i]) + 1e-9);
    }
}

TEST_CASE("update_x") {
    SolverConfig cfg = small_config(3);
    const DenseTensor t = random_tensor({3, 4, 2}, 54);
    const IndexSet omega = random_mask(t.dims(), 55, 0.5);

    // all z equal with q = 0: unobserved entries take the common value
    SolverState st = init_state(t, omega, cfg);
    const DenseTensor common = random_tensor(t.dims(), 56);
    for (auto& z : st.z) z = common;
    update_x(st, t, omega);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (omega.observed(i)) {
            CHECK(st.x[i] == t[i]);
        } else {
            CHECK(st.x[i] == doctest::Approx(common[i]).epsilon(1e-12));
        }
    }

    // full mask pins everything
    IndexSet full(t.dims(), std::vector<std::uint8_t>(t.size(), 1));
    SolverState st2 = init_state(t, full, cfg);
    update_z(st2, cfg);
    update_x(st2, t, full);
    CHECK(bit_equal(st2.x, t));

    // finite differences of the quadratic coupling vanish on the
    // unobserved set; central differences are exact for quadratics, so the
    // step can stay large to keep rounding noise out of the quotient
    SolverState st3 = init_state(t, omega, cfg);
    for (std::size_t i = 0; i < st3.pairs.size(); ++i) {
        st3.z[i] = random_tensor(t.dims(), 60 + i);
        st3.q[i] = random_tensor(t.dims(), 70 + i);
    }
    update_x(st3, t, omega);
    auto coupling = [&](const DenseTensor& x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < st3.pairs.size(); ++i) {
            for (std::size_t p = 0; p < x.size(); ++p) {
                const double d = x[p] - st3.z[i][p] + st3.q[i][p] / st3.mu[i];
                sum += 0.5 * st3.mu[i] * d * d;
            }
        }
        return sum;
    };
    const double h = 1e-2;
    double grad_sq = 0.0;
    for (std::size_t p = 0; p < t.size(); ++p) {
        if (omega.observed(p)) continue;
        DenseTensor plus = st3.x, minus = st3.x;
        plus[p] += h;
        minus[p] -= h;
        const double g = (coupling(plus) - coupling(minus)) / (2.0 * h);
        grad_sq += g * g;
    }
    CHECK(std::sqrt(grad_sq) < 1e-10);
}

TEST_CASE("update_q") {
    SolverConfig cfg = small_config(3);
    const DenseTensor t = random_tensor({3, 3, 2}, 57);
    IndexSet full(t.dims(), std::vector<std::uint8_t>(t.size(), 1));

    // x == z leaves q unchanged
    SolverState st = init_state(t, full, cfg);
    update_q(st);
    for (const auto& q : st.q) CHECK(frobenius_norm(q) == 0.0);

    // unit mu and unit gap increments q by ones
    SolverState st2 = init_state(t, full, cfg);
    for (double& mu : st2.mu) mu = 1.0;
    for (auto& z : st2.z) {
        for (std::size_t p = 0; p < z.size(); ++p) z[p] = st2.x[p] - 1.0;
    }
    update_q(st2);
    for (const auto& q : st2.q) {
        for (std::size_t p = 0; p < q.size(); ++p) CHECK(q[p] == 1.0);
    }

    // two iterations of a random problem: the q increment recomputes from
    // the logged state
    const IndexSet omega = random_mask(t.dims(), 58, 0.6);
    SolverState st3 = init_state(t, omega, cfg);
    for (int iter = 0; iter < 2; ++iter) {
        update_z(st3, cfg);
        update_x(st3, t, omega);
        const std::vector<DenseTensor> q_before = st3.q;
        update_q(st3);
        for (std::size_t i = 0; i < st3.pairs.size(); ++i) {
            for (std::size_t p = 0; p < t.size(); ++p) {
                const double expect =
                    q_before[i][p] + st3.mu[i] * (st3.x[p] - st3.z[i][p]);
                CHECK(st3.q[i][p] == doctest::Approx(expect).epsilon(1e-14));
            }
        }
        for (double& mu : st3.mu) mu *= cfg.eta;
    }
}

TEST_CASE("relative change") {
    const DenseTensor x = random_tensor({3, 3}, 59);
    CHECK(relative_change(x, x) == 0.0);

    DenseTensor ones({2, 3}, std::vector<double>(6, 1.0));
    DenseTensor twos({2, 3}, std::vector<double>(6, 2.0));
    CHECK(relative_change(twos, ones) == doctest::Approx(1.0).epsilon(1e-15));

    const DenseTensor a = random_tensor({4, 2, 3}, 60);
    const DenseTensor b = random_tensor({4, 2, 3}, 61);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    CHECK(relative_change(a, b) == doctest::Approx(num / den).epsilon(1e-13));

    CHECK(std::isinf(relative_change(a, DenseTensor(a.dims()))));
}

TEST_CASE("run: trivial cases") {
    SolverConfig cfg = small_config(3);

    // fully observed input comes back after one iteration
    const DenseTensor t = random_tensor({4, 3, 2}, 62);
    IndexSet full(t.dims(), std::vector<std::uint8_t>(t.size(), 1));
    const CompletionResult r = run(t, full, cfg);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(bit_equal(r.x, t));

    // a zero tensor is a fixed point under any mask
    SolverConfig quick = cfg;
    quick.max_iters = 5;
    const DenseTensor z({3, 3, 2});
    const IndexSet omega = random_mask(z.dims(), 63, 0.5);
    const CompletionResult rz = run(z, omega, quick);
    CHECK(frobenius_norm(rz.x) == 0.0);
}

TEST_CASE("run: invariants along the iterations") {
    SolverConfig cfg = small_config(3);
    cfg.max_iters = 12;
    cfg.epsilon = 1e-30;  // force the full loop
    const DenseTensor t = random_tensor({5, 4, 3}, 64, 2.0);
    const IndexSet omega = random_mask(t.dims(), 65, 0.5);

    double beta_sum = 0.0;
    for (double b : derive_betas(cfg.alpha)) beta_sum += b;
    CHECK(beta_sum == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> mu_prev;
    int seen = 0;
    const CompletionResult r = run(t, omega, cfg, [&](const SolverState& st) {
        ++seen;
        // hard constraint: observed entries match t bit-exactly
        for (std::size_t p = 0; p < t.size(); ++p) {
            if (omega.observed(p)) {
                REQUIRE(st.x[p] == t[p]);
            }
        }
        if (!mu_prev.empty()) {
            for (std::size_t i = 0; i < st.mu.size(); ++i) {
                REQUIRE(st.mu[i] / mu_prev[i] ==
                        doctest::Approx(cfg.eta).epsilon(1e-12));
            }
        }
        mu_prev = st.mu;
    });
    CHECK(seen == r.iterations);
    CHECK(r.iterations == 12);
    CHECK(r.re_history.size() == 12);

    // geometric mu keeps the summability series finite
    const double mu0 = (1.0 / 6.0) / cfg.tau;
    double series = 0.0;
    double mu_j = mu0;
    for (int j = 1; j <= 1000; ++j) {
        const double mu_prev_j = mu_j;
        mu_j *= cfg.eta;
        series += (mu_j + mu_prev_j) / (mu_prev_j * mu_prev_j);
    }
    const double closed_form_bound =
        (1.0 + cfg.eta) / (mu0 * (1.0 - 1.0 / cfg.eta)) + 1.0;
    CHECK(std::isfinite(series));
    CHECK(series < closed_form_bound);
}

TEST_CASE("run: deterministic and thread-count invariant") {
    SolverConfig cfg = small_config(3);
    cfg.max_iters = 6;
    cfg.epsilon = 1e-30;
    const DenseTensor t = random_tensor({4, 4, 3}, 66, 2.0);
    const IndexSet omega = random_mask(t.dims(), 67, 0.4);

    const CompletionResult r1 = run(t, omega, cfg);
    const CompletionResult r2 = run(t, omega, cfg);
    CHECK(bit_equal(r1.x, r2.x));
    CHECK(r1.re_history == r2.re_history);

    SolverConfig mt = cfg;
    mt.threads = 4;
    const CompletionResult r3 = run(t, omega, mt);
    CHECK(bit_equal(r1.x, r3.x));
}

TEST_CASE("run: small synthetic recovery") {
    // the small problem needs a larger scale to clear the admission
    // threshold of the default parameters
    const DenseTensor truth = synth_low_tubal({10, 10, 6}, 1, 5, 30.0);
    const IndexSet omega = random_mask(truth.dims(), 8, 0.7);
    const DenseTensor observed = project(truth, omega);

    SolverConfig cfg;
    cfg.alpha.assign(6, 1.0);
    cfg.tau = 10000.0;
    cfg.eta = 1.1;
    cfg.lc.nu = 1.0;
    cfg.lc.vartheta = 500.0;
    cfg.max_iters = 250;

    const CompletionResult r = run(observed, omega, cfg);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        num += (r.x[i] - truth[i]) * (r.x[i] - truth[i]);
        den += truth[i] * truth[i];
    }
    CHECK(std::sqrt(num / den) < 0.05);
}
