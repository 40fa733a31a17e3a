#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qtraj/observables.hpp"
#include "qtraj/stochastic.hpp"

using namespace qtraj;

namespace {

SystemModel trivial_model(int n_levels) {
    FockSpace space(n_levels, 1);
    SparseMatrix zero(space.dim(), space.dim());
    return SystemModel{space, SparseOperator(zero, true), SparseOperator{}, nullptr,
                       nullptr, {}, 0.0};
}

/// Pure damping, plain harmonic Hamiltonian (no damping correction).
SystemModel damped_mode(int n_levels, double zeta) {
    FockSpace space(n_levels, 1);
    SparseOperator x = position(space, 0);
    SparseOperator p = momentum(space, 0);
    SparseOperator h = 0.5 * (x * x + p * p);
    SparseMatrix h_sym = SparseMatrix(0.5 * (h.matrix() + SparseMatrix(h.matrix().adjoint())));
    return SystemModel{space,
                       SparseOperator(h_sym, true),
                       SparseOperator{},
                       nullptr,
                       nullptr,
                       {std::sqrt(2.0 * zeta) * annihilation(space, 0)},
                       0.0};
}

}  // namespace

TEST_CASE("complex Wiener increments have the contracted moments") {
    const double dt = 0.01;
    const int m = 200000;
    NoiseStream noise(99, 0);
    Complex sum(0, 0), sum_sq(0, 0);
    double sum_abs2 = 0.0;
    for (int i = 0; i < m; ++i) {
        Complex dxi = noise.wiener(dt);
        sum += dxi;
        sum_sq += dxi * dxi;
        sum_abs2 += std::norm(dxi);
    }
    double bound = 5.0 / std::sqrt(static_cast<double>(m));
    CHECK(std::abs(sum / double(m)) < bound * std::sqrt(dt));
    CHECK(std::abs(sum_sq / double(m)) < bound * dt);
    CHECK(std::abs(sum_abs2 / double(m) - dt) < bound * dt);
}

TEST_CASE("noise streams are reproducible and index-distinct") {
    NoiseStream a(42, 7), b(42, 7), c(42, 8);
    bool distinct = false;
    for (int i = 0; i < 100; ++i) {
        Complex va = a.wiener(0.1);
        CHECK(va == b.wiener(0.1));
        if (va != c.wiener(0.1)) distinct = true;
    }
    CHECK(distinct);
}

TEST_CASE("qsd step is the identity for H = 0, L = 0") {
    SystemModel model = trivial_model(5);
    StateVector psi = coherent_state(5, Complex(0.4, 0.2));
    NoiseStream noise(1, 0);
    StateVector out = qsd_step(psi, model, 0.0, 1e-3, noise);
    CHECK((out - psi).norm() < 1e-14);
}

TEST_CASE("jump map leaves a coherent state invariant") {
    const Complex alpha(0.5, 0.0);
    const double zeta = 0.3;
    SystemModel model = damped_mode(25, zeta);
    StateVector psi = coherent_state(25, alpha);

    // jump probability per step ~ 2 zeta |alpha|^2 dt; pick dt so a jump
    // fires quickly, then scan seeds until the very first step jumps
    const double dt = 0.09 / (2.0 * zeta * std::norm(alpha));
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        NoiseStream noise(seed, 0);
        int jumped = -1;
        StateVector out = jump_step(psi, model, 0.0, dt, noise, &jumped);
        if (jumped < 0) continue;
        CHECK(std::abs(std::abs(psi.dot(out)) - 1.0) < 1e-10);
        return;
    }
    FAIL("no jump fired in 10000 seeds");
}

TEST_CASE("no jump ever fires from the vacuum") {
    SystemModel model = damped_mode(8, 0.4);
    StateVector psi = fock_state(8, 0);
    NoiseStream noise(3, 0);
    for (int step = 0; step < 10000; ++step) {
        int jumped = -1;
        psi = jump_step(psi, model, 0.0, 1e-2, noise, &jumped);
        REQUIRE(jumped == -1);
    }
    CHECK(std::abs(std::abs(psi[0]) - 1.0) < 1e-10);
}

TEST_CASE("pre-renormalization norm drift shrinks at least 2x when dt halves") {
    SystemModel model = damped_driven_mode(0.3, 0.5, 1.0, FockSpace(12, 1));
    StateVector psi0 = coherent_state(12, Complex(1.0, 0.0));
    StepperConfig config;
    config.unravelling = Unravelling::qsd;

    auto median_defect = [&](double dt) {
        std::vector<double> defects;
        config.dt = dt;
        for (std::uint64_t i = 0; i < 400; ++i) {
            TrajectoryRecord rec =
                run_trajectory(model, psi0, config, 555, i, 0.0, dt, 1, {});
            defects.push_back(rec.norm_defect.back());
        }
        std::sort(defects.begin(), defects.end());
        return defects[defects.size() / 2];
    };

    double coarse = median_defect(2e-3);
    double fine = median_defect(1e-3);
    CHECK(coarse / fine >= 2.0);
}

TEST_CASE("trajectories are deterministic in (seed, index)") {
    SystemModel model = damped_driven_mode(0.25, 0.4, 1.0, FockSpace(10, 1));
    StateVector psi0 = coherent_state(10, Complex(0.8, 0.0));
    StepperConfig config;
    config.dt = 1e-3;
    config.unravelling = Unravelling::jumps;
    std::vector<NamedOperator> obs = {{"x", position(model.space, 0)}};

    TrajectoryRecord a = run_trajectory(model, psi0, config, 77, 3, 0.0, 2.0, 50, obs);
    TrajectoryRecord b = run_trajectory(model, psi0, config, 77, 3, 0.0, 2.0, 50, obs);
    CHECK(a.times == b.times);
    CHECK(a.observables == b.observables);
    CHECK(a.leakage == b.leakage);
    CHECK(a.jump_times == b.jump_times);
    CHECK((a.final_state - b.final_state).norm() == 0.0);

    TrajectoryRecord c = run_trajectory(model, psi0, config, 77, 4, 0.0, 2.0, 50, obs);
    CHECK((a.final_state - c.final_state).norm() > 0.0);
}

TEST_CASE("uncoupled pair stays unentangled along a QSD trajectory") {
    DuffingParams params;
    params.mu = 0.0;
    FockSpace space(16, 2);
    SystemModel model = duffing_pair(params, space);
    // packets at the well bottoms q = +-1/beta; the Euler map is only a
    // product map up to an O(dt^2) cross term, so dt must be small here
    StateVector psi0 = product_state(coherent_state(16, Complex(0.7071, 0.0)),
                                     coherent_state(16, Complex(-0.7071, 0.0)));
    psi0.normalize();
    StepperConfig config;
    config.dt = 1e-5;
    config.leakage_limit = 5e-3;  // truncated-q^4 tail, physical at N=16
    TrajectoryRecord rec = run_trajectory(model, psi0, config, 11, 0, 0.0, 0.5, 5000, {});
    REQUIRE_FALSE(rec.aborted);
    for (double s : rec.entropy) CHECK(s < 1e-6);
}

TEST_CASE("renormalized norm is exactly restored at every record point") {
    SystemModel model = damped_driven_mode(0.3, 0.6, 1.0, FockSpace(12, 1));
    StateVector psi0 = coherent_state(12, Complex(1.0, 0.0));
    StepperConfig config;
    config.dt = 1e-3;
    for (Unravelling u : {Unravelling::qsd, Unravelling::jumps}) {
        config.unravelling = u;
        TrajectoryRecord rec = run_trajectory(model, psi0, config, 5, 0, 0.0, 3.0, 100, {});
        REQUIRE_FALSE(rec.aborted);
        CHECK(std::abs(rec.final_state.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("empirical jump count matches the integrated rate") {
    const double zeta = 0.25, t_end = 6.0;
    const Complex alpha(2.0, 0.0);
    SystemModel model = damped_mode(24, zeta);
    StateVector psi0 = coherent_state(24, alpha);
    StepperConfig config;
    config.dt = 1e-3;
    config.unravelling = Unravelling::jumps;

    const int n_traj = 200;
    long long total_jumps = 0;
    for (int i = 0; i < n_traj; ++i) {
        TrajectoryRecord rec =
            run_trajectory(model, psi0, config, 2718, i, 0.0, t_end, 1000, {});
        REQUIRE_FALSE(rec.aborted);
        total_jumps += static_cast<long long>(rec.jump_times.size());
    }
    // integral of 2 zeta <n>(t) for pure decay: |alpha|^2 (1 - e^{-2 zeta T})
    double expected_per_traj = std::norm(alpha) * (1.0 - std::exp(-2.0 * zeta * t_end));
    double expected = expected_per_traj * n_traj;
    CHECK(std::abs(total_jumps - expected) < 4.0 * std::sqrt(expected));
}

TEST_CASE("trajectory aborts on leakage") {
    // drive a tiny basis hard so population reaches the top levels
    SystemModel model = damped_driven_mode(0.0, 3.0, 1.0, FockSpace(4, 1));
    StateVector psi0 = fock_state(4, 0);
    StepperConfig config;
    config.dt = 1e-3;
    TrajectoryRecord rec = run_trajectory(model, psi0, config, 1, 0, 0.0, 20.0, 100, {});
    CHECK(rec.aborted);
    CHECK(rec.abort_reason.find("leakage") != std::string::npos);
}

TEST_CASE("ensemble means at dt and dt/2 agree within Monte-Carlo error") {
    SystemModel model = damped_driven_mode(0.3, 0.5, 1.0, FockSpace(12, 1));
    StateVector psi0 = coherent_state(12, Complex(1.0, 0.0));
    std::vector<NamedOperator> obs = {{"x", position(model.space, 0)}};

    auto final_x = [&](double dt, std::uint64_t seed) {
        StepperConfig config;
        config.dt = dt;
        RunningStats stats;
        for (int i = 0; i < 1000; ++i) {
            TrajectoryRecord rec =
                run_trajectory(model, psi0, config, seed, i, 0.0, 3.0, 1 << 30, obs);
            stats.add(rec.observables[0].back());
        }
        return stats;
    };

    RunningStats coarse = final_x(3e-3, 1);
    RunningStats fine = final_x(1.5e-3, 2);
    double pooled = std::sqrt(coarse.stderr_mean() * coarse.stderr_mean() +
                              fine.stderr_mean() * fine.stderr_mean());
    CHECK(std::abs(coarse.mean - fine.mean) < 2.0 * pooled);
}
