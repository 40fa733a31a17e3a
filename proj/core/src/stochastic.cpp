#include "qtraj/stochastic.hpp"

#include <cmath>

#include "qtraj/observables.hpp"

namespace qtraj {

namespace {

const double kTwoPi = 6.28318530717958647692;

struct StepWorkspace {
    std::vector<const SparseMatrix*> lindblads;
    std::vector<SparseMatrix> lindblads_dag;
    std::vector<double> jump_weight;  // per channel, <L^dag L>
    StateVector hpsi, lpsi, dpsi;

    explicit StepWorkspace(const SystemModel& model) {
        for (const SparseOperator& l : model.lindblad_ops) {
            lindblads.push_back(&l.matrix());
            lindblads_dag.emplace_back(l.matrix().adjoint());
        }
        jump_weight.resize(lindblads.size());
        int d = model.space.dim();
        hpsi.resize(d);
        lpsi.resize(d);
        dpsi.resize(d);
    }
};

/// In-place QSD Euler-Maruyama step. Returns |norm - 1| before renormalization.
double qsd_kernel(StateVector& psi, const SystemModel& model, StepWorkspace& ws,
                  double tau, double dt, bool renorm, NoiseStream& noise) {
    model.apply_hamiltonian(psi, tau, ws.hpsi);
    ws.dpsi = Complex(0.0, -dt) * ws.hpsi;

    for (std::size_t j = 0; j < ws.lindblads.size(); ++j) {
        ws.lpsi.noalias() = (*ws.lindblads[j]) * psi;
        Complex e = psi.dot(ws.lpsi);  // <L>
        ws.dpsi += dt * std::conj(e) * ws.lpsi;
        ws.dpsi.noalias() -= (0.5 * dt) * (ws.lindblads_dag[j] * ws.lpsi);
        ws.dpsi -= (0.5 * dt * std::norm(e)) * psi;

        Complex dxi = noise.wiener(dt);
        ws.dpsi += dxi * ws.lpsi;
        ws.dpsi -= dxi * e * psi;
    }

    psi += ws.dpsi;
    double defect = std::abs(psi.norm() - 1.0);
    if (renorm) psi.normalize();
    return defect;
}

/// In-place jump step. Sets *jumped to the channel index or -1.
double jump_kernel(StateVector& psi, const SystemModel& model, StepWorkspace& ws,
                   double tau, double dt, bool renorm, double jump_prob_limit,
                   NoiseStream& noise, int* jumped) {
    model.apply_hamiltonian(psi, tau, ws.hpsi);
    ws.dpsi = Complex(0.0, -dt) * ws.hpsi;

    double total_p = 0.0;
    for (std::size_t j = 0; j < ws.lindblads.size(); ++j) {
        ws.lpsi.noalias() = (*ws.lindblads[j]) * psi;
        double w = ws.lpsi.squaredNorm();  // <L^dag L>
        ws.jump_weight[j] = w;
        if (w * dt >= jump_prob_limit)
            throw std::runtime_error("jump_step: <L^dag L> dt exceeds validity limit");
        total_p += w * dt;
        // no-jump drift: -1/2 (L^dag L - <L^dag L>) psi dt
        ws.dpsi.noalias() -= (0.5 * dt) * (ws.lindblads_dag[j] * ws.lpsi);
        ws.dpsi += (0.5 * dt * w) * psi;
    }

    double u = noise.uniform();
    *jumped = -1;
    if (u < total_p) {
        // dN_j dN_k = delta_jk dN_j: one uniform draw partitioned into
        // channel intervals, so exactly one channel fires.
        double edge = 0.0;
        for (std::size_t j = 0; j < ws.lindblads.size(); ++j) {
            edge += ws.jump_weight[j] * dt;
            if (u < edge) {
                *jumped = static_cast<int>(j);
                break;
            }
        }
        ws.lpsi.noalias() = (*ws.lindblads[*jumped]) * psi;
        psi = ws.lpsi / ws.lpsi.norm();
        return 0.0;
    }

    psi += ws.dpsi;
    double defect = std::abs(psi.norm() - 1.0);
    if (renorm) psi.normalize();
    return defect;
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t run_seed, std::uint64_t trajectory_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(run_seed),
                      static_cast<std::uint32_t>(run_seed >> 32),
                      static_cast<std::uint32_t>(trajectory_index),
                      static_cast<std::uint32_t>(trajectory_index >> 32)};
    rng_.seed(seq);
}

double NoiseStream::uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Complex NoiseStream::wiener(double dt) {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    // both Box-Muller branches: independent real and imaginary parts
    return std::sqrt(0.5 * dt) *
           Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

StateVector qsd_step(const StateVector& psi, const SystemModel& model, double tau,
                     double dt, NoiseStream& noise) {
    if (dt <= 0.0) throw std::invalid_argument("qsd_step: dt must be positive");
    StepWorkspace ws(model);
    StateVector out = psi;
    qsd_kernel(out, model, ws, tau, dt, true, noise);
    return out;
}

StateVector jump_step(const StateVector& psi, const SystemModel& model, double tau,
                      double dt, NoiseStream& noise, int* jumped_channel) {
    if (dt <= 0.0) throw std::invalid_argument("jump_step: dt must be positive");
    StepWorkspace ws(model);
    StateVector out = psi;
    int jumped = -1;
    jump_kernel(out, model, ws, tau, dt, true, 0.1, noise, &jumped);
    if (jumped_channel) *jumped_channel = jumped;
    return out;
}

TrajectoryRecord run_trajectory(const SystemModel& model, const StateVector& psi0,
                                const StepperConfig& config, std::uint64_t run_seed,
                                std::uint64_t trajectory_index, double t0, double t1,
                                int record_every,
                                const std::vector<NamedOperator>& observables) {
    if (config.dt <= 0.0) throw std::invalid_argument("run_trajectory: dt must be positive");
    if (record_every < 1) throw std::invalid_argument("run_trajectory: record_every >= 1");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("run_trajectory: initial state not normalized");

    TrajectoryRecord rec;
    rec.run_seed = run_seed;
    rec.trajectory_index = trajectory_index;
    for (const auto& o : observables) rec.observable_names.push_back(o.name);
    rec.observables.resize(observables.size());

    NoiseStream noise(run_seed, trajectory_index);
    StepWorkspace ws(model);
    StateVector psi = psi0;

    const long long n_steps =
        static_cast<long long>(std::ceil((t1 - t0) / config.dt - 1e-12));
    const bool two_mode = model.space.n_modes == 2;

    double last_defect = 0.0;
    auto record = [&](long long step) {
        double tau = t0 + static_cast<double>(step) * config.dt;
        rec.times.push_back(tau);
        for (std::size_t i = 0; i < observables.size(); ++i)
            rec.observables[i].push_back(expectation(psi, observables[i].op).real());
        if (two_mode) rec.entropy.push_back(entanglement_entropy(psi, model.space));
        rec.leakage.push_back(leakage(psi, model.space));
        rec.norm_defect.push_back(last_defect);
    };

    record(0);
    for (long long step = 0; step < n_steps; ++step) {
        double tau = t0 + static_cast<double>(step) * config.dt;
        try {
            if (config.unravelling == Unravelling::qsd) {
                last_defect = qsd_kernel(psi, model, ws, tau, config.dt, config.renorm, noise);
            } else {
                int jumped = -1;
                last_defect = jump_kernel(psi, model, ws, tau, config.dt, config.renorm,
                                          config.jump_prob_limit, noise, &jumped);
                if (jumped >= 0) rec.jump_times.push_back(tau + config.dt);
            }
        } catch (const std::exception& e) {
            rec.aborted = true;
            rec.abort_reason = e.what();
            break;
        }
        if (leakage(psi, model.space) > config.leakage_limit) {
            rec.aborted = true;
            rec.abort_reason = "leakage above " + std::to_string(config.leakage_limit) +
                               " at tau=" + std::to_string(tau + config.dt);
            break;
        }
        if ((step + 1) % record_every == 0 || step + 1 == n_steps) record(step + 1);
    }

    rec.final_state = psi;
    return rec;
}

}  // namespace qtraj
