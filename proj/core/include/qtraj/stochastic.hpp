#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qtraj/models.hpp"

namespace qtraj {

enum class Unravelling { qsd, jumps };

/// Reproducible per-trajectory noise stream. The generator is the standard
/// 64-bit Mersenne Twister (mt19937_64) seeded from (run seed, trajectory
/// index) through seed_seq; Gaussian draws use an explicit Box-Muller
/// transform so every step consumes a fixed number of raw draws.
class NoiseStream {
public:
    NoiseStream(std::uint64_t run_seed, std::uint64_t trajectory_index);

    /// One complex Wiener increment: mean 0, mean(dxi^2) = 0, mean|dxi|^2 = dt.
    Complex wiener(double dt);
    /// Uniform on [0, 1).
    double uniform();
    double gaussian();

private:
    std::mt19937_64 rng_;
};

struct StepperConfig {
    double dt;
    bool renorm = true;
    Unravelling unravelling = Unravelling::qsd;
    double leakage_limit = 1e-4;
    double jump_prob_limit = 0.1;  // max <L^dag L> dt per channel
};

/// One Euler-Maruyama step of the diffusive unravelling (Ito, expectation
/// values at the pre-step state), renormalized.
StateVector qsd_step(const StateVector& psi, const SystemModel& model, double tau,
                     double dt, NoiseStream& noise);

/// One step of the jump unravelling: at most one channel jumps per step,
/// selected by partitioning a single uniform draw; otherwise the
/// no-jump drift is applied. Renormalized. If jumped_channel is non-null
/// it receives the channel index or -1.
StateVector jump_step(const StateVector& psi, const SystemModel& model, double tau,
                      double dt, NoiseStream& noise, int* jumped_channel = nullptr);

struct TrajectoryRecord {
    std::uint64_t run_seed = 0;
    std::uint64_t trajectory_index = 0;
    std::vector<double> times;
    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> observables;  // [name][time]
    std::vector<double> entropy;                   // 2-mode spaces only
    std::vector<double> leakage;
    std::vector<double> norm_defect;  // |norm - 1| before renormalization
    std::vector<double> jump_times;
    StateVector final_state;
    bool aborted = false;
    std::string abort_reason;
};

struct NamedOperator {
    std::string name;
    SparseOperator op;
};

/// Drive one trajectory from t0 to t1; records every record_every steps
/// (and at t0 and the final step). Deterministic in
/// (model, psi0, config, run_seed, trajectory_index).
TrajectoryRecord run_trajectory(const SystemModel& model, const StateVector& psi0,
                                const StepperConfig& config, std::uint64_t run_seed,
                                std::uint64_t trajectory_index, double t0, double t1,
                                int record_every,
                                const std::vector<NamedOperator>& observables);

}  // namespace qtraj
