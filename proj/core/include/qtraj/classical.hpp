#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qtraj/models.hpp"

namespace qtraj {

/// Dimensionless RSJ equation of motion, state (phi, dphi/dtau):
/// phi'' = -2 zeta phi' - phi - (beta/2pi) sin[2pi(phi + phi_x)] + phi_d sin(omega tau).
Eigen::Vector2d rsj_rhs(const Eigen::Vector2d& state, const SquidDimensionlessParams& params,
                        double tau);

/// Classical Duffing pair, state (q1, p1, q2, p2):
/// q_i' = p_i + Gamma q_i,
/// p_i' = -beta^2 q_i^3 + q_i - (g/beta) cos(tau) - Gamma p_i - mu q_other.
Eigen::Vector4d duffing_classical_rhs(const Eigen::Vector4d& state,
                                      const DuffingParams& params, double tau);

struct ClassicalTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    double drive_period = 0.0;
    /// Largest Lyapunov exponent per unit tau (tangent-space estimate);
    /// NaN when tangent integration was not requested.
    double lyapunov = std::numeric_limits<double>::quiet_NaN();
};

ClassicalTrajectory integrate_rsj(const Eigen::Vector2d& state0,
                                  const SquidDimensionlessParams& params, double t0,
                                  double t1, double dt, int record_every = 1,
                                  bool with_tangent = false);

ClassicalTrajectory integrate_duffing(const Eigen::Vector4d& state0,
                                      const DuffingParams& params, double t0, double t1,
                                      double dt, int record_every = 1,
                                      bool with_tangent = false);

enum class Regime { entrained, chaotic, ambiguous };

/// Stroboscopic-section clustering plus Lyapunov estimate.
/// Entrained: fewer than 4 section clusters of radius < 1e-3 and Lyapunov < 0.
/// Chaotic: Lyapunov > 0.01 per drive period. Otherwise ambiguous.
/// Discards the first transient_periods drive periods.
Regime classify_regime(const ClassicalTrajectory& traj, double drive_period,
                       double transient_periods = 50.0);

}  // namespace qtraj
