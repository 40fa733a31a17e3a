#include "qtraj/classical.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qtraj {

namespace {

const double kTwoPi = 6.28318530717958647692;

using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
using Jac = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)>;

/// RK4 on the state, with optional simultaneous tangent-vector propagation
/// (variational equation v' = J(y, tau) v using the same RK4 stages).
ClassicalTrajectory integrate(const Eigen::VectorXd& y0, const Rhs& rhs, const Jac& jac,
                              double t0, double t1, double dt, int record_every,
                              bool with_tangent, double drive_period) {
    if (dt <= 0.0) throw std::invalid_argument("classical integrate: dt must be positive");
    if (record_every < 1) throw std::invalid_argument("classical integrate: record_every >= 1");

    ClassicalTrajectory traj;
    traj.drive_period = drive_period;
    Eigen::VectorXd y = y0;
    traj.times.push_back(t0);
    traj.states.push_back(y);

    const long long n_steps =
        static_cast<long long>(std::ceil((t1 - t0) / dt - 1e-12));

    Eigen::VectorXd v;
    if (with_tangent) {
        v = Eigen::VectorXd::Zero(y0.size());
        v[0] = 1.0;
    }
    double log_growth = 0.0;
    double lyap_window = 0.0;
    // Lyapunov accumulated over the latter half of the span only, so the
    // estimate is not polluted by the transient.
    const long long lyap_start = n_steps / 2;

    for (long long step = 0; step < n_steps; ++step) {
        double tau = t0 + static_cast<double>(step) * dt;
        Eigen::VectorXd k1 = rhs(y, tau);
        Eigen::VectorXd k2 = rhs(y + 0.5 * dt * k1, tau + 0.5 * dt);
        Eigen::VectorXd k3 = rhs(y + 0.5 * dt * k2, tau + 0.5 * dt);
        Eigen::VectorXd k4 = rhs(y + dt * k3, tau + dt);

        if (with_tangent) {
            Eigen::VectorXd m1 = jac(y, tau) * v;
            Eigen::VectorXd m2 = jac(y + 0.5 * dt * k1, tau + 0.5 * dt) * (v + 0.5 * dt * m1);
            Eigen::VectorXd m3 = jac(y + 0.5 * dt * k2, tau + 0.5 * dt) * (v + 0.5 * dt * m2);
            Eigen::VectorXd m4 = jac(y + dt * k3, tau + dt) * (v + dt * m3);
            v += (dt / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
            double n = v.norm();
            if (step >= lyap_start) {
                log_growth += std::log(n);
                lyap_window += dt;
            }
            v /= n;
        }

        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite())
            throw std::runtime_error("classical integrate: state became non-finite");

        if ((step + 1) % record_every == 0 || step + 1 == n_steps) {
            traj.times.push_back(t0 + static_cast<double>(step + 1) * dt);
            traj.states.push_back(y);
        }
    }

    if (with_tangent && lyap_window > 0.0) traj.lyapunov = log_growth / lyap_window;
    return traj;
}

}  // namespace

Eigen::Vector2d rsj_rhs(const Eigen::Vector2d& state, const SquidDimensionlessParams& p,
                        double tau) {
    double phi = state[0], v = state[1];
    Eigen::Vector2d d;
    d[0] = v;
    d[1] = -2.0 * p.zeta * v - phi - (p.beta / kTwoPi) * std::sin(kTwoPi * (phi + p.phi_x)) +
           p.phi_d * std::sin(p.omega * tau);
    return d;
}

Eigen::Vector4d duffing_classical_rhs(const Eigen::Vector4d& state, const DuffingParams& p,
                                      double tau) {
    Eigen::Vector4d d;
    for (int i = 0; i < 2; ++i) {
        double q = state[2 * i], mom = state[2 * i + 1];
        double q_other = state[2 * (1 - i)];
        d[2 * i] = mom + p.gamma * q;
        d[2 * i + 1] = -p.beta * p.beta * q * q * q + q - (p.g / p.beta) * std::cos(tau) -
                       p.gamma * mom - p.mu * q_other;
    }
    return d;
}

ClassicalTrajectory integrate_rsj(const Eigen::Vector2d& state0,
                                  const SquidDimensionlessParams& params, double t0,
                                  double t1, double dt, int record_every,
                                  bool with_tangent) {
    double period = kTwoPi / params.omega;
    if (dt > period / 200.0)
        throw std::invalid_argument("integrate_rsj: dt must give >= 200 steps per drive period");

    Rhs rhs = [&params](const Eigen::VectorXd& y, double tau) {
        return Eigen::VectorXd(rsj_rhs(y.head<2>(), params, tau));
    };
    Jac jac = [&params](const Eigen::VectorXd& y, double) {
        Eigen::MatrixXd j(2, 2);
        j << 0.0, 1.0,
            -1.0 - params.beta * std::cos(kTwoPi * (y[0] + params.phi_x)), -2.0 * params.zeta;
        return j;
    };
    return integrate(state0, rhs, jac, t0, t1, dt, record_every, with_tangent, period);
}

ClassicalTrajectory integrate_duffing(const Eigen::Vector4d& state0,
                                      const DuffingParams& params, double t0, double t1,
                                      double dt, int record_every, bool with_tangent) {
    Rhs rhs = [&params](const Eigen::VectorXd& y, double tau) {
        return Eigen::VectorXd(duffing_classical_rhs(y.head<4>(), params, tau));
    };
    Jac jac = [&params](const Eigen::VectorXd& y, double) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
        for (int i = 0; i < 2; ++i) {
            double q = y[2 * i];
            j(2 * i, 2 * i) = params.gamma;
            j(2 * i, 2 * i + 1) = 1.0;
            j(2 * i + 1, 2 * i) = -3.0 * params.beta * params.beta * q * q + 1.0;
            j(2 * i + 1, 2 * i + 1) = -params.gamma;
            j(2 * i + 1, 2 * (1 - i)) = -params.mu;
        }
        return j;
    };
    return integrate(state0, rhs, jac, t0, t1, dt, record_every, with_tangent, kTwoPi);
}

Regime classify_regime(const ClassicalTrajectory& traj, double drive_period,
                       double transient_periods) {
    if (traj.times.size() < 2) throw std::invalid_argument("classify_regime: empty trajectory");
    if (std::isnan(traj.lyapunov))
        throw std::invalid_argument("classify_regime: trajectory lacks a Lyapunov estimate "
                                    "(integrate with with_tangent=true)");

    double t_begin = traj.times.front() + transient_periods * drive_period;
    double t_end = traj.times.back();
    if ((t_end - t_begin) / drive_period < 200.0)
        throw std::invalid_argument("classify_regime: need >= 200 drive periods after transient");

    // stroboscopic section via linear interpolation at multiples of the period
    std::vector<Eigen::VectorXd> section;
    std::size_t cursor = 1;
    for (double ts = t_begin; ts <= t_end + 1e-12; ts += drive_period) {
        while (cursor < traj.times.size() && traj.times[cursor] < ts) ++cursor;
        if (cursor >= traj.times.size()) break;
        double t1 = traj.times[cursor], t0 = traj.times[cursor - 1];
        double w = (ts - t0) / (t1 - t0);
        section.push_back((1.0 - w) * traj.states[cursor - 1] + w * traj.states[cursor]);
    }

    constexpr double kClusterRadius = 1e-3;
    std::vector<Eigen::VectorXd> centers;
    for (const auto& pt : section) {
        bool found = false;
        for (const auto& c : centers)
            if ((pt - c).norm() < kClusterRadius) {
                found = true;
                break;
            }
        if (!found) centers.push_back(pt);
        if (centers.size() >= 4) break;
    }

    double lyap_per_period = traj.lyapunov * drive_period;
    if (centers.size() < 4 && traj.lyapunov < 0.0) return Regime::entrained;
    if (lyap_per_period > 0.01) return Regime::chaotic;
    return Regime::ambiguous;
}

}  // namespace qtraj
