#pragma once

#include <functional>
#include <vector>

#include "qtraj/hilbert.hpp"

namespace qtraj {

/// CODATA 2018. The only place physical constants appear.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double planck_h = 6.62607015e-34;      // J s
inline constexpr double elem_charge = 1.602176634e-19;  // C
inline constexpr double flux_quantum = planck_h / (2.0 * elem_charge);  // Wb
}  // namespace constants

struct DuffingParams {
    double beta = 1.0;    // quantum-classical scaling parameter
    double g = 0.3;       // drive amplitude
    double gamma = 0.125; // damping
    double mu = 0.2;      // q1 q2 coupling
};

/// Physical circuit parameters of one SQUID ring, plus the (a, b)
/// scale factors applied so far.
struct SquidPhysicalParams {
    double C;        // capacitance, F
    double L;        // inductance, H
    double R;        // shunt resistance, Ohm
    double I_c;      // junction critical current, A
    double I_d;      // drive current amplitude, A
    double omega_d;  // drive angular frequency, rad/s
    double Phi_x;    // static external flux bias, Wb
    double a = 1.0;
    double b = 1.0;

    /// Base circuit: C=1e-13 F, L=3e-10 H, R=100 Ohm, I_d=0.9 uA,
    /// Phi_x = 0.5 Phi_0, omega_d = omega_0, and I_c chosen so beta = 2.
    static SquidPhysicalParams base();
};

struct SquidDimensionlessParams {
    double beta;    // 2 pi L I_c / Phi_0
    double zeta;    // 1 / (2 omega_0 R C)
    double omega;   // omega_d / omega_0
    double phi_d;   // I_d L / Phi_0
    double phi_x;   // Phi_x / Phi_0
    double Omega;   // [(4 e^2 / hbar) sqrt(L/C)]^(1/2)
    double omega0;  // 1 / sqrt(LC), rad/s
};

SquidDimensionlessParams squid_dimensionless(const SquidPhysicalParams& phys);

/// C -> aC, L -> bL, R -> sqrt(b/a) R, omega_d -> omega_d/sqrt(ab),
/// I_c -> I_c/b and I_d -> I_d/b (the current rescalings that keep the
/// dimensionless groups beta and phi_d fixed).
SquidPhysicalParams apply_scaling(const SquidPhysicalParams& phys, double a, double b);

/// Conversion from flux (Wb) to the dimensionless oscillator coordinate:
/// x = sqrt(C omega_0 / hbar) Phi.
double flux_to_x_scale(const SquidPhysicalParams& phys);

/// Time-dependent external bias in oscillator units,
/// x(tau) = sqrt(C omega_0/hbar) Phi_0 [phi_x + phi_d sin(omega tau)].
double drive_flux(const SquidPhysicalParams& phys, double tau);

/// H(tau) = h_static + drive(tau) * h_drive + drive_offset(tau) * I.
/// The identity part only shifts the global phase but keeps hamiltonian_at
/// equal to the model Hamiltonian term by term.
struct SystemModel {
    FockSpace space;
    SparseOperator h_static;
    SparseOperator h_drive;
    std::function<double(double)> drive;
    std::function<double(double)> drive_offset;  // may be empty
    std::vector<SparseOperator> lindblad_ops;
    double drive_period = 0.0;

    SparseOperator hamiltonian_at(double tau) const;
    /// out = H(tau) psi, no allocation of operator sums.
    void apply_hamiltonian(const StateVector& psi, double tau, StateVector& out) const;
};

/// Two coupled Duffing oscillators:
/// H = sum_i [ p_i^2/2 + (beta^2/4) q_i^4 - q_i^2/2 + (g/beta) cos(tau) q_i
///             + (Gamma/2)(q_i p_i + p_i q_i) ] + mu q_1 q_2,
/// L_i = sqrt(2 Gamma) a_i.
SystemModel duffing_pair(const DuffingParams& params, const FockSpace& space);

/// Two coupled SQUID rings in scaled units (energy hbar omega_0, time omega_0 t):
/// H = sum_i { p_i^2/2 + [x_i - x(tau)]^2/2 - (I_c/2e omega_0) cos(Omega x_i)
///             + (zeta/2)(p_i x_i + x_i p_i) } + mu x_1 x_2,
/// L_i = sqrt(2 zeta) a_i.
SystemModel squid_pair(const SquidPhysicalParams& phys, double mu, const FockSpace& space);

/// Single SQUID ring, same single-mode Hamiltonian as squid_pair.
SystemModel squid_single(const SquidPhysicalParams& phys, const FockSpace& space);

/// Damped driven harmonic mode for oracle runs:
/// H = p^2/2 + x^2/2 + (zeta/2)(px + xp) - f sin(omega tau) x, L = sqrt(2 zeta) a.
SystemModel damped_driven_mode(double zeta, double drive_amp, double omega,
                               const FockSpace& space);

}  // namespace qtraj
