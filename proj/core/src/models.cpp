#include "qtraj/models.hpp"

#include <cmath>

namespace qtraj {

namespace {

const double kPi = 3.14159265358979323846;

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

SquidPhysicalParams SquidPhysicalParams::base() {
    SquidPhysicalParams p{};
    p.C = 1e-13;
    p.L = 3e-10;
    p.R = 100.0;
    p.I_c = 2.0 * constants::flux_quantum / (2.0 * kPi * p.L);  // beta = 2
    p.I_d = 0.9e-6;
    p.Phi_x = 0.5 * constants::flux_quantum;
    p.omega_d = 1.0 / std::sqrt(p.L * p.C);  // omega_d = omega_0
    return p;
}

SquidDimensionlessParams squid_dimensionless(const SquidPhysicalParams& phys) {
    require_positive(phys.C, "C");
    require_positive(phys.L, "L");
    require_positive(phys.R, "R");
    require_positive(phys.I_c, "I_c");

    SquidDimensionlessParams d{};
    d.omega0 = 1.0 / std::sqrt(phys.L * phys.C);
    d.beta = 2.0 * kPi * phys.L * phys.I_c / constants::flux_quantum;
    d.zeta = 1.0 / (2.0 * d.omega0 * phys.R * phys.C);
    d.omega = phys.omega_d / d.omega0;
    d.phi_d = phys.I_d * phys.L / constants::flux_quantum;
    d.phi_x = phys.Phi_x / constants::flux_quantum;
    d.Omega = std::sqrt(4.0 * constants::elem_charge * constants::elem_charge /
                        constants::hbar * std::sqrt(phys.L / phys.C));
    return d;
}

SquidPhysicalParams apply_scaling(const SquidPhysicalParams& phys, double a, double b) {
    require_positive(a, "scale factor a");
    require_positive(b, "scale factor b");
    SquidPhysicalParams s = phys;
    s.C = phys.C * a;
    s.L = phys.L * b;
    s.R = phys.R * std::sqrt(b / a);
    s.I_c = phys.I_c / b;
    s.I_d = phys.I_d / b;  // keeps phi_d = I_d L / Phi_0 fixed
    s.omega_d = phys.omega_d / std::sqrt(a * b);
    s.a = phys.a * a;
    s.b = phys.b * b;
    return s;
}

double flux_to_x_scale(const SquidPhysicalParams& phys) {
    double omega0 = 1.0 / std::sqrt(phys.L * phys.C);
    return std::sqrt(phys.C * omega0 / constants::hbar);
}

double drive_flux(const SquidPhysicalParams& phys, double tau) {
    SquidDimensionlessParams d = squid_dimensionless(phys);
    double s = flux_to_x_scale(phys) * constants::flux_quantum;
    return s * (d.phi_x + d.phi_d * std::sin(d.omega * tau));
}

SparseOperator SystemModel::hamiltonian_at(double tau) const {
    SparseMatrix h = h_static.matrix();
    if (h_drive.dim() > 0) h += Complex(drive(tau), 0.0) * h_drive.matrix();
    if (drive_offset) {
        SparseMatrix id(h.rows(), h.cols());
        id.setIdentity();
        h += Complex(drive_offset(tau), 0.0) * id;
    }
    return SparseOperator(std::move(h), true);
}

void SystemModel::apply_hamiltonian(const StateVector& psi, double tau, StateVector& out) const {
    out.noalias() = h_static.matrix() * psi;
    if (h_drive.dim() > 0) out.noalias() += Complex(drive(tau), 0.0) * (h_drive.matrix() * psi);
    if (drive_offset) out += Complex(drive_offset(tau), 0.0) * psi;
}

SystemModel duffing_pair(const DuffingParams& params, const FockSpace& space) {
    if (space.n_modes != 2)
        throw std::invalid_argument("duffing_pair: requires a 2-mode space");
    require_positive(params.beta, "beta");
    if (params.gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");

    SparseMatrix h_static(space.dim(), space.dim());
    SparseMatrix h_drive(space.dim(), space.dim());
    std::vector<SparseOperator> lindblads;

    for (int mode = 0; mode < 2; ++mode) {
        SparseOperator q = position(space, mode);
        SparseOperator p = momentum(space, mode);
        SparseMatrix q2 = SparseMatrix(q.matrix() * q.matrix());
        SparseMatrix q4 = SparseMatrix(q2 * q2);
        SparseMatrix p2 = SparseMatrix(p.matrix() * p.matrix());
        SparseMatrix qp_sym = SparseMatrix(q.matrix() * p.matrix() + p.matrix() * q.matrix());

        h_static += Complex(0.5, 0) * p2;
        h_static += Complex(params.beta * params.beta / 4.0, 0) * q4;
        h_static -= Complex(0.5, 0) * q2;
        h_static += Complex(params.gamma / 2.0, 0) * qp_sym;
        h_drive += Complex(params.g / params.beta, 0) * q.matrix();

        lindblads.push_back(std::sqrt(2.0 * params.gamma) * annihilation(space, mode));
    }
    h_static += Complex(params.mu, 0) *
                SparseMatrix(position(space, 0).matrix() * position(space, 1).matrix());

    SystemModel model{space,
                      SparseOperator(std::move(h_static), true),
                      SparseOperator(std::move(h_drive), true),
                      [](double tau) { return std::cos(tau); },
                      nullptr,
                      std::move(lindblads),
                      2.0 * kPi};
    return model;
}

namespace {

SystemModel squid_model(const SquidPhysicalParams& phys, double mu, const FockSpace& space) {
    SquidDimensionlessParams d = squid_dimensionless(phys);
    double josephson = phys.I_c / (2.0 * constants::elem_charge * d.omega0);
    double bias_scale = flux_to_x_scale(phys) * constants::flux_quantum;
    double phi_x = d.phi_x, phi_d = d.phi_d, omega = d.omega;
    int n_modes = space.n_modes;

    SparseMatrix h_static(space.dim(), space.dim());
    SparseMatrix h_drive(space.dim(), space.dim());
    std::vector<SparseOperator> lindblads;

    for (int mode = 0; mode < n_modes; ++mode) {
        SparseOperator x = position(space, mode);
        SparseOperator p = momentum(space, mode);
        SparseMatrix x2 = SparseMatrix(x.matrix() * x.matrix());
        SparseMatrix p2 = SparseMatrix(p.matrix() * p.matrix());
        SparseMatrix xp_sym = SparseMatrix(x.matrix() * p.matrix() + p.matrix() * x.matrix());

        h_static += Complex(0.5, 0) * p2;
        h_static += Complex(0.5, 0) * x2;
        h_static -= Complex(josephson, 0) * cos_position(space, mode, d.Omega).matrix();
        h_static += Complex(d.zeta / 2.0, 0) * xp_sym;
        h_drive -= x.matrix();  // multiplied by x(tau); from (x - x(tau))^2/2

        lindblads.push_back(std::sqrt(2.0 * d.zeta) * annihilation(space, mode));
    }
    if (n_modes == 2)
        h_static += Complex(mu, 0) *
                    SparseMatrix(position(space, 0).matrix() * position(space, 1).matrix());

    auto bias = [bias_scale, phi_x, phi_d, omega](double tau) {
        return bias_scale * (phi_x + phi_d * std::sin(omega * tau));
    };
    SystemModel model{space,
                      SparseOperator(std::move(h_static), true),
                      SparseOperator(std::move(h_drive), true),
                      bias,
                      [bias, n_modes](double tau) {
                          double x = bias(tau);
                          return n_modes * 0.5 * x * x;
                      },
                      std::move(lindblads),
                      2.0 * kPi / d.omega};
    return model;
}

}  // namespace

SystemModel squid_pair(const SquidPhysicalParams& phys, double mu, const FockSpace& space) {
    if (space.n_modes != 2)
        throw std::invalid_argument("squid_pair: requires a 2-mode space");
    return squid_model(phys, mu, space);
}

SystemModel squid_single(const SquidPhysicalParams& phys, const FockSpace& space) {
    if (space.n_modes != 1)
        throw std::invalid_argument("squid_single: requires a 1-mode space");
    return squid_model(phys, 0.0, space);
}

SystemModel damped_driven_mode(double zeta, double drive_amp, double omega,
                               const FockSpace& space) {
    if (space.n_modes != 1)
        throw std::invalid_argument("damped_driven_mode: requires a 1-mode space");
    SparseOperator x = position(space, 0);
    SparseOperator p = momentum(space, 0);
    SparseMatrix h = SparseMatrix(
        Complex(0.5, 0) * SparseMatrix(p.matrix() * p.matrix()) +
        Complex(0.5, 0) * SparseMatrix(x.matrix() * x.matrix()) +
        Complex(zeta / 2.0, 0) *
            SparseMatrix(x.matrix() * p.matrix() + p.matrix() * x.matrix()));
    std::vector<SparseOperator> lindblads;
    if (zeta > 0.0) lindblads.push_back(std::sqrt(2.0 * zeta) * annihilation(space, 0));

    SystemModel model{space,
                      SparseOperator(std::move(h), true),
                      (-drive_amp) * x,
                      [omega](double tau) { return std::sin(omega * tau); },
                      nullptr,
                      std::move(lindblads),
                      2.0 * kPi / omega};
    return model;
}

}  // namespace qtraj
