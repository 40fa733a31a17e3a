#include <doctest.h>

#include <cmath>
#include <random>

#include "qtraj/models.hpp"

using namespace qtraj;

namespace {

Eigen::MatrixXcd dense(const SparseOperator& op) { return Eigen::MatrixXcd(op.matrix()); }

const double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("derived dimensionless SQUID parameters at the base circuit") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidDimensionlessParams d = squid_dimensionless(base);

    // independent long-double evaluation of each defining formula
    long double C = 1e-13L, L = 3e-10L, R = 100.0L;
    long double hbar = 1.054571817e-34L, e = 1.602176634e-19L, h = 6.62607015e-34L;
    long double phi0 = h / (2.0L * e);
    long double omega0 = 1.0L / std::sqrt(L * C);
    long double zeta = 1.0L / (2.0L * omega0 * R * C);
    long double Omega = std::sqrt(4.0L * e * e / hbar * std::sqrt(L / C));
    long double i_c = 2.0L * phi0 / (2.0L * 3.14159265358979323846L * L);
    long double phi_d = 0.9e-6L * L / phi0;

    CHECK(d.omega0 == doctest::Approx(double(omega0)).epsilon(1e-12));
    CHECK(d.omega0 == doctest::Approx(1.826e11).epsilon(1e-3));
    CHECK(d.zeta == doctest::Approx(double(zeta)).epsilon(1e-12));
    CHECK(d.zeta == doctest::Approx(0.2738).epsilon(1e-3));
    CHECK(d.Omega == doctest::Approx(double(Omega)).epsilon(1e-12));
    CHECK(d.Omega == doctest::Approx(0.2309).epsilon(1e-3));
    CHECK(base.I_c == doctest::Approx(double(i_c)).epsilon(1e-12));
    CHECK(base.I_c == doctest::Approx(2.194e-6).epsilon(1e-3));
    CHECK(d.phi_d == doctest::Approx(double(phi_d)).epsilon(1e-12));
    CHECK(d.phi_d == doctest::Approx(0.1306).epsilon(1e-3));
    CHECK(d.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.omega == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.phi_x == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaling with a=b=1 is the identity") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidPhysicalParams s = apply_scaling(base, 1.0, 1.0);
    CHECK(s.C == base.C);
    CHECK(s.L == base.L);
    CHECK(s.R == base.R);
    CHECK(s.I_c == base.I_c);
    CHECK(s.I_d == base.I_d);
    CHECK(s.omega_d == base.omega_d);
}

TEST_CASE("scaling a=100, b=1 transforms the circuit as prescribed") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidPhysicalParams s = apply_scaling(base, 100.0, 1.0);
    CHECK(s.C == doctest::Approx(1e-11).epsilon(1e-14));
    CHECK(s.R == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(s.omega_d == doctest::Approx(base.omega_d / 10.0).epsilon(1e-14));

    SquidDimensionlessParams d0 = squid_dimensionless(base);
    SquidDimensionlessParams d1 = squid_dimensionless(s);
    CHECK(d1.beta == doctest::Approx(d0.beta).epsilon(1e-12));
    CHECK(d1.zeta == doctest::Approx(d0.zeta).epsilon(1e-12));
    CHECK(d1.omega == doctest::Approx(d0.omega).epsilon(1e-12));
    CHECK(d1.phi_d == doctest::Approx(d0.phi_d).epsilon(1e-12));
    CHECK(d1.phi_x == doctest::Approx(d0.phi_x).epsilon(1e-12));
    CHECK(d1.Omega == doctest::Approx(d0.Omega / std::pow(100.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("scaling invariance over random (a, b) pairs") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidDimensionlessParams d0 = squid_dimensionless(base);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        double a = std::pow(10.0, expo(rng));
        double b = std::pow(10.0, expo(rng));
        SquidDimensionlessParams d = squid_dimensionless(apply_scaling(base, a, b));
        CHECK(d.beta == doctest::Approx(d0.beta).epsilon(1e-12));
        CHECK(d.zeta == doctest::Approx(d0.zeta).epsilon(1e-12));
        CHECK(d.omega == doctest::Approx(d0.omega).epsilon(1e-12));
        CHECK(d.phi_d == doctest::Approx(d0.phi_d).epsilon(1e-12));
        CHECK(d.phi_x == doctest::Approx(d0.phi_x).epsilon(1e-12));
        CHECK(d.Omega == doctest::Approx(d0.Omega * std::pow(b / a, 0.25)).epsilon(1e-12));
    }
}

TEST_CASE("a-sweep covers the full capacitance range") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    CHECK(apply_scaling(base, 1e-3, 1.0).C == doctest::Approx(1e-16).epsilon(1e-12));
    CHECK(apply_scaling(base, 1e4, 1.0).C == doctest::Approx(1e-9).epsilon(1e-12));
    CHECK_THROWS_AS(apply_scaling(base, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Duffing pair decouples when mu = 0 and Gamma = 0") {
    FockSpace space(6, 2);
    DuffingParams p;
    p.beta = 1.0;
    p.gamma = 0.0;
    p.mu = 0.0;
    SystemModel model = duffing_pair(p, space);
    Eigen::MatrixXcd h = dense(model.hamiltonian_at(0.3));

    // no matrix element may connect different occupations of both modes at once
    const int n = space.n_levels;
    for (int i0 = 0; i0 < n; ++i0)
        for (int j0 = 0; j0 < n; ++j0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int j1 = 0; j1 < n; ++j1)
                    if (i0 != j0 && i1 != j1)
                        CHECK(std::abs(h(i0 * n + i1, j0 * n + j1)) < 1e-14);
}

TEST_CASE("Duffing drive vanishes at tau = pi/2") {
    FockSpace space(6, 2);
    SystemModel model = duffing_pair(DuffingParams{}, space);
    Eigen::MatrixXcd h = dense(model.hamiltonian_at(kPi / 2.0));
    Eigen::MatrixXcd h_static = dense(model.h_static);
    CHECK((h - h_static).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Duffing linear-drive coefficient equals g at beta = 1") {
    FockSpace space(6, 2);
    DuffingParams p;
    p.beta = 1.0;
    SystemModel model = duffing_pair(p, space);
    Eigen::MatrixXcd h = dense(model.hamiltonian_at(0.0));
    // <00|H|10> picks out the q_1 linear term, matrix element (g/beta)/sqrt(2)
    const int n = space.n_levels;
    Complex elem = h(0, 1 * n + 0);
    CHECK(std::abs(elem * std::sqrt(2.0) - Complex(0.3, 0)) < 1e-12);
    CHECK_THROWS_AS(duffing_pair(p, FockSpace(6, 1)), std::invalid_argument);
}

TEST_CASE("SQUID pair coupling term is mu x1 x2") {
    FockSpace space(8, 2);
    SquidPhysicalParams base = SquidPhysicalParams::base();
    Eigen::MatrixXcd h_mu = dense(squid_pair(base, 0.2, space).h_static);
    Eigen::MatrixXcd h_0 = dense(squid_pair(base, 0.0, space).h_static);
    Eigen::MatrixXcd cross =
        dense(position(space, 0)) * dense(position(space, 1));
    CHECK((h_mu - h_0 - 0.2 * cross).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Josephson prefactor at the base circuit") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidDimensionlessParams d = squid_dimensionless(base);
    double j = base.I_c / (2.0 * constants::elem_charge * d.omega0);
    CHECK(j == doctest::Approx(37.5).epsilon(1e-3));
}

TEST_CASE("drive flux bias") {
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidDimensionlessParams d = squid_dimensionless(base);
    double s = flux_to_x_scale(base) * constants::flux_quantum;

    SUBCASE("static part is exactly half a flux quantum in oscillator units") {
        CHECK(drive_flux(base, 0.0) == doctest::Approx(0.5 * s).epsilon(1e-12));
    }
    SUBCASE("no-drive circuit gives a constant bias") {
        SquidPhysicalParams still = base;
        still.I_d = 0.0;
        for (double tau : {0.0, 1.7, 9.4})
            CHECK(drive_flux(still, tau) == doctest::Approx(0.5 * s).epsilon(1e-12));
    }
    SUBCASE("periodicity 2 pi / omega") {
        double period = 2.0 * kPi / d.omega;
        for (double tau : {0.3, 2.9, 17.0})
            CHECK(drive_flux(base, tau + period) ==
                  doctest::Approx(drive_flux(base, tau)).epsilon(1e-9));
    }
}

TEST_CASE("Hamiltonians are Hermitian at random times") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> t(0.0, 50.0);

    FockSpace space(6, 2);
    SystemModel duffing = duffing_pair(DuffingParams{}, space);
    SystemModel squid = squid_pair(SquidPhysicalParams::base(), 0.2, space);
    for (int trial = 0; trial < 100; ++trial) {
        double tau = t(rng);
        CHECK(hermiticity_defect(duffing.hamiltonian_at(tau).matrix()) < 1e-12);
        CHECK(hermiticity_defect(squid.hamiltonian_at(tau).matrix()) < 1e-12);
    }
}

TEST_CASE("apply_hamiltonian agrees with the assembled operator") {
    FockSpace space(5, 2);
    SystemModel model = squid_pair(apply_scaling(SquidPhysicalParams::base(), 1e-3, 1.0),
                                   0.2, space);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    StateVector psi(space.dim());
    for (int i = 0; i < space.dim(); ++i) psi[i] = Complex(g(rng), g(rng));
    psi.normalize();

    StateVector fast(space.dim());
    model.apply_hamiltonian(psi, 1.3, fast);
    StateVector slow = model.hamiltonian_at(1.3).apply(psi);
    CHECK((fast - slow).norm() < 1e-10);
}

TEST_CASE("linear limit of the single SQUID is a harmonic ladder") {
    // negligible Josephson term, no drive, huge shunt resistance
    SquidPhysicalParams p = apply_scaling(SquidPhysicalParams::base(), 1e-3, 1.0);
    p.I_c = 1e-30;
    p.I_d = 0.0;
    p.R = 1e15;
    FockSpace space(80, 1);
    SystemModel model = squid_single(p, space);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        Eigen::MatrixXcd(model.hamiltonian_at(0.0).matrix()), Eigen::EigenvaluesOnly);
    for (int n = 0; n < 25; ++n)
        CHECK(es.eigenvalues()[n] == doctest::Approx(n + 0.5).epsilon(1e-7));
}

TEST_CASE("lindblad operators are sqrt(2 zeta) a") {
    FockSpace space(6, 2);
    SquidPhysicalParams base = SquidPhysicalParams::base();
    SquidDimensionlessParams d = squid_dimensionless(base);
    SystemModel model = squid_pair(base, 0.2, space);
    REQUIRE(model.lindblad_ops.size() == 2);
    for (int mode = 0; mode < 2; ++mode) {
        Eigen::MatrixXcd diff = dense(model.lindblad_ops[mode]) -
                                std::sqrt(2.0 * d.zeta) * dense(annihilation(space, mode));
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
    }
}
