#include <doctest.h>

#include <cmath>
#include <random>

#include "qtraj/observables.hpp"

using namespace qtraj;

namespace {

StateVector random_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    StateVector psi(dim);
    for (int i = 0; i < dim; ++i) psi[i] = Complex(g(rng), g(rng));
    psi.normalize();
    return psi;
}

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

}  // namespace

TEST_CASE("expectation values on Fock and coherent states") {
    FockSpace space(25, 1);
    SparseOperator n = number_op(space, 0);
    CHECK(std::abs(expectation(fock_state(25, 0), n)) < 1e-14);

    const Complex alpha(0.7, 0.4);
    StateVector coh = coherent_state(25, alpha);
    CHECK(std::abs(expectation(coh, annihilation(space, 0)) - alpha) < 1e-8);

    SparseOperator x = position(space, 0);
    for (int k = 0; k < 25; ++k)
        CHECK(std::abs(expectation(fock_state(25, k), x)) < 1e-14);

    CHECK_THROWS_AS(expectation(fock_state(5, 0), n), std::invalid_argument);
}

TEST_CASE("Hermitian expectations are real") {
    FockSpace space(8, 1);
    std::mt19937_64 rng(17);
    SparseOperator x = position(space, 0);
    for (int trial = 0; trial < 100; ++trial)
        CHECK(std::abs(expectation(random_state(8, rng), x).imag()) < 1e-10);
}

TEST_CASE("entanglement entropy of product and Bell states") {
    FockSpace space(4, 2);
    StateVector product = product_state(coherent_state(4, Complex(0.3, 0.1)),
                                        fock_state(4, 2));
    CHECK(entanglement_entropy(product, space) < 1e-10);

    StateVector bell = StateVector::Zero(16);
    bell[0] = 1.0 / std::sqrt(2.0);
    bell[5] = 1.0 / std::sqrt(2.0);
    CHECK(entanglement_entropy(bell, space) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("entropy is symmetric between the two reductions") {
    FockSpace space(5, 2);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        StateVector psi = random_state(space.dim(), rng);
        double s1 = entropy_of(partial_trace(psi, space, 0));
        double s2 = entropy_of(partial_trace(psi, space, 1));
        CHECK(std::abs(s1 - s2) < 1e-9);
    }
}

TEST_CASE("entropy bounds and Schmidt-rank-1 characterization") {
    FockSpace space(6, 2);
    std::mt19937_64 rng(47);
    double ln_n = std::log(6.0);
    for (int trial = 0; trial < 200; ++trial) {
        StateVector psi = random_state(space.dim(), rng);
        double s = entanglement_entropy(psi, space);
        CHECK(s >= 0.0);
        CHECK(s <= ln_n + 1e-8);

        Eigen::SelfAdjointEigenSolver<DensityMatrix> es(partial_trace(psi, space, 0),
                                                        Eigen::EigenvaluesOnly);
        double top = es.eigenvalues().maxCoeff();
        if (s < 1e-10) CHECK(top > 1.0 - 1e-8);
        if (top > 1.0 - 1e-10) CHECK(s < 1e-8);
    }
}

TEST_CASE("entropy is invariant under local unitaries") {
    FockSpace space(5, 2);
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        StateVector psi = random_state(space.dim(), rng);
        Eigen::MatrixXcd u = haar_unitary(5, rng);
        Eigen::MatrixXcd v = haar_unitary(5, rng);
        Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(25, 25);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                local.block(i * 5, j * 5, 5, 5) = u(i, j) * v;
        StateVector rotated = local * psi;
        CHECK(std::abs(entanglement_entropy(rotated, space) -
                       entanglement_entropy(psi, space)) < 1e-9);
    }
}

TEST_CASE("entropy rejects corrupt matrices") {
    DensityMatrix bad = DensityMatrix::Zero(2, 2);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    CHECK_THROWS_AS(entropy_of(bad), std::runtime_error);
}

TEST_CASE("running stats merge matches sequential accumulation") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<double> xs(500);
    for (double& x : xs) x = g(rng);

    RunningStats all;
    for (double x : xs) all.add(x);

    RunningStats left, right;
    for (std::size_t i = 0; i < xs.size(); ++i) (i < 200 ? left : right).add(xs[i]);
    RunningStats merged = left;
    merged.merge(right);

    CHECK(merged.count == all.count);
    CHECK(merged.mean == doctest::Approx(all.mean).epsilon(1e-12));
    CHECK(merged.variance() == doctest::Approx(all.variance()).epsilon(1e-10));

    // merging in a fixed order is bit-reproducible
    RunningStats again = left;
    again.merge(right);
    CHECK(again.mean == merged.mean);
    CHECK(again.m2 == merged.m2);
}

TEST_CASE("settled_mean on a constant series") {
    std::vector<double> xs(32, 1.7);
    SettledMean sm = settled_mean(xs);
    CHECK(sm.settled);
    CHECK(sm.mean == doctest::Approx(1.7));
    CHECK(sm.stderr_mean == 0.0);

    std::vector<double> zeros(16, 0.0);
    CHECK(settled_mean(zeros).settled);
}

TEST_CASE("settled_mean recovers the mean of iid noise") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(5.0, 0.5);
    std::vector<double> xs(4000);
    for (double& x : xs) x = g(rng);
    SettledMean sm = settled_mean(xs);
    CHECK(std::abs(sm.mean - 5.0) < 4.0 * std::max(sm.stderr_mean, 1e-12));
    CHECK(sm.settled);
}

TEST_CASE("settled_mean flags a drifting series") {
    std::vector<double> xs;
    for (int i = 0; i < 256; ++i) xs.push_back(1.0 + 0.01 * i);
    CHECK_FALSE(settled_mean(xs).settled);
    CHECK_THROWS_AS(settled_mean(std::vector<double>{1.0}), std::invalid_argument);
}
