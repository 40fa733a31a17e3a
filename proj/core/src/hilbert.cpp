#include "qtraj/hilbert.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qtraj {

namespace {

SparseMatrix pruned(SparseMatrix m) {
    m.prune([](int, int, const Complex& v) {
        return std::abs(v) > SparseOperator::kDropTolerance;
    });
    m.makeCompressed();
    return m;
}

SparseMatrix single_mode_annihilation(int n_levels) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(n_levels - 1);
    for (int n = 1; n < n_levels; ++n)
        trips.emplace_back(n - 1, n, Complex(std::sqrt(static_cast<double>(n)), 0.0));
    SparseMatrix a(n_levels, n_levels);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

void check_mode(const FockSpace& space, int mode) {
    if (mode < 0 || mode >= space.n_modes)
        throw std::out_of_range("mode index out of range");
}

}  // namespace

SparseOperator::SparseOperator(SparseMatrix mat, bool hermitian)
    : mat_(pruned(std::move(mat))), hermitian_(hermitian) {
    if (mat_.rows() != mat_.cols())
        throw std::invalid_argument("SparseOperator: matrix must be square");
    if (hermitian_ && hermiticity_defect(mat_) > kHermitianTolerance)
        throw std::invalid_argument("SparseOperator: Hermitian flag set but A != A^dag");
}

SparseOperator SparseOperator::adjoint() const {
    return SparseOperator(SparseMatrix(mat_.adjoint()), hermitian_);
}

StateVector SparseOperator::apply(const StateVector& psi) const {
    if (psi.size() != mat_.cols())
        throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
    return mat_ * psi;
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
    return SparseOperator(SparseMatrix(a.mat_ + b.mat_), a.hermitian_ && b.hermitian_);
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    return SparseOperator(SparseMatrix(a.mat_ - b.mat_), a.hermitian_ && b.hermitian_);
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    return SparseOperator(SparseMatrix(a.mat_ * b.mat_), false);
}

SparseOperator operator*(Complex s, const SparseOperator& a) {
    bool herm = a.hermitian_ && s.imag() == 0.0;
    return SparseOperator(SparseMatrix(s * a.mat_), herm);
}

SparseOperator operator*(double s, const SparseOperator& a) {
    return SparseOperator(SparseMatrix(Complex(s, 0.0) * a.mat_), a.hermitian_);
}

double hermiticity_defect(const SparseMatrix& m) {
    SparseMatrix d = SparseMatrix(m - SparseMatrix(m.adjoint()));
    double worst = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(d, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

SparseOperator identity_op(const FockSpace& space) {
    SparseMatrix id(space.dim(), space.dim());
    id.setIdentity();
    return SparseOperator(std::move(id), true);
}

SparseOperator embed(const FockSpace& space, int mode, const SparseMatrix& single_mode) {
    check_mode(space, mode);
    if (single_mode.rows() != space.n_levels || single_mode.cols() != space.n_levels)
        throw std::invalid_argument("embed: single-mode dimension mismatch");
    if (space.n_modes == 1)
        return SparseOperator(single_mode, hermiticity_defect(single_mode) <= SparseOperator::kHermitianTolerance);

    const int n = space.n_levels;
    SparseMatrix id(n, n);
    id.setIdentity();
    SparseMatrix joint = (mode == 0) ? Eigen::kroneckerProduct(single_mode, id).eval()
                                     : Eigen::kroneckerProduct(id, single_mode).eval();
    return SparseOperator(std::move(joint),
                          hermiticity_defect(single_mode) <= SparseOperator::kHermitianTolerance);
}

SparseOperator annihilation(const FockSpace& space, int mode) {
    check_mode(space, mode);
    return embed(space, mode, single_mode_annihilation(space.n_levels));
}

SparseOperator creation(const FockSpace& space, int mode) {
    check_mode(space, mode);
    return embed(space, mode, SparseMatrix(single_mode_annihilation(space.n_levels).adjoint()));
}

SparseOperator number_op(const FockSpace& space, int mode) {
    check_mode(space, mode);
    SparseMatrix a = single_mode_annihilation(space.n_levels);
    return embed(space, mode, SparseMatrix(SparseMatrix(a.adjoint()) * a));
}

SparseOperator position(const FockSpace& space, int mode) {
    check_mode(space, mode);
    SparseMatrix a = single_mode_annihilation(space.n_levels);
    SparseMatrix x = SparseMatrix((a + SparseMatrix(a.adjoint())) / std::sqrt(2.0));
    return embed(space, mode, x);
}

SparseOperator momentum(const FockSpace& space, int mode) {
    check_mode(space, mode);
    SparseMatrix a = single_mode_annihilation(space.n_levels);
    SparseMatrix p = SparseMatrix(Complex(0.0, 1.0) / std::sqrt(2.0) *
                                  SparseMatrix(SparseMatrix(a.adjoint()) - a));
    return embed(space, mode, p);
}

SparseOperator cos_position(const FockSpace& space, int mode, double omega_scale) {
    check_mode(space, mode);
    const int n = space.n_levels;
    SparseMatrix a = single_mode_annihilation(n);
    Eigen::MatrixXcd x = Eigen::MatrixXcd((a + SparseMatrix(a.adjoint())) / std::sqrt(2.0));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x);
    Eigen::VectorXd cos_vals = (omega_scale * es.eigenvalues().array()).cos();
    Eigen::MatrixXcd c = es.eigenvectors() * cos_vals.asDiagonal() *
                         es.eigenvectors().adjoint();
    // enforce exact Hermiticity against eigensolver roundoff
    c = 0.5 * (c + c.adjoint()).eval();
    return embed(space, mode, c.sparseView());
}

DensityMatrix partial_trace(const StateVector& psi, const FockSpace& space, int keep) {
    if (space.n_modes != 2)
        throw std::invalid_argument("partial_trace: requires a 2-mode space");
    check_mode(space, keep);
    if (psi.size() != space.dim())
        throw std::invalid_argument("partial_trace: state dimension mismatch");

    const int n = space.n_levels;
    // view psi as an n x n matrix M with psi[i*n + j] = M(i, j)
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(psi.data(), n, n);
    if (keep == 0) return m * m.adjoint();
    return m.transpose() * m.conjugate();
}

double leakage(const StateVector& psi, const FockSpace& space) {
    const int n = space.n_levels;
    const int top = std::max(1, n / 10);
    const int first_leaky = n - top;
    double worst = 0.0;
    if (space.n_modes == 1) {
        double pop = 0.0;
        for (int i = first_leaky; i < n; ++i) pop += std::norm(psi[i]);
        worst = pop;
    } else {
        double pop0 = 0.0, pop1 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double w = std::norm(psi[i * n + j]);
                if (i >= first_leaky) pop0 += w;
                if (j >= first_leaky) pop1 += w;
            }
        worst = std::max(pop0, pop1);
    }
    return worst;
}

Eigen::VectorXcd coherent_state(int n_levels, Complex alpha) {
    Eigen::VectorXcd v(n_levels);
    Complex amp(1.0, 0.0);
    v[0] = amp;
    for (int n = 1; n < n_levels; ++n) {
        amp *= alpha / std::sqrt(static_cast<double>(n));
        v[n] = amp;
    }
    v *= std::exp(-0.5 * std::norm(alpha));
    v.normalize();
    return v;
}

Eigen::VectorXcd fock_state(int n_levels, int n) {
    if (n < 0 || n >= n_levels) throw std::out_of_range("fock_state: level out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n_levels);
    v[n] = 1.0;
    return v;
}

StateVector product_state(const Eigen::VectorXcd& mode0, const Eigen::VectorXcd& mode1) {
    StateVector out(mode0.size() * mode1.size());
    for (int i = 0; i < mode0.size(); ++i)
        for (int j = 0; j < mode1.size(); ++j)
            out[i * mode1.size() + j] = mode0[i] * mode1[j];
    return out;
}

void validate_density_matrix(const DensityMatrix& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("density matrix not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-8)
        throw std::runtime_error("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::runtime_error("density matrix has negative eigenvalue");
}

}  // namespace qtraj
