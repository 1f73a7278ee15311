#include "cvbell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cvbell::linalg {

namespace {

constexpr double kHermitianRelTol = 1e-12;
constexpr double kNormTol = 1e-12;
constexpr double kImagTol = 1e-12;
constexpr double kDensityTol = 1e-10;

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
};

std::vector<Entry> nonzeros(const CMatrix& m) {
    std::vector<Entry> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != Complex{}) out.push_back({i, j, m(i, j)});
    return out;
}

void fix_phases(CMatrix& vectors) {
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        auto col = vectors.col(k);
        const double peak = col.cwiseAbs().maxCoeff();
        if (peak == 0.0) continue;
        Eigen::Index pivot = 0;
        // first component within round-off of the peak modulus
        while (std::abs(col(pivot)) < peak * (1.0 - 1e-12)) ++pivot;
        const Complex phase = col(pivot) / std::abs(col(pivot));
        col *= std::conj(phase);
        col(pivot) = Complex(col(pivot).real(), 0.0);
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() <= 0 || m_.cols() <= 0) throw ShapeError("ComplexMatrix: dimensions must be positive");
    if (!all_finite(m_)) throw DomainError("ComplexMatrix: non-finite entry");
}

HermitianOperator::HermitianOperator(const CMatrix& m) {
    if (m.rows() <= 0 || m.rows() != m.cols())
        throw ShapeError("HermitianOperator: matrix must be square and non-empty, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!all_finite(m)) throw DomainError("HermitianOperator: non-finite entry");
    const double defect = max_abs(m - m.adjoint());
    if (defect > kHermitianRelTol * std::max(1.0, max_abs(m)))
        throw DomainError("HermitianOperator: input is not Hermitian (defect " + std::to_string(defect) + ")");
    m_ = (m + m.adjoint()) * 0.5;
    for (Eigen::Index i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
    if (dim <= 0) throw ShapeError("HermitianOperator::identity: dimension must be positive");
    return HermitianOperator(CMatrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
    if (dim() != other.dim()) throw ShapeError("HermitianOperator: dimension mismatch in sum");
    return HermitianOperator(m_ + other.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
    if (dim() != other.dim()) throw ShapeError("HermitianOperator: dimension mismatch in difference");
    return HermitianOperator(m_ - other.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
    if (!std::isfinite(s)) throw DomainError("HermitianOperator: non-finite scale factor");
    return HermitianOperator(m_ * s, Trusted{});
}

HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b, std::size_t max_dim) {
    const auto da = static_cast<std::size_t>(a.dim());
    const auto db = static_cast<std::size_t>(b.dim());
    if (da > max_dim / db)
        throw SizeError("tensor_product: product dimension " + std::to_string(da * db) + " exceeds maximum " +
                        std::to_string(max_dim));
    const Eigen::Index n = a.dim() * b.dim();
    CMatrix out = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < a.dim(); ++j)
        for (Eigen::Index i = 0; i < a.dim(); ++i) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = aij * b.matrix();
        }
    return HermitianOperator(out);
}

SpectralDecomposition hermitian_eigensystem(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian_eigensystem: eigensolver did not converge",
                             static_cast<std::size_t>(h.dim()), h.matrix().cwiseAbs().rowwise().sum().maxCoeff());
    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(out.eigenvectors);
    return out;
}

RVector hermitian_eigenvalues(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian_eigenvalues: eigensolver did not converge",
                             static_cast<std::size_t>(h.dim()), h.matrix().cwiseAbs().rowwise().sum().maxCoeff());
    return solver.eigenvalues();
}

double expectation(const HermitianOperator& h, const CVector& psi) {
    if (psi.size() != h.dim())
        throw ShapeError("expectation: state length " + std::to_string(psi.size()) + " does not match operator dim " +
                         std::to_string(h.dim()));
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > kNormTol)
        throw NormalizationError("expectation: state norm " + std::to_string(norm) + " is not 1");
    const Complex value = psi.dot(h.matrix() * psi);
    if (std::abs(value.imag()) > kImagTol * std::max(1.0, max_abs(h.matrix())))
        throw NumericalError("expectation: imaginary residue too large", static_cast<std::size_t>(h.dim()),
                             std::abs(value.imag()));
    return value.real();
}

double trace_product(const HermitianOperator& h, const HermitianOperator& rho) {
    if (h.dim() != rho.dim()) throw ShapeError("trace_product: dimension mismatch");
    const double trace = rho.matrix().trace().real();
    if (std::abs(trace - 1.0) > kDensityTol)
        throw InvalidDensityError("trace_product: density trace " + std::to_string(trace) + " is not 1");
    const double lowest = hermitian_eigenvalues(rho)(0);
    if (lowest < -kDensityTol)
        throw InvalidDensityError("trace_product: density has negative eigenvalue " + std::to_string(lowest));
    const Complex value = h.matrix().cwiseProduct(rho.matrix().transpose()).sum();
    if (std::abs(value.imag()) > kImagTol * std::max(1.0, max_abs(h.matrix())))
        throw NumericalError("trace_product: imaginary residue too large", static_cast<std::size_t>(h.dim()),
                             std::abs(value.imag()));
    return value.real();
}

Complex tensor_expectation(const CMatrix& a, const CMatrix& b, const CVector& psi) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || psi.size() != a.rows() * b.rows())
        throw ShapeError("tensor_expectation: shape mismatch");
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> amplitudes(psi.data(), a.rows(), b.rows());
    const CMatrix image = a * amplitudes * b.transpose();
    return amplitudes.conjugate().cwiseProduct(image).sum();
}

Complex tensor_trace(const CMatrix& a, const CMatrix& b, const CMatrix& rho) {
    const Eigen::Index da = a.rows();
    const Eigen::Index db = b.rows();
    if (a.cols() != da || b.cols() != db || rho.rows() != da * db || rho.cols() != da * db)
        throw ShapeError("tensor_trace: shape mismatch");
    const auto a_nz = nonzeros(a);
    const auto b_nz = nonzeros(b);
    Complex sum{};
    for (const auto& ea : a_nz)
        for (const auto& eb : b_nz) sum += ea.value * eb.value * rho(ea.col * db + eb.col, ea.row * db + eb.row);
    return sum;
}

double max_spectral_deviation(RVector lhs, RVector rhs) {
    if (lhs.size() != rhs.size()) throw ShapeError("max_spectral_deviation: spectra differ in size");
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    return lhs.size() == 0 ? 0.0 : (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace cvbell::linalg
