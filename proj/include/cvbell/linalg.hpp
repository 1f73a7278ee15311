#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvbell {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Error hierarchy shared by every module.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class SizeError : public Error {
public:
    using Error::Error;
};
class ShapeError : public Error {
public:
    using Error::Error;
};
class NormalizationError : public Error {
public:
    using Error::Error;
};
class InvalidDensityError : public Error {
public:
    using Error::Error;
};
class DomainError : public Error {
public:
    using Error::Error;
};
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::size_t dim, double condition)
        : Error(what + " (dim=" + std::to_string(dim) + ", cond~" + std::to_string(condition) + ")"),
          dim_(dim), condition_(condition) {}
    std::size_t dim() const { return dim_; }
    double condition() const { return condition_; }

private:
    std::size_t dim_;
    double condition_;
};

namespace linalg {

inline constexpr std::size_t kDefaultMaxProductDim = 4096;

// General dense complex matrix with finite entries.
class ComplexMatrix {
public:
    explicit ComplexMatrix(CMatrix m);

    Eigen::Index rows() const { return m_.rows(); }
    Eigen::Index cols() const { return m_.cols(); }
    const Complex& operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    const CMatrix& matrix() const { return m_; }

private:
    CMatrix m_;
};

/// Dense complex square matrix that is Hermitian by construction.
///
/// The constructor accepts input whose Hermitian defect is at round-off level
/// (relative 1e-12) and symmetrizes it exactly; anything larger is rejected.
class HermitianOperator {
public:
    explicit HermitianOperator(const CMatrix& m);

    static HermitianOperator identity(Eigen::Index dim);

    Eigen::Index dim() const { return m_.rows(); }
    const Complex& operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    const CMatrix& matrix() const { return m_; }

    HermitianOperator operator+(const HermitianOperator& other) const;
    HermitianOperator operator-(const HermitianOperator& other) const;
    HermitianOperator operator*(double s) const;
    HermitianOperator operator-() const { return *this * -1.0; }

private:
    struct Trusted {};
    HermitianOperator(CMatrix m, Trusted) : m_(std::move(m)) {}

    CMatrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

struct SpectralDecomposition {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Kronecker product; left factor indexes the slow axis.
HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b,
                                 std::size_t max_dim = kDefaultMaxProductDim);

/// Full dense eigensystem, eigenvalues ascending. In each eigenvector the first
/// component of largest modulus is rotated to be real and non-negative.
SpectralDecomposition hermitian_eigensystem(const HermitianOperator& h);

/// Eigenvalues only, ascending.
RVector hermitian_eigenvalues(const HermitianOperator& h);

/// <psi|H|psi> for a unit vector psi.
double expectation(const HermitianOperator& h, const CVector& psi);

/// Tr(H rho) for a density matrix rho (unit trace, positive semidefinite).
double trace_product(const HermitianOperator& h, const HermitianOperator& rho);

/// <psi|A (x) B|psi> without forming the product, psi in A-slow ordering.
Complex tensor_expectation(const CMatrix& a, const CMatrix& b, const CVector& psi);

/// Tr[(A (x) B) rho] without forming the product; only nonzero entries of A
/// and B contribute, so banded factors are cheap.
Complex tensor_trace(const CMatrix& a, const CMatrix& b, const CMatrix& rho);

/// Maximum absolute difference between two sorted spectra of equal size.
double max_spectral_deviation(RVector lhs, RVector rhs);

}  // namespace linalg

using linalg::HermitianOperator;

}  // namespace cvbell
