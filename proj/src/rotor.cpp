#include "cvbell/rotor.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cvbell::rotor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCoeffTol = 1e-12;

// Imaginary residue allowed in a Hermitian expectation, relative to the
// operator scale (entries are O(1) here).
constexpr double kResidueTol = 1e-10;

}  // namespace

TruncationLevel::TruncationLevel(int m, int ceiling) : m_(m) {
    if (m < 1 || m > ceiling)
        throw DomainError("TruncationLevel: M=" + std::to_string(m) + " outside [1, " + std::to_string(ceiling) + "]");
}

Eigen::Index TruncationLevel::row_of(int m) const {
    if (m < -m_ || m > m_) throw DomainError("TruncationLevel: m=" + std::to_string(m) + " outside basis");
    return m + m_;
}

int TruncationLevel::m_of(Eigen::Index row) const {
    if (row < 0 || row >= dim()) throw DomainError("TruncationLevel: row " + std::to_string(row) + " outside basis");
    return static_cast<int>(row) - m_;
}

PhaseAngle::PhaseAngle(double radians) {
    if (!std::isfinite(radians)) throw DomainError("PhaseAngle: non-finite angle");
    value_ = std::fmod(radians, kTwoPi);
    if (value_ < 0.0) value_ += kTwoPi;
    if (value_ >= kTwoPi) value_ = 0.0;
}

HermitianOperator cosine_observable(TruncationLevel M) { return phase_rotated_cosine(M, 0.0); }

HermitianOperator phase_rotated_cosine(TruncationLevel M, PhaseAngle xi) {
    CMatrix c = CMatrix::Zero(M.dim(), M.dim());
    for (int m = -M.value(); m < M.value(); ++m) {
        const Eigen::Index r = M.row_of(m);
        const Complex entry = 0.5 * std::polar(1.0, -(2.0 * m + 1.0) * xi.value());
        c(r, r + 1) = entry;
        c(r + 1, r) = std::conj(entry);
    }
    return HermitianOperator(c);
}

linalg::ComplexMatrix kinetic_phase_unitary(TruncationLevel M, PhaseAngle phi) {
    CMatrix u = CMatrix::Zero(M.dim(), M.dim());
    for (int m = -M.value(); m <= M.value(); ++m) {
        const Eigen::Index r = M.row_of(m);
        // reduce m^2 phi mod 2pi first so large M keeps full phase accuracy
        u(r, r) = std::polar(1.0, std::fmod(static_cast<double>(m) * m * phi.value(), kTwoPi));
    }
    return linalg::ComplexMatrix(std::move(u));
}

HermitianOperator periodic_observable(TruncationLevel M, const std::map<int, Complex>& fourier_coeffs) {
    const auto coeff = [&](int k) {
        const auto it = fourier_coeffs.find(k);
        return it == fourier_coeffs.end() ? Complex{} : it->second;
    };
    for (const auto& [k, c] : fourier_coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw DomainError("periodic_observable: non-finite coefficient at order " + std::to_string(k));
        if (std::abs(coeff(-k) - std::conj(c)) > kCoeffTol)
            throw DomainError("periodic_observable: c_{-k} != conj(c_k) at k=" + std::to_string(k) +
                              ", observable would not be Hermitian");
    }
    CMatrix f(M.dim(), M.dim());
    for (Eigen::Index i = 0; i < M.dim(); ++i)
        for (Eigen::Index j = 0; j < M.dim(); ++j) f(i, j) = coeff(M.m_of(i) - M.m_of(j));
    return HermitianOperator(f);
}

std::array<ProductTerm, 4> bell_terms(TruncationLevel M, PhaseAngle phi_a, PhaseAngle phi_a_prime, PhaseAngle phi_b,
                                      PhaseAngle phi_b_prime) {
    const CMatrix a = phase_rotated_cosine(M, phi_a).matrix();
    const CMatrix a_prime = phase_rotated_cosine(M, phi_a_prime).matrix();
    const CMatrix b = phase_rotated_cosine(M, phi_b).matrix();
    const CMatrix b_prime = phase_rotated_cosine(M, phi_b_prime).matrix();
    return {ProductTerm{1.0, a, b}, ProductTerm{1.0, a_prime, b}, ProductTerm{1.0, a, b_prime},
            ProductTerm{-1.0, a_prime, b_prime}};
}

std::array<ProductTerm, 4> reduced_bell_terms(TruncationLevel M, PhaseAngle xi_a, PhaseAngle xi_b) {
    return bell_terms(M, 0.0, xi_a, 0.0, xi_b);
}

HermitianOperator bell_operator(TruncationLevel M, PhaseAngle phi_a, PhaseAngle phi_a_prime, PhaseAngle phi_b,
                                PhaseAngle phi_b_prime, std::size_t max_dim) {
    const auto ca = phase_rotated_cosine(M, phi_a);
    const auto ca_prime = phase_rotated_cosine(M, phi_a_prime);
    const auto cb = phase_rotated_cosine(M, phi_b);
    const auto cb_prime = phase_rotated_cosine(M, phi_b_prime);
    using linalg::tensor_product;
    return tensor_product(ca, cb, max_dim) + tensor_product(ca_prime, cb, max_dim) +
           tensor_product(ca, cb_prime, max_dim) - tensor_product(ca_prime, cb_prime, max_dim);
}

HermitianOperator reduced_bell_operator(TruncationLevel M, PhaseAngle xi_a, PhaseAngle xi_b, std::size_t max_dim) {
    return bell_operator(M, 0.0, xi_a, 0.0, xi_b, max_dim);
}

double terms_expectation(const std::array<ProductTerm, 4>& terms, const CVector& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-12) throw NormalizationError("terms_expectation: state is not normalized");
    Complex sum{};
    for (const auto& t : terms) sum += t.sign * linalg::tensor_expectation(t.a, t.b, psi);
    if (std::abs(sum.imag()) > kResidueTol)
        throw NumericalError("terms_expectation: imaginary residue too large", static_cast<std::size_t>(psi.size()),
                             std::abs(sum.imag()));
    return sum.real();
}

double terms_trace(const std::array<ProductTerm, 4>& terms, const CMatrix& rho) {
    Complex sum{};
    for (const auto& t : terms) sum += t.sign * linalg::tensor_trace(t.a, t.b, rho);
    if (std::abs(sum.imag()) > kResidueTol)
        throw NumericalError("terms_trace: imaginary residue too large", static_cast<std::size_t>(rho.rows()),
                             std::abs(sum.imag()));
    return sum.real();
}

}  // namespace cvbell::rotor
