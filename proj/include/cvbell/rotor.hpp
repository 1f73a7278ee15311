#pragma once

#include <array>
#include <map>

#include "cvbell/linalg.hpp"

namespace cvbell::rotor {

inline constexpr int kDefaultMaxTruncation = 60;

/// Angular-momentum cutoff M: basis |m>, |m| <= M, local dimension 2M+1.
class TruncationLevel {
public:
    explicit TruncationLevel(int m, int ceiling = kDefaultMaxTruncation);

    int value() const { return m_; }
    Eigen::Index dim() const { return 2 * m_ + 1; }

    // Row index r = m + M; row 0 is m = -M.
    Eigen::Index row_of(int m) const;
    int m_of(Eigen::Index row) const;

    friend bool operator==(TruncationLevel, TruncationLevel) = default;

private:
    int m_;
};

/// Angle in radians, stored reduced to [0, 2pi).
class PhaseAngle {
public:
    PhaseAngle(double radians);  // NOLINT: implicit by intent, phases are plain radians at call sites

    double value() const { return value_; }

private:
    double value_;
};

HermitianOperator cosine_observable(TruncationLevel M);

/// C(xi) = U(xi) C U(xi)^dagger with U = exp(i Jz^2 xi); entry (m, m+1) is
/// exp(-i(2m+1)xi)/2. Boundary term coupling |M> to |M+1> is dropped.
HermitianOperator phase_rotated_cosine(TruncationLevel M, PhaseAngle xi);

/// diag(exp(i m^2 phi)).
linalg::ComplexMatrix kinetic_phase_unitary(TruncationLevel M, PhaseAngle phi);

/// Observable with matrix elements <m|F|m'> = c_{m-m'} where
/// c_k = (1/2pi) \int f(theta) exp(ik theta) dtheta. Missing orders are zero.
HermitianOperator periodic_observable(TruncationLevel M, const std::map<int, Complex>& fourier_coeffs);

/// One signed product term of a bipartite operator, party A on the slow axis.
struct ProductTerm {
    double sign;
    CMatrix a;
    CMatrix b;
};

/// C(pa)(x)C(pb) + C(pa')(x)C(pb) + C(pa)(x)C(pb') - C(pa')(x)C(pb') as its
/// four product terms, for structure-aware evaluation at large M.
std::array<ProductTerm, 4> bell_terms(TruncationLevel M, PhaseAngle phi_a, PhaseAngle phi_a_prime, PhaseAngle phi_b,
                                      PhaseAngle phi_b_prime);
std::array<ProductTerm, 4> reduced_bell_terms(TruncationLevel M, PhaseAngle xi_a, PhaseAngle xi_b);

HermitianOperator bell_operator(TruncationLevel M, PhaseAngle phi_a, PhaseAngle phi_a_prime, PhaseAngle phi_b,
                                PhaseAngle phi_b_prime, std::size_t max_dim = linalg::kDefaultMaxProductDim);

/// bell_operator(M, 0, xi_a, 0, xi_b).
HermitianOperator reduced_bell_operator(TruncationLevel M, PhaseAngle xi_a, PhaseAngle xi_b,
                                        std::size_t max_dim = linalg::kDefaultMaxProductDim);

/// <psi| sum_t sign_t A_t (x) B_t |psi>, real part after residue check.
double terms_expectation(const std::array<ProductTerm, 4>& terms, const CVector& psi);

/// Tr[(sum_t sign_t A_t (x) B_t) rho], real part after residue check.
double terms_trace(const std::array<ProductTerm, 4>& terms, const CMatrix& rho);

}  // namespace cvbell::rotor
