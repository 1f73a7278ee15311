#pragma once

#include "cvbell/rotor.hpp"

namespace cvbell::states {

/// Upper bound on the dimension of a dense bipartite density matrix
/// (M = 40 gives 81^2 = 6561, about 0.7 GB).
inline constexpr std::size_t kMaxDensityDim = 6561;

/// One-particle state sum_m c_m |m>, |m| <= M, renormalized after truncation.
struct FourierState {
    rotor::TruncationLevel M;
    CVector coeffs;    // row m + M holds c_m
    double tail_mass;  // 1 - sum |c_m|^2 of the untruncated coefficients
};

/// Pure state of two rotors, coefficient of |m_a>|m_b> at row (m_a+M)(2M+1) + m_b+M.
struct BipartitePureState {
    rotor::TruncationLevel M;
    CVector coeffs;
};

struct DensityOperator {
    rotor::TruncationLevel M;
    HermitianOperator matrix;
};

/// Angular slit of aperture delta_theta in the |m> basis:
/// c_m = (exp(i m d) - 1) / (i m sqrt(2 pi d)), c_0 = sqrt(d / 2pi).
/// The shifted packet (support moved by -pi) carries an extra (-1)^m.
FourierState slit_state(rotor::TruncationLevel M, double delta_theta, bool shifted);

/// [(g g + gb gb) - i(sqrt2 - 1)(g gb + gb g)] / (sqrt2 N_+), renormalized,
/// with g, gb the unshifted and shifted slit states.
BipartitePureState entangled_packet_state(rotor::TruncationLevel M, double delta_theta);

/// eta rho_A (x) rho_B + (1 - eta)|Psi><Psi| where rho = (|g><g| + |gb><gb|)/2.
DensityOperator werner_density(rotor::TruncationLevel M, double delta_theta, double eta);

/// Tr_B |Psi><Psi|.
HermitianOperator reduced_density_a(const BipartitePureState& psi);

/// Partial trace over the fast (second) tensor factor.
CMatrix partial_trace_fast(const CMatrix& rho, Eigen::Index dim_slow, Eigen::Index dim_fast);

/// <Psi| B(xi_a, xi_b) |Psi> without materializing the Bell operator.
double bell_expectation(const BipartitePureState& psi, rotor::PhaseAngle xi_a, rotor::PhaseAngle xi_b);

/// Tr[B(xi_a, xi_b) rho] without materializing the Bell operator.
double bell_trace(const DensityOperator& rho, rotor::PhaseAngle xi_a, rotor::PhaseAngle xi_b);

struct TruncatedViolation {
    double value;     // <Psi|B^(M)(pi/2, pi/2)|Psi>
    double analytic;  // continuum slit value
    double abs_error;
    double tail_mass;  // of the one-particle slit state
};

TruncatedViolation truncated_violation(rotor::TruncationLevel M, double delta_theta);

}  // namespace cvbell::states
