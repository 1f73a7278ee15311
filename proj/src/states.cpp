#include "cvbell/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvbell/continuum.hpp"

namespace cvbell::states {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTraceTol = 1e-10;

void check_aperture(double delta_theta) {
    if (!(delta_theta > 0.0 && delta_theta <= kPi))
        throw DomainError("slit aperture must lie in (0, pi], got " + std::to_string(delta_theta));
}

CMatrix outer(const CVector& u, const CVector& v) { return u * v.adjoint(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector kron(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

CMatrix one_particle_mixture(const FourierState& g, const FourierState& g_bar) {
    return 0.5 * (outer(g.coeffs, g.coeffs) + outer(g_bar.coeffs, g_bar.coeffs));
}

}  // namespace

FourierState slit_state(rotor::TruncationLevel M, double delta_theta, bool shifted) {
    check_aperture(delta_theta);
    const double scale = 1.0 / std::sqrt(2.0 * kPi * delta_theta);
    CVector c(M.dim());
    for (int m = -M.value(); m <= M.value(); ++m) {
        Complex cm;
        if (m == 0) {
            cm = std::sqrt(delta_theta / (2.0 * kPi));
        } else {
            // (exp(i m d) - 1) / (i m) = (sin(m d) - i(cos(m d) - 1)) / m
            const double md = m * delta_theta;
            cm = scale * Complex(std::sin(md), 1.0 - std::cos(md)) / static_cast<double>(m);
        }
        if (shifted && (m % 2 != 0)) cm = -cm;
        c(M.row_of(m)) = cm;
    }
    const double kept = c.squaredNorm();
    return FourierState{M, c / std::sqrt(kept), 1.0 - kept};
}

BipartitePureState entangled_packet_state(rotor::TruncationLevel M, double delta_theta) {
    const auto g = slit_state(M, delta_theta, false);
    const auto g_bar = slit_state(M, delta_theta, true);
    const double n_plus = std::sqrt(2.0 * (2.0 - kSqrt2));
    const Complex cross(0.0, -(kSqrt2 - 1.0));
    CVector psi = kron(g.coeffs, g.coeffs) + kron(g_bar.coeffs, g_bar.coeffs) +
                  cross * (kron(g.coeffs, g_bar.coeffs) + kron(g_bar.coeffs, g.coeffs));
    psi /= kSqrt2 * n_plus;
    psi.normalize();
    return BipartitePureState{M, std::move(psi)};
}

DensityOperator werner_density(rotor::TruncationLevel M, double delta_theta, double eta) {
    const continuum::WernerMixing mixing(eta);
    const auto dim = static_cast<std::size_t>(M.dim() * M.dim());
    if (dim > kMaxDensityDim)
        throw SizeError("werner_density: dimension " + std::to_string(dim) + " exceeds maximum " +
                        std::to_string(kMaxDensityDim));
    const auto g = slit_state(M, delta_theta, false);
    const auto g_bar = slit_state(M, delta_theta, true);
    const CMatrix local = one_particle_mixture(g, g_bar);
    const auto psi = entangled_packet_state(M, delta_theta);

    CMatrix rho = kron(local, local);
    rho *= mixing.eta();
    rho.noalias() += (1.0 - mixing.eta()) * outer(psi.coeffs, psi.coeffs);
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > kTraceTol)
        throw InvalidDensityError("werner_density: trace " + std::to_string(trace) + " drifted from 1");
    rho /= trace;
    return DensityOperator{M, HermitianOperator(rho)};
}

CMatrix partial_trace_fast(const CMatrix& rho, Eigen::Index dim_slow, Eigen::Index dim_fast) {
    if (rho.rows() != dim_slow * dim_fast || rho.cols() != rho.rows())
        throw ShapeError("partial_trace_fast: matrix does not match the factor dimensions");
    CMatrix out = CMatrix::Zero(dim_slow, dim_slow);
    for (Eigen::Index i = 0; i < dim_slow; ++i)
        for (Eigen::Index j = 0; j < dim_slow; ++j)
            out(i, j) = rho.block(i * dim_fast, j * dim_fast, dim_fast, dim_fast).trace();
    return out;
}

HermitianOperator reduced_density_a(const BipartitePureState& psi) {
    const Eigen::Index d = psi.M.dim();
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> amplitudes(psi.coeffs.data(), d, d);
    return HermitianOperator(amplitudes * amplitudes.adjoint());
}

double bell_expectation(const BipartitePureState& psi, rotor::PhaseAngle xi_a, rotor::PhaseAngle xi_b) {
    return rotor::terms_expectation(rotor::reduced_bell_terms(psi.M, xi_a, xi_b), psi.coeffs);
}

double bell_trace(const DensityOperator& rho, rotor::PhaseAngle xi_a, rotor::PhaseAngle xi_b) {
    const double trace = rho.matrix.matrix().trace().real();
    if (std::abs(trace - 1.0) > kTraceTol)
        throw InvalidDensityError("bell_trace: density trace " + std::to_string(trace) + " is not 1");
    return rotor::terms_trace(rotor::reduced_bell_terms(rho.M, xi_a, xi_b), rho.matrix.matrix());
}

TruncatedViolation truncated_violation(rotor::TruncationLevel M, double delta_theta) {
    const auto psi = entangled_packet_state(M, delta_theta);
    const double value = bell_expectation(psi, kPi / 2.0, kPi / 2.0);
    const double analytic = continuum::slit_expectation(delta_theta);
    return {value, analytic, std::abs(value - analytic), slit_state(M, delta_theta, false).tail_mass};
}

}  // namespace cvbell::states
