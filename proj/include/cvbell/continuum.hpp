#pragma once

#include <functional>
#include <numbers>
#include <vector>

#include "cvbell/linalg.hpp"

// Exact continuum-limit results. The rotor Hilbert space splits into 2-dim
// blocks span{|theta>, |theta - pi>}, theta in [0, pi); the Bell operator at
// xi_a = xi_b = pi/2 is a cos(theta)cos(theta') weighted direct sum of one
// 4x4 CHSH block per angle pair.
namespace cvbell::continuum {

/// theta in [0, pi); its partner is theta - pi.
class BlockAngle {
public:
    explicit BlockAngle(double theta);

    double theta() const { return theta_; }
    double partner() const { return theta_ - std::numbers::pi; }

private:
    double theta_;
};

class IntegrationError : public Error {
public:
    IntegrationError(double previous, double last);
    double previous() const { return previous_; }
    double last() const { return last_; }

private:
    double previous_;
    double last_;
};

enum class PauliKind { x, y, z };

/// Pauli matrix in the ordered block basis (|theta>, |theta-bar>).
HermitianOperator block_pauli(PauliKind kind);

/// X = sz(x)sz - sy(x)sz - sz(x)sy - sy(x)sy in the ordered basis
/// (|theta theta'>, |theta theta'-bar>, |theta-bar theta'>, |theta-bar theta'-bar>).
/// The matrix does not depend on the angles; they are kept as labels.
struct ContinuumBlock {
    BlockAngle theta_a;
    BlockAngle theta_b;
    HermitianOperator matrix;
};

ContinuumBlock chsh_block(BlockAngle theta_a, BlockAngle theta_b);

/// Unit eigenvector of X with eigenvalue sign * 2 sqrt(2).
CVector chi_eigenvector(int sign);

/// Normalization N_sign of chi_eigenvector, so that N * chi has components
/// (1, -/+ i(sqrt2 -/+ 1), -/+ i(sqrt2 -/+ 1), 1).
double chi_normalization(int sign);

/// Composite Gauss-Legendre rule on [a, b]; the panel count doubles until two
/// successive estimates differ by less than tol. Throws after 20 doublings.
double quadrature(const std::function<double(double)>& f, double a, double b, double tol);

/// Real amplitude g(theta) on [0, pi) with unit L2 norm.
class WavePacketProfile {
public:
    enum class Kind { slit, tabulated, custom };

    /// 1/sqrt(delta_theta) on [0, delta_theta), zero elsewhere.
    static WavePacketProfile slit(double delta_theta);

    /// Linear interpolation through (theta_i, g_i), zero outside the sampled
    /// range, renormalized to unit norm.
    static WavePacketProfile tabulated(std::vector<double> thetas, std::vector<double> values);

    /// Arbitrary amplitude, smooth between the given breakpoints. It is not
    /// renormalized; wavepacket_expectation rejects it if it is not normalized.
    static WavePacketProfile custom(std::function<double(double)> g, std::vector<double> breakpoints);

    double operator()(double theta) const { return g_(theta); }
    Kind kind() const { return kind_; }

    /// Slit aperture (slit profiles only, 0 otherwise).
    double aperture() const { return aperture_; }

    /// Ascending points in [0, pi] between which g is smooth, first 0 and last pi.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// \int_0^pi h(theta) dtheta, integrated piecewise between breakpoints.
    double integrate(const std::function<double(double)>& h, double tol = 1e-12) const;

private:
    WavePacketProfile(Kind kind, std::function<double(double)> g, std::vector<double> breakpoints, double aperture);

    Kind kind_;
    std::function<double(double)> g_;
    std::vector<double> breakpoints_;
    double aperture_;
};

/// 2 sqrt(2) (\int cos|g_a|^2) (\int cos|g_b|^2), the product-packet Bell value.
double wavepacket_expectation(const WavePacketProfile& g_a, const WavePacketProfile& g_b);

/// 2 sqrt(2) (sin d / d)^2.
double slit_expectation(double delta_theta);

/// Aperture at which slit_expectation equals 2 (about 1.0019 rad, 57.4 degrees).
double violation_aperture_threshold();

class WernerMixing {
public:
    explicit WernerMixing(double eta);
    double eta() const { return eta_; }

private:
    double eta_;
};

/// (1 - eta) * wavepacket_expectation(g_a, g_b).
double werner_expectation(WernerMixing eta, const WavePacketProfile& g_a, const WavePacketProfile& g_b);

struct WernerThreshold {
    double eta_star;
    bool violates;  // false when no eta >= 0 gives a value above 2
};

/// eta* = 1 - (1/sqrt 2)(d / sin d)^2, clamped to 0 beyond the violation aperture.
WernerThreshold werner_threshold(double delta_theta);

}  // namespace cvbell::continuum
