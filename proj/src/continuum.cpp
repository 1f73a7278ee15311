#include "cvbell/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace cvbell::continuum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kMaxDoublings = 20;
constexpr double kProfileNormTol = 1e-10;

const Complex kI{0.0, 1.0};

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double panel_sum(const std::function<double(double)>& f, double a, double b, long panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    for (long p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double hi = p + 1 == panels ? b : lo + h;
        sum += boost::math::quadrature::gauss<double, 10>::integrate(f, lo, hi);
    }
    return sum;
}

}  // namespace

IntegrationError::IntegrationError(double previous, double last)
    : Error("quadrature: no convergence after " + std::to_string(kMaxDoublings) +
            " panel doublings (last estimates " + std::to_string(previous) + ", " + std::to_string(last) + ")"),
      previous_(previous), last_(last) {}

BlockAngle::BlockAngle(double theta) : theta_(theta) {
    if (!(theta >= 0.0 && theta < kPi)) throw DomainError("BlockAngle: theta must lie in [0, pi)");
}

HermitianOperator block_pauli(PauliKind kind) {
    Eigen::Matrix2cd m;
    switch (kind) {
        case PauliKind::x: m << 0.0, 1.0, 1.0, 0.0; break;
        // i(|tb><t| - |t><tb|): entry (tb, t) = +i
        case PauliKind::y: m << 0.0, -kI, kI, 0.0; break;
        case PauliKind::z: m << 1.0, 0.0, 0.0, -1.0; break;
    }
    return HermitianOperator(m);
}

ContinuumBlock chsh_block(BlockAngle theta_a, BlockAngle theta_b) {
    using linalg::tensor_product;
    const auto sy = block_pauli(PauliKind::y);
    const auto sz = block_pauli(PauliKind::z);
    auto x = tensor_product(sz, sz) - tensor_product(sy, sz) - tensor_product(sz, sy) - tensor_product(sy, sy);
    return ContinuumBlock{theta_a, theta_b, std::move(x)};
}

double chi_normalization(int sign) {
    if (sign != 1 && sign != -1) throw DomainError("chi_eigenvector: sign must be +1 or -1");
    return 2.0 * std::sqrt(2.0 - sign * kSqrt2);
}

CVector chi_eigenvector(int sign) {
    const double norm = chi_normalization(sign);
    const Complex cross = -static_cast<double>(sign) * kI * (kSqrt2 - sign);
    CVector chi(4);
    chi << 1.0, cross, cross, 1.0;
    return chi / norm;
}

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw DomainError("quadrature: tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("quadrature: interval must be finite");
    if (a == b) return 0.0;
    long panels = 1;
    double previous = panel_sum(f, a, b, panels);
    for (int doubling = 0; doubling < kMaxDoublings; ++doubling) {
        panels *= 2;
        const double current = panel_sum(f, a, b, panels);
        if (!std::isfinite(current)) throw DomainError("quadrature: integrand is not finite on the interval");
        if (std::abs(current - previous) < tol) return current;
        if (doubling + 1 == kMaxDoublings) throw IntegrationError(previous, current);
        previous = current;
    }
    return previous;
}

WavePacketProfile::WavePacketProfile(Kind kind, std::function<double(double)> g, std::vector<double> breakpoints,
                                     double aperture)
    : kind_(kind), g_(std::move(g)), breakpoints_(std::move(breakpoints)), aperture_(aperture) {}

WavePacketProfile WavePacketProfile::slit(double delta_theta) {
    if (!(delta_theta > 0.0 && delta_theta <= kPi))
        throw DomainError("slit profile: aperture must lie in (0, pi], got " + std::to_string(delta_theta));
    const double height = 1.0 / std::sqrt(delta_theta);
    auto g = [delta_theta, height](double theta) { return theta >= 0.0 && theta < delta_theta ? height : 0.0; };
    std::vector<double> breaks{0.0, delta_theta};
    if (delta_theta < kPi) breaks.push_back(kPi);
    return WavePacketProfile(Kind::slit, std::move(g), std::move(breaks), delta_theta);
}

WavePacketProfile WavePacketProfile::tabulated(std::vector<double> thetas, std::vector<double> values) {
    if (thetas.size() != values.size() || thetas.size() < 2)
        throw DomainError("tabulated profile: need at least 2 (theta, g) samples of equal count");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!std::isfinite(thetas[i]) || !std::isfinite(values[i]))
            throw DomainError("tabulated profile: non-finite sample");
        if (thetas[i] < 0.0 || thetas[i] > kPi) throw DomainError("tabulated profile: theta outside [0, pi]");
        if (i > 0 && !(thetas[i] > thetas[i - 1]))
            throw DomainError("tabulated profile: thetas must be strictly increasing");
    }
    // exact norm of the piecewise-linear interpolant
    double norm2 = 0.0;
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        const double h = thetas[i] - thetas[i - 1];
        const double u = values[i - 1];
        const double v = values[i];
        norm2 += h * (u * u + u * v + v * v) / 3.0;
    }
    if (!(norm2 > 0.0)) throw DomainError("tabulated profile: interpolant has zero norm");
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& v : values) v *= scale;

    std::vector<double> breaks;
    if (thetas.front() > 0.0) breaks.push_back(0.0);
    breaks.insert(breaks.end(), thetas.begin(), thetas.end());
    if (thetas.back() < kPi) breaks.push_back(kPi);

    auto g = [thetas = std::move(thetas), values = std::move(values)](double theta) {
        if (theta < thetas.front() || theta > thetas.back()) return 0.0;
        const auto it = std::upper_bound(thetas.begin(), thetas.end(), theta);
        if (it == thetas.end()) return values.back();
        const auto k = static_cast<std::size_t>(it - thetas.begin());
        const double t = (theta - thetas[k - 1]) / (thetas[k] - thetas[k - 1]);
        return (1.0 - t) * values[k - 1] + t * values[k];
    };
    return WavePacketProfile(Kind::tabulated, std::move(g), std::move(breaks), 0.0);
}

WavePacketProfile WavePacketProfile::custom(std::function<double(double)> g, std::vector<double> breakpoints) {
    if (!g) throw DomainError("custom profile: empty function");
    breakpoints.push_back(0.0);
    breakpoints.push_back(kPi);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    if (breakpoints.front() < 0.0 || breakpoints.back() > kPi)
        throw DomainError("custom profile: breakpoints outside [0, pi]");
    return WavePacketProfile(Kind::custom, std::move(g), std::move(breakpoints), 0.0);
}

double WavePacketProfile::integrate(const std::function<double(double)>& h, double tol) const {
    double total = 0.0;
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        total += quadrature(h, breakpoints_[i - 1], breakpoints_[i], tol);
    return total;
}

namespace {

double cosine_moment(const WavePacketProfile& g) {
    const double norm2 = g.integrate([&g](double t) { return g(t) * g(t); });
    if (std::abs(norm2 - 1.0) > kProfileNormTol)
        throw DomainError("wave packet profile is not normalized (norm^2 = " + std::to_string(norm2) + ")");
    return g.integrate([&g](double t) { return std::cos(t) * g(t) * g(t); });
}

}  // namespace

double wavepacket_expectation(const WavePacketProfile& g_a, const WavePacketProfile& g_b) {
    return 2.0 * kSqrt2 * cosine_moment(g_a) * cosine_moment(g_b);
}

double slit_expectation(double delta_theta) {
    if (!(delta_theta > 0.0)) throw DomainError("slit_expectation: aperture must be positive");
    const double s = sinc(delta_theta);
    return 2.0 * kSqrt2 * s * s;
}

double violation_aperture_threshold() {
    // (sin d / d)^2 - 1/sqrt2 is strictly decreasing on (0, pi): positive near 0, negative at pi.
    const double target = 1.0 / kSqrt2;
    double lo = 0.0;
    double hi = kPi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double s = sinc(mid);
        (s * s > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

WernerMixing::WernerMixing(double eta) : eta_(eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("WernerMixing: eta must lie in [0, 1]");
}

double werner_expectation(WernerMixing eta, const WavePacketProfile& g_a, const WavePacketProfile& g_b) {
    return (1.0 - eta.eta()) * wavepacket_expectation(g_a, g_b);
}

WernerThreshold werner_threshold(double delta_theta) {
    if (!(delta_theta > 0.0)) throw DomainError("werner_threshold: aperture must be positive");
    const double s = sinc(delta_theta);
    const double eta = 1.0 - 1.0 / (kSqrt2 * s * s);
    if (!(eta > 0.0) || !std::isfinite(eta)) return {0.0, false};
    return {eta, true};
}

}  // namespace cvbell::continuum
