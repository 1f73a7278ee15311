// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "cvbell/cli.hpp"
#include "cvbell/continuum.hpp"
#include "cvbell/scan.hpp"
#include "cvbell/states.hpp"

using namespace cvbell;
using rotor::TruncationLevel;

namespace {

constexpr double kPi = std::numbers::pi;
const double kTsirelson = 2.0 * std::numbers::sqrt2;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
        result = body();
    } catch (const std::exception& e) {
        result = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!result.pass) ++failures;
    std::cout << (result.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << result.detail
              << "; " << fmt::format("{:.1f}", secs) << " s]" << std::endl;
}

CVector random_unit(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> normal;
    CVector v(dim);
    for (auto& x : v) x = Complex(normal(rng), normal(rng));
    return v.normalized();
}

Outcome cosine_oracle() {
    double worst = 0.0;
    for (const int m : {1, 2, 5, 10, 20}) {
        const int d = 2 * m + 1;
        RVector closed(d);
        for (int k = 1; k <= d; ++k) closed(k - 1) = std::cos(k * kPi / (2.0 * m + 2.0));
        const RVector s = linalg::hermitian_eigenvalues(rotor::cosine_observable(TruncationLevel(m)));
        worst = std::max(worst, linalg::max_spectral_deviation(s, closed));
    }
    return {worst <= 1e-10, fmt::format("max deviation {:.2e} (tol 1e-10)", worst)};
}

Outcome violation_scan() {
    const auto grid = scan::PhaseGrid::uniform(101);
    const double step = kPi / 100.0;
    const Eigen::Index centre = 50;
    bool ok = std::abs(grid.xi_a()[50] - kPi / 2) < 1e-15;
    std::string detail;
    double centre_value[2] = {0.0, 0.0};
    int slot = 0;
    for (const int m : {2, 5}) {
        const auto map = scan::max_eigenvalue_surface(TruncationLevel(m), grid);
        const bool near = std::abs(map.argmax.xi_a - kPi / 2) <= step + 1e-15 &&
                          std::abs(map.argmax.xi_b - kPi / 2) <= step + 1e-15;
        ok = ok && near;
        centre_value[slot++] = map.b_max(centre, centre);
        detail += fmt::format("M={}: argmax ({:.4f}, {:.4f}) b_max(pi/2,pi/2)={:.10f}; ", m, map.argmax.xi_a,
                              map.argmax.xi_b, map.b_max(centre, centre));
    }
    ok = ok && centre_value[0] > 2.0 && centre_value[1] > centre_value[0];
    detail += "need argmax within one step, M=2 value > 2, M=5 value larger";
    return {ok, detail};
}

Outcome bounds_suite() {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_int_distribution<int> level(1, 4);
    double lowest = 0.0;
    double highest = 0.0;
    for (int draw = 0; draw < 500; ++draw) {
        const auto s = linalg::hermitian_eigenvalues(
            rotor::reduced_bell_operator(TruncationLevel(level(rng)), angle(rng), angle(rng)));
        lowest = std::min(lowest, s.minCoeff());
        highest = std::max(highest, s.maxCoeff());
    }
    double worst_product = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        const TruncationLevel M(level(rng));
        const CVector a = random_unit(rng, M.dim());
        const CVector b = random_unit(rng, M.dim());
        CVector product(M.dim() * M.dim());
        for (Eigen::Index i = 0; i < M.dim(); ++i) product.segment(i * M.dim(), M.dim()) = a(i) * b;
        const auto terms = rotor::bell_terms(M, angle(rng), angle(rng), angle(rng), angle(rng));
        worst_product = std::max(worst_product, std::abs(rotor::terms_expectation(terms, product)));
    }
    const bool ok = lowest >= -kTsirelson - 1e-9 && highest <= kTsirelson + 1e-9 && worst_product <= 2.0 + 1e-9;
    return {ok, fmt::format("500 spectra in [{:.12f}, {:.12f}] vs +-{:.12f}; 200 product states max |<B>|={:.12f}",
                            lowest, highest, kTsirelson, worst_product)};
}

Outcome unitary_equivalence() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        const scan::FourPhases p{angle(rng), angle(rng), angle(rng), angle(rng)};
        worst = std::max(worst, scan::unitary_equivalence_check(TruncationLevel(3), p).max_spectral_deviation);
    }
    return {worst <= 1e-9, fmt::format("50 quadruples at M=3, max deviation {:.2e} (tol 1e-9)", worst)};
}

Outcome continuum_block() {
    using namespace continuum;
    const auto block = chsh_block(BlockAngle(0.0), BlockAngle(0.0));
    const CMatrix x = block.matrix.matrix();
    RVector expected(4);
    expected << -kTsirelson, 0.0, 0.0, kTsirelson;
    const double spectrum = linalg::max_spectral_deviation(linalg::hermitian_eigenvalues(block.matrix), expected);
    const CVector plus = chi_eigenvector(+1);
    const CVector minus = chi_eigenvector(-1);
    const double chi = std::max((x * plus - kTsirelson * plus).cwiseAbs().maxCoeff(),
                                (x * minus + kTsirelson * minus).cwiseAbs().maxCoeff());
    const auto sx = block_pauli(PauliKind::x);
    const CMatrix target = 4.0 * (CMatrix::Identity(4, 4) + linalg::tensor_product(sx, sx).matrix());
    const double square = (x * x - target).cwiseAbs().maxCoeff();
    const double vs_identity = (x * x - 4.0 * CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff();
    const bool ok = spectrum <= 1e-12 && chi <= 1e-12 && square <= 1e-12;
    return {ok, fmt::format("spectrum dev {:.1e}, chi residual {:.1e}, |X^2 - 4(I + sx sx)| {:.1e}, "
                            "|X^2 - 4I| {:.1f} (tol 1e-12)",
                            spectrum, chi, square, vs_identity)};
}

Outcome slit_formula() {
    const double d = 0.1 * kPi;
    const double value = continuum::slit_expectation(d);
    const double formula = kTsirelson * std::pow(std::sin(d) / d, 2);
    const double root = continuum::violation_aperture_threshold();
    const double at_root = continuum::slit_expectation(root);
    const double ratio = std::pow(std::sin(root) / root, 2);
    const bool ok = std::abs(value - formula) <= 1e-14 && value > 2.0 && std::abs(at_root - 2.0) < 1e-10 &&
                    std::abs(ratio - 1.0 / std::numbers::sqrt2) < 1e-10 && continuum::slit_expectation(root * 0.999) > 2.0 &&
                    continuum::slit_expectation(root * 1.001) < 2.0;
    return {ok, fmt::format("slit(0.1 pi)={:.12f}, threshold {:.12f} rad ({:.3f} deg), |slit - 2|={:.1e}", value, root,
                            root * 180.0 / kPi, std::abs(at_root - 2.0))};
}

Outcome truncation_convergence() {
    std::string detail;
    double previous = 1e300;
    bool ok = true;
    double value64 = 0.0;
    for (const int m : {8, 16, 32, 64}) {
        const auto t = states::truncated_violation(TruncationLevel(m, 64), 0.1 * kPi);
        ok = ok && t.abs_error < previous;
        previous = t.abs_error;
        value64 = t.value;
        detail += fmt::format("M={} value={:.8f} err={:.3e}; ", m, t.value, t.abs_error);
    }
    ok = ok && value64 > 2.0;
    detail += "need strictly decreasing error and M=64 value > 2";
    return {ok, detail};
}

Outcome werner_suite() {
    const auto limit = continuum::werner_threshold(1e-6);
    const double expected = 1.0 - 1.0 / std::numbers::sqrt2;
    bool ok = limit.violates && std::abs(limit.eta_star - expected) <= 1e-6;

    const double d = 0.1 * kPi;
    const TruncationLevel M32(32);
    double t[3];
    const double etas[3] = {0.1, 0.4, 0.8};
    for (int k = 0; k < 3; ++k) t[k] = states::bell_trace(states::werner_density(M32, d, etas[k]), kPi / 2, kPi / 2);
    const double collinearity = std::abs((t[1] - t[0]) / (etas[1] - etas[0]) - (t[2] - t[1]) / (etas[2] - etas[1]));
    ok = ok && collinearity <= 1e-10;

    double product[3];
    int k = 0;
    for (const int m : {8, 16, 32})
        product[k++] = std::abs(states::bell_trace(states::werner_density(TruncationLevel(m), d, 1.0), kPi / 2, kPi / 2));
    ok = ok && product[1] <= product[0] + 1e-12 && product[2] <= product[1] + 1e-12 && product[2] <= 1e-12;
    return {ok, fmt::format("eta*(1e-6)={:.9f} vs {:.9f}; M=32 slopes differ by {:.1e} (tol 1e-10); "
                            "|Tr[B rho_A rho_B]| M=8,16,32: {:.1e} {:.1e} {:.1e}",
                            limit.eta_star, expected, collinearity, product[0], product[1], product[2])};
}

Outcome determinism() {
    std::string reference;
    bool ok = true;
    for (const unsigned threads : {1u, 2u, 4u, 1u, 3u}) {
        const auto config = cli::parse_config({"scan", "--M", "2", "--grid-points", "101"});
        std::ostringstream csv;
        cli::write_csv(csv, cli::execute(config, threads));
        if (reference.empty())
            reference = csv.str();
        else
            ok = ok && csv.str() == reference;
    }
    return {ok, fmt::format("scan M=2 101x101 with 1, 2, 4, 1, 3 threads: {} bytes each, identical={}",
                            reference.size(), ok ? "yes" : "no")};
}

}  // namespace

int main() {
    criterion(1, "cosine observable spectrum matches cos(k pi/(2M+2))", cosine_oracle);
    criterion(2, "violation map at M=2 and M=5 peaks at (pi/2, pi/2)", violation_scan);
    criterion(3, "Tsirelson and product-state bounds", bounds_suite);
    criterion(4, "spectra depend only on relative phases", unitary_equivalence);
    criterion(5, "continuum CHSH block spectrum, eigenvectors and square", continuum_block);
    criterion(6, "slit violation value and aperture threshold", slit_formula);
    criterion(7, "truncated violation converges to the slit value", truncation_convergence);
    criterion(8, "Werner threshold, affinity and product-state trace", werner_suite);
    criterion(9, "scan output is byte-identical across thread counts", determinism);
    std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
