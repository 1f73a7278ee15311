#include "cvbell/scan.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace cvbell::scan {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2) throw DomainError(std::string("PhaseGrid: axis ") + name + " needs at least 2 points");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i])) throw DomainError(std::string("PhaseGrid: non-finite value on axis ") + name);
        if (i > 0 && !(axis[i] > axis[i - 1]))
            throw DomainError(std::string("PhaseGrid: axis ") + name + " is not strictly increasing");
    }
}

double top_eigenvalue(rotor::TruncationLevel M, double xi_a, double xi_b) {
    const RVector spectrum = linalg::hermitian_eigenvalues(rotor::reduced_bell_operator(M, xi_a, xi_b));
    return spectrum(spectrum.size() - 1);
}

}  // namespace

PhaseGrid::PhaseGrid(std::vector<double> xi_a_values, std::vector<double> xi_b_values)
    : xi_a_(std::move(xi_a_values)), xi_b_(std::move(xi_b_values)) {
    check_axis(xi_a_, "xi_a");
    check_axis(xi_b_, "xi_b");
}

PhaseGrid PhaseGrid::uniform(int points) {
    if (points < 2) throw DomainError("PhaseGrid: grid needs at least 2 points per axis");
    std::vector<double> axis(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) axis[static_cast<std::size_t>(i)] = std::numbers::pi * i / (points - 1);
    return PhaseGrid(axis, axis);
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("CVBELL_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ViolationMap max_eigenvalue_surface(rotor::TruncationLevel M, const PhaseGrid& grid, unsigned threads) {
    const auto& xa = grid.xi_a();
    const auto& xb = grid.xi_b();
    const auto rows = static_cast<Eigen::Index>(xa.size());
    const auto cols = static_cast<Eigen::Index>(xb.size());
    Eigen::MatrixXd surface(rows, cols);

    std::mutex failure_mutex;
    std::exception_ptr failure;
    Eigen::Index failed_row = -1;
    Eigen::Index failed_col = -1;

    const auto worker = [&](unsigned first, unsigned stride) {
        for (Eigen::Index i = first; i < rows; i += stride)
            for (Eigen::Index j = 0; j < cols; ++j) {
                try {
                    surface(i, j) = top_eigenvalue(M, xa[static_cast<std::size_t>(i)], xb[static_cast<std::size_t>(j)]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    // keep the first failing cell in grid order
                    if (!failure || i < failed_row || (i == failed_row && j < failed_col)) {
                        failure = std::current_exception();
                        failed_row = i;
                        failed_col = j;
                    }
                    return;
                }
            }
    };

    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows)));
    if (n == 1) {
        worker(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker, t, n);
    }

    if (failure) {
        const auto where = " at cell (xi_a=" + std::to_string(xa[static_cast<std::size_t>(failed_row)]) +
                           ", xi_b=" + std::to_string(xb[static_cast<std::size_t>(failed_col)]) + ")";
        try {
            std::rethrow_exception(failure);
        } catch (const NumericalError& e) {
            throw NumericalError(e.what() + where, e.dim(), e.condition());
        } catch (const std::exception& e) {
            throw Error(e.what() + where);
        }
    }

    GridMaximum best{xa[0], xb[0], surface(0, 0)};
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (surface(i, j) > best.value)
                best = {xa[static_cast<std::size_t>(i)], xb[static_cast<std::size_t>(j)], surface(i, j)};

    return ViolationMap{M, grid, std::move(surface), best};
}

ConvergenceReport convergence_study(const std::vector<rotor::TruncationLevel>& M_list) {
    if (M_list.empty()) throw DomainError("convergence_study: M list is empty");
    for (std::size_t i = 1; i < M_list.size(); ++i)
        if (M_list[i].value() <= M_list[i - 1].value())
            throw DomainError("convergence_study: M list must be strictly ascending");

    constexpr double kHalfPi = std::numbers::pi / 2.0;
    const double tsirelson = 2.0 * std::numbers::sqrt2;
    ConvergenceReport report{{}, true};
    for (const auto M : M_list) {
        const double value = top_eigenvalue(M, kHalfPi, kHalfPi);
        if (!report.rows.empty() && !(value > report.rows.back().b_max)) report.strictly_increasing = false;
        report.rows.push_back({M.value(), value, tsirelson - value});
    }
    return report;
}

EquivalenceReport unitary_equivalence_check(rotor::TruncationLevel M, const FourPhases& phases) {
    const auto full = rotor::bell_operator(M, phases.phi_a, phases.phi_a_prime, phases.phi_b, phases.phi_b_prime);
    const auto reduced =
        rotor::reduced_bell_operator(M, phases.phi_a_prime - phases.phi_a, phases.phi_b_prime - phases.phi_b);
    return {linalg::max_spectral_deviation(linalg::hermitian_eigenvalues(full), linalg::hermitian_eigenvalues(reduced))};
}

}  // namespace cvbell::scan
