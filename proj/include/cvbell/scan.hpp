#pragma once

#include <vector>

#include "cvbell/rotor.hpp"

namespace cvbell::scan {

/// Rectangular grid of relative phases (xi_a, xi_b).
class PhaseGrid {
public:
    PhaseGrid(std::vector<double> xi_a_values, std::vector<double> xi_b_values);

    /// points x points grid, both axes evenly spaced on [0, pi] inclusive.
    static PhaseGrid uniform(int points);

    const std::vector<double>& xi_a() const { return xi_a_; }
    const std::vector<double>& xi_b() const { return xi_b_; }

private:
    std::vector<double> xi_a_;
    std::vector<double> xi_b_;
};

struct GridMaximum {
    double xi_a;
    double xi_b;
    double value;
};

struct ViolationMap {
    rotor::TruncationLevel M;
    PhaseGrid grid;
    Eigen::MatrixXd b_max;  // rows follow xi_a, columns xi_b
    GridMaximum argmax;
};

struct ConvergenceRow {
    int M;
    double b_max;
    double gap_to_tsirelson;  // 2*sqrt(2) - b_max
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool strictly_increasing;
};

struct EquivalenceReport {
    double max_spectral_deviation;
};

struct FourPhases {
    double phi_a;
    double phi_a_prime;
    double phi_b;
    double phi_b_prime;
};

/// Number of worker threads from CVBELL_THREADS, falling back to the
/// machine's hardware concurrency (at least 1).
unsigned default_thread_count();

/// Largest eigenvalue of reduced_bell_operator over every grid cell.
///
/// Cells are independent; with threads > 1 rows are dealt out to workers, but
/// every cell is written to its own slot, so the result does not depend on the
/// schedule. Ties in the argmax resolve to the lexicographically smallest
/// (xi_a, xi_b). A failing cell rethrows with its coordinates attached.
ViolationMap max_eigenvalue_surface(rotor::TruncationLevel M, const PhaseGrid& grid,
                                    unsigned threads = default_thread_count());

/// b_max at (pi/2, pi/2) for each M, ascending.
ConvergenceReport convergence_study(const std::vector<rotor::TruncationLevel>& M_list);

EquivalenceReport unitary_equivalence_check(rotor::TruncationLevel M, const FourPhases& phases);

}  // namespace cvbell::scan
