#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvbell/linalg.hpp"
#include "test_util.hpp"

using namespace cvbell;
using namespace cvbell::linalg;
using cvbell::test::kI;

TEST_CASE("HermitianOperator rejects non-Hermitian input and fixes round-off") {
    CMatrix m(2, 2);
    m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
    CHECK_THROWS_AS(HermitianOperator{m}, DomainError);

    CMatrix near(2, 2);
    near << Complex(1.0, 1e-15), Complex(0.5, 0.25), Complex(0.5, -0.25 + 1e-15), 2.0;
    const HermitianOperator h(near);
    CHECK(h(0, 0).imag() == 0.0);
    CHECK(h(0, 1) == std::conj(h(1, 0)));

    CHECK_THROWS_AS(HermitianOperator{CMatrix(2, 3)}, ShapeError);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(HermitianOperator{bad}, DomainError);
    CHECK_THROWS_AS(ComplexMatrix{bad}, DomainError);
}

TEST_CASE("tensor_product examples") {
    SUBCASE("identity") {
        const auto i4 = tensor_product(HermitianOperator::identity(2), HermitianOperator::identity(2));
        CHECK(i4.matrix() == CMatrix::Identity(4, 4));
    }
    SUBCASE("diagonal") {
        const auto zz = tensor_product(test::pauli_z(), test::pauli_z());
        CMatrix expected = CMatrix::Zero(4, 4);
        expected.diagonal() << 1.0, -1.0, -1.0, 1.0;
        CHECK(zz.matrix() == expected);
    }
    SUBCASE("sigma_y x sigma_y corner entry") {
        // (0,0),(1,1) -> sy(0,1) * sy(0,1) = (-i)(-i) = -1
        const auto yy = tensor_product(test::pauli_y(), test::pauli_y());
        CHECK(yy(0, 3) == Complex(-1.0, 0.0));
        CHECK(yy(3, 0) == Complex(-1.0, 0.0));
    }
    SUBCASE("left factor is the slow axis") {
        // diag(1,2) (x) sigma_x: the 2x2 blocks are 1*sx and 2*sx
        CMatrix d = CMatrix::Zero(2, 2);
        d.diagonal() << 1.0, 2.0;
        const auto p = tensor_product(HermitianOperator(d), test::pauli_x());
        CHECK(p(0, 1) == Complex(1.0, 0.0));
        CHECK(p(2, 3) == Complex(2.0, 0.0));
        CHECK(p(0, 2) == Complex(0.0, 0.0));
    }
    SUBCASE("size limit") {
        CHECK_THROWS_AS(tensor_product(HermitianOperator::identity(65), HermitianOperator::identity(64)), SizeError);
        CHECK_NOTHROW(tensor_product(HermitianOperator::identity(64), HermitianOperator::identity(64)));
        CHECK_THROWS_AS(tensor_product(HermitianOperator::identity(4), HermitianOperator::identity(4), 15), SizeError);
    }
}

TEST_CASE("hermitian_eigensystem examples") {
    SUBCASE("diagonal") {
        CMatrix d = CMatrix::Zero(3, 3);
        d.diagonal() << 3.0, 1.0, 2.0;
        const auto s = hermitian_eigensystem(HermitianOperator(d));
        CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(s.eigenvalues(2) == doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("pauli x") {
        const auto s = hermitian_eigensystem(test::pauli_x());
        CHECK(std::abs(s.eigenvalues(0) + 1.0) < 1e-15);
        CHECK(std::abs(s.eigenvalues(1) - 1.0) < 1e-15);
    }
    SUBCASE("tridiagonal Toeplitz against characteristic polynomial") {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3);
        t(0, 1) = t(1, 0) = t(1, 2) = t(2, 1) = 0.5;
        const auto roots = test::characteristic_roots(t, -1.01, 1.0);
        REQUIRE(roots.size() == 3);
        const auto s = hermitian_eigensystem(HermitianOperator(t.cast<Complex>()));
        const double closed[3] = {std::cos(3 * std::numbers::pi / 4), std::cos(2 * std::numbers::pi / 4),
                                  std::cos(std::numbers::pi / 4)};
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(roots[static_cast<std::size_t>(k)] - closed[k]) < 1e-12);
            CHECK(std::abs(s.eigenvalues(k) - closed[k]) < 1e-14);
        }
        CHECK(std::abs(closed[0] + std::sqrt(2.0) / 2) < 1e-15);
    }
}

TEST_CASE("eigensystem contract on random Hermitian matrices") {
    std::mt19937_64 rng(20261016);
    for (const Eigen::Index dim : {1, 2, 5, 17, 40, 64}) {
        CAPTURE(dim);
        const auto h = test::random_hermitian(rng, dim);
        const auto s = hermitian_eigensystem(h);
        const double norm2 = h.matrix().operatorNorm();
        for (Eigen::Index k = 0; k < dim; ++k) {
            const CVector v = s.eigenvectors.col(k);
            CHECK((h.matrix() * v - s.eigenvalues(k) * v).norm() <= 1e-12 * norm2);
            if (k > 0) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
            // phase fixing: first largest-modulus component is real, non-negative
            Eigen::Index pivot = 0;
            const double peak = v.cwiseAbs().maxCoeff();
            while (std::abs(v(pivot)) < peak * (1.0 - 1e-12)) ++pivot;
            CHECK(v(pivot).imag() == 0.0);
            CHECK(v(pivot).real() > 0.0);
        }
        const CMatrix unitary_defect = s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(dim, dim);
        CHECK(unitary_defect.cwiseAbs().maxCoeff() <= 1e-12);

        const CMatrix rebuilt =
            s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
        CHECK(test::max_abs_diff(rebuilt, h.matrix()) <= 1e-10);
        CHECK(std::abs(h.matrix().trace().real() - s.eigenvalues.sum()) <= 1e-10);
        CHECK((hermitian_eigenvalues(h) - s.eigenvalues).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, norm2));
    }
}

TEST_CASE("degenerate subspaces are compared through projectors") {
    // diag(1, 1, 2) rotated by a random unitary: the 2-dim eigenspace is only
    // defined up to a unitary mix, its projector is unique.
    std::mt19937_64 rng(7);
    const auto g = test::random_hermitian(rng, 3);
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(g.matrix()).householderQ();
    CMatrix d = CMatrix::Zero(3, 3);
    d.diagonal() << 1.0, 1.0, 2.0;
    const auto s = hermitian_eigensystem(HermitianOperator(q * d * q.adjoint()));
    const CMatrix projector = s.eigenvectors.leftCols(2) * s.eigenvectors.leftCols(2).adjoint();
    const CMatrix expected = q.leftCols(2) * q.leftCols(2).adjoint();
    CHECK(test::max_abs_diff(projector, expected) < 1e-12);
}

TEST_CASE("tensor_product spectrum is the set of pairwise products") {
    std::mt19937_64 rng(99);
    for (const auto [da, db] : {std::pair<Eigen::Index, Eigen::Index>{2, 2}, {3, 4}, {4, 4}}) {
        const auto a = test::random_hermitian(rng, da);
        const auto b = test::random_hermitian(rng, db);
        const RVector ea = hermitian_eigenvalues(a);
        const RVector eb = hermitian_eigenvalues(b);
        RVector products(da * db);
        for (Eigen::Index i = 0; i < da; ++i)
            for (Eigen::Index j = 0; j < db; ++j) products(i * db + j) = ea(i) * eb(j);
        CHECK(max_spectral_deviation(products, hermitian_eigenvalues(tensor_product(a, b))) < 1e-10);
    }
}

TEST_CASE("expectation") {
    std::mt19937_64 rng(3);
    const auto psi = test::random_unit_vector(rng, 5);
    CHECK(expectation(HermitianOperator::identity(5), psi) == doctest::Approx(1.0).epsilon(1e-14));

    CVector up(2);
    up << 1.0, 0.0;
    CHECK(expectation(test::pauli_z(), up) == 1.0);

    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(expectation(test::pauli_x(), plus) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(expectation(test::pauli_x(), CVector(CVector::Ones(2))), NormalizationError);
    CHECK_THROWS_AS(expectation(test::pauli_x(), psi), ShapeError);
}

TEST_CASE("trace_product") {
    std::mt19937_64 rng(11);
    const auto h = test::random_hermitian(rng, 6);
    const auto mixed = HermitianOperator::identity(6) * (1.0 / 6.0);
    CHECK(trace_product(h, mixed) == doctest::Approx(h.matrix().trace().real() / 6.0).epsilon(1e-13));

    CMatrix zero_proj = CMatrix::Zero(2, 2);
    zero_proj(0, 0) = 1.0;
    CHECK(trace_product(test::pauli_z(), HermitianOperator(zero_proj)) == 1.0);

    SUBCASE("spectral identity") {
        const auto s = hermitian_eigensystem(h);
        const double weights[6] = {0.1, 0.3, 0.05, 0.25, 0.2, 0.1};
        CMatrix rho = CMatrix::Zero(6, 6);
        double expected = 0.0;
        for (Eigen::Index k = 0; k < 6; ++k) {
            rho += weights[k] * s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
            expected += weights[k] * s.eigenvalues(k);
        }
        CHECK(std::abs(trace_product(h, HermitianOperator(rho)) - expected) < 1e-12);
    }
    SUBCASE("invalid densities") {
        CHECK_THROWS_AS(trace_product(h, HermitianOperator::identity(6)), InvalidDensityError);
        CMatrix negative = CMatrix::Zero(2, 2);
        negative.diagonal() << 1.5, -0.5;
        CHECK_THROWS_AS(trace_product(test::pauli_z(), HermitianOperator(negative)), InvalidDensityError);
        CHECK_THROWS_AS(trace_product(test::pauli_z(), mixed), ShapeError);
    }
}

TEST_CASE("structured tensor evaluation matches the dense product") {
    std::mt19937_64 rng(5);
    const auto a = test::random_hermitian(rng, 3);
    const auto b = test::random_hermitian(rng, 4);
    const auto ab = tensor_product(a, b);
    const auto psi = test::random_unit_vector(rng, 12);
    const Complex structured = tensor_expectation(a.matrix(), b.matrix(), psi);
    CHECK(std::abs(structured - Complex(expectation(ab, psi), 0.0)) < 1e-13);

    CMatrix rho = CMatrix::Zero(12, 12);
    for (int k = 0; k < 3; ++k) {
        const auto v = test::random_unit_vector(rng, 12);
        rho += (1.0 / 3.0) * v * v.adjoint();
    }
    const Complex trace = tensor_trace(a.matrix(), b.matrix(), rho);
    CHECK(std::abs(trace - Complex(trace_product(ab, HermitianOperator(rho)), 0.0)) < 1e-13);
    CHECK_THROWS_AS(tensor_trace(a.matrix(), b.matrix(), CMatrix::Zero(5, 5)), ShapeError);
}
