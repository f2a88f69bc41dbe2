#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aluthge/linalg.hpp"
#include "test_support.hpp"

using namespace aluthge;
using namespace aluthge::testing;

TEST_CASE("hermitian_eig on diagonal and identity") {
    const auto eig = hermitian_eig(diag({3.0, 1.0}));
    CHECK(eig.values(0) == doctest::Approx(1.0));
    CHECK(eig.values(1) == doctest::Approx(3.0));
    // eigenvectors a permutation of I
    CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(eig.vectors(0, 1)) == doctest::Approx(1.0));

    const auto id = hermitian_eig(CMatrix::Identity(4, 4));
    for (int i = 0; i < 4; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
    CHECK((id.vectors - CMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("hermitian_eig 2x2 hand oracle") {
    // roots of x^2 - 4x + 3
    const auto eig = hermitian_eig(mat2(2, 1, 1, 2));
    CHECK(eig.values(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.values(1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    CHECK_THROWS_AS(hermitian_eig(mat2(0, 1, 0, 0)), NotHermitian);
}

TEST_CASE("hermitian_eig reconstruction and unitarity residuals") {
    Rng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const int r = 2 + trial % 5;
        CMatrix z = rng.gaussian_matrix(r);
        const CMatrix h = 0.5 * (z + z.adjoint());
        const auto eig = hermitian_eig(h);
        const double scale = std::max(h.norm(), 1.0);
        CHECK((eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint() - h).norm() <=
              1e-10 * scale);
        CHECK((eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(r, r)).norm() <= 1e-10);
        for (int i = 0; i + 1 < r; ++i) CHECK(eig.values(i) <= eig.values(i + 1));
    }
}

TEST_CASE("polar of unitary and of positive diagonal") {
    Rng rng(7);
    const CMatrix u = rng.unitary(3);
    const auto pf = polar_decompose(u);
    CHECK((pf.u - u).norm() < 1e-12);
    CHECK((pf.p - CMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK(pf.rank == 3);

    const auto pd = polar_decompose(diag({3.0, 1.0}));
    CHECK((pd.u - CMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((pd.p - diag({3.0, 1.0})).norm() < 1e-12);
}

TEST_CASE("polar of the section-4.4 matrix") {
    const CMatrix t = mat2(3, 0, -2, 1);
    const auto pf = polar_decompose(t);
    const CMatrix tsq = t.adjoint() * t;
    CHECK((tsq - mat2(13, -2, -2, 1)).norm() < 1e-12);
    CHECK((pf.p * pf.p - tsq).norm() < 1e-10);
    CHECK((pf.u * pf.p - t).norm() < 1e-12);
    CHECK((pf.u.adjoint() * pf.u - CMatrix::Identity(2, 2)).norm() < 1e-12);  // invertible
}

TEST_CASE("polar of a singular matrix keeps the kernel convention") {
    const CMatrix t = mat2(0, 1, 0, 0);
    const auto pf = polar_decompose(t);
    CHECK(pf.rank == 1);
    CHECK((pf.p - diag({0.0, 1.0})).norm() < 1e-14);
    CHECK((pf.u * pf.p - t).norm() < 1e-14);
    // u annihilates ker(p) = span(e1)
    CVector e1(2);
    e1 << 1.0, 0.0;
    CHECK((pf.u * e1).norm() < 1e-14);
    // u^* u is the orthogonal projection onto range(p) = span(e2)
    CHECK((pf.u.adjoint() * pf.u - diag({0.0, 1.0})).norm() < 1e-12);
}

TEST_CASE("polar reconstruction over seeded matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const int r = 2 + trial % 5;
        const CMatrix t = rng.gaussian_matrix(r);
        const auto pf = polar_decompose(t);
        CHECK((pf.u * pf.p - t).norm() <= 1e-11 * std::max(1.0, t.norm()));
        const double min_eig = hermitian_eig(pf.p).values(0);
        CHECK(min_eig >= -1e-12 * t.norm());
    }
}

TEST_CASE("psd_power on diagonals and the kernel convention") {
    CHECK((psd_power(diag({4.0, 9.0}), 0.5) - diag({2.0, 3.0})).norm() < 1e-12);
    CHECK((psd_power(CMatrix::Identity(3, 3), -0.7) - CMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((psd_power(diag({4.0, 0.0}), 0.5) - diag({2.0, 0.0})).norm() < 1e-12);
    // p^0 is the range projection, p^1 = p
    CHECK((psd_power(diag({4.0, 0.0}), 0.0) - diag({1.0, 0.0})).norm() < 1e-12);
    const CMatrix p = mat2(2, Complex(0, 1), Complex(0, -1), 2);
    CHECK((psd_power(p, 1.0) - p).norm() < 1e-12 * p.norm());
    CHECK_THROWS_AS(psd_power(diag({4.0, 0.0}), -0.5), SingularNegativePower);
}

TEST_CASE("psd_power group law") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const int r = 2 + trial % 4;
        CMatrix z = rng.gaussian_matrix(r);
        const CMatrix p = z.adjoint() * z + 0.5 * CMatrix::Identity(r, r);
        const double alpha = rng.uniform(-1.0, 1.0);
        const double beta = rng.uniform(-1.0, 1.0);
        const CMatrix lhs = psd_power(p, alpha) * psd_power(p, beta);
        const CMatrix rhs = psd_power(p, alpha + beta);
        CHECK((lhs - rhs).norm() <= 1e-10 * std::pow(p.norm(), alpha + beta) + 1e-10);
    }
}

TEST_CASE("frobenius inner product and norm") {
    CHECK(frobenius_inner(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) ==
          doctest::Approx(2.0));
    CHECK(frobenius_norm(mat2(3, 0, -2, 1)) == doctest::Approx(std::sqrt(14.0)));
    CHECK(frobenius_norm(CMatrix::Identity(5, 5)) == doctest::Approx(std::sqrt(5.0)));
    // inner(A, iA) = 0 for real A
    const CMatrix a = mat2(1, 2, -3, 0.5);
    CHECK(frobenius_inner(a, Complex(0, 1) * a) == doctest::Approx(0.0));
    CHECK_THROWS_AS(frobenius_inner(a, CMatrix::Identity(3, 3)), DimensionMismatch);
}

TEST_CASE("normality defect") {
    const CMatrix d = diag({2.0, Complex(0, 3), -1.0});
    CHECK(normality_defect(d) <= 1e-14 * d.norm() * d.norm());
    Rng rng(3);
    CHECK(normality_defect(rng.unitary(4)) < 1e-13);
    CHECK(normality_defect(mat2(0, 1, 0, 0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("char_poly matches hand values") {
    const auto c1 = char_poly(diag({3.0, 1.0}));
    REQUIRE(c1.size() == 3);
    CHECK(std::abs(c1[0] - Complex(3, 0)) < 1e-12);
    CHECK(std::abs(c1[1] - Complex(-4, 0)) < 1e-12);
    CHECK(std::abs(c1[2] - Complex(1, 0)) < 1e-12);

    const auto c2 = char_poly(mat2(3, 0, -2, 1));  // triangular, same diagonal
    CHECK(std::abs(c2[0] - Complex(3, 0)) < 1e-12);
    CHECK(std::abs(c2[1] - Complex(-4, 0)) < 1e-12);

    const auto c3 = char_poly(CMatrix::Identity(3, 3));  // (x-1)^3
    CHECK(std::abs(c3[0] - Complex(-1, 0)) < 1e-12);
    CHECK(std::abs(c3[1] - Complex(3, 0)) < 1e-12);
    CHECK(std::abs(c3[2] - Complex(-3, 0)) < 1e-12);
    CHECK(std::abs(c3[3] - Complex(1, 0)) < 1e-12);
}

TEST_CASE("char_poly agrees with the monic polynomial over the spectrum") {
    Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        const int r = 2 + trial % 4;
        const CMatrix t = random_diagonalizable(rng, r);
        const auto coeffs = char_poly(t);
        const Spectrum s = spectrum(t, default_spectrum_tol(t));
        // expand prod (x - mu_i)
        std::vector<Complex> poly = {Complex(1, 0)};
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            for (int m = 0; m < s.multiplicities[i]; ++m) {
                std::vector<Complex> next(poly.size() + 1, Complex(0, 0));
                for (std::size_t k = 0; k < poly.size(); ++k) {
                    next[k + 1] += poly[k];
                    next[k] -= poly[k] * s.eigenvalues[i];
                }
                poly = std::move(next);
            }
        }
        // poly is ascending after the loop above (index = power)
        REQUIRE(poly.size() == coeffs.size());
        for (std::size_t k = 0; k < poly.size(); ++k) {
            CHECK(std::abs(poly[k] - coeffs[k]) <= 1e-7 * (1.0 + std::abs(coeffs[k])));
        }
    }
}

TEST_CASE("spectrum and diagonalizability") {
    const Spectrum s = spectrum(mat2(3, 0, -2, 1), 1e-8);
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(std::abs(s.eigenvalues[0] - Complex(1, 0)) < 1e-10);
    CHECK(std::abs(s.eigenvalues[1] - Complex(3, 0)) < 1e-10);
    CHECK(is_diagonalizable(mat2(3, 0, -2, 1), 1e-8));

    const Spectrum j = spectrum(mat2(0, 1, 0, 0), 1e-8);
    REQUIRE(j.eigenvalues.size() == 1);
    CHECK(j.multiplicities[0] == 2);
    CHECK_FALSE(is_diagonalizable(mat2(0, 1, 0, 0), 1e-8));

    Rng rng(11);
    const CMatrix u = rng.unitary(4);
    const CMatrix n = u * diag({1.0, 2.0, Complex(0, 1), -3.0}) * u.adjoint();
    CHECK(is_diagonalizable(n, default_spectrum_tol(n)));
}

TEST_CASE("spectrum phases are in [0, 2pi) and reconstruct the eigenvalue") {
    const Spectrum s = spectrum(diag({Complex(0, -2), 1.0}), 1e-8);
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        CHECK(s.phases[i] >= 0.0);
        CHECK(s.phases[i] < 2.0 * M_PI);
        const Complex rebuilt = std::polar(s.moduli[i], s.phases[i]);
        CHECK(std::abs(rebuilt - s.eigenvalues[i]) <= 1e-12 * std::max(1.0, s.moduli[i]));
    }
}
