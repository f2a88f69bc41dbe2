#pragma once

#include <vector>

#include "aluthge/types.hpp"

namespace aluthge {

// Eigendecomposition of a Hermitian matrix: a = vectors * diag(values) * vectors^*.
struct HermitianEig {
    RVector values;   // ascending
    CMatrix vectors;  // unitary
};

// Left polar decomposition t = u * p with p = (t^* t)^{1/2} positive
// semidefinite and u a partial isometry (unitary when t is invertible).
// u is zero on ker(p); u^* u is the orthogonal projection onto range(p).
struct PolarFactors {
    CMatrix u;
    CMatrix p;
    Eigen::Index rank;  // number of singular values above dim*eps*s_max
};

// Clustered spectrum: one entry per numerically distinct eigenvalue.
struct Spectrum {
    std::vector<Complex> eigenvalues;  // cluster representatives
    std::vector<int> multiplicities;   // algebraic, summing to dim
    std::vector<double> moduli;
    std::vector<double> phases;        // in [0, 2*pi)
};

HermitianEig hermitian_eig(const CMatrix& a);

PolarFactors polar_decompose(const CMatrix& t);

// p^alpha via eigendecomposition with the kernel convention 0^alpha = 0 for
// alpha > 0, and p^0 = orthogonal projection onto range(p).
CMatrix psd_power(const CMatrix& p, double alpha);

double frobenius_inner(const CMatrix& a, const CMatrix& b);
double frobenius_norm(const CMatrix& a);

// ||t^* t - t t^*||_F; zero exactly when t is normal.
double normality_defect(const CMatrix& t);

// Coefficients of det(xI - t), ascending (c[0] + c[1] x + ... + c[r] x^r,
// c[r] = 1), by the Faddeev-LeVerrier recursion. No eigensolve involved.
std::vector<Complex> char_poly(const CMatrix& t);

// Eigenvalues merged into clusters of diameter <= tol, with summed
// multiplicities. Clusters are sorted by (Re, Im) of the representative.
Spectrum spectrum(const CMatrix& t, double tol);

// True iff for every clustered eigenvalue the numerical kernel dimension of
// t - mu*I (singular values <= tol*||t||_F) equals the algebraic multiplicity.
bool is_diagonalizable(const CMatrix& t, double tol);

// Default clustering tolerance, 1e-8 * ||t||_F.
double default_spectrum_tol(const CMatrix& t);

}  // namespace aluthge
