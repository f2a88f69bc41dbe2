#include "aluthge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace aluthge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double frobenius_inner(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("frobenius_inner: shapes " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
    return (b.adjoint() * a).trace().real();
}

double frobenius_norm(const CMatrix& a) {
    return a.norm();
}

double normality_defect(const CMatrix& t) {
    require_square(t, "normality_defect");
    return (t.adjoint() * t - t * t.adjoint()).norm();
}

HermitianEig hermitian_eig(const CMatrix& a) {
    require_square(a, "hermitian_eig");
    const double scale = a.norm();
    const double asym = (a - a.adjoint()).norm();
    if (asym > 1e-10 * std::max(scale, 1e-300))
        throw NotHermitian("hermitian_eig: ||a - a^*|| = " + std::to_string(asym) +
                           " exceeds 1e-10 * ||a||");
    // Symmetrize so sub-tolerance asymmetry cannot leak into the solve.
    const CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("hermitian_eig: eigensolver exceeded its sweep budget");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

PolarFactors polar_decompose(const CMatrix& t) {
    require_square(t, "polar_decompose");
    if (!all_finite(t)) throw Error("polar_decompose: non-finite entries");
    const Eigen::Index r = t.rows();
    // SVD of t itself: small singular values are accurate to eps * s_max,
    // which the rank threshold dim * eps * s_max relies on (the Gram-matrix
    // route has a sqrt(eps) * s_max noise floor instead).
    Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double s_max = s(0);
    const double thr = static_cast<double>(r) * kEps * s_max;

    const CMatrix p = svd.matrixV() * s.asDiagonal() * svd.matrixV().adjoint();

    RVector gate(r);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < r; ++i) {
        gate(i) = (s(i) > thr) ? 1.0 : 0.0;
        if (s(i) > thr) ++rank;
    }
    // t * pinv(p) in exact arithmetic; assembled from the factors directly.
    const CMatrix u = svd.matrixU() * gate.asDiagonal() * svd.matrixV().adjoint();
    return {u, p, rank};
}

CMatrix psd_power(const CMatrix& p, double alpha) {
    require_square(p, "psd_power");
    const Eigen::Index r = p.rows();
    const HermitianEig eig = hermitian_eig(p);
    const double e_max = std::max(eig.values(r - 1), 0.0);
    const double psd_tol = 1e-10 * std::max(e_max, 1e-300);
    if (eig.values(0) < -psd_tol)
        throw Error("psd_power: matrix is not positive semidefinite (min eigenvalue " +
                    std::to_string(eig.values(0)) + ")");
    const double zero_thr = static_cast<double>(r) * kEps * e_max;

    RVector w(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        const double x = std::max(eig.values(i), 0.0);
        if (x <= zero_thr) {
            if (alpha < 0.0)
                throw SingularNegativePower("psd_power: singular matrix with alpha = " +
                                            std::to_string(alpha));
            w(i) = 0.0;  // kernel convention, also for alpha == 0
        } else {
            w(i) = (alpha == 0.0) ? 1.0 : std::pow(x, alpha);
        }
    }
    return eig.vectors * w.asDiagonal() * eig.vectors.adjoint();
}

std::vector<Complex> char_poly(const CMatrix& t) {
    require_square(t, "char_poly");
    const Eigen::Index r = t.rows();
    // Faddeev-LeVerrier: M_k = t*M_{k-1} + c_{r-k+1} I, c_{r-k} = -tr(t*M_k)/k.
    std::vector<Complex> c(static_cast<std::size_t>(r) + 1);
    c[static_cast<std::size_t>(r)] = Complex(1.0, 0.0);
    CMatrix m = CMatrix::Zero(r, r);
    for (Eigen::Index k = 1; k <= r; ++k) {
        m = t * m + c[static_cast<std::size_t>(r - k + 1)] * CMatrix::Identity(r, r);
        c[static_cast<std::size_t>(r - k)] = -(t * m).trace() / static_cast<double>(k);
    }
    return c;
}

double default_spectrum_tol(const CMatrix& t) {
    return 1e-8 * std::max(t.norm(), 1e-300);
}

namespace {

struct Cluster {
    Complex rep;
    int mult;
};

std::vector<Cluster> cluster_eigenvalues(const CVector& raw, double tol) {
    const Eigen::Index n = raw.size();
    // Union-find over pairwise distance <= tol (single linkage).
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(raw(i) - raw(j)) <= tol) {
                const int a = find(static_cast<int>(i));
                const int b = find(static_cast<int>(j));
                if (a != b) parent[static_cast<std::size_t>(a)] = b;
            }
    std::vector<Cluster> clusters;
    for (Eigen::Index root = 0; root < n; ++root) {
        if (find(static_cast<int>(root)) != static_cast<int>(root)) continue;
        Complex sum = 0;
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (find(static_cast<int>(i)) == static_cast<int>(root)) {
                sum += raw(i);
                ++count;
            }
        clusters.push_back({sum / static_cast<double>(count), count});
    }
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.rep.real() != b.rep.real()) return a.rep.real() < b.rep.real();
        return a.rep.imag() < b.rep.imag();
    });
    return clusters;
}

CVector raw_eigenvalues(const CMatrix& t) {
    Eigen::ComplexEigenSolver<CMatrix> solver(t, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("spectrum: eigensolver did not converge");
    return solver.eigenvalues();
}

}  // namespace

Spectrum spectrum(const CMatrix& t, double tol) {
    require_square(t, "spectrum");
    if (!(tol > 0.0)) throw Error("spectrum: tol must be positive");
    const auto clusters = cluster_eigenvalues(raw_eigenvalues(t), tol);
    Spectrum s;
    for (const auto& c : clusters) {
        s.eigenvalues.push_back(c.rep);
        s.multiplicities.push_back(c.mult);
        s.moduli.push_back(std::abs(c.rep));
        double phase = std::arg(c.rep);
        if (phase < 0) phase += 2.0 * M_PI;
        s.phases.push_back(phase);
    }
    return s;
}

bool is_diagonalizable(const CMatrix& t, double tol) {
    require_square(t, "is_diagonalizable");
    const Eigen::Index r = t.rows();
    const Spectrum s = spectrum(t, tol);
    const double kernel_thr = tol * std::max(t.norm(), 1e-300);
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        const CMatrix shifted = t - s.eigenvalues[k] * CMatrix::Identity(r, r);
        Eigen::JacobiSVD<CMatrix> svd(shifted);
        int geometric = 0;
        for (Eigen::Index i = 0; i < r; ++i)
            if (svd.singularValues()(i) <= kernel_thr) ++geometric;
        if (geometric != s.multiplicities[k]) return false;
    }
    return true;
}

}  // namespace aluthge
