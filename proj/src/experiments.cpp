#include "aluthge/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "aluthge/rng.hpp"

namespace aluthge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double cond_number(const CMatrix& s) {
    Eigen::JacobiSVD<CMatrix> svd(s);
    const double smin = svd.singularValues()(s.rows() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return svd.singularValues()(0) / smin;
}

CMatrix diag_matrix(const std::vector<Complex>& d) {
    const Eigen::Index r = static_cast<Eigen::Index>(d.size());
    CMatrix m = CMatrix::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

}  // namespace

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
    return grid;
}

OrbitSample sample_orbit(const std::vector<Complex>& d, int count, std::uint64_t seed,
                         double cond_bound) {
    if (count < 0) throw Error("sample_orbit: negative count");
    const Eigen::Index r = static_cast<Eigen::Index>(d.size());
    OrbitSample out;
    out.seed = seed;
    out.d = d;
    out.conditioning_bound = cond_bound;
    Rng rng(seed);
    const CMatrix dd = diag_matrix(d);
    for (int i = 0; i < count; ++i) {
        CMatrix z = rng.gaussian_matrix(r);
        z /= std::max(z.norm(), 1e-300);
        double c = std::pow(10.0, rng.uniform(-1.5, 0.5));
        CMatrix s;
        for (;;) {
            s = CMatrix::Identity(r, r) + c * z;
            if (cond_number(s) <= cond_bound) break;
            c *= 0.5;
        }
        out.matrices.push_back(s * dd * s.inverse());
    }
    return out;
}

Section44Report reproduce_section44() {
    Section44Report report;
    CMatrix t(2, 2);
    t << Complex(3, 0), Complex(0, 0), Complex(-2, 0), Complex(1, 0);

    CMatrix ref03(2, 2), ref07(2, 2);
    ref03 << 2.2273, 0.97380, 0.97380, 1.7726;
    ref07 << 1.37162, -0.77790, -0.77790, 2.62838;

    const StopPolicy policy = StopPolicy::defaults_for(t);
    const std::vector<std::pair<double, CMatrix>> targets = {{0.3, ref03}, {0.7, ref07}};

    std::vector<CMatrix> limits;
    for (const auto& [lambda, ref] : targets) {
        const auto start = std::chrono::steady_clock::now();
        const LimitResult lr = limit(t, lambda, policy);
        const auto stop = std::chrono::steady_clock::now();

        Section44Report::Entry e;
        e.lambda = lambda;
        e.computed = lr.matrix;
        e.reference = ref;
        e.max_abs_dev = (lr.matrix - ref).cwiseAbs().maxCoeff();
        e.n_steps = lr.trace.n_steps;
        e.runtime_seconds = std::chrono::duration<double>(stop - start).count();
        e.normality_defect = normality_defect(lr.matrix);
        e.hermitian = (lr.matrix - lr.matrix.adjoint()).norm() <= 1e-8;
        CMatrix expected_spec(2, 2);
        expected_spec << 3, 0, 0, 1;
        e.eigenvalues_31 = spectra_match(lr.matrix, expected_spec, 1e-6);
        report.entries.push_back(std::move(e));
        limits.push_back(lr.matrix);
    }
    report.dispersion = (limits[0] - limits[1]).norm();
    report.pass = true;
    for (const auto& e : report.entries)
        report.pass = report.pass && e.max_abs_dev <= report.atol && e.hermitian &&
                      e.eigenvalues_31;
    return report;
}

ReflectionReport reflection_oracle(std::uint64_t seed, int r, double lambda, int n_max) {
    require_lambda(lambda);
    if (r < 2) throw Error("reflection_oracle: need r >= 2");
    if (n_max < 1) throw Error("reflection_oracle: need n_max >= 1");

    ReflectionReport report;
    report.seed = seed;
    report.r = r;
    report.lambda = lambda;
    report.n_max = n_max;

    // E = S diag(I_p, -I_q) S^{-1}: an involution, generally non-normal.
    std::vector<Complex> d(static_cast<std::size_t>(r));
    const int p = r / 2;
    for (int i = 0; i < r; ++i) d[static_cast<std::size_t>(i)] = (i < p) ? 1.0 : -1.0;
    const OrbitSample sample = sample_orbit(d, 1, seed);
    const CMatrix e = sample.matrices.front();
    report.scale = e.norm();
    if (normality_defect(e) <= 1e-8 * report.scale * report.scale)
        throw ConstructionFailed("reflection_oracle: sampled involution is numerically normal");

    const PolarFactors pf = polar_decompose(e);
    const CMatrix& rmat = pf.u;
    const CMatrix& lmat = pf.p;
    const CMatrix id = CMatrix::Identity(r, r);
    report.reflection_dev = (rmat * rmat - id).norm();
    report.intertwine_dev = (rmat * lmat - lmat.inverse() * rmat).norm();

    CMatrix cur = e;
    for (int n = 1; n <= n_max; ++n) {
        cur = transform(cur, lambda);
        const CMatrix closed = rmat * psd_power(lmat, std::pow(1.0 - 2.0 * lambda, n));
        report.max_closed_form_dev = std::max(report.max_closed_form_dev, (cur - closed).norm());
        if (n == 1) report.first_step_dev_from_r = (cur - rmat).norm();
    }

    const LimitResult lr = limit(e, lambda, StopPolicy::defaults_for(e));
    report.limit_dev_from_r = (lr.matrix - rmat).norm();
    report.limit_steps = lr.trace.n_steps;

    report.pass = report.max_closed_form_dev <= 1e-9 * report.scale &&
                  report.limit_dev_from_r <= 1e-8 * report.scale;
    if (lambda == 0.5) report.pass = report.pass && report.first_step_dev_from_r <= 1e-10;
    return report;
}

PermutationReport permutation_example(double a, double b, double c,
                                      std::vector<double> lambdas) {
    if (!(a > 0 && b > 0 && c > 0) || std::abs(a * b * c - 1.0) > 1e-12)
        throw Error("permutation_example: need positive a, b, c with abc = 1");
    PermutationReport report;
    report.a = a;
    report.b = b;
    report.c = c;
    report.lambdas = lambdas.empty() ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}
                                     : std::move(lambdas);

    CMatrix perm = CMatrix::Zero(3, 3);
    perm(0, 2) = 1;
    perm(1, 0) = 1;
    perm(2, 1) = 1;
    CMatrix t = perm * diag_matrix({a, b, c});

    const StopPolicy policy = StopPolicy::defaults_for(t);
    std::vector<CMatrix> limits;
    for (double lambda : report.lambdas) {
        const IterationTrace trace = iterate(t, lambda, policy);
        for (const CMatrix& m : trace.iterates) {
            const CMatrix dn = perm.transpose() * m;  // P^{-1} M: should be diagonal
            CMatrix off = dn;
            off.diagonal().setZero();
            report.max_offdiag = std::max(report.max_offdiag, off.cwiseAbs().maxCoeff());
            report.max_det_dev =
                std::max(report.max_det_dev, std::abs(dn.determinant() - Complex(1, 0)));
        }
        const CMatrix& lim = trace.final_iterate();
        report.max_limit_dev = std::max(report.max_limit_dev,
                                        (lim - perm).cwiseAbs().maxCoeff());
        limits.push_back(lim);
    }
    for (std::size_t i = 0; i < limits.size(); ++i)
        for (std::size_t j = i + 1; j < limits.size(); ++j)
            report.dispersion = std::max(report.dispersion, (limits[i] - limits[j]).norm());

    report.pass = report.max_limit_dev <= 1e-8 && report.max_det_dev <= 1e-10 &&
                  report.dispersion <= 1e-7;
    return report;
}

namespace {

// Unitary reduction of a two-eigenvalue orbit element to its 2x2 blocks:
// in an orthonormal basis adapted to ker(T - d1 I), T is [[d1 I, B],[0, d2 I]];
// the singular values of B determine the blocks. Returns the largest
// entrywise deviation across the chain of unitary reductions.
double block_reduction_dev(const CMatrix& t, Complex d1, Complex d2, int n, int k) {
    const Eigen::Index r = t.rows();
    const CMatrix shifted = t - d1 * CMatrix::Identity(r, r);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    // kernel = right singular vectors of the n smallest singular values
    CMatrix w0(r, r);
    w0.leftCols(n) = svd.matrixV().rightCols(n);
    w0.rightCols(r - n) = svd.matrixV().leftCols(r - n);
    const CMatrix tp = w0.adjoint() * t * w0;

    double dev = tp.bottomLeftCorner(k, n).cwiseAbs().maxCoeff();
    dev = std::max(dev, (tp.topLeftCorner(n, n) - d1 * CMatrix::Identity(n, n))
                            .cwiseAbs()
                            .maxCoeff());
    dev = std::max(dev, (tp.bottomRightCorner(k, k) - d2 * CMatrix::Identity(k, k))
                            .cwiseAbs()
                            .maxCoeff());

    const CMatrix b = tp.topRightCorner(n, k);
    Eigen::JacobiSVD<CMatrix> bsvd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CMatrix w1 = CMatrix::Zero(r, r);
    w1.topLeftCorner(n, n) = bsvd.matrixU();
    w1.bottomRightCorner(k, k) = bsvd.matrixV();
    const CMatrix m0 = w1.adjoint() * tp * w1;

    // Expected: d1 on the first diagonal block, d2 on the second, singular
    // values of B on the (i, n+i) positions, zero elsewhere.
    CMatrix expected = CMatrix::Zero(r, r);
    expected.topLeftCorner(n, n) = d1 * CMatrix::Identity(n, n);
    expected.bottomRightCorner(k, k) = d2 * CMatrix::Identity(k, k);
    for (int i = 0; i < std::min(n, k); ++i)
        expected(i, n + i) = bsvd.singularValues()(i);
    return std::max(dev, (m0 - expected).cwiseAbs().maxCoeff());
}

}  // namespace

ConstancyReport two_eigenvalue_constancy(Complex d1, Complex d2, int n, int k, int samples,
                                         std::uint64_t seed, double cond_bound) {
    if (std::abs(std::abs(d1) - std::abs(d2)) > 1e-12 * std::max(std::abs(d1), std::abs(d2)))
        throw Error("two_eigenvalue_constancy: |d1| must equal |d2|");
    if (std::abs(d1 - d2) <= 1e-12 * std::abs(d1))
        throw Error("two_eigenvalue_constancy: d1 and d2 must differ");
    if (n < 1 || k < 1) throw Error("two_eigenvalue_constancy: need n, k >= 1");

    ConstancyReport report;
    report.d1 = d1;
    report.d2 = d2;
    report.n = n;
    report.k = k;
    report.samples = samples;
    report.seed = seed;

    std::vector<Complex> d;
    for (int i = 0; i < n; ++i) d.push_back(d1);
    for (int i = 0; i < k; ++i) d.push_back(d2);
    const OrbitSample orbit = sample_orbit(d, samples, seed, cond_bound);
    const std::vector<double> grid = default_lambda_grid();

    for (const CMatrix& t : orbit.matrices) {
        const LambdaScan scan = lambda_scan(t, grid, StopPolicy::defaults_for(t));
        for (bool ok : scan.converged) report.all_converged = report.all_converged && ok;
        report.dispersions.push_back(scan.dispersion);
        report.max_dispersion = std::max(report.max_dispersion, scan.dispersion);
        report.max_block_dev =
            std::max(report.max_block_dev, block_reduction_dev(t, d1, d2, n, k));
    }
    report.pass = report.all_converged && report.max_dispersion <= 1e-6 &&
                  report.max_block_dev <= 1e-8;
    return report;
}

WitnessReport nonconstancy_witness(const std::vector<Complex>& d, std::uint64_t seed,
                                   double threshold, int max_samples, double cond_bound) {
    WitnessReport report;
    report.d = d;
    report.seed = seed;
    report.threshold = threshold;

    const OrbitSample orbit = sample_orbit(d, max_samples, seed, cond_bound);
    const std::vector<double> grid = {0.3, 0.7};
    for (int i = 0; i < max_samples; ++i) {
        const CMatrix& t = orbit.matrices[static_cast<std::size_t>(i)];
        const LambdaScan scan = lambda_scan(t, grid, StopPolicy::defaults_for(t));
        report.samples_tried = i + 1;
        report.dispersions.push_back(scan.dispersion);
        if (scan.dispersion > threshold) {
            report.found = true;
            report.witness_index = i;
            report.witness = t;
            report.witness_dispersion = scan.dispersion;
            break;
        }
    }
    return report;
}

ConjectureReport conjecture_probe(const std::vector<Complex>& d, int samples,
                                  std::uint64_t seed, double cond_bound) {
    ConjectureReport report;
    report.d = d;
    report.samples = samples;
    report.seed = seed;

    double max_mod = 0.0, min_mod = std::numeric_limits<double>::infinity();
    for (const Complex& z : d) {
        max_mod = std::max(max_mod, std::abs(z));
        min_mod = std::min(min_mod, std::abs(z));
    }
    report.all_moduli_equal = (max_mod - min_mod) <= 1e-10 * max_mod;
    int distinct = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bool is_new = true;
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(d[i] - d[j]) <= 1e-10 * max_mod) is_new = false;
        if (is_new) ++distinct;
    }
    report.distinct_eigenvalues = distinct;

    const OrbitSample orbit = sample_orbit(d, samples, seed, cond_bound);
    const std::vector<double> grid = default_lambda_grid();
    for (int i = 0; i < samples; ++i) {
        const CMatrix& t = orbit.matrices[static_cast<std::size_t>(i)];
        const LambdaScan scan = lambda_scan(t, grid, StopPolicy::defaults_for(t));
        report.dispersions.push_back(scan.dispersion);
        if (scan.dispersion > report.max_dispersion) {
            report.max_dispersion = scan.dispersion;
            report.argmax_index = i;
            report.argmax_matrix = t;
        }
    }
    return report;
}

RateFitResult rate_fit(const IterationTrace& trace, const CMatrix& n_limit) {
    if (trace.stop_reason != StopReason::Converged)
        throw InsufficientData("rate_fit: trace did not converge");
    if (trace.iterates.size() < 5)
        throw InsufficientData("rate_fit: need at least 5 iterates, got " +
                               std::to_string(trace.iterates.size()));

    const double floor = 100.0 * kEps * std::max(n_limit.norm(), 1e-300);
    std::vector<std::pair<int, double>> points;  // (n, log dist)
    for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
        const double dist = (trace.iterates[i] - n_limit).norm();
        if (dist > floor) points.emplace_back(static_cast<int>(i), std::log(dist));
    }
    if (points.size() < 4) throw InsufficientData("rate_fit: too few points above noise floor");
    const std::size_t start = points.size() / 2;
    const std::size_t count = points.size() - start;
    if (count < 2) throw InsufficientData("rate_fit: tail too short");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = start; i < points.size(); ++i) {
        const double x = points[i].first;
        const double y = points[i].second;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double nn = static_cast<double>(count);
    const double denom = nn * sxx - sx * sx;
    if (denom <= 0) throw InsufficientData("rate_fit: degenerate abscissae");
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;

    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / nn;
    for (std::size_t i = start; i < points.size(); ++i) {
        const double y = points[i].second;
        const double fit = intercept + slope * points[i].first;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    RateFitResult out;
    out.rho_hat = std::exp(slope);
    out.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    out.n_points = static_cast<int>(count);
    return out;
}

RatesReport rates_experiment(int n_cases, std::uint64_t seed) {
    RatesReport report;
    report.seed = seed;
    Rng rng(seed);
    const double moduli_pool[3] = {0.6, 1.0, 1.7};

    for (int c = 0; c < n_cases; ++c) {
        const int r = 2 + (c % 2);
        std::vector<Complex> d;
        for (int i = 0; i < r; ++i) {
            const double mod = moduli_pool[static_cast<int>(rng.uniform(0.0, 3.0))];
            double phase = rng.uniform(0.0, 2.0 * M_PI);
            d.push_back(std::polar(mod, phase));
        }
        // keep equal-modulus pairs at a workable phase separation
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < i; ++j) {
                const std::size_t si = static_cast<std::size_t>(i);
                const std::size_t sj = static_cast<std::size_t>(j);
                if (std::abs(std::abs(d[si]) - std::abs(d[sj])) < 1e-12 &&
                    std::abs(d[si] - d[sj]) < 0.4 * std::abs(d[si]))
                    d[si] = std::polar(std::abs(d[si]), std::arg(d[si]) + 0.7);
            }
        const double lambda = rng.uniform(0.15, 0.85);

        const DiagonalPoint point(d);
        RatesReport::Case entry;
        entry.d = d;
        entry.lambda = lambda;
        entry.k = k_constant(point, lambda);
        entry.transverse_norm = q_compressed_derivative_norm(point, lambda);
        entry.norm_ok = entry.transverse_norm <= entry.k + 1e-10;

        CMatrix a = rng.gaussian_matrix(r);
        a /= std::max(a.norm(), 1e-300);
        const CMatrix dd = point.matrix();
        const CMatrix e_plus = (1e-3 * a).exp();
        const CMatrix e_minus = (-1e-3 * a).exp();
        const CMatrix t = e_plus * dd * e_minus;

        const IterationTrace trace = iterate(t, lambda, StopPolicy::defaults_for(t));
        entry.n_steps = trace.n_steps;
        if (trace.stop_reason == StopReason::Converged) {
            try {
                const RateFitResult fit = rate_fit(trace, trace.final_iterate());
                entry.rho_hat = fit.rho_hat;
                entry.rate_ok = fit.rho_hat <= entry.k + 0.05;
            } catch (const InsufficientData&) {
                entry.rho_hat = std::numeric_limits<double>::quiet_NaN();
                entry.rate_ok = true;  // converged too fast to fit a rate
            }
        } else {
            entry.rho_hat = std::numeric_limits<double>::quiet_NaN();
            entry.rate_ok = false;
        }
        report.cases.push_back(std::move(entry));
    }
    report.pass = true;
    for (const auto& e : report.cases) report.pass = report.pass && e.rate_ok && e.norm_ok;
    return report;
}

}  // namespace aluthge
