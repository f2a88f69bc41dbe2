#include "aluthge/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aluthge/parallel.hpp"

namespace aluthge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInvertibleCutoff = 1e-8;  // sigma_min / sigma_max above this: similarity path

}  // namespace

StopPolicy StopPolicy::defaults_for(const CMatrix& t) {
    const double scale = std::max(t.norm(), 1e-300);
    return {1e-11 * scale, 1e-9 * scale, 20000};
}

void StopPolicy::validate() const {
    if (!(step_tol > 0.0) || !(normality_tol > 0.0) || max_iters < 1)
        throw Error("StopPolicy: tolerances must be positive and max_iters >= 1");
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Converged: return "converged";
        case StopReason::MaxIters: return "max_iters";
        case StopReason::NonFinite: return "non_finite";
    }
    return "unknown";
}

CMatrix transform(const CMatrix& t, double lambda) {
    require_lambda(lambda);
    require_square(t, "transform");
    if (!all_finite(t)) throw Error("transform: non-finite entries");
    const Eigen::Index r = t.rows();

    Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double s_max = s(0);
    if (s_max == 0.0) return CMatrix::Zero(r, r);
    const CMatrix& v = svd.matrixV();
    const double rank_thr = static_cast<double>(r) * kEps * s_max;

    // Numerically-zero singular values stay zero under every power, matching
    // the kernel convention of psd_power.
    auto power = [&](double alpha) -> CMatrix {
        RVector w(r);
        for (Eigen::Index i = 0; i < r; ++i)
            w(i) = (s(i) > rank_thr) ? std::pow(s(i), alpha) : 0.0;
        return v * w.asDiagonal() * v.adjoint();
    };

    if (s(r - 1) > kInvertibleCutoff * s_max) {
        return power(lambda) * t * power(-lambda);
    }

    // Singular case: |t|^lambda * u * |t|^(1-lambda) with the canonical
    // partial isometry u zero on ker|t|.
    RVector gate(r);
    for (Eigen::Index i = 0; i < r; ++i) gate(i) = (s(i) > rank_thr) ? 1.0 : 0.0;
    const CMatrix u = svd.matrixU() * gate.asDiagonal() * v.adjoint();
    return power(lambda) * u * power(1.0 - lambda);
}

CMatrix duggal(const CMatrix& t) {
    require_square(t, "duggal");
    const PolarFactors pf = polar_decompose(t);
    return pf.p * pf.u;
}

IterationTrace iterate(const CMatrix& t, double lambda, const StopPolicy& policy) {
    require_lambda(lambda);
    require_square(t, "iterate");
    policy.validate();

    IterationTrace trace;
    trace.lambda = lambda;
    trace.iterates.push_back(t);

    if (!all_finite(t)) {
        trace.stop_reason = StopReason::NonFinite;
        return trace;
    }
    if (normality_defect(t) <= policy.normality_tol) {
        trace.stop_reason = StopReason::Converged;
        return trace;  // already a fixed point, n_steps = 0
    }

    CMatrix cur = t;
    for (int n = 1; n <= policy.max_iters; ++n) {
        CMatrix next = transform(cur, lambda);
        if (!all_finite(next)) {
            trace.stop_reason = StopReason::NonFinite;
            trace.iterates.push_back(next);
            trace.step_norms.push_back(std::numeric_limits<double>::quiet_NaN());
            trace.normality_defects.push_back(std::numeric_limits<double>::quiet_NaN());
            trace.n_steps = n;
            return trace;
        }
        const double step = (next - cur).norm();
        const double defect = normality_defect(next);
        trace.iterates.push_back(next);
        trace.step_norms.push_back(step);
        trace.normality_defects.push_back(defect);
        trace.n_steps = n;
        if (step <= policy.step_tol && defect <= policy.normality_tol) {
            trace.stop_reason = StopReason::Converged;
            return trace;
        }
        cur = std::move(next);
    }
    trace.stop_reason = StopReason::MaxIters;
    return trace;
}

bool spectra_match(const CMatrix& a, const CMatrix& b, double tol) {
    const Spectrum sa = spectrum(a, default_spectrum_tol(a));
    const Spectrum sb = spectrum(b, default_spectrum_tol(b));
    // Flatten with multiplicity, then greedily match nearest unused.
    std::vector<Complex> ea, eb;
    for (std::size_t i = 0; i < sa.eigenvalues.size(); ++i)
        for (int k = 0; k < sa.multiplicities[i]; ++k) ea.push_back(sa.eigenvalues[i]);
    for (std::size_t i = 0; i < sb.eigenvalues.size(); ++i)
        for (int k = 0; k < sb.multiplicities[i]; ++k) eb.push_back(sb.eigenvalues[i]);
    if (ea.size() != eb.size()) return false;
    std::vector<bool> used(eb.size(), false);
    for (const Complex& x : ea) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = eb.size();
        for (std::size_t j = 0; j < eb.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - eb[j]);
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        if (arg == eb.size() || best > tol) return false;
        used[arg] = true;
    }
    return true;
}

LimitResult limit(const CMatrix& t, double lambda, const StopPolicy& policy) {
    LimitResult result;
    result.input_diagonalizable = is_diagonalizable(t, default_spectrum_tol(t));
    result.trace = iterate(t, lambda, policy);
    if (result.trace.stop_reason != StopReason::Converged)
        throw DidNotConverge("limit: iteration stopped with reason '" +
                                 to_string(result.trace.stop_reason) + "' after " +
                                 std::to_string(result.trace.n_steps) + " steps",
                             result.trace);
    result.matrix = result.trace.final_iterate();
    result.normality_ok = normality_defect(result.matrix) <= policy.normality_tol;
    const double spec_tol = 1e-6 * std::max(1.0, t.norm());
    result.spectrum_ok = spectra_match(t, result.matrix, spec_tol);
    return result;
}

SplitResult split_singular(const CMatrix& t, double lambda) {
    require_lambda(lambda);
    require_square(t, "split_singular");
    if (!is_diagonalizable(t, default_spectrum_tol(t)))
        throw NotDiagonalizable("split_singular: input is not (numerically) diagonalizable");

    const Eigen::Index r = t.rows();
    const CMatrix step = transform(t, lambda);

    // After one step the kernel is orthogonal to the range, so the right
    // singular basis splits the space into ker^perp (+) ker.
    Eigen::JacobiSVD<CMatrix> svd(step, Eigen::ComputeFullV);
    const double s_max = svd.singularValues()(0);
    const double thr = static_cast<double>(r) * kEps * std::max(s_max, 1e-300);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < r; ++i)
        if (svd.singularValues()(i) > thr) ++rank;

    // Singular values are descending, so V is already ordered ker^perp first.
    const CMatrix basis = svd.matrixV();
    const CMatrix t1 = basis.leftCols(rank).adjoint() * step * basis.leftCols(rank);
    return {t1, r - rank, basis};
}

LambdaScan lambda_scan(const CMatrix& t, const std::vector<double>& lambdas,
                       const StopPolicy& policy) {
    for (double l : lambdas) require_lambda(l);
    LambdaScan scan;
    scan.lambdas = lambdas;
    scan.limits.resize(lambdas.size());
    scan.n_steps.resize(lambdas.size(), 0);

    // vector<bool> packs bits, so parallel writers need byte-sized slots
    std::vector<char> converged(lambdas.size(), 0);
    parallel_for(lambdas.size(), [&](std::size_t i) {
        const IterationTrace trace = iterate(t, lambdas[i], policy);
        scan.limits[i] = trace.final_iterate();
        converged[i] = trace.stop_reason == StopReason::Converged ? 1 : 0;
        scan.n_steps[i] = trace.n_steps;
    });
    scan.converged.assign(converged.begin(), converged.end());

    double disp = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!scan.converged[i]) continue;
        for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
            if (!scan.converged[j]) continue;
            disp = std::max(disp, (scan.limits[i] - scan.limits[j]).norm());
        }
    }
    scan.dispersion = disp;
    return scan;
}

}  // namespace aluthge
