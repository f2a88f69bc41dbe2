#pragma once

#include <string>
#include <vector>

#include "aluthge/linalg.hpp"
#include "aluthge/types.hpp"

namespace aluthge {

// Stopping rule for the iteration. The limit itself is exact in theory; in
// floating point we stop when the step size and the normality defect both
// fall below their tolerances.
struct StopPolicy {
    double step_tol;
    double normality_tol;
    int max_iters;

    // step_tol = 1e-11 * ||t||_F, normality_tol = 1e-9 * ||t||_F,
    // max_iters = 20000 (rates can approach 1 near the lambda endpoints).
    static StopPolicy defaults_for(const CMatrix& t);

    void validate() const;
};

enum class StopReason { Converged, MaxIters, NonFinite };

std::string to_string(StopReason r);

// Full record of one iteration run. iterates includes the start, so
// iterates.size() == n_steps + 1; step_norms[k] and normality_defects[k]
// describe iterates[k+1].
struct IterationTrace {
    double lambda = 0.0;
    std::vector<CMatrix> iterates;
    std::vector<double> step_norms;
    std::vector<double> normality_defects;
    StopReason stop_reason = StopReason::MaxIters;
    int n_steps = 0;

    const CMatrix& final_iterate() const { return iterates.back(); }
};

struct DidNotConverge : Error {
    explicit DidNotConverge(const std::string& msg, IterationTrace t)
        : Error(msg), trace(std::move(t)) {}
    IterationTrace trace;
};

// Limit of the iteration plus post-hoc contract checks (flags, not throws).
struct LimitResult {
    CMatrix matrix;
    bool input_diagonalizable = true;
    bool normality_ok = true;   // defect of the limit <= normality_tol
    bool spectrum_ok = true;    // eigenvalue multiset preserved to 1e-6
    IterationTrace trace;
};

// One lambda-scan: limits over a grid plus the pairwise dispersion.
struct LambdaScan {
    std::vector<double> lambdas;
    std::vector<CMatrix> limits;        // final iterate even when not converged
    std::vector<bool> converged;
    std::vector<int> n_steps;
    double dispersion = 0.0;            // max pairwise Frobenius distance (converged pairs)
};

// The lambda-Aluthge transform |t|^lambda * u * |t|^(1-lambda). For
// invertible t this equals the similarity |t|^lambda * t * |t|^(-lambda),
// which is used as a fast path when the smallest singular value exceeds
// 1e-8 * s_max.
CMatrix transform(const CMatrix& t, double lambda);

// The Duggal transform |t| * u (equals u^* t u for invertible t).
CMatrix duggal(const CMatrix& t);

IterationTrace iterate(const CMatrix& t, double lambda, const StopPolicy& policy);

// Final iterate with contract checks; throws DidNotConverge (carrying the
// trace) unless the stop reason is Converged.
LimitResult limit(const CMatrix& t, double lambda, const StopPolicy& policy);

// One transform step followed by the orthogonal split adapted to
// ker(step)^perp (+) ker(step). basis is unitary; t1 is the invertible
// compression; kernel_dim equals the algebraic multiplicity of 0.
struct SplitResult {
    CMatrix t1;
    Eigen::Index kernel_dim;
    CMatrix basis;
};

SplitResult split_singular(const CMatrix& t, double lambda);

// Limits over a lambda grid. Evaluation may be concurrent; output order
// always matches the input grid. Convergence failures are flagged per
// lambda, never thrown.
LambdaScan lambda_scan(const CMatrix& t, const std::vector<double>& lambdas,
                       const StopPolicy& policy);

// Greedy multiset comparison of clustered eigenvalues; tolerance is absolute
// on each eigenvalue.
bool spectra_match(const CMatrix& a, const CMatrix& b, double tol);

}  // namespace aluthge
