#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aluthge/tangent.hpp"
#include "aluthge/transform.hpp"
#include "aluthge/types.hpp"

namespace aluthge {

// The 9-point grid {0.1, 0.2, ..., 0.9}.
std::vector<double> default_lambda_grid();

// Seeded similarity-orbit samples S diag(d) S^{-1} with S = I + c Z,
// Z a normalized complex Gaussian matrix and c shrunk until cond(S) stays
// under the bound.
struct OrbitSample {
    std::uint64_t seed = 0;
    std::vector<Complex> d;
    double conditioning_bound = 20.0;
    std::vector<CMatrix> matrices;
};

OrbitSample sample_orbit(const std::vector<Complex>& d, int count, std::uint64_t seed,
                         double cond_bound = 20.0);

// ---------------------------------------------------------------------------
// section44: the fixed 2x2 witness [[3,0],[-2,1]] whose limit depends on
// lambda; computed limits vs the reference values at {0.3, 0.7}.
struct Section44Report {
    struct Entry {
        double lambda;
        CMatrix computed;
        CMatrix reference;
        double max_abs_dev;
        int n_steps;
        double runtime_seconds;
        double normality_defect;
        bool hermitian;          // limit Hermitian to 1e-8
        bool eigenvalues_31;     // eigenvalues {3, 1} to 1e-6
    };
    std::vector<Entry> entries;
    double atol = 1e-3;
    double dispersion = 0.0;
    bool pass = false;
};

Section44Report reproduce_section44();

// ---------------------------------------------------------------------------
// reflection: E = S diag(1,..,1,-1,..,-1) S^{-1} squares to I; with polar
// factors E = R L the iterates follow the closed form R L^((1-2 lambda)^n),
// the limit is R, and lambda = 1/2 converges in one step.
struct ReflectionReport {
    std::uint64_t seed = 0;
    int r = 0;
    double lambda = 0.0;
    int n_max = 0;
    double scale = 0.0;                 // ||E||_F
    double reflection_dev = 0.0;        // ||R^2 - I||
    double intertwine_dev = 0.0;        // ||R L - L^{-1} R||
    double max_closed_form_dev = 0.0;   // max_n ||step^n(E) - R L^((1-2l)^n)||
    double first_step_dev_from_r = 0.0; // ||step(E) - R|| (one-step test at l = 1/2)
    double limit_dev_from_r = 0.0;
    int limit_steps = 0;
    bool pass = false;
};

ReflectionReport reflection_oracle(std::uint64_t seed, int r, double lambda, int n_max);

// ---------------------------------------------------------------------------
// permutation: T = P diag(a,b,c) with abc = 1 and P the 3-cycle; every
// iterate stays of the form P D_n with D_n positive diagonal of determinant
// one, and the limit is P for every lambda.
struct PermutationReport {
    double a = 0, b = 0, c = 0;
    std::vector<double> lambdas;
    double max_offdiag = 0.0;       // largest off-diagonal entry of any D_n
    double max_det_dev = 0.0;       // largest |det D_n - 1|
    double max_limit_dev = 0.0;     // largest entrywise |limit - P|
    double dispersion = 0.0;
    bool pass = false;
};

PermutationReport permutation_example(double a, double b, double c,
                                      std::vector<double> lambdas = {});

// ---------------------------------------------------------------------------
// con-dos: orbit of diag(d1 I_n, d2 I_k) with |d1| = |d2|; the limit map is
// constant in lambda, and each sample block-diagonalizes into 2x2 pieces
// governed by the singular values of its coupling block.
struct ConstancyReport {
    Complex d1, d2;
    int n = 0, k = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> dispersions;   // per sample, over the 9-point grid
    double max_dispersion = 0.0;
    double max_block_dev = 0.0;        // block-diagonalization reconstruction error
    bool all_converged = true;
    bool pass = false;
};

ConstancyReport two_eigenvalue_constancy(Complex d1, Complex d2, int n, int k, int samples,
                                         std::uint64_t seed, double cond_bound = 20.0);

// ---------------------------------------------------------------------------
// witness: search orbit samples of diag(d) for one whose {0.3, 0.7}-limits
// differ by more than the threshold. Absence after the budget is reported,
// not thrown.
struct WitnessReport {
    std::vector<Complex> d;
    std::uint64_t seed = 0;
    double threshold = 0.1;
    int samples_tried = 0;
    bool found = false;
    int witness_index = -1;
    CMatrix witness;
    double witness_dispersion = 0.0;
    std::vector<double> dispersions;
};

WitnessReport nonconstancy_witness(const std::vector<Complex>& d, std::uint64_t seed,
                                   double threshold, int max_samples,
                                   double cond_bound = 20.0);

// ---------------------------------------------------------------------------
// conjecture: equal-modulus spectra with three or more distinct points;
// records the largest lambda-dispersion found over orbit samples. Evidence
// only, never a verdict.
struct ConjectureReport {
    std::vector<Complex> d;
    int samples = 0;
    std::uint64_t seed = 0;
    bool all_moduli_equal = true;
    int distinct_eigenvalues = 0;
    std::vector<double> dispersions;
    double max_dispersion = 0.0;
    int argmax_index = -1;
    CMatrix argmax_matrix;
};

ConjectureReport conjecture_probe(const std::vector<Complex>& d, int samples,
                                  std::uint64_t seed, double cond_bound = 20.0);

// ---------------------------------------------------------------------------
// Geometric-rate fit: least-squares slope of log ||iter_n - N|| over the tail
// of the trace (last half, excluding points below 100 * eps * ||N||).
struct RateFitResult {
    double rho_hat = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

RateFitResult rate_fit(const IterationTrace& trace, const CMatrix& n_limit);

// rates: seeded suite of eps = 1e-3 orbit perturbations; per case the fitted
// rho_hat, the model constant k, and the explicit transverse operator norm.
struct RatesReport {
    struct Case {
        std::vector<Complex> d;
        double lambda;
        double k;
        double transverse_norm;     // ||Q-compressed derivative||
        double rho_hat;             // NaN if the fit had too little data
        int n_steps;
        bool rate_ok;               // rho_hat <= k + 0.05 (or insufficient data)
        bool norm_ok;               // transverse_norm <= k + 1e-10
    };
    std::uint64_t seed = 0;
    std::vector<Case> cases;
    bool pass = false;
};

RatesReport rates_experiment(int n_cases, std::uint64_t seed);

}  // namespace aluthge
