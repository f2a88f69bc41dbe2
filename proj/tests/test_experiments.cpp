#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aluthge/experiments.hpp"
#include "aluthge/io.hpp"
#include "test_support.hpp"

using namespace aluthge;
using namespace aluthge::testing;

TEST_CASE("orbit samples keep the prescribed spectrum and conditioning") {
    const std::vector<Complex> d = {Complex(2, 0), Complex(0, 1), Complex(-1, 0)};
    const OrbitSample sample = sample_orbit(d, 8, 77, 20.0);
    REQUIRE(sample.matrices.size() == 8);
    for (const CMatrix& t : sample.matrices) {
        CHECK(all_finite(t));
        CHECK(spectra_match(t, diag(d), 1e-6 * std::max(1.0, t.norm())));
    }
}

TEST_CASE("section44 reproduction") {
    const Section44Report report = reproduce_section44();
    REQUIRE(report.entries.size() == 2);
    CHECK(report.pass);
    for (const auto& e : report.entries) {
        CHECK(e.max_abs_dev <= 1e-3);
        CHECK(e.runtime_seconds < 1.0);
        CHECK(e.hermitian);
        CHECK(e.eigenvalues_31);
    }
    CHECK(report.dispersion >= 0.8);
}

TEST_CASE("reflection closed form at several lambdas") {
    for (double lambda : {0.25, 0.5, 0.9}) {
        const ReflectionReport report = reflection_oracle(31, 4, lambda, 50);
        CHECK(report.pass);
        CHECK(report.max_closed_form_dev <= 1e-9 * report.scale);
        CHECK(report.limit_dev_from_r <= 1e-8 * report.scale);
        CHECK(report.reflection_dev <= 1e-10 * report.scale);
        CHECK(report.intertwine_dev <= 1e-10 * report.scale * report.scale);
    }
}

TEST_CASE("reflection converges in one step at lambda = 1/2") {
    const ReflectionReport report = reflection_oracle(5, 2, 0.5, 10);
    CHECK(report.first_step_dev_from_r <= 1e-10);
    CHECK(report.limit_steps <= 2);
}

TEST_CASE("reflection limit does not depend on lambda but the step count does") {
    const ReflectionReport slow = reflection_oracle(9, 4, 0.1, 20);
    const ReflectionReport fast = reflection_oracle(9, 4, 0.5, 20);
    CHECK(slow.pass);
    CHECK(fast.pass);
    CHECK(slow.limit_steps > fast.limit_steps);
}

TEST_CASE("permutation example is constant in lambda") {
    const PermutationReport unit = permutation_example(1.0, 1.0, 1.0);
    CHECK(unit.pass);
    CHECK(unit.max_limit_dev <= 1e-12);  // already unitary, fixed point

    const PermutationReport report = permutation_example(2.0, 3.0, 1.0 / 6.0);
    CHECK(report.pass);
    CHECK(report.max_limit_dev <= 1e-8);
    CHECK(report.dispersion <= 1e-7);
    CHECK(report.max_det_dev <= 1e-10);

    CHECK_THROWS_AS(permutation_example(2.0, 3.0, 1.0), Error);
}

TEST_CASE("two-eigenvalue constancy for d = (2, -2)") {
    const ConstancyReport report = two_eigenvalue_constancy(Complex(2, 0), Complex(-2, 0), 1, 1,
                                                            6, 123);
    CHECK(report.pass);
    CHECK(report.max_dispersion <= 1e-6);
    CHECK(report.max_block_dev <= 1e-8);
}

TEST_CASE("two-eigenvalue constancy for conjugate unimodular pair in dimension 4") {
    const Complex d1 = std::polar(1.0, M_PI / 3);
    const Complex d2 = std::polar(1.0, -M_PI / 3);
    const ConstancyReport report = two_eigenvalue_constancy(d1, d2, 2, 2, 4, 321);
    CHECK(report.pass);
    CHECK(report.max_dispersion <= 1e-6);
}

TEST_CASE("two-eigenvalue constancy rejects mismatched moduli") {
    CHECK_THROWS_AS(two_eigenvalue_constancy(Complex(2, 0), Complex(1, 0), 1, 1, 2, 1), Error);
}

TEST_CASE("normal input scans have exactly zero dispersion") {
    const CMatrix n = diag({Complex(2, 0), Complex(-2, 0)});
    const LambdaScan scan = lambda_scan(n, default_lambda_grid(), StopPolicy::defaults_for(n));
    CHECK(scan.dispersion == 0.0);
}

TEST_CASE("witness search finds non-constancy in the orbit of diag(3,1)") {
    const WitnessReport report =
        nonconstancy_witness({Complex(3, 0), Complex(1, 0)}, 2024, 0.1, 10);
    CHECK(report.found);
    CHECK(report.witness_index < 10);
    CHECK(report.witness_dispersion > 0.1);
}

TEST_CASE("the fixed section-4.4 matrix is itself a witness") {
    const CMatrix t = mat2(3, 0, -2, 1);
    const LambdaScan scan = lambda_scan(t, {0.3, 0.7}, StopPolicy::defaults_for(t));
    CHECK(scan.dispersion > 0.8);
}

TEST_CASE("no witness in an equal-modulus two-point orbit") {
    const WitnessReport report =
        nonconstancy_witness({Complex(1, 0), Complex(-1, 0)}, 7, 0.1, 6);
    CHECK_FALSE(report.found);
    CHECK(report.samples_tried == 6);
    for (double disp : report.dispersions) CHECK(disp <= 1e-5);
}

TEST_CASE("mixed-modulus spectra can still carry constant scans on special elements") {
    // direct sum of an equal-modulus block and a separate eigenvalue
    Rng rng(99);
    const CMatrix t1 = sample_orbit({Complex(2, 0), Complex(-2, 0)}, 1, rng.raw())
                           .matrices.front();
    CMatrix t = CMatrix::Zero(3, 3);
    t.topLeftCorner(2, 2) = t1;
    t(2, 2) = 1.0;
    const LambdaScan scan = lambda_scan(t, default_lambda_grid(), StopPolicy::defaults_for(t));
    CHECK(scan.dispersion <= 1e-6);
}

TEST_CASE("conjecture probe on the cube roots of unity") {
    std::vector<Complex> d;
    for (int k = 0; k < 3; ++k) d.push_back(std::polar(1.0, 2.0 * M_PI * k / 3.0));
    const ConjectureReport report = conjecture_probe(d, 6, 7);
    CHECK(report.all_moduli_equal);
    CHECK(report.distinct_eigenvalues == 3);
    CHECK(report.dispersions.size() == 6);
    CHECK(report.max_dispersion >= 0.0);
    CHECK(report.argmax_index >= 0);
}

TEST_CASE("conjecture probe control group: two distinct values stay constant") {
    const ConjectureReport report =
        conjecture_probe({Complex(0, 1), Complex(0, -1)}, 5, 11);
    CHECK(report.distinct_eigenvalues == 2);
    CHECK(report.max_dispersion <= 1e-6);
}

TEST_CASE("rate_fit recovers the closed-form reflection rate") {
    Rng rng(55);
    const CMatrix e = sample_orbit({Complex(1, 0), Complex(-1, 0)}, 1, rng.raw())
                          .matrices.front();
    const IterationTrace trace = iterate(e, 0.25, StopPolicy::defaults_for(e));
    REQUIRE(trace.stop_reason == StopReason::Converged);
    const RateFitResult fit = rate_fit(trace, trace.final_iterate());
    CHECK(fit.rho_hat == doctest::Approx(0.5).epsilon(0.02));
    CHECK(fit.r_squared > 0.99);
}

TEST_CASE("rate_fit near diag(3,1) stays under the contraction constant") {
    Rng rng(56);
    CMatrix a = rng.gaussian_matrix(2);
    a /= a.norm();
    CMatrix delta = 1e-3 * a;
    // first-order orbit perturbation of diag(3,1)
    const CMatrix d0 = diag({3.0, 1.0});
    const CMatrix t = (CMatrix::Identity(2, 2) + delta) * d0 *
                      (CMatrix::Identity(2, 2) + delta).inverse();
    const IterationTrace trace = iterate(t, 0.5, StopPolicy::defaults_for(t));
    REQUIRE(trace.stop_reason == StopReason::Converged);
    const RateFitResult fit = rate_fit(trace, trace.final_iterate());
    CHECK(fit.rho_hat <= std::sqrt(3.0) / 2.0 + 0.05);
}

TEST_CASE("rate_fit needs data") {
    const CMatrix n = diag({3.0, 1.0});
    const IterationTrace trace = iterate(n, 0.5, StopPolicy::defaults_for(n));
    CHECK_THROWS_AS(rate_fit(trace, trace.final_iterate()), InsufficientData);
}

TEST_CASE("rates experiment holds both contraction bounds") {
    const RatesReport report = rates_experiment(8, 99);
    CHECK(report.pass);
    for (const auto& c : report.cases) {
        CHECK(c.norm_ok);
        CHECK(c.rate_ok);
        CHECK(c.k < 1.0);
    }
}

TEST_CASE("experiment limits satisfy the normal-limit contract") {
    Rng rng(77);
    for (int trial = 0; trial < 6; ++trial) {
        const CMatrix t = random_diagonalizable(rng, 2 + trial % 3);
        const StopPolicy policy = StopPolicy::defaults_for(t);
        for (double lambda : {0.3, 0.7}) {
            const LimitResult lr = limit(t, lambda, policy);
            CHECK(lr.normality_ok);
            CHECK(lr.spectrum_ok);
        }
    }
}

TEST_CASE("reports serialize deterministically") {
    const WitnessReport w1 = nonconstancy_witness({Complex(3, 0), Complex(1, 0)}, 5, 0.1, 4);
    const WitnessReport w2 = nonconstancy_witness({Complex(3, 0), Complex(1, 0)}, 5, 0.1, 4);
    CHECK(to_json(w1).dump(2) == to_json(w2).dump(2));

    const RatesReport r1 = rates_experiment(3, 4);
    const RatesReport r2 = rates_experiment(3, 4);
    CHECK(to_json(r1).dump(2) == to_json(r2).dump(2));

    const ConjectureReport c1 = conjecture_probe({Complex(0, 1), Complex(0, -1)}, 3, 2);
    const ConjectureReport c2 = conjecture_probe({Complex(0, 1), Complex(0, -1)}, 3, 2);
    CHECK(to_json(c1).dump(2) == to_json(c2).dump(2));
}
