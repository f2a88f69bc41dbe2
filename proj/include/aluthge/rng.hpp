#pragma once

#include <cstdint>
#include <random>

#include "aluthge/types.hpp"

namespace aluthge {

// Deterministic random source. All distributions are implemented on top of
// raw mt19937_64 output so that a given seed produces the same stream on
// every platform (std:: distribution objects are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    Complex complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    CMatrix gaussian_matrix(Eigen::Index r) {
        CMatrix z(r, r);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < r; ++j) z(i, j) = complex_gaussian();
        return z;
    }

    // Haar-ish unitary: QR of a Gaussian matrix with phase-fixed R diagonal.
    CMatrix unitary(Eigen::Index r) {
        const CMatrix z = gaussian_matrix(r);
        Eigen::HouseholderQR<CMatrix> qr(z);
        CMatrix q = qr.householderQ();
        CMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < r; ++j) {
            const Complex d = rr(j, j);
            const double a = std::abs(d);
            q.col(j) *= (a > 0) ? d / a : Complex(1, 0);
        }
        return q;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace aluthge
