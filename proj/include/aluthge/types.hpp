#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace aluthge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularNegativePower : Error { using Error::Error; };
struct LambdaOutOfRange : Error { using Error::Error; };
struct NotDiagonalizable : Error { using Error::Error; };
struct SingularD : Error { using Error::Error; };
struct NotTangent : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct ConstructionFailed : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

inline bool all_finite(const CMatrix& m) {
    return m.allFinite();
}

inline void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw DimensionMismatch(std::string(what) + ": expected a square matrix, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw LambdaOutOfRange("lambda must lie in (0,1), got " + std::to_string(lambda));
}

}  // namespace aluthge
